//! Property tests for the per-module invariants, each against a brute-force
//! reference written here.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use proptest::prelude::*;
use vguard::geom_kernel::{
    first_boundary_hit, orient, segment_intersection, Intersection, Location, Orientation, Point, Rational, Segment,
};
use vguard::io::{generate_polygon, parse_instance, serialize_instance, Style};
use vguard::oracle::{dijkstra_parents, optimal_vertex_guards, verify_coverage};
use vguard::partition::window_partition;
use vguard::pipeline::{guard_polygon, PipelineOptions};
use vguard::polygon::{BoundaryPoint, Chord, Polygon};
use vguard::shortest_paths::{shortest_path_tree, PathNode};
use vguard::visibility::{ccw_order, visibility_polygon_from_point, weak_visibility_polygon, weakly_visible};
use vguard::Mode;

const STYLES: [Style; 4] = [Style::Random, Style::Comb, Style::Spiral, Style::Staircase];

fn polygon(n: usize, seed: u64, style: usize) -> Polygon {
    let style = STYLES[style];
    let n = if matches!(style, Style::Comb) { n / 3 * 3 } else { n };
    generate_polygon(n, seed, style).unwrap()
}

fn polygons(max_n: usize) -> impl Strategy<Value = Polygon> {
    (6..=max_n, any::<u64>(), 0..STYLES.len()).prop_map(|(n, seed, s)| polygon(n, seed, s))
}

fn pt() -> impl Strategy<Value = Point> {
    (-5i64..=5, -5i64..=5).prop_map(|(x, y)| Point::from_ints(x, y))
}

fn centroids(p: &Polygon) -> Vec<Point> {
    let three = Rational::from_integer(3.into());
    p.triangulate()
        .iter()
        .map(|t| {
            let (a, b, c) = (p.vertex(t[0]), p.vertex(t[1]), p.vertex(t[2]));
            Point::new((a.x() + b.x() + c.x()) / &three, (a.y() + b.y() + c.y()) / &three)
        })
        .collect()
}

/// Closed segment `ab` lies in the closed polygon: cut it wherever it meets
/// the boundary and test each piece's midpoint.
fn brute_visible(p: &Polygon, a: &Point, b: &Point) -> bool {
    if a == b {
        return p.locate(a) != Location::Outside;
    }
    let whole = Segment::new(a.clone(), b.clone()).unwrap();
    let mut ts = vec![Rational::zero(), Rational::one()];
    let param = |q: &Point| vguard::geom_kernel::param_on(a, b, q);
    for i in 0..p.n() {
        let (c, d) = p.edge(i);
        match segment_intersection(&whole, &Segment::new(c.clone(), d.clone()).unwrap()) {
            Intersection::Empty => {}
            Intersection::Point(q) => ts.push(param(&q)),
            Intersection::Overlap(s) => {
                ts.push(param(&s.a));
                ts.push(param(&s.b));
            }
        }
    }
    ts.sort();
    ts.dedup();
    ts.windows(2).all(|w| {
        let mid = (&w[0] + &w[1]) / Rational::from_integer(2.into());
        p.locate(&a.lerp(b, &mid)) != Location::Outside
    })
}

/// Intersection by solving the two parametric equations directly.
fn brute_intersection(a: &Point, b: &Point, c: &Point, d: &Point) -> Option<(Point, Point)> {
    let (rx, ry) = (b.x() - a.x(), b.y() - a.y());
    let (sx, sy) = (d.x() - c.x(), d.y() - c.y());
    let (qx, qy) = (c.x() - a.x(), c.y() - a.y());
    let den = &rx * &sy - &ry * &sx;
    let unit = |t: &Rational| *t >= Rational::zero() && *t <= Rational::one();
    if !den.is_zero() {
        let t = (&qx * &sy - &qy * &sx) / &den;
        let s = (&qx * &ry - &qy * &rx) / &den;
        if unit(&t) && unit(&s) {
            let p = a.lerp(b, &t);
            return Some((p.clone(), p));
        }
        return None;
    }
    if !(&qx * &ry - &qy * &rx).is_zero() {
        return None;
    }
    let len2 = &rx * &rx + &ry * &ry;
    let proj = |p: &Point| ((p.x() - a.x()) * &rx + (p.y() - a.y()) * &ry) / &len2;
    let (mut lo, mut hi) = (proj(c), proj(d));
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let lo = lo.max(Rational::zero());
    let hi = hi.min(Rational::one());
    (lo <= hi).then(|| (a.lerp(b, &lo), a.lerp(b, &hi)))
}

fn neg(o: Orientation) -> Orientation {
    match o {
        Orientation::Clockwise => Orientation::CounterClockwise,
        Orientation::CounterClockwise => Orientation::Clockwise,
        Orientation::Collinear => Orientation::Collinear,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn orient_is_antisymmetric(a in pt(), b in pt(), c in pt()) {
        let o = orient(&a, &b, &c);
        prop_assert_eq!(orient(&b, &a, &c), neg(o));
        prop_assert_eq!(orient(&a, &c, &b), neg(o));
        prop_assert_eq!(orient(&c, &b, &a), neg(o));
    }

    #[test]
    fn segment_intersection_matches_parametric(a in pt(), b in pt(), c in pt(), d in pt()) {
        prop_assume!(a != b && c != d);
        let got = segment_intersection(&Segment::new(a.clone(), b.clone()).unwrap(), &Segment::new(c.clone(), d.clone()).unwrap());
        let want = brute_intersection(&a, &b, &c, &d);
        match (got, want) {
            (Intersection::Empty, None) => {}
            (Intersection::Point(p), Some((x, y))) => prop_assert!(p == x && p == y),
            (Intersection::Overlap(s), Some((x, y))) => {
                prop_assert!(x != y);
                prop_assert!((s.a == x && s.b == y) || (s.a == y && s.b == x));
            }
            (g, w) => prop_assert!(false, "got {:?}, want {:?}", g, w),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ray_hits_are_collinear(p in polygons(14), pick in any::<prop::sample::Index>()) {
        let ring = p.vertices();
        let inner = centroids(&p);
        // a hit beyond an interior point always exists
        let through = &inner[pick.index(inner.len())];
        for origin in inner.iter().filter(|&o| o != through) {
            let hit = first_boundary_hit(ring, origin, through).unwrap();
            prop_assert_eq!(orient(origin, through, &hit.point), Orientation::Collinear);
            prop_assert!(origin.dist2(&hit.point) > origin.dist2(through));
            prop_assert_eq!(p.locate(&hit.point), Location::Boundary);
        }
    }

    #[test]
    fn chord_split_preserves_area_and_boundary(p in polygons(14)) {
        let n = p.n();
        for i in 0..n {
            for j in i + 2..n {
                if (j + 1) % n == i || !p.is_chord(p.vertex(i), p.vertex(j)) {
                    continue;
                }
                let c = Chord { u: BoundaryPoint::Vertex(i), v: BoundaryPoint::Vertex(j) };
                let (up, low) = p.split_by_chord(&c).unwrap();
                prop_assert_eq!(up.area2() + low.area2(), p.area2());
                let mut cycle: Vec<Point> = up.pts[..up.len() - 1].to_vec();
                cycle.extend_from_slice(&low.pts[..low.len() - 1]);
                let k = cycle.iter().position(|q| q == p.vertex(0)).unwrap();
                cycle.rotate_left(k);
                prop_assert_eq!(&cycle[..], p.vertices());
            }
        }
    }

    #[test]
    fn point_visibility_matches_brute_force(p in polygons(14)) {
        for z in centroids(&p) {
            let vp = visibility_polygon_from_point(&p, &z).unwrap();
            for w in 0..p.n() {
                let listed = vp.boundary.contains(&BoundaryPoint::Vertex(w));
                prop_assert_eq!(listed, brute_visible(&p, &z, p.vertex(w)), "z {:?} w {}", z, w);
            }
            let mut total = vp.area2();
            for ce in &vp.constructed_edges {
                let (pocket, _) = p.split_by_chord(&ce.pocket_chord()).unwrap();
                prop_assert_eq!(pocket.locate(&z), Location::Outside);
                total += pocket.area2();
            }
            prop_assert_eq!(total, p.area2());
        }
    }

    #[test]
    fn weak_visibility_contains_chord_samples(p in polygons(14)) {
        let tree = window_partition(&p, 0);
        let ten = Rational::from_integer(10.into());
        for w in &tree.windows {
            let Some(c) = &w.entry_chord else { continue };
            let (u, v) = (p.point(&c.u), p.point(&c.v));
            let region = weak_visibility_polygon(&p, c).unwrap();
            for k in 1..10 {
                let q = u.lerp(&v, &(Rational::from_integer(k.into()) / &ten));
                for x in 0..p.n() {
                    if brute_visible(&p, &q, p.vertex(x)) {
                        prop_assert!(region.boundary.contains(&BoundaryPoint::Vertex(x)), "vertex {} seen from {:?}", x, q);
                    }
                }
            }
            for bp in &region.boundary {
                if let BoundaryPoint::Vertex(x) = bp {
                    prop_assert!(weakly_visible(p.vertices(), &u, &v, p.vertex(*x)));
                }
            }
        }
    }

    #[test]
    fn shortest_path_tree_matches_dijkstra(p in polygons(16)) {
        let s = p.vertex(0).clone();
        let spt = shortest_path_tree(&p, &s).unwrap();
        prop_assert_eq!(&spt.parent, &dijkstra_parents(&p, &s).unwrap());
        for x in 0..p.n() {
            let q = match spt.parent[x] {
                PathNode::Root => s.clone(),
                PathNode::Vertex(y) => p.vertex(y).clone(),
            };
            prop_assert!(brute_visible(&p, p.vertex(x), &q));
        }
    }

    #[test]
    fn windows_tile_the_polygon(p in polygons(16), start in any::<prop::sample::Index>()) {
        let tree = window_partition(&p, start.index(p.n()));
        let total: Rational = tree.windows.iter().map(|w| w.area2()).sum();
        prop_assert_eq!(total, p.area2());
        for &w in tree.levels.last().unwrap() {
            prop_assert!(tree.windows[w].child_edges.is_empty());
        }
    }

    #[test]
    fn instances_round_trip(p in polygons(16)) {
        prop_assert_eq!(parse_instance(&serialize_instance(&p)).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn optimum_is_monotone_and_covers(p in polygons(10)) {
        let mut opt = Vec::new();
        for mode in [Mode::Vertices, Mode::Boundary, Mode::Interior] {
            let (k, set) = optimal_vertex_guards(&p, mode, None).unwrap();
            prop_assert!(verify_coverage(&p, &set, mode).covered);
            opt.push(k);
        }
        prop_assert!(opt[0] <= opt[1] && opt[1] <= opt[2], "{:?}", opt);
        prop_assert!(opt[2] <= p.n() / 3);
    }

    #[test]
    fn pipeline_runs_keep_their_contracts(p in polygons(11), start in any::<prop::sample::Index>()) {
        let opts = PipelineOptions { start_vertex: start.index(p.n()), ..Default::default() };
        for mode in [Mode::Vertices, Mode::Boundary, Mode::Interior] {
            // progress is enforced inside the run; a stalled round is an error
            let run = guard_polygon(&p, mode, opts).unwrap();
            prop_assert!(run.covered);
            prop_assert!(run.locality.is_empty(), "{:?}", run.locality);
            let (before, after) = run.budget_counts();
            prop_assert!(before <= 6 * run.primaries() && after <= 9 * run.primaries());
            for rec in &run.records {
                let m = &rec.sets.vvp_minus;
                for pair in m.windows(2) {
                    let ord = ccw_order(&p, &rec.entry.u, &BoundaryPoint::Vertex(pair[0]), &BoundaryPoint::Vertex(pair[1]));
                    prop_assert_eq!(ord, Ordering::Less);
                }
            }
        }
    }
}
