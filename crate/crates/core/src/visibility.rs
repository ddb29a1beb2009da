//! Visibility regions from points and chords, with constructed edges and
//! pockets, plus the inward/outward visible vertex sets of a target.
//!
//! Regions are assembled edge by edge: the visible part of a boundary edge
//! from a point is a single closed interval whose ends are edge endpoints or
//! hits of rays grazing a vertex. For a chord the union is taken over the
//! critical points of the chord (crossings with lines through a reflex vertex
//! and another vertex) and one sample per open interval between them.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::error::PolygonError;
use crate::geom_kernel::{
    first_boundary_hit, in_cone, line_param, locate_point, orient, segment_inside, segments_touch, Location,
    Orientation, Point, Rational,
};
use crate::polygon::{BoundaryPoint, BoundaryPos, BoundaryRange, Chord, Direction, Polygon, Ring, RingPos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Point(Point),
    Chord(Point, Point),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructedEdge {
    /// Host vertex at the polygonal end.
    pub v: usize,
    /// The other end, usually in the interior of a host edge.
    pub u: BoundaryPoint,
    pub side: Side,
    /// Clockwise boundary walk of the pocket, from its first to last point.
    pub pocket: BoundaryRange,
}

impl ConstructedEdge {
    /// The chord oriented so that the pocket lies clockwise from `u` to `v`.
    pub fn pocket_chord(&self) -> Chord {
        Chord {
            u: self.pocket.start.clone(),
            v: self.pocket.end.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VisibilityRegion {
    pub source: Source,
    /// Region boundary in clockwise order.
    pub boundary: Vec<BoundaryPoint>,
    pub points: Vec<Point>,
    pub constructed_edges: Vec<ConstructedEdge>,
}

impl VisibilityRegion {
    pub fn area2(&self) -> Rational {
        -crate::geom_kernel::signed_area2(&self.points)
    }

    pub fn contains(&self, p: &Point) -> bool {
        locate_point(&self.points, p) != Location::Outside
    }
}

/// A visible interval `[lo, hi]` on ring edge `edge`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub edge: usize,
    pub lo: Rational,
    pub hi: Rational,
}

/// A gap between consecutive visible pieces, i.e. a constructed edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gap {
    pub a: RingPos,
    pub pa: Point,
    pub b: RingPos,
    pub pb: Point,
    /// The polygonal (vertex) end is `a`, the first point clockwise.
    pub vertex_first: bool,
}

/// A visibility region expressed on a ring.
#[derive(Clone, Debug)]
pub struct RingRegion {
    pub pieces: Vec<Piece>,
    pub boundary: Vec<(RingPos, Point)>,
    pub gaps: Vec<Gap>,
}

type Interval = Option<(Rational, Rational)>;

fn hull(a: &Interval, b: &Interval) -> Interval {
    match (a, b) {
        (None, x) | (x, None) => x.clone(),
        (Some((l1, h1)), Some((l2, h2))) => Some((
            if l1 < l2 { l1.clone() } else { l2.clone() },
            if h1 > h2 { h1.clone() } else { h2.clone() },
        )),
    }
}

/// Continuation of the ray from `p` through ring vertex `i` enters the
/// interior beyond the vertex.
pub fn ray_continues(ring: &[Point], i: usize, p: &Point) -> bool {
    let n = ring.len();
    let r = &ring[i];
    if r == p {
        return false;
    }
    let beyond = r.reflect(p);
    in_cone(&ring[(i + n - 1) % n], r, &ring[(i + 1) % n], &beyond, true)
}

/// Visible interval of every ring edge from the point `p` (inside the ring).
pub fn point_edge_intervals(ring: &[Point], p: &Point) -> Vec<Interval> {
    let n = ring.len();
    let mut cands: Vec<Vec<Rational>> = vec![Vec::new(); n];
    for i in 0..n {
        if !segment_inside(ring, p, &ring[i]) {
            continue;
        }
        cands[i].push(Rational::zero());
        cands[(i + n - 1) % n].push(Rational::one());
        if ray_continues(ring, i, p) {
            if let Ok(h) = first_boundary_hit(ring, p, &ring[i]) {
                if h.t.is_zero() {
                    cands[h.edge].push(Rational::zero());
                    cands[(h.edge + n - 1) % n].push(Rational::one());
                } else {
                    cands[h.edge].push(h.t);
                }
            }
        }
    }
    cands
        .into_iter()
        .map(|c| {
            let lo = c.iter().min()?.clone();
            let hi = c.iter().max()?.clone();
            Some((lo, hi))
        })
        .collect()
}

/// Merge closed intervals into disjoint sorted ones.
fn merge(mut v: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    v.sort();
    let mut out: Vec<(Rational, Rational)> = Vec::new();
    for (lo, hi) in v {
        if let Some(last) = out.last_mut() {
            if lo <= last.1 {
                if hi > last.1 {
                    last.1 = hi;
                }
                continue;
            }
        }
        out.push((lo, hi));
    }
    out
}

fn is_reflex_at(ring: &[Point], i: usize) -> bool {
    let n = ring.len();
    orient(&ring[(i + n - 1) % n], &ring[i], &ring[(i + 1) % n]) == Orientation::CounterClockwise
}

/// Sorted critical parameters on the ring edge `ce`.
fn chord_critical_params(ring: &[Point], ce: usize) -> Vec<Rational> {
    let n = ring.len();
    let a = &ring[ce];
    let b = &ring[(ce + 1) % n];
    let mut ts = vec![Rational::zero(), Rational::one()];
    for r in 0..n {
        if !is_reflex_at(ring, r) {
            continue;
        }
        for w in 0..n {
            if w == r {
                continue;
            }
            let (pr, pw) = (&ring[r], &ring[w]);
            let sa = orient(pr, pw, a).sign();
            let sb = orient(pr, pw, b).sign();
            if sa * sb > 0 || (sa == 0 && sb == 0) {
                continue;
            }
            let t = line_param(a, b, pr, pw);
            if t > Rational::zero() && t < Rational::one() {
                ts.push(t);
            }
        }
    }
    ts.sort();
    ts.dedup();
    ts
}

/// Visible pieces of every ring edge from the whole ring edge `ce`.
pub fn chord_edge_intervals(ring: &[Point], ce: usize) -> Vec<Vec<(Rational, Rational)>> {
    let n = ring.len();
    let a = &ring[ce];
    let b = &ring[(ce + 1) % n];
    let ts = chord_critical_params(ring, ce);
    let at = |t: &Rational| point_edge_intervals(ring, &a.lerp(b, t));
    let mut acc: Vec<Vec<(Rational, Rational)>> = vec![Vec::new(); n];
    let mut prev = at(&ts[0]);
    for e in 0..n {
        if let Some(iv) = &prev[e] {
            acc[e].push(iv.clone());
        }
    }
    for k in 1..ts.len() {
        let cur = at(&ts[k]);
        let mid_t = (&ts[k - 1] + &ts[k]) / Rational::from_integer(2.into());
        let mid = at(&mid_t);
        for e in 0..n {
            if let Some(iv) = &cur[e] {
                acc[e].push(iv.clone());
            }
            if mid[e].is_some() {
                if let Some(iv) = hull(&hull(&prev[e], &mid[e]), &cur[e]) {
                    acc[e].push(iv);
                }
            }
        }
        prev = cur;
    }
    acc.into_iter().map(merge).collect()
}

/// Assemble a region from per-edge pieces, walking from ring edge `start`.
fn assemble(ring: &[Point], per_edge: Vec<Vec<(Rational, Rational)>>, start: usize) -> RingRegion {
    let n = ring.len();
    let mut pieces = Vec::new();
    for k in 0..n {
        let e = (start + k) % n;
        for (lo, hi) in &per_edge[e] {
            pieces.push(Piece {
                edge: e,
                lo: lo.clone(),
                hi: hi.clone(),
            });
        }
    }
    let pos = |e: usize, t: &Rational| -> (RingPos, Point) {
        if t.is_one() {
            let v = (e + 1) % n;
            (
                RingPos {
                    edge: v,
                    t: Rational::zero(),
                },
                ring[v].clone(),
            )
        } else if t.is_zero() {
            (
                RingPos {
                    edge: e,
                    t: Rational::zero(),
                },
                ring[e].clone(),
            )
        } else {
            (RingPos { edge: e, t: t.clone() }, ring[e].lerp(&ring[(e + 1) % n], t))
        }
    };
    let mut boundary: Vec<(RingPos, Point)> = Vec::new();
    // `joined[i]` tells whether boundary[i] -> boundary[i+1] follows the ring
    let mut joined: Vec<bool> = Vec::new();
    for pc in &pieces {
        let s = pos(pc.edge, &pc.lo);
        let e = pos(pc.edge, &pc.hi);
        match boundary.last() {
            Some(last) if last.1 == s.1 => {}
            Some(_) => {
                joined.push(false);
                boundary.push(s);
            }
            None => boundary.push(s),
        }
        if e.1 != boundary.last().unwrap().1 {
            joined.push(true);
            boundary.push(e);
        }
    }
    if boundary.len() > 1 && boundary.first().unwrap().1 == boundary.last().unwrap().1 {
        boundary.pop();
    } else {
        joined.push(false);
    }
    if boundary.len() == 1 {
        joined.truncate(1);
    }
    let m = boundary.len();
    let mut gaps = Vec::new();
    for i in 0..m.min(joined.len()) {
        if joined[i] {
            continue;
        }
        let (a, pa) = boundary[i].clone();
        let (b, pb) = boundary[(i + 1) % m].clone();
        let a_grazes = a.t.is_zero() && ray_continues(ring, a.edge, &pb);
        let b_grazes = b.t.is_zero() && ray_continues(ring, b.edge, &pa);
        let vertex_first = if a_grazes || b_grazes { a_grazes } else { a.t.is_zero() };
        gaps.push(Gap {
            a,
            pa,
            b,
            pb,
            vertex_first,
        });
    }
    RingRegion { pieces, boundary, gaps }
}

/// Visibility region of `p` within a ring, walked from ring edge `start`.
pub fn ring_point_region(ring: &[Point], p: &Point, start: usize) -> RingRegion {
    let per_edge = point_edge_intervals(ring, p)
        .into_iter()
        .map(|iv| iv.into_iter().collect())
        .collect();
    assemble(ring, per_edge, start)
}

/// Weak visibility region of ring edge `ce`, walked from the edge after it.
pub fn ring_chord_region(ring: &[Point], ce: usize) -> RingRegion {
    let per_edge = chord_edge_intervals(ring, ce);
    assemble(ring, per_edge, (ce + 1) % ring.len())
}

/// `q` sees some point of segment `ab`, all inside the ring.
pub fn weakly_visible(ring: &[Point], a: &Point, b: &Point, q: &Point) -> bool {
    let mut ts = vec![Rational::zero(), Rational::one()];
    for r in ring {
        if r == q {
            continue;
        }
        let sa = orient(q, r, a).sign();
        let sb = orient(q, r, b).sign();
        if sa * sb < 0 {
            ts.push(line_param(a, b, q, r));
        }
    }
    ts.sort();
    ts.dedup();
    for t in &ts {
        if segment_inside(ring, q, &a.lerp(b, t)) {
            return true;
        }
    }
    let two = Rational::from_integer(2.into());
    ts.windows(2)
        .any(|w| segment_inside(ring, q, &a.lerp(b, &((&w[0] + &w[1]) / &two))))
}

/// Convert a ring region into host terms.
pub fn to_host_region(host: &Polygon, ring: &Ring, rr: &RingRegion, source: Source) -> VisibilityRegion {
    let boundary: Vec<BoundaryPoint> = rr.boundary.iter().map(|(pos, p)| ring.label_at(host, pos, p)).collect();
    let points = rr.boundary.iter().map(|(_, p)| p.clone()).collect();
    let constructed_edges = rr.gaps.iter().map(|g| gap_to_edge(host, ring, g)).collect();
    VisibilityRegion {
        source,
        boundary,
        points,
        constructed_edges,
    }
}

pub fn gap_to_edge(host: &Polygon, ring: &Ring, g: &Gap) -> ConstructedEdge {
    let la = ring.label_at(host, &g.a, &g.pa);
    let lb = ring.label_at(host, &g.b, &g.pb);
    let (vend, uend) = if g.vertex_first { (&la, &lb) } else { (&lb, &la) };
    let v = match vend {
        BoundaryPoint::Vertex(i) => *i,
        BoundaryPoint::OnEdge { edge, .. } => *edge,
    };
    ConstructedEdge {
        v,
        u: uend.clone(),
        side: if g.vertex_first { Side::Left } else { Side::Right },
        pocket: BoundaryRange {
            start: la,
            end: lb,
            direction: Direction::Clockwise,
        },
    }
}

pub fn visibility_polygon_from_point(host: &Polygon, z: &Point) -> Result<VisibilityRegion, PolygonError> {
    if host.locate(z) == Location::Outside {
        return Err(PolygonError::PointOutside(Box::new(z.clone())));
    }
    let ring = host.ring();
    let start = match host.find_boundary_point(z) {
        Some(BoundaryPoint::Vertex(i)) => i,
        Some(BoundaryPoint::OnEdge { edge, .. }) => edge,
        None => 0,
    };
    let rr = ring_point_region(&ring.pts, z, start);
    Ok(to_host_region(host, &ring, &rr, Source::Point(z.clone())))
}

pub fn weak_visibility_polygon(host: &Polygon, c: &Chord) -> Result<VisibilityRegion, PolygonError> {
    let u = host.point(&c.u);
    let v = host.point(&c.v);
    let source = Source::Chord(u.clone(), v.clone());
    if let (BoundaryPoint::Vertex(i), BoundaryPoint::Vertex(j)) = (&c.u, &c.v) {
        let (i, j) = (*i, *j);
        if host.next(i) == j || host.next(j) == i {
            let ring = host.ring();
            let ce = if host.next(i) == j { i } else { j };
            let rr = ring_chord_region(&ring.pts, ce);
            return Ok(to_host_region(host, &ring, &rr, source));
        }
    }
    let (upper, lower) = host.split_by_chord(c)?;
    let mut boundary = Vec::new();
    let mut points = Vec::new();
    let mut constructed_edges = Vec::new();
    for ring in [&upper, &lower] {
        let ce = ring.chord_edge.expect("split rings carry their chord");
        let rr = ring_chord_region(&ring.pts, ce);
        let part = to_host_region(host, ring, &rr, source.clone());
        // each walk ends on the chord's far end; drop it to splice the halves
        let k = part.boundary.len();
        boundary.extend(part.boundary.into_iter().take(k - 1));
        points.extend(part.points.into_iter().take(k - 1));
        constructed_edges.extend(part.constructed_edges);
    }
    Ok(VisibilityRegion {
        source,
        boundary,
        points,
        constructed_edges,
    })
}

/// Inward and outward visible vertices of a target relative to chord `uv`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VisibleVertexSets {
    pub vvp_plus: Vec<usize>,
    pub vvp_minus: Vec<usize>,
    pub f: Option<usize>,
    pub l: Option<usize>,
    pub f_prime: BoundaryPoint,
    pub l_prime: BoundaryPoint,
}

/// Extends the ray from `z` through `through` to its first boundary hit; a
/// ray that leaves the polygon at `through` stops there.
pub fn extend_ray(host: &Polygon, z: &Point, through: &Point) -> BoundaryPoint {
    let ring = host.vertices();
    if z == through {
        return host
            .find_boundary_point(z)
            .expect("ray extension from a boundary point");
    }
    if let Some(bp) = host.find_boundary_point(through) {
        let continues = match &bp {
            BoundaryPoint::Vertex(i) => ray_continues(ring, *i, z),
            BoundaryPoint::OnEdge { .. } => false,
        };
        if !continues {
            return bp;
        }
    }
    let h = first_boundary_hit(ring, z, through).expect("ray from inside hits the boundary");
    host.boundary_point(h.edge, &h.point)
}

/// Computes VVP⁺/VVP⁻ of the target `z` for chord `(u, v)` whose upper side
/// is the clockwise boundary from `u` to `v`.
///
/// `in_region[w]` restricts candidates to the weakly visible region of the
/// chord; `z_vertex` excludes the target itself; `pu` and `pv` are
/// `p(u, z)` and `p(v, z)`.
pub fn visible_vertex_sets(
    host: &Polygon,
    chord: &Chord,
    in_region: &[bool],
    z: &Point,
    z_vertex: Option<usize>,
    pu: &Point,
    pv: &Point,
) -> VisibleVertexSets {
    let u = host.point(&chord.u);
    let v = host.point(&chord.v);
    let from = host.pos(&chord.u);
    let to = host.pos(&chord.v);
    let vpos = |w: usize| BoundaryPos {
        edge: w,
        t: Rational::zero(),
    };
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (w, &inside) in in_region.iter().enumerate() {
        if Some(w) == z_vertex || !inside {
            continue;
        }
        let pw = host.vertex(w);
        if !host.visible(z, pw) {
            continue;
        }
        let wpos = vpos(w);
        if wpos == from || wpos == to {
            // chord endpoints belong to neither side
            continue;
        }
        if !host.on_cw_range(&from, &to, &wpos) && segments_touch(z, pw, &u, &v) {
            minus.push(w);
        } else {
            plus.push(w);
        }
    }
    plus.sort_by_key(|&w| host.cw_key(&from, &vpos(w)));
    minus.sort_by_key(|&w| host.ccw_key(&from, &vpos(w)));
    VisibleVertexSets {
        f: minus.first().copied(),
        l: minus.last().copied(),
        vvp_plus: plus,
        vvp_minus: minus,
        f_prime: extend_ray(host, z, pu),
        l_prime: extend_ray(host, z, pv),
    }
}

/// Orders boundary points counterclockwise starting from `from`.
pub fn ccw_order(host: &Polygon, from: &BoundaryPoint, a: &BoundaryPoint, b: &BoundaryPoint) -> Ordering {
    let f = host.pos(from);
    host.ccw_cmp(&f, &host.pos(a), &host.pos(b))
}
