//! Ground truth used to check the approximation: exact optimal vertex guards
//! by exhaustive search, coverage verification, link distance and geodesics
//! by Dijkstra over the visibility graph.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::OracleError;
use crate::geom_kernel::{
    refine_pieces, segment_intersection, ConvexPiece, Intersection, Location, Point, Rational, Segment,
};
use crate::polygon::{BoundaryPoint, Chord, Polygon};
use crate::shortest_paths::PathNode;
use crate::visibility::{point_edge_intervals, ring_point_region, weak_visibility_polygon, weakly_visible};
use crate::Mode;

pub const DEFAULT_OPT_CAP: usize = 18;

/// Vertex-count cap for the exhaustive solver, from `GUARD_OPT_CAP` if set.
pub fn opt_cap() -> usize {
    std::env::var("GUARD_OPT_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_OPT_CAP)
}

// ---------------------------------------------------------------------------
// Geodesics

/// `sqrt(q) * 2^bits` bracketed by integers `[lo, lo + 1]`.
fn sqrt_floor(q: &Rational, bits: u32) -> BigInt {
    let scaled = (q.numer() << (2 * bits as usize)) / q.denom();
    scaled.sqrt()
}

/// Compares `sum sqrt(a)` with `sum sqrt(b)`; equal only if no precision up
/// to 1024 bits separates them.
pub fn cmp_sqrt_sums(a: &[Rational], b: &[Rational]) -> Ordering {
    let fa: f64 = a.iter().map(|q| approx(q).sqrt()).sum();
    let fb: f64 = b.iter().map(|q| approx(q).sqrt()).sum();
    let scale = fa.abs().max(fb.abs()).max(1.0);
    if (fa - fb).abs() > 1e-9 * scale {
        return fa.partial_cmp(&fb).unwrap();
    }
    let mut bits = 64;
    while bits <= 1024 {
        let la: BigInt = a.iter().map(|q| sqrt_floor(q, bits)).sum();
        let lb: BigInt = b.iter().map(|q| sqrt_floor(q, bits)).sum();
        let ha = &la + BigInt::from(a.len());
        let hb = &lb + BigInt::from(b.len());
        if ha < lb {
            return Ordering::Less;
        }
        if hb < la {
            return Ordering::Greater;
        }
        bits *= 2;
    }
    Ordering::Equal
}

fn approx(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::MAX)
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

/// Geodesic parents from `s` by Dijkstra on the visibility graph; among
/// equal-length paths the one with fewer links wins.
pub fn dijkstra_parents(p: &Polygon, s: &Point) -> Result<Vec<PathNode>, OracleError> {
    if p.locate(s) == Location::Outside {
        return Err(OracleError::PointOutside(Box::new(s.clone())));
    }
    let n = p.n();
    let root = n;
    let pt = |i: usize| if i == root { s } else { p.vertex(i) };
    let mut dist: Vec<Option<Vec<Rational>>> = vec![None; n + 1];
    let mut links = vec![usize::MAX; n + 1];
    let mut parent = vec![PathNode::Root; n];
    let mut done = vec![false; n + 1];
    dist[root] = Some(Vec::new());
    links[root] = 0;
    let mut heap = BinaryHeap::from([Entry(0.0, root)]);
    while let Some(Entry(_, u)) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        let du = dist[u].clone().unwrap();
        for v in 0..n {
            if done[v] || v == u {
                continue;
            }
            if !p.visible(pt(u), pt(v)) {
                continue;
            }
            let mut cand = du.clone();
            let d2 = pt(u).dist2(pt(v));
            if !d2.is_zero() {
                cand.push(d2);
            }
            let better = match &dist[v] {
                None => true,
                Some(cur) => match cmp_sqrt_sums(&cand, cur) {
                    Ordering::Less => true,
                    Ordering::Equal => links[u] + 1 < links[v],
                    Ordering::Greater => false,
                },
            };
            if better {
                let key: f64 = cand.iter().map(|q| approx(q).sqrt()).sum();
                dist[v] = Some(cand);
                links[v] = links[u] + 1;
                parent[v] = if u == root { PathNode::Root } else { PathNode::Vertex(u) };
                heap.push(Entry(key, v));
            }
        }
    }
    Ok(parent)
}

// ---------------------------------------------------------------------------
// Link distance

/// Minimum number of links from vertex `from` to `q`, by staged expansion of
/// weakly visible regions.
pub fn link_distance(p: &Polygon, from: usize, q: &Point) -> Result<usize, OracleError> {
    if p.locate(q) == Location::Outside {
        return Err(OracleError::PointOutside(Box::new(q.clone())));
    }
    let origin = p.vertex(from);
    if p.visible(origin, q) {
        return Ok(1);
    }
    let ring = p.ring();
    let first = ring_point_region(&ring.pts, origin, from);
    let mut frontier: Vec<(Point, Point)> = first.gaps.iter().map(|g| (g.pa.clone(), g.pb.clone())).collect();
    let mut seen: Vec<(Point, Point)> = frontier.clone();
    for level in 2..=p.n() + 1 {
        if frontier.iter().any(|(a, b)| weakly_visible(&ring.pts, a, b, q)) {
            return Ok(level);
        }
        let mut next = Vec::new();
        for (a, b) in &frontier {
            let chord = Chord {
                u: p.find_boundary_point(a).expect("frontier ends lie on the boundary"),
                v: p.find_boundary_point(b).expect("frontier ends lie on the boundary"),
            };
            let Ok(region) = weak_visibility_polygon(p, &chord) else {
                continue;
            };
            for ce in region.constructed_edges {
                let e = (p.vertex(ce.v).clone(), p.point(&ce.u));
                let key = if e.0 <= e.1 {
                    e.clone()
                } else {
                    (e.1.clone(), e.0.clone())
                };
                if !seen.contains(&key) {
                    seen.push(key);
                    next.push(e);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    unreachable!("every point of a simple polygon has finite link distance")
}

// ---------------------------------------------------------------------------
// Universes and exact set cover

/// Pieces of the triangulation cut along every constructed edge of the
/// visibility polygons of `guards`.
pub fn interior_pieces(p: &Polygon, guards: &[usize]) -> Vec<ConvexPiece> {
    let ring = p.vertices();
    let pieces: Vec<ConvexPiece> = p
        .triangulate()
        .into_iter()
        .map(|[a, b, c]| ConvexPiece::from_triangle(&ring[a], &ring[b], &ring[c]))
        .collect();
    let mut cuts = Vec::new();
    for &g in guards {
        for gap in ring_point_region(ring, p.vertex(g), g).gaps {
            cuts.push((gap.pa, gap.pb));
        }
    }
    refine_pieces(pieces, &cuts)
}

/// Per-edge split parameters of the visible intervals of `guards`.
fn boundary_splits(p: &Polygon, guards: &[usize]) -> Vec<Vec<Rational>> {
    let ring = p.vertices();
    let mut splits = vec![vec![Rational::zero(), Rational::one()]; p.n()];
    for &g in guards {
        for (e, iv) in point_edge_intervals(ring, p.vertex(g)).into_iter().enumerate() {
            if let Some((lo, hi)) = iv {
                splits[e].push(lo);
                splits[e].push(hi);
            }
        }
    }
    for s in &mut splits {
        s.sort();
        s.dedup();
    }
    splits
}

/// Candidate masks of every universe element for `target`.
fn universe(p: &Polygon, target: Mode, cands: &[usize]) -> Vec<u64> {
    let mask_of = |q: &Point| -> u64 {
        cands
            .iter()
            .enumerate()
            .filter(|(_, &g)| p.visible(p.vertex(g), q))
            .fold(0u64, |m, (k, _)| m | (1 << k))
    };
    let mut elems: Vec<u64> = (0..p.n()).map(|v| mask_of(p.vertex(v))).collect();
    match target {
        Mode::Vertices => {}
        Mode::Boundary => {
            let all: Vec<usize> = (0..p.n()).collect();
            for (e, ts) in boundary_splits(p, &all).into_iter().enumerate() {
                let (a, b) = p.edge(e);
                for w in ts.windows(2) {
                    let mid = (&w[0] + &w[1]) / Rational::from_integer(2.into());
                    elems.push(mask_of(&a.lerp(b, &mid)));
                }
            }
        }
        Mode::Interior => {
            let all: Vec<usize> = (0..p.n()).collect();
            for pc in interior_pieces(p, &all) {
                elems.push(mask_of(&pc.centroid()));
            }
        }
    }
    elems.sort_unstable();
    elems.dedup();
    // covering a subset mask forces covering every superset
    let minimal: Vec<u64> = elems
        .iter()
        .copied()
        .filter(|&m| !elems.iter().any(|&o| o != m && o & m == o))
        .collect();
    minimal
}

fn search(elems: &[u64], chosen: u64, depth: usize, limit: usize) -> Option<u64> {
    let uncovered = elems
        .iter()
        .copied()
        .filter(|&m| m & chosen == 0)
        .min_by_key(|m| m.count_ones());
    let Some(m) = uncovered else {
        return Some(chosen);
    };
    if depth == limit {
        return None;
    }
    let mut bits = m;
    while bits != 0 {
        let k = bits.trailing_zeros();
        bits &= bits - 1;
        if let Some(found) = search(elems, chosen | (1 << k), depth + 1, limit) {
            return Some(found);
        }
    }
    None
}

/// Minimum vertex guard set for `target`, optionally restricted to a subset
/// of candidate vertices.
pub fn optimal_vertex_guards(
    p: &Polygon,
    target: Mode,
    restriction: Option<&[usize]>,
) -> Result<(usize, Vec<usize>), OracleError> {
    let cap = opt_cap().min(64);
    if p.n() > cap {
        return Err(OracleError::TooLarge { n: p.n(), cap });
    }
    let cands: Vec<usize> = match restriction {
        Some(r) => r.to_vec(),
        None => (0..p.n()).collect(),
    };
    let elems = universe(p, target, &cands);
    if elems.contains(&0) {
        // some element is invisible from every allowed candidate
        return Ok((usize::MAX, Vec::new()));
    }
    for k in 0..=cands.len() {
        if let Some(mask) = search(&elems, 0, 0, k) {
            let set: Vec<usize> = (0..cands.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| cands[i])
                .collect();
            return Ok((set.len(), set));
        }
    }
    unreachable!("all candidates cover every coverable element")
}

// ---------------------------------------------------------------------------
// Coverage verification

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Vertex(usize),
    BoundaryInterval { edge: usize, from: Point, to: Point },
    Cell(Point),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    pub covered: bool,
    pub witnesses: Vec<Witness>,
}

impl CoverageReport {
    fn from(witnesses: Vec<Witness>) -> Self {
        CoverageReport {
            covered: witnesses.is_empty(),
            witnesses,
        }
    }
}

pub fn verify_coverage(p: &Polygon, guards: &[usize], target: Mode) -> CoverageReport {
    let mut w: Vec<Witness> = (0..p.n())
        .filter(|&v| !guards.iter().any(|&g| p.visible(p.vertex(g), p.vertex(v))))
        .map(Witness::Vertex)
        .collect();
    match target {
        Mode::Vertices => {}
        Mode::Boundary => w.extend(uncovered_boundary(p, guards)),
        Mode::Interior => {
            if w.is_empty() {
                w.extend(uncovered_boundary(p, guards));
            }
            w.extend(uncovered_cells(p, guards).into_iter().map(Witness::Cell));
        }
    }
    CoverageReport::from(w)
}

fn uncovered_boundary(p: &Polygon, guards: &[usize]) -> Vec<Witness> {
    let ring = p.vertices();
    let mut per_edge: Vec<Vec<(Rational, Rational)>> = vec![Vec::new(); p.n()];
    for &g in guards {
        for (e, iv) in point_edge_intervals(ring, p.vertex(g)).into_iter().enumerate() {
            per_edge[e].extend(iv);
        }
    }
    let mut out = Vec::new();
    for (e, mut ivs) in per_edge.into_iter().enumerate() {
        ivs.sort();
        let (a, b) = p.edge(e);
        let mut reach = Rational::zero();
        for (lo, hi) in ivs {
            if lo > reach {
                out.push(Witness::BoundaryInterval {
                    edge: e,
                    from: a.lerp(b, &reach),
                    to: a.lerp(b, &lo),
                });
            }
            if hi > reach {
                reach = hi;
            }
        }
        if reach < Rational::one() {
            out.push(Witness::BoundaryInterval {
                edge: e,
                from: a.lerp(b, &reach),
                to: b.clone(),
            });
        }
    }
    out
}

fn shares_edge(a: &ConvexPiece, b: &ConvexPiece) -> bool {
    let (na, nb) = (a.pts.len(), b.pts.len());
    for i in 0..na {
        let sa = Segment {
            a: a.pts[i].clone(),
            b: a.pts[(i + 1) % na].clone(),
        };
        for j in 0..nb {
            let sb = Segment {
                a: b.pts[j].clone(),
                b: b.pts[(j + 1) % nb].clone(),
            };
            if matches!(segment_intersection(&sa, &sb), Intersection::Overlap(_)) {
                return true;
            }
        }
    }
    false
}

/// One witness point per maximal uncovered interior cell.
pub fn uncovered_cells(p: &Polygon, guards: &[usize]) -> Vec<Point> {
    let pieces: Vec<ConvexPiece> = interior_pieces(p, guards)
        .into_iter()
        .filter(|pc| {
            let c = pc.centroid();
            !guards.iter().any(|&g| p.visible(p.vertex(g), &c))
        })
        .collect();
    let m = pieces.len();
    let mut root: Vec<usize> = (0..m).collect();
    fn find(root: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while root[r] != r {
            r = root[r];
        }
        root[x] = r;
        r
    }
    for i in 0..m {
        for j in i + 1..m {
            if shares_edge(&pieces[i], &pieces[j]) {
                let (ri, rj) = (find(&mut root, i), find(&mut root, j));
                root[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    (0..m)
        .filter(|&i| find(&mut root, i) == i)
        .map(|i| pieces[i].centroid())
        .collect()
}

/// Boundary point label helper for callers holding only coordinates.
pub fn boundary_label(p: &Polygon, q: &Point) -> Option<BoundaryPoint> {
    p.find_boundary_point(q)
}
