//! Simple polygons stored clockwise, boundary positions, and sub-rings.

use std::cmp::{Ordering, Reverse};

use num_traits::{One, Signed, Zero};

use crate::error::PolygonError;
use crate::geom_kernel::{
    locate_point, orient, param_on, segment_inside, segment_intersection, segments_touch, signed_area2,
    strictly_inside_segment, Intersection, Location, Orientation, Point, Rational, Segment,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

/// A point on the boundary of the host polygon.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryPoint {
    Vertex(usize),
    OnEdge { edge: usize, point: Point },
}

/// Position along the clockwise boundary: edge index then parameter in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundaryPos {
    pub edge: usize,
    pub t: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Clockwise,
    CounterClockwise,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryRange {
    pub start: BoundaryPoint,
    pub end: BoundaryPoint,
    pub direction: Direction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chord {
    pub u: BoundaryPoint,
    pub v: BoundaryPoint,
}

impl Polygon {
    /// Validates a raw vertex list, normalizing to clockwise order while
    /// keeping the first vertex first.
    pub fn validate(raw: Vec<Point>) -> Result<Polygon, PolygonError> {
        let n = raw.len();
        if n < 3 {
            return Err(PolygonError::TooFewVertices(n));
        }
        for i in 0..n {
            if raw[..i].contains(&raw[i]) {
                return Err(PolygonError::DuplicateVertex(i));
            }
        }
        for i in 0..n {
            let (a, b, c) = (&raw[i], &raw[(i + 1) % n], &raw[(i + 2) % n]);
            if orient(a, b, c) == Orientation::Collinear {
                return Err(PolygonError::CollinearRun(i, (i + 1) % n, (i + 2) % n));
            }
        }
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if segments_touch(&raw[i], &raw[(i + 1) % n], &raw[j], &raw[(j + 1) % n]) {
                    return Err(PolygonError::NotSimple(i, j));
                }
            }
        }
        let mut vertices = raw;
        if signed_area2(&vertices).is_positive() {
            vertices[1..].reverse();
        }
        Ok(Polygon { vertices })
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i]
    }

    pub fn next(&self, i: usize) -> usize {
        (i + 1) % self.n()
    }

    pub fn prev(&self, i: usize) -> usize {
        (i + self.n() - 1) % self.n()
    }

    /// Edge `i` runs clockwise from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> (&Point, &Point) {
        (&self.vertices[i], &self.vertices[self.next(i)])
    }

    /// Twice the (positive) area.
    pub fn area2(&self) -> Rational {
        -signed_area2(&self.vertices)
    }

    pub fn is_reflex(&self, i: usize) -> bool {
        // clockwise storage: a counterclockwise turn is reflex
        orient(
            &self.vertices[self.prev(i)],
            &self.vertices[i],
            &self.vertices[self.next(i)],
        ) == Orientation::CounterClockwise
    }

    pub fn locate(&self, p: &Point) -> Location {
        locate_point(&self.vertices, p)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.locate(p) != Location::Outside
    }

    pub fn visible(&self, a: &Point, b: &Point) -> bool {
        segment_inside(&self.vertices, a, b)
    }

    pub fn point(&self, bp: &BoundaryPoint) -> Point {
        match bp {
            BoundaryPoint::Vertex(i) => self.vertices[*i].clone(),
            BoundaryPoint::OnEdge { point, .. } => point.clone(),
        }
    }

    /// Canonical boundary point for a point on edge `edge`.
    pub fn boundary_point(&self, edge: usize, p: &Point) -> BoundaryPoint {
        let (a, b) = self.edge(edge);
        if p == a {
            BoundaryPoint::Vertex(edge)
        } else if p == b {
            BoundaryPoint::Vertex(self.next(edge))
        } else {
            BoundaryPoint::OnEdge { edge, point: p.clone() }
        }
    }

    /// Boundary point for any point on the boundary, if it is on it.
    pub fn find_boundary_point(&self, p: &Point) -> Option<BoundaryPoint> {
        if let Some(i) = self.vertices.iter().position(|v| v == p) {
            return Some(BoundaryPoint::Vertex(i));
        }
        (0..self.n()).find_map(|i| {
            let (a, b) = self.edge(i);
            strictly_inside_segment(a, b, p).then(|| BoundaryPoint::OnEdge {
                edge: i,
                point: p.clone(),
            })
        })
    }

    pub fn pos(&self, bp: &BoundaryPoint) -> BoundaryPos {
        match bp {
            BoundaryPoint::Vertex(i) => BoundaryPos {
                edge: *i,
                t: Rational::zero(),
            },
            BoundaryPoint::OnEdge { edge, point } => {
                let (a, b) = self.edge(*edge);
                BoundaryPos {
                    edge: *edge,
                    t: param_on(a, b, point),
                }
            }
        }
    }

    /// Sort key for clockwise traversal starting at `from` (inclusive).
    pub fn cw_key(&self, from: &BoundaryPos, p: &BoundaryPos) -> (u8, BoundaryPos) {
        (u8::from(p < from), p.clone())
    }

    /// Sort key for counterclockwise traversal starting at `from` (inclusive).
    pub fn ccw_key(&self, from: &BoundaryPos, p: &BoundaryPos) -> (u8, Reverse<BoundaryPos>) {
        (u8::from(p > from), Reverse(p.clone()))
    }

    /// Compares two boundary points in counterclockwise order from `from`.
    pub fn ccw_cmp(&self, from: &BoundaryPos, a: &BoundaryPos, b: &BoundaryPos) -> Ordering {
        self.ccw_key(from, a).cmp(&self.ccw_key(from, b))
    }

    /// `p` lies on the clockwise boundary walk from `start` to `end` (closed).
    pub fn on_cw_range(&self, start: &BoundaryPos, end: &BoundaryPos, p: &BoundaryPos) -> bool {
        self.cw_key(start, p) <= self.cw_key(start, end)
    }

    pub fn in_range(&self, range: &BoundaryRange, bp: &BoundaryPoint) -> bool {
        let s = self.pos(&range.start);
        let e = self.pos(&range.end);
        let p = self.pos(bp);
        match range.direction {
            Direction::Clockwise => self.on_cw_range(&s, &e, &p),
            Direction::CounterClockwise => self.on_cw_range(&e, &s, &p),
        }
    }

    /// Vertices visited by the range, in its direction, endpoints included
    /// when they are vertices.
    pub fn range_vertices(&self, range: &BoundaryRange) -> Vec<usize> {
        let (s, e) = match range.direction {
            Direction::Clockwise => (self.pos(&range.start), self.pos(&range.end)),
            Direction::CounterClockwise => (self.pos(&range.end), self.pos(&range.start)),
        };
        let mut out: Vec<usize> = (0..self.n())
            .filter(|&i| {
                let p = BoundaryPos {
                    edge: i,
                    t: Rational::zero(),
                };
                self.on_cw_range(&s, &e, &p)
            })
            .collect();
        out.sort_by_key(|&i| {
            self.cw_key(
                &s,
                &BoundaryPos {
                    edge: i,
                    t: Rational::zero(),
                },
            )
        });
        if range.direction == Direction::CounterClockwise {
            out.reverse();
        }
        out
    }

    /// Whole polygon as a ring with vertex labels.
    pub fn ring(&self) -> Ring {
        Ring {
            pts: self.vertices.clone(),
            labels: (0..self.n()).map(BoundaryPoint::Vertex).collect(),
            chord_edge: None,
        }
    }

    /// The open segment `uv` lies in the interior.
    pub fn is_chord(&self, u: &Point, v: &Point) -> bool {
        if u == v || !self.visible(u, v) {
            return false;
        }
        let s = Segment {
            a: u.clone(),
            b: v.clone(),
        };
        (0..self.n()).all(|i| {
            let (a, b) = self.edge(i);
            match segment_intersection(
                &s,
                &Segment {
                    a: a.clone(),
                    b: b.clone(),
                },
            ) {
                Intersection::Empty => true,
                Intersection::Point(p) => p == *u || p == *v,
                Intersection::Overlap(_) => false,
            }
        })
    }

    /// Splits along a chord into `(Q_U, Q_L)`: `Q_U` is bounded by the
    /// clockwise boundary from `u` to `v`, `Q_L` by the counterclockwise one.
    pub fn split_by_chord(&self, c: &Chord) -> Result<(Ring, Ring), PolygonError> {
        let u = self.point(&c.u);
        let v = self.point(&c.v);
        if !self.is_chord(&u, &v) {
            return Err(PolygonError::NotAChord);
        }
        let whole = self.ring();
        let pu = self.pos(&c.u);
        let pv = self.pos(&c.v);
        let upper = whole.sub_ring(&RingPos::from(&pu), &u, &c.u, &RingPos::from(&pv), &v, &c.v);
        let lower = whole.sub_ring(&RingPos::from(&pv), &v, &c.v, &RingPos::from(&pu), &u, &c.u);
        Ok((upper, lower))
    }

    /// Ear-clipping triangulation; triangles as clockwise vertex triples.
    pub fn triangulate(&self) -> Vec<[usize; 3]> {
        ear_clip(&self.vertices)
    }
}

/// Position on a ring: edge index and parameter in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RingPos {
    pub edge: usize,
    pub t: Rational,
}

impl From<&BoundaryPos> for RingPos {
    fn from(p: &BoundaryPos) -> Self {
        RingPos {
            edge: p.edge,
            t: p.t.clone(),
        }
    }
}

/// A clockwise simple ring whose vertices are labelled with host boundary
/// points. Consecutive collinear vertices are allowed; `chord_edge` marks
/// the one edge that is not part of the host boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    pub pts: Vec<Point>,
    pub labels: Vec<BoundaryPoint>,
    pub chord_edge: Option<usize>,
}

impl Ring {
    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    pub fn next(&self, i: usize) -> usize {
        (i + 1) % self.len()
    }

    pub fn prev(&self, i: usize) -> usize {
        (i + self.len() - 1) % self.len()
    }

    pub fn area2(&self) -> Rational {
        -signed_area2(&self.pts)
    }

    pub fn locate(&self, p: &Point) -> Location {
        locate_point(&self.pts, p)
    }

    pub fn visible(&self, a: &Point, b: &Point) -> bool {
        segment_inside(&self.pts, a, b)
    }

    pub fn point_at(&self, pos: &RingPos) -> Point {
        let a = &self.pts[pos.edge];
        if pos.t.is_zero() {
            return a.clone();
        }
        a.lerp(&self.pts[self.next(pos.edge)], &pos.t)
    }

    pub fn pos_of(&self, p: &Point) -> Option<RingPos> {
        if let Some(i) = self.pts.iter().position(|v| v == p) {
            return Some(RingPos {
                edge: i,
                t: Rational::zero(),
            });
        }
        (0..self.len()).find_map(|i| {
            let a = &self.pts[i];
            let b = &self.pts[self.next(i)];
            strictly_inside_segment(a, b, p).then(|| RingPos {
                edge: i,
                t: param_on(a, b, p),
            })
        })
    }

    /// Host boundary label for a point at `pos`, given the host polygon.
    pub fn label_at(&self, host: &Polygon, pos: &RingPos, p: &Point) -> BoundaryPoint {
        if pos.t.is_zero() {
            return self.labels[pos.edge].clone();
        }
        if Some(pos.edge) == self.chord_edge {
            if let Some(bp) = host.find_boundary_point(p) {
                return bp;
            }
        }
        let host_edge = match &self.labels[pos.edge] {
            BoundaryPoint::Vertex(i) => *i,
            BoundaryPoint::OnEdge { edge, .. } => *edge,
        };
        host.boundary_point(host_edge, p)
    }

    /// The ring cut off by the chord from `a` to `b`, following this ring
    /// clockwise from `a` to `b`; the closing edge `b -> a` becomes the chord.
    pub fn sub_ring(
        &self,
        pa: &RingPos,
        a: &Point,
        la: &BoundaryPoint,
        pb: &RingPos,
        b: &Point,
        lb: &BoundaryPoint,
    ) -> Ring {
        let mut pts = vec![a.clone()];
        let mut labels = vec![la.clone()];
        let n = self.len();
        let mut i = self.next(pa.edge);
        let end_vertex = if pb.t.is_zero() { pb.edge } else { self.next(pb.edge) };
        let wraps_same_edge = pa.edge == pb.edge && pa.t < pb.t;
        if !wraps_same_edge {
            let mut steps = 0;
            loop {
                if i == end_vertex && pb.t.is_zero() {
                    break;
                }
                pts.push(self.pts[i].clone());
                labels.push(self.labels[i].clone());
                if i == pb.edge {
                    break;
                }
                i = self.next(i);
                steps += 1;
                assert!(steps <= n, "sub_ring walk did not terminate");
            }
        }
        pts.push(b.clone());
        labels.push(lb.clone());
        let chord_edge = Some(pts.len() - 1);
        Ring {
            pts,
            labels,
            chord_edge,
        }
    }

    /// Ear-clipping over the ring with straight vertices removed.
    pub fn triangles(&self) -> Vec<[Point; 3]> {
        let keep: Vec<Point> = (0..self.len())
            .filter(|&i| {
                orient(&self.pts[self.prev(i)], &self.pts[i], &self.pts[self.next(i)]) != Orientation::Collinear
            })
            .map(|i| self.pts[i].clone())
            .collect();
        ear_clip(&keep)
            .into_iter()
            .map(|[a, b, c]| [keep[a].clone(), keep[b].clone(), keep[c].clone()])
            .collect()
    }
}

fn ear_clip(pts: &[Point]) -> Vec<[usize; 3]> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    let mut out = Vec::with_capacity(pts.len().saturating_sub(2));
    let mut guard = 0;
    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = false;
        for k in 0..m {
            let (ia, ib, ic) = (idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]);
            let (a, b, c) = (&pts[ia], &pts[ib], &pts[ic]);
            if orient(a, b, c) != Orientation::Clockwise {
                continue;
            }
            let blocked = idx.iter().any(|&j| {
                if j == ia || j == ib || j == ic {
                    return false;
                }
                let p = &pts[j];
                if p == a || p == b || p == c {
                    return false;
                }
                orient(a, b, p) != Orientation::CounterClockwise
                    && orient(b, c, p) != Orientation::CounterClockwise
                    && orient(c, a, p) != Orientation::CounterClockwise
            });
            if blocked {
                continue;
            }
            out.push([ia, ib, ic]);
            idx.remove(k);
            clipped = true;
            break;
        }
        guard += 1;
        assert!(clipped && guard <= pts.len(), "ear clipping found no ear");
    }
    if idx.len() == 3 {
        out.push([idx[0], idx[1], idx[2]]);
    }
    out
}

/// Twice the absolute area of a triangle.
pub fn triangle_area2(a: &Point, b: &Point, c: &Point) -> Rational {
    let s = signed_area2(&[a.clone(), b.clone(), c.clone()]);
    s.abs()
}

pub fn half() -> Rational {
    Rational::one() / Rational::from_integer(2.into())
}
