//! Exact predicates and constructions over rational coordinates.
//!
//! Every predicate first evaluates in `f64` with a static error bound and
//! falls back to exact `BigRational` arithmetic when the sign is not certain.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::GeomError;

pub type Rational = BigRational;

/// Relative error of one `f64` conversion, doubled for slack.
const UNIT: f64 = f64::EPSILON;

pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone)]
pub struct Point {
    x: Rational,
    y: Rational,
    fx: f64,
    fy: f64,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        let fx = to_f64(&x);
        let fy = to_f64(&y);
        Point { x, y, fx, fy }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(rat(x), rat(y))
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }

    pub fn approx(&self) -> (f64, f64) {
        (self.fx, self.fy)
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        let half = ratio(1, 2);
        Point::new((&self.x + &other.x) * &half, (&self.y + &other.y) * &half)
    }

    /// `self + (other - self) * t`
    pub fn lerp(&self, other: &Point, t: &Rational) -> Point {
        Point::new(&self.x + (&other.x - &self.x) * t, &self.y + (&other.y - &self.y) * t)
    }

    /// Reflection of `other` through `self`: the point `2*self - other`.
    pub fn reflect(&self, other: &Point) -> Point {
        let two = rat(2);
        Point::new(&self.x * &two - &other.x, &self.y * &two - &other.y)
    }

    pub fn dist2(&self, other: &Point) -> Rational {
        let dx = &self.x - &other.x;
        let dy = &self.y - &other.y;
        &dx * &dx + &dy * &dy
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        let finite = self.fx.is_finite() && self.fy.is_finite();
        if finite && (self.fx != other.fx || self.fy != other.fy) {
            // conversion is deterministic, so equal rationals give equal floats
            return false;
        }
        self.x == other.x && self.y == other.y
    }
}

impl Eq for Point {}

impl Hash for Point {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.x.hash(state);
        self.y.hash(state);
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_rat(&self.x, self.fx, &other.x, other.fx).then_with(|| cmp_rat(&self.y, self.fy, &other.y, other.fy))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.x, self.y)
    }
}

fn cmp_rat(a: &Rational, fa: f64, b: &Rational, fb: f64) -> Ordering {
    if fa.is_finite() && fb.is_finite() {
        let diff = fa - fb;
        let bound = 4.0 * UNIT * (fa.abs() + fb.abs());
        if diff > bound {
            return Ordering::Greater;
        }
        if diff < -bound {
            return Ordering::Less;
        }
    }
    a.cmp(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    CounterClockwise,
    Collinear,
}

impl Orientation {
    pub fn sign(self) -> i32 {
        match self {
            Orientation::Clockwise => -1,
            Orientation::CounterClockwise => 1,
            Orientation::Collinear => 0,
        }
    }

    fn from_sign(s: i32) -> Self {
        match s.cmp(&0) {
            Ordering::Less => Orientation::Clockwise,
            Ordering::Greater => Orientation::CounterClockwise,
            Ordering::Equal => Orientation::Collinear,
        }
    }
}

/// Sign of `cross(a - o, b - o2)`.
pub fn cross_sign(o: &Point, a: &Point, o2: &Point, b: &Point) -> i32 {
    let m = [o.fx, o.fy, a.fx, a.fy, o2.fx, o2.fy, b.fx, b.fy]
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    if m.is_finite() && m < 1e150 {
        let det = (a.fx - o.fx) * (b.fy - o2.fy) - (a.fy - o.fy) * (b.fx - o2.fx);
        let bound = 96.0 * UNIT * m * m;
        if det > bound {
            return 1;
        }
        if det < -bound {
            return -1;
        }
    }
    let det = (&a.x - &o.x) * (&b.y - &o2.y) - (&a.y - &o.y) * (&b.x - &o2.x);
    if det.is_positive() {
        1
    } else if det.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of `dot(a - o, b - o2)`.
pub fn dot_sign(o: &Point, a: &Point, o2: &Point, b: &Point) -> i32 {
    let m = [o.fx, o.fy, a.fx, a.fy, o2.fx, o2.fy, b.fx, b.fy]
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    if m.is_finite() && m < 1e150 {
        let dot = (a.fx - o.fx) * (b.fx - o2.fx) + (a.fy - o.fy) * (b.fy - o2.fy);
        let bound = 96.0 * UNIT * m * m;
        if dot > bound {
            return 1;
        }
        if dot < -bound {
            return -1;
        }
    }
    let dot = (&a.x - &o.x) * (&b.x - &o2.x) + (&a.y - &o.y) * (&b.y - &o2.y);
    if dot.is_positive() {
        1
    } else if dot.is_negative() {
        -1
    } else {
        0
    }
}

pub fn orient(a: &Point, b: &Point, c: &Point) -> Orientation {
    Orientation::from_sign(cross_sign(a, b, a, c))
}

/// `p` lies on the closed segment `ab` (which may be degenerate).
pub fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    if orient(a, b, p) != Orientation::Collinear {
        return false;
    }
    dot_sign(p, a, p, b) <= 0
}

/// `p` lies on segment `ab` strictly between its endpoints.
pub fn strictly_inside_segment(a: &Point, b: &Point, p: &Point) -> bool {
    orient(a, b, p) == Orientation::Collinear && dot_sign(p, a, p, b) < 0
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self, GeomError> {
        if a == b {
            return Err(GeomError::DegenerateSegment);
        }
        Ok(Segment { a, b })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Intersection {
    Empty,
    Point(Point),
    Overlap(Segment),
}

/// Parameter `t` with `p = a + t (b - a)`, assuming `p` is on the line `ab`.
pub fn param_on(a: &Point, b: &Point, p: &Point) -> Rational {
    let dx = b.x() - a.x();
    if !dx.is_zero() {
        (p.x() - a.x()) / dx
    } else {
        (p.y() - a.y()) / (b.y() - a.y())
    }
}

/// Intersection of the lines `ab` and `cd`, which must not be parallel.
pub fn line_intersection(a: &Point, b: &Point, c: &Point, d: &Point) -> Point {
    let rx = b.x() - a.x();
    let ry = b.y() - a.y();
    let sx = d.x() - c.x();
    let sy = d.y() - c.y();
    let denom = &rx * &sy - &ry * &sx;
    let qx = c.x() - a.x();
    let qy = c.y() - a.y();
    let t = (&qx * &sy - &qy * &sx) / denom;
    Point::new(a.x() + &rx * &t, a.y() + &ry * &t)
}

/// Parameter `t` along `ab` of its crossing with line `cd` (lines not parallel).
pub fn line_param(a: &Point, b: &Point, c: &Point, d: &Point) -> Rational {
    let rx = b.x() - a.x();
    let ry = b.y() - a.y();
    let sx = d.x() - c.x();
    let sy = d.y() - c.y();
    let denom = &rx * &sy - &ry * &sx;
    let qx = c.x() - a.x();
    let qy = c.y() - a.y();
    (&qx * &sy - &qy * &sx) / denom
}

pub fn segment_intersection(s1: &Segment, s2: &Segment) -> Intersection {
    let (a, b, c, d) = (&s1.a, &s1.b, &s2.a, &s2.b);
    let o1 = orient(a, b, c).sign();
    let o2 = orient(a, b, d).sign();
    let o3 = orient(c, d, a).sign();
    let o4 = orient(c, d, b).sign();
    if o1 == 0 && o2 == 0 {
        // collinear: intersect parameter ranges along ab
        let tc = param_on(a, b, c);
        let td = param_on(a, b, d);
        let (lo, hi) = if tc <= td { (tc, td) } else { (td, tc) };
        let lo = if lo > Rational::zero() { lo } else { Rational::zero() };
        let hi = if hi < Rational::one() { hi } else { Rational::one() };
        return match lo.cmp(&hi) {
            Ordering::Greater => Intersection::Empty,
            Ordering::Equal => Intersection::Point(a.lerp(b, &lo)),
            Ordering::Less => Intersection::Overlap(Segment {
                a: a.lerp(b, &lo),
                b: a.lerp(b, &hi),
            }),
        };
    }
    if o1 * o2 > 0 || o3 * o4 > 0 {
        return Intersection::Empty;
    }
    if o1 == 0 {
        return Intersection::Point(c.clone());
    }
    if o2 == 0 {
        return Intersection::Point(d.clone());
    }
    if o3 == 0 {
        return Intersection::Point(a.clone());
    }
    if o4 == 0 {
        return Intersection::Point(b.clone());
    }
    Intersection::Point(line_intersection(a, b, c, d))
}

/// Interiors of the two segments cross at a single point interior to both.
pub fn proper_crossing(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orient(a, b, c).sign();
    let o2 = orient(a, b, d).sign();
    if o1 * o2 >= 0 {
        return false;
    }
    let o3 = orient(c, d, a).sign();
    let o4 = orient(c, d, b).sign();
    o3 * o4 < 0
}

/// Closed segments share at least one point.
pub fn segments_touch(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orient(a, b, c).sign();
    let o2 = orient(a, b, d).sign();
    let o3 = orient(c, d, a).sign();
    let o4 = orient(c, d, b).sign();
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}

/// A ray hit on a closed boundary ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayHit {
    pub point: Point,
    /// Edge containing the hit; a vertex hit reports the edge that starts there.
    pub edge: usize,
    /// Position on that edge, in `[0, 1)`.
    pub t: Rational,
}

/// First point of the closed ring boundary strictly beyond `through` on the
/// ray from `origin` through `through`.
pub fn first_boundary_hit(ring: &[Point], origin: &Point, through: &Point) -> Result<RayHit, GeomError> {
    if origin == through {
        return Err(GeomError::DegenerateRay);
    }
    let n = ring.len();
    let one = Rational::one();
    let mut best: Option<(Rational, Point)> = None;
    let consider = |s: Rational, p: Point, best: &mut Option<(Rational, Point)>| {
        if s > one && best.as_ref().is_none_or(|(bs, _)| s < *bs) {
            *best = Some((s, p));
        }
    };
    for i in 0..n {
        let a = &ring[i];
        let b = &ring[(i + 1) % n];
        let oa = orient(origin, through, a).sign();
        let ob = orient(origin, through, b).sign();
        if oa * ob > 0 {
            continue;
        }
        if oa == 0 && ob == 0 {
            for p in [a, b] {
                if dot_sign(origin, through, origin, p) > 0 {
                    consider(param_on(origin, through, p), p.clone(), &mut best);
                }
            }
            continue;
        }
        let p = if oa == 0 {
            a.clone()
        } else if ob == 0 {
            b.clone()
        } else {
            line_intersection(origin, through, a, b)
        };
        if dot_sign(origin, through, origin, &p) > 0 {
            consider(param_on(origin, through, &p), p, &mut best);
        }
    }
    let (_, point) = best.ok_or(GeomError::NoHit)?;
    Ok(locate_on_ring(ring, &point).expect("hit lies on the ring"))
}

/// Boundary location of a point on the ring, with the vertex tie rule.
pub fn locate_on_ring(ring: &[Point], p: &Point) -> Option<RayHit> {
    let n = ring.len();
    if let Some(i) = ring.iter().position(|v| v == p) {
        return Some(RayHit {
            point: p.clone(),
            edge: i,
            t: Rational::zero(),
        });
    }
    (0..n).find_map(|i| {
        let a = &ring[i];
        let b = &ring[(i + 1) % n];
        strictly_inside_segment(a, b, p).then(|| RayHit {
            point: p.clone(),
            edge: i,
            t: param_on(a, b, p),
        })
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// Exact point location with respect to a closed simple ring.
pub fn locate_point(ring: &[Point], p: &Point) -> Location {
    let n = ring.len();
    let mut winding = 0i32;
    for i in 0..n {
        let a = &ring[i];
        let b = &ring[(i + 1) % n];
        if on_segment(a, b, p) {
            return Location::Boundary;
        }
        let a_le = a.y() <= p.y();
        let b_le = b.y() <= p.y();
        if a_le && !b_le {
            if orient(a, b, p) == Orientation::CounterClockwise {
                winding += 1;
            }
        } else if !a_le && b_le && orient(a, b, p) == Orientation::Clockwise {
            winding -= 1;
        }
    }
    if winding != 0 {
        Location::Inside
    } else {
        Location::Outside
    }
}

/// Twice the signed area (positive for counterclockwise rings).
pub fn signed_area2(ring: &[Point]) -> Rational {
    let n = ring.len();
    let mut s = Rational::zero();
    for i in 0..n {
        let a = &ring[i];
        let b = &ring[(i + 1) % n];
        s += a.x() * b.y() - b.x() * a.y();
    }
    s
}

/// Interior-angle cone test at ring vertex `r` for a clockwise ring.
///
/// `prev` and `next` are the clockwise neighbours of `r`; the direction is
/// from `r` towards `t`. With `strict` the open cone is tested.
pub fn in_cone(prev: &Point, r: &Point, next: &Point, t: &Point, strict: bool) -> bool {
    // counterclockwise successor is `prev`, predecessor is `next`
    let convex = orient(next, r, prev) != Orientation::Clockwise;
    let c1 = cross_sign(r, prev, r, t); // cross(prev - r, d)
    let c2 = cross_sign(r, t, r, next); // cross(d, next - r)
    if convex {
        if strict {
            c1 > 0 && c2 > 0
        } else {
            c1 >= 0 && c2 >= 0
        }
    } else {
        let e1 = cross_sign(r, next, r, t); // cross(next - r, d)
        let e2 = cross_sign(r, t, r, prev); // cross(d, prev - r)
        if strict {
            !(e1 >= 0 && e2 >= 0)
        } else {
            !(e1 > 0 && e2 > 0)
        }
    }
}

/// Closed-segment visibility inside a clockwise simple ring: the segment
/// `ab` lies in the closed region. Both endpoints must lie in the region.
pub fn segment_inside(ring: &[Point], a: &Point, b: &Point) -> bool {
    if a == b {
        return true;
    }
    let n = ring.len();
    for i in 0..n {
        if proper_crossing(a, b, &ring[i], &ring[(i + 1) % n]) {
            return false;
        }
    }
    for i in 0..n {
        let r = &ring[i];
        if !on_segment(a, b, r) {
            continue;
        }
        let prev = &ring[(i + n - 1) % n];
        let next = &ring[(i + 1) % n];
        if r != a && !in_cone(prev, r, next, a, false) {
            return false;
        }
        if r != b && !in_cone(prev, r, next, b, false) {
            return false;
        }
    }
    for (e, other) in [(a, b), (b, a)] {
        for i in 0..n {
            let p = &ring[i];
            let q = &ring[(i + 1) % n];
            if strictly_inside_segment(p, q, e) && cross_sign(p, q, e, other) > 0 {
                return false;
            }
        }
    }
    true
}

/// A convex polygon given counterclockwise, with the supporting line of
/// each edge kept as two integer-friendly points so that split points are
/// always line-line intersections of original data.
#[derive(Clone, Debug)]
pub struct ConvexPiece {
    pub pts: Vec<Point>,
    /// `lines[i]` supports the edge from `pts[i]` to `pts[i + 1]`.
    pub lines: Vec<(Point, Point)>,
}

impl ConvexPiece {
    pub fn from_triangle(a: &Point, b: &Point, c: &Point) -> Self {
        let mut pts = vec![a.clone(), b.clone(), c.clone()];
        if orient(a, b, c) == Orientation::Clockwise {
            pts.swap(1, 2);
        }
        let lines = (0..3).map(|i| (pts[i].clone(), pts[(i + 1) % 3].clone())).collect();
        ConvexPiece { pts, lines }
    }

    /// Split by the line `pq`; returns the nonempty parts (left, right).
    pub fn split(&self, p: &Point, q: &Point) -> (Option<ConvexPiece>, Option<ConvexPiece>) {
        let side: Vec<i32> = self.pts.iter().map(|v| orient(p, q, v).sign()).collect();
        if side.iter().all(|&s| s >= 0) {
            return (Some(self.clone()), None);
        }
        if side.iter().all(|&s| s <= 0) {
            return (None, Some(self.clone()));
        }
        (Some(self.clip(p, q, &side, 1)), Some(self.clip(p, q, &side, -1)))
    }

    fn clip(&self, p: &Point, q: &Point, side: &[i32], keep: i32) -> ConvexPiece {
        let n = self.pts.len();
        let cut = (p.clone(), q.clone());
        let mut out = ConvexPiece {
            pts: vec![],
            lines: vec![],
        };
        for i in 0..n {
            let j = (i + 1) % n;
            let (si, sj) = (side[i] * keep, side[j] * keep);
            let crossing = si * sj < 0;
            if si >= 0 {
                out.pts.push(self.pts[i].clone());
                out.lines.push(if sj >= 0 || crossing {
                    self.lines[i].clone()
                } else {
                    cut.clone()
                });
            }
            if crossing {
                let l = &self.lines[i];
                out.pts.push(line_intersection(p, q, &l.0, &l.1));
                out.lines.push(if sj > 0 { l.clone() } else { cut.clone() });
            }
        }
        out
    }

    pub fn centroid(&self) -> Point {
        let k = rat(self.pts.len() as i64);
        let mut sx = Rational::zero();
        let mut sy = Rational::zero();
        for p in &self.pts {
            sx += p.x();
            sy += p.y();
        }
        Point::new(sx / &k, sy / k)
    }

    pub fn area2(&self) -> Rational {
        signed_area2(&self.pts)
    }

    /// The segment `ab` passes through the open interior of the piece.
    pub fn meets_interior(&self, a: &Point, b: &Point) -> bool {
        let (ax, ay) = a.approx();
        let (bx, by) = b.approx();
        let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for p in &self.pts {
            let (x, y) = p.approx();
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        let slack = 1e-9 * (1.0 + x1.abs().max(y1.abs()).max(x0.abs()).max(y0.abs()));
        if ax.max(bx) < x0 - slack || ax.min(bx) > x1 + slack || ay.max(by) < y0 - slack || ay.min(by) > y1 + slack {
            return false;
        }
        let n = self.pts.len();
        let (mut lo, mut hi) = (Rational::zero(), Rational::one());
        let cross =
            |o: &Point, e: &Point, p: &Point| (e.x() - o.x()) * (p.y() - o.y()) - (e.y() - o.y()) * (p.x() - o.x());
        let mut fs = Vec::with_capacity(n);
        for i in 0..n {
            let (o, e) = (&self.pts[i], &self.pts[(i + 1) % n]);
            let fa = cross(o, e, a);
            let fb = cross(o, e, b);
            // f(t) = fa + t (fb - fa) >= 0
            let d = &fb - &fa;
            if d.is_zero() {
                if fa.is_negative() {
                    return false;
                }
            } else {
                let t = -&fa / &d;
                if d.is_positive() {
                    if t > lo {
                        lo = t;
                    }
                } else if t < hi {
                    hi = t;
                }
            }
            fs.push((fa, d));
        }
        if lo >= hi {
            return false;
        }
        let mid = (&lo + &hi) / rat(2);
        fs.iter().all(|(fa, d)| (fa + d * &mid).is_positive())
    }
}

/// Refines convex pieces so that no cut segment passes through the interior
/// of a piece.
pub fn refine_pieces(mut pieces: Vec<ConvexPiece>, cuts: &[(Point, Point)]) -> Vec<ConvexPiece> {
    for (a, b) in cuts {
        let mut next = Vec::with_capacity(pieces.len() + 4);
        for pc in pieces {
            if pc.meets_interior(a, b) {
                let (l, r) = pc.split(a, b);
                next.extend(l);
                next.extend(r);
            } else {
                next.push(pc);
            }
        }
        pieces = next;
    }
    pieces
}

/// Exact rational from a decimal (`-1.25`, `3e2`) or fraction (`p/q`) literal.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let num: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().ok()?
    };
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(num);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -r } else { r })
}

/// Decimal rendering rounded half away from zero to `places` digits.
pub fn format_decimal(r: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = r * BigRational::from_integer(scale.clone());
    let rounded = if scaled.is_negative() {
        -((-scaled) + ratio(1, 2)).floor()
    } else {
        (scaled + ratio(1, 2)).floor()
    };
    let v = rounded.to_integer();
    let neg = v.is_negative();
    let digits = v.abs().to_string();
    let digits = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (ip, fp) = digits.split_at(digits.len() - places);
    let mut out = String::new();
    if neg && v != BigInt::zero() {
        out.push('-');
    }
    out.push_str(ip);
    if places > 0 {
        out.push('.');
        out.push_str(fp);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn seg(a: (i64, i64), b: (i64, i64)) -> Segment {
        Segment::new(p(a.0, a.1), p(b.0, b.1)).unwrap()
    }

    #[test]
    fn orient_examples() {
        assert_eq!(orient(&p(0, 0), &p(1, 0), &p(0, 1)), Orientation::CounterClockwise);
        assert_eq!(orient(&p(0, 0), &p(1, 1), &p(2, 2)), Orientation::Collinear);
        assert_eq!(orient(&p(0, 0), &p(0, 1), &p(1, 1)), Orientation::Clockwise);
    }

    #[test]
    fn orient_near_degenerate_falls_back_to_exact() {
        let a = Point::new(ratio(1, 3), ratio(1, 3));
        let b = Point::new(ratio(2, 3), ratio(2, 3));
        let c = Point::new(ratio(10_000_000_001, 10_000_000_000), rat(1));
        assert_eq!(orient(&a, &b, &c), Orientation::Clockwise);
        let d = Point::new(ratio(7, 9), ratio(7, 9));
        assert_eq!(orient(&a, &b, &d), Orientation::Collinear);
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(
            segment_intersection(&seg((0, 0), (2, 0)), &seg((1, -1), (1, 1))),
            Intersection::Point(p(1, 0))
        );
        assert_eq!(
            segment_intersection(&seg((0, 0), (1, 0)), &seg((2, 0), (3, 0))),
            Intersection::Empty
        );
        assert_eq!(
            segment_intersection(&seg((0, 0), (2, 0)), &seg((1, 0), (3, 0))),
            Intersection::Overlap(seg((1, 0), (2, 0)))
        );
    }

    fn unit_square_cw() -> Vec<Point> {
        vec![p(0, 0), p(0, 1), p(1, 1), p(1, 0)]
    }

    #[test]
    fn ray_hits() {
        let sq = unit_square_cw();
        let h = first_boundary_hit(
            &sq,
            &Point::new(ratio(1, 2), ratio(1, 2)),
            &Point::new(ratio(1, 2), ratio(3, 4)),
        )
        .unwrap();
        assert_eq!(h.point, Point::new(ratio(1, 2), rat(1)));
        assert_eq!(h.edge, 1);
        let h = first_boundary_hit(
            &sq,
            &Point::new(ratio(1, 4), ratio(1, 4)),
            &Point::new(ratio(1, 2), ratio(1, 2)),
        )
        .unwrap();
        assert_eq!(h.point, p(1, 1));
        assert_eq!(h.edge, 2, "vertex hit reports the edge following it clockwise");
        assert_eq!(
            first_boundary_hit(&sq, &p(0, 0), &p(0, 0)),
            Err(GeomError::DegenerateRay)
        );
    }

    #[test]
    fn visibility_in_l_shape() {
        // clockwise L-shaped hexagon
        let l: Vec<Point> = [(0, 0), (0, 2), (1, 2), (1, 1), (2, 1), (2, 0)]
            .iter()
            .map(|&(x, y)| p(x, y))
            .collect();
        assert!(segment_inside(&l, &p(2, 0), &p(0, 2)), "grazes the reflex corner");
        assert!(!segment_inside(&l, &p(2, 1), &p(1, 2)));
        assert!(
            segment_inside(&l, &p(2, 1), &p(0, 1)),
            "runs along no edge, touches reflex vertex"
        );
        assert!(segment_inside(&l, &p(0, 0), &p(2, 0)), "along an edge");
    }

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_rational("0.1"), Some(ratio(1, 10)));
        assert_eq!(parse_rational("-2.50"), Some(ratio(-5, 2)));
        assert_eq!(parse_rational("1/3"), Some(ratio(1, 3)));
        assert_eq!(parse_rational("1e2"), Some(rat(100)));
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(format_decimal(&ratio(1, 3), 6), "0.333333");
        assert_eq!(format_decimal(&ratio(-2, 3), 6), "-0.666667");
        assert_eq!(format_decimal(&rat(5), 2), "5.00");
    }

    #[test]
    fn convex_split_preserves_area() {
        let t = ConvexPiece::from_triangle(&p(0, 0), &p(4, 0), &p(0, 4));
        let (l, r) = t.split(&p(1, -1), &p(1, 5));
        let (l, r) = (l.unwrap(), r.unwrap());
        assert_eq!(l.area2() + r.area2(), t.area2());
        // a line through a vertex splits into two triangles
        let (l, r) = t.split(&p(0, 0), &p(1, 1));
        let (l, r) = (l.unwrap(), r.unwrap());
        assert_eq!(l.pts.len() + r.pts.len(), 6);
        assert_eq!(l.area2() + r.area2(), t.area2());
    }
}
