//! Instance files, generated instances, guard reports and SVG output.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::IoError;
use crate::geom_kernel::{format_decimal, orient, parse_rational, proper_crossing, Orientation, Point, Rational};
use crate::guard_placement::Role;
use crate::partition::PartitionTree;
use crate::pipeline::RunReport;
use crate::polygon::Polygon;
use crate::visibility::visibility_polygon_from_point;
use crate::Mode;

/// Parses an instance: a vertex count followed by one `x y` line per vertex.
/// Blank lines and lines starting with `#` are ignored.
pub fn parse_instance(text: &str) -> Result<Polygon, IoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(IoError::Parse {
        line: 1,
        msg: "missing vertex count".into(),
    })?;
    let n: usize = header.parse().map_err(|_| IoError::Parse {
        line: hline,
        msg: format!("expected vertex count, got {header:?}"),
    })?;
    let mut pts = Vec::with_capacity(n);
    let mut last = hline;
    for (line, l) in lines {
        last = line;
        let mut it = l.split_whitespace();
        let (Some(xs), Some(ys), None) = (it.next(), it.next(), it.next()) else {
            return Err(IoError::Parse {
                line,
                msg: "expected two coordinates".into(),
            });
        };
        let coord = |s: &str| {
            parse_rational(s).ok_or_else(|| IoError::Parse {
                line,
                msg: format!("bad coordinate {s:?}"),
            })
        };
        pts.push(Point::new(coord(xs)?, coord(ys)?));
    }
    if pts.len() != n {
        return Err(IoError::Parse {
            line: last,
            msg: format!("header says {n} vertices, found {}", pts.len()),
        });
    }
    Ok(Polygon::validate(pts)?)
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn serialize_instance(p: &Polygon) -> String {
    let mut s = format!("{}\n", p.n());
    for v in p.vertices() {
        let _ = writeln!(s, "{} {}", format_rational(v.x()), format_rational(v.y()));
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Style {
    Random,
    Comb,
    Spiral,
    Staircase,
}

impl std::str::FromStr for Style {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(Style::Random),
            "comb" => Ok(Style::Comb),
            "spiral" => Ok(Style::Spiral),
            "staircase" => Ok(Style::Staircase),
            _ => Err(IoError::BadParams(format!("unknown style {s:?}"))),
        }
    }
}

impl std::fmt::Display for Style {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Style::Random => "random",
            Style::Comb => "comb",
            Style::Spiral => "spiral",
            Style::Staircase => "staircase",
        })
    }
}

pub fn generate_polygon(n: usize, seed: u64, style: Style) -> Result<Polygon, IoError> {
    if n < 3 {
        return Err(IoError::BadParams(format!("need at least 3 vertices, got {n}")));
    }
    let pts = match style {
        Style::Random => random_polygon(n, seed),
        Style::Comb => {
            if !n.is_multiple_of(3) {
                return Err(IoError::BadParams(format!(
                    "comb needs a multiple of 3 vertices, got {n}"
                )));
            }
            comb(n / 3)
        }
        Style::Spiral => with_count(n, spiral_chain),
        Style::Staircase => with_count(n, staircase_chain),
    };
    Ok(Polygon::validate(
        pts.into_iter().map(|(x, y)| Point::from_ints(x, y)).collect(),
    )?)
}

fn in_general_position(pts: &[(i64, i64)], q: (i64, i64)) -> bool {
    let p = |t: (i64, i64)| Point::from_ints(t.0, t.1);
    let pq = p(q);
    for i in 0..pts.len() {
        if pts[i] == q {
            return false;
        }
        for j in i + 1..pts.len() {
            if orient(&p(pts[i]), &p(pts[j]), &pq) == Orientation::Collinear {
                return false;
            }
        }
    }
    true
}

/// Random points in general position, untangled by 2-opt moves.
fn random_polygon(n: usize, seed: u64) -> Vec<(i64, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = 8 * n as i64;
    let mut pts: Vec<(i64, i64)> = Vec::with_capacity(n);
    while pts.len() < n {
        let q = (rng.gen_range(0..side), rng.gen_range(0..side));
        if in_general_position(&pts, q) {
            pts.push(q);
        }
    }
    pts.shuffle(&mut rng);
    let p: Vec<Point> = pts.iter().map(|&(x, y)| Point::from_ints(x, y)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    'untangle: loop {
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b) = (&p[order[i]], &p[order[i + 1]]);
                let (c, d) = (&p[order[j]], &p[order[(j + 1) % n]]);
                if proper_crossing(a, b, c, d) {
                    order[i + 1..=j].reverse();
                    continue 'untangle;
                }
            }
        }
        break;
    }
    order.into_iter().map(|i| pts[i]).collect()
}

/// `k` thin spikes on a circular arc above a chord; the tip of each spike is
/// seen only from the spike's own three vertices.
fn comb(k: usize) -> Vec<(i64, i64)> {
    let r = 1000.0;
    let len = 1000.0;
    let half = 0.03_f64;
    let (from, to) = (150f64.to_radians(), 30f64.to_radians());
    let mut out = Vec::with_capacity(3 * k);
    for i in 0..k {
        let th = if k == 1 {
            90f64.to_radians()
        } else {
            from + (to - from) * i as f64 / (k - 1) as f64
        };
        let at = |rad: f64, ang: f64| ((rad * ang.cos()).round() as i64, (rad * ang.sin()).round() as i64);
        out.push(at(r, th + half));
        out.push(at(r + len, th));
        out.push(at(r, th - half));
    }
    out
}

/// Builds a polygon with exactly `n` vertices from a corridor of an even
/// vertex count, cutting one corner when `n` is odd.
fn with_count(n: usize, chain: fn(usize) -> Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    if n == 3 {
        return vec![(0, 0), (8, 0), (0, 8)];
    }
    let even = n - n % 2;
    let mut pts = chain(even);
    if n % 2 == 1 {
        for q in &mut pts {
            *q = (4 * q.0, 4 * q.1);
        }
        // corner 0 is convex; replace it by two points on its edges
        let m = pts.len();
        let (p, c, q) = (pts[m - 1], pts[0], pts[1]);
        let a = (c.0 + (p.0 - c.0) / 4, c.1 + (p.1 - c.1) / 4);
        let b = (c.0 + (q.0 - c.0) / 4, c.1 + (q.1 - c.1) / 4);
        pts[0] = a;
        pts.insert(1, b);
    }
    pts
}

/// Offsets a corridor of half-width `w` around an axis-parallel centreline.
fn corridor(center: &[(i64, i64)], w: i64) -> Vec<(i64, i64)> {
    let m = center.len();
    let dir = |a: (i64, i64), b: (i64, i64)| ((b.0 - a.0).signum(), (b.1 - a.1).signum());
    let left = |d: (i64, i64)| (-d.1, d.0);
    let mut lhs = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let din = if i > 0 {
            Some(dir(center[i - 1], center[i]))
        } else {
            None
        };
        let dout = if i + 1 < m {
            Some(dir(center[i], center[i + 1]))
        } else {
            None
        };
        let (nx, ny) = match (din, dout) {
            (Some(a), Some(b)) => {
                let (la, lb) = (left(a), left(b));
                (la.0 + lb.0, la.1 + lb.1)
            }
            (Some(a), None) | (None, Some(a)) => left(a),
            (None, None) => unreachable!(),
        };
        let c = center[i];
        lhs.push((c.0 + nx * w, c.1 + ny * w));
        rhs.push((c.0 - nx * w, c.1 - ny * w));
    }
    rhs.reverse();
    lhs.into_iter().chain(rhs).collect()
}

/// Square spiral corridor with `n` (even, ≥ 4) vertices.
fn spiral_chain(n: usize) -> Vec<(i64, i64)> {
    let segs = n / 2 - 1;
    let dirs = [(1, 0), (0, 1), (-1, 0), (0, -1)];
    let mut c = vec![(0i64, 0i64)];
    for j in 0..segs {
        let len = 8 * (j as i64 / 2 + 1);
        let (dx, dy) = dirs[j % 4];
        let last = *c.last().unwrap();
        c.push((last.0 + dx * len, last.1 + dy * len));
    }
    corridor(&c, 2)
}

/// Staircase corridor with `n` (even, ≥ 4) vertices.
fn staircase_chain(n: usize) -> Vec<(i64, i64)> {
    let m = n / 2;
    let a = 8;
    let d = 3;
    let mut lower = vec![(0i64, 0i64)];
    for j in 1..m {
        let (x, y) = lower[j - 1];
        lower.push(if j % 2 == 1 { (x + a, y) } else { (x, y + a) });
    }
    let upper: Vec<(i64, i64)> = lower.iter().rev().map(|&(x, y)| (x - d, y + d)).collect();
    lower.into_iter().chain(upper).collect()
}

/// Flat guard report: what a run placed and how it scored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardReport {
    pub mode: Mode,
    pub n: usize,
    pub start_vertex: usize,
    pub level_sizes: Vec<usize>,
    pub primaries: usize,
    pub guards: Vec<(usize, Point)>,
    pub placements: Vec<ReportPlacement>,
    pub opt: Option<usize>,
    pub covered: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportPlacement {
    pub guard: usize,
    pub role: Role,
    pub primary: Option<Point>,
}

pub const REPORT_HEADER: &str = "guard-report v1";

impl GuardReport {
    pub fn from_run(p: &Polygon, run: &RunReport, opt: Option<usize>) -> Self {
        GuardReport {
            mode: run.mode,
            n: p.n(),
            start_vertex: run.start_vertex,
            level_sizes: run.tree.level_sizes(),
            primaries: run.primaries(),
            guards: run.guards().into_iter().map(|g| (g, p.vertex(g).clone())).collect(),
            placements: run
                .guard_set
                .placements
                .iter()
                .map(|pl| ReportPlacement {
                    guard: pl.guard,
                    role: pl.role,
                    primary: pl.primary.map(|t| run.targets[t].point.clone()),
                })
                .collect(),
            opt,
            covered: run.covered,
        }
    }

    pub fn size(&self) -> usize {
        self.guards.len()
    }

    /// `|S| / OPT` as an exact fraction.
    pub fn ratio(&self) -> Option<Rational> {
        self.opt
            .filter(|&o| o > 0 && o != usize::MAX)
            .map(|o| Rational::new(self.size().into(), o.into()))
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn fmt_point(q: &Point) -> String {
    format!("{} {}", format_rational(q.x()), format_rational(q.y()))
}

pub fn format_report(r: &GuardReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{REPORT_HEADER}");
    let _ = writeln!(s, "mode {}", r.mode.name());
    let _ = writeln!(s, "n {}", r.n);
    let _ = writeln!(s, "start {}", r.start_vertex);
    let _ = writeln!(s, "levels {}", join(&r.level_sizes));
    let _ = writeln!(s, "primaries {}", r.primaries);
    let _ = writeln!(s, "guards {}", r.guards.len());
    for (g, q) in &r.guards {
        let _ = writeln!(s, "guard {g} {}", fmt_point(q));
    }
    let _ = writeln!(s, "placements {}", r.placements.len());
    for pl in &r.placements {
        let primary = pl.primary.as_ref().map_or("-".to_string(), fmt_point);
        let _ = writeln!(s, "placement {} {} {primary}", pl.guard, pl.role.name());
    }
    let _ = writeln!(s, "size {}", r.size());
    match (r.opt, r.ratio()) {
        (Some(o), Some(q)) => {
            let _ = writeln!(s, "opt {o}");
            let _ = writeln!(s, "ratio {}", format_rational(&q));
        }
        _ => {
            let _ = writeln!(s, "opt -");
            let _ = writeln!(s, "ratio -");
        }
    }
    let _ = writeln!(s, "covered {}", r.covered);
    s
}

struct Lines<'a> {
    it: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn err(&self, msg: impl Into<String>) -> IoError {
        IoError::Parse {
            line: self.line,
            msg: msg.into(),
        }
    }

    /// Next line, which must start with `key`; returns the remaining fields.
    fn field(&mut self, key: &str) -> Result<Vec<&'a str>, IoError> {
        let (i, l) = self.it.next().ok_or_else(|| self.err(format!("missing {key:?}")))?;
        self.line = i + 1;
        let mut words = l.split_whitespace();
        if words.next() != Some(key) {
            return Err(self.err(format!("expected {key:?}")));
        }
        Ok(words.collect())
    }

    fn num<T: std::str::FromStr>(&self, s: &str) -> Result<T, IoError> {
        s.parse().map_err(|_| self.err(format!("bad number {s:?}")))
    }

    fn single<T: std::str::FromStr>(&mut self, key: &str) -> Result<T, IoError> {
        let f = self.field(key)?;
        match f.as_slice() {
            [x] => self.num(x),
            _ => Err(self.err(format!("{key:?} takes one value"))),
        }
    }

    fn point(&self, xs: &str, ys: &str) -> Result<Point, IoError> {
        let c = |s: &str| parse_rational(s).ok_or_else(|| self.err(format!("bad coordinate {s:?}")));
        Ok(Point::new(c(xs)?, c(ys)?))
    }
}

pub fn parse_report(text: &str) -> Result<GuardReport, IoError> {
    let mut it = text.lines().enumerate();
    match it.next() {
        Some((_, h)) if h.trim() == REPORT_HEADER => {}
        _ => {
            return Err(IoError::Parse {
                line: 1,
                msg: format!("expected header {REPORT_HEADER:?}"),
            })
        }
    }
    let mut ls = Lines { it, line: 1 };
    let mode_f = ls.field("mode")?;
    let mode: Mode = match mode_f.as_slice() {
        [m] => m.parse().map_err(|e: String| ls.err(e))?,
        _ => return Err(ls.err("\"mode\" takes one value")),
    };
    let n = ls.single("n")?;
    let start_vertex = ls.single("start")?;
    let level_sizes = ls
        .field("levels")?
        .iter()
        .map(|x| ls.num(x))
        .collect::<Result<Vec<usize>, _>>()?;
    let primaries = ls.single("primaries")?;
    let count: usize = ls.single("guards")?;
    let mut guards = Vec::with_capacity(count);
    for _ in 0..count {
        let f = ls.field("guard")?;
        let [g, x, y] = f.as_slice() else {
            return Err(ls.err("guard line needs index and coordinates"));
        };
        guards.push((ls.num(g)?, ls.point(x, y)?));
    }
    let count: usize = ls.single("placements")?;
    let mut placements = Vec::with_capacity(count);
    for _ in 0..count {
        let f = ls.field("placement")?;
        let (g, role, primary) = match f.as_slice() {
            [g, r, "-"] => (g, r, None),
            [g, r, x, y] => (g, r, Some(ls.point(x, y)?)),
            _ => return Err(ls.err("bad placement line")),
        };
        placements.push(ReportPlacement {
            guard: ls.num(g)?,
            role: Role::parse(role).ok_or_else(|| ls.err(format!("unknown role {role:?}")))?,
            primary,
        });
    }
    let size: usize = ls.single("size")?;
    if size != guards.len() {
        return Err(ls.err("size does not match the guard list"));
    }
    let opt = match ls.field("opt")?.as_slice() {
        ["-"] => None,
        [o] => Some(ls.num(o)?),
        _ => return Err(ls.err("\"opt\" takes one value")),
    };
    ls.field("ratio")?;
    let covered = ls.single("covered")?;
    Ok(GuardReport {
        mode,
        n,
        start_vertex,
        level_sizes,
        primaries,
        guards,
        placements,
        opt,
        covered,
    })
}

/// Optional SVG layers.
#[derive(Clone, Copy, Debug, Default)]
pub struct SvgLayers<'a> {
    pub windows: Option<&'a PartitionTree>,
    pub visibility: bool,
}

fn svg_xy(q: &Point) -> String {
    format!("{},{}", format_decimal(q.x(), 6), format_decimal(&-q.y().clone(), 6))
}

fn svg_path(pts: &[Point]) -> String {
    pts.iter().map(svg_xy).collect::<Vec<_>>().join(" ")
}

/// Renders the polygon, optional windows and visibility fills, and guards.
pub fn render_svg(p: &Polygon, guards: &[usize], layers: SvgLayers<'_>) -> String {
    let approx: Vec<(f64, f64)> = p.vertices().iter().map(Point::approx).collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for &(x, y) in &approx {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(-y);
        y1 = y1.max(-y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let pad = span * 0.05;
    let stroke = span / 400.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">",
        x0 - pad,
        y0 - pad,
        x1 - x0 + 2.0 * pad,
        y1 - y0 + 2.0 * pad
    );
    let _ = writeln!(
        s,
        "<polygon points=\"{}\" fill=\"#f4f4f4\" stroke=\"black\" stroke-width=\"{stroke:.6}\"/>",
        svg_path(p.vertices())
    );
    if layers.visibility {
        for (k, &g) in guards.iter().enumerate() {
            if let Ok(vp) = visibility_polygon_from_point(p, p.vertex(g)) {
                let hue = (k * 137) % 360;
                let _ = writeln!(
                    s,
                    "<polygon class=\"visibility\" points=\"{}\" fill=\"hsl({hue},70%,60%)\" fill-opacity=\"0.25\" stroke=\"none\"/>",
                    svg_path(&vp.points)
                );
            }
        }
    }
    if let Some(tree) = layers.windows {
        for w in &tree.windows {
            let _ = writeln!(
                s,
                "<polygon class=\"window\" data-id=\"{}.{}\" points=\"{}\" fill=\"none\" stroke=\"#3060c0\" stroke-dasharray=\"{:.6}\" stroke-width=\"{stroke:.6}\"/>",
                w.id.0,
                w.id.1,
                svg_path(&w.region.pts),
                stroke * 4.0
            );
        }
    }
    for &g in guards {
        let q = p.vertex(g);
        let (cx, cy) = (format_decimal(q.x(), 6), format_decimal(&-q.y().clone(), 6));
        let _ = writeln!(
            s,
            "<circle class=\"guard\" cx=\"{cx}\" cy=\"{cy}\" r=\"{:.6}\" fill=\"#d03030\"/>",
            span / 80.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{cx}\" y=\"{cy}\" font-size=\"{:.6}\" dx=\"{:.6}\">{g}</text>",
            span / 30.0,
            span / 60.0
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_square_and_rational() {
        let p = parse_instance("4\n0 0\n0 1\n1 1\n1 0\n").unwrap();
        assert_eq!(p.n(), 4);
        let t = parse_instance("# tri\n3\n0 0\n1/3 1\n2 0\n").unwrap();
        assert!(t.vertices().contains(&Point::new(
            Rational::new(1.into(), 3.into()),
            Rational::from_integer(1.into())
        )));
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert_eq!(
            parse_instance("3\n0 0\nx 1\n2 0\n"),
            Err(IoError::Parse {
                line: 3,
                msg: "bad coordinate \"x\"".into()
            })
        );
        assert!(matches!(
            parse_instance("4\n0 0\n2 2\n2 0\n0 2\n"),
            Err(IoError::Polygon(crate::PolygonError::NotSimple(0, 2)))
        ));
    }

    #[test]
    fn serialize_round_trips() {
        let p = generate_polygon(12, 7, Style::Random).unwrap();
        assert_eq!(parse_instance(&serialize_instance(&p)).unwrap(), p);
    }

    #[test]
    fn generators_are_valid_and_deterministic() {
        for style in [Style::Random, Style::Spiral, Style::Staircase] {
            for n in 3..=24 {
                let p = generate_polygon(n, 11, style).unwrap_or_else(|e| panic!("{style} {n}: {e}"));
                assert_eq!(p.n(), n, "{style} {n}");
                assert_eq!(p, generate_polygon(n, 11, style).unwrap());
            }
        }
        for k in 1..=8 {
            assert_eq!(generate_polygon(3 * k, 0, Style::Comb).unwrap().n(), 3 * k);
        }
        assert!(generate_polygon(10, 0, Style::Comb).is_err());
    }

    #[test]
    fn report_round_trips_and_is_deterministic() {
        use crate::pipeline::{guard_polygon, PipelineOptions};
        let p = generate_polygon(14, 3, Style::Spiral).unwrap();
        let run = guard_polygon(&p, Mode::Boundary, PipelineOptions::default()).unwrap();
        let r = GuardReport::from_run(&p, &run, Some(2));
        let text = format_report(&r);
        assert!(text.starts_with(REPORT_HEADER));
        assert_eq!(parse_report(&text).unwrap(), r);
        let again = guard_polygon(&p, Mode::Boundary, PipelineOptions::default()).unwrap();
        assert_eq!(format_report(&GuardReport::from_run(&p, &again, Some(2))), text);
        let no_opt = GuardReport { opt: None, ..r };
        assert_eq!(parse_report(&format_report(&no_opt)).unwrap(), no_opt);
    }

    #[test]
    fn report_errors_carry_lines() {
        assert!(matches!(parse_report("nope\n"), Err(IoError::Parse { line: 1, .. })));
        let bad = format!("{REPORT_HEADER}\nmode sideways\n");
        assert!(matches!(parse_report(&bad), Err(IoError::Parse { line: 2, .. })));
    }

    #[test]
    fn svg_layers() {
        use crate::partition::window_partition;
        let sq = parse_instance("4\n0 0\n0 1\n1 1\n1 0\n").unwrap();
        let svg = render_svg(&sq, &[0], SvgLayers::default());
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.contains("cx=\"0.000000\" cy=\"0.000000\""));
        let p = generate_polygon(16, 0, Style::Spiral).unwrap();
        let tree = window_partition(&p, 0);
        let layers = SvgLayers {
            windows: Some(&tree),
            visibility: true,
        };
        let svg = render_svg(&p, &[0, 5], layers);
        assert_eq!(svg.matches("class=\"window\"").count(), tree.windows.len());
        assert_eq!(svg.matches("class=\"visibility\"").count(), 2);
        assert_eq!(svg, render_svg(&p, &[0, 5], layers));
    }
}
