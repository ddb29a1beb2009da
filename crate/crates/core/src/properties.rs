//! Property suite: runs the guarding pipeline and the oracles over a corpus
//! of generated polygons and checks every invariant instance by instance.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;

use crate::error::IoError;
use crate::geom_kernel::{Point, Rational};
use crate::guard_placement::{PrimaryRecord, Role, Target};
use crate::io::{format_report, generate_polygon, render_svg, serialize_instance, GuardReport, Style, SvgLayers};
use crate::oracle::{dijkstra_parents, link_distance, opt_cap, optimal_vertex_guards};
use crate::partition::PartitionTree;
use crate::pipeline::{guard_polygon, PipelineOptions, RunReport};
use crate::polygon::{BoundaryPoint, BoundaryPos, Polygon};
use crate::shortest_paths::shortest_path_tree;
use crate::Mode;

/// Corpus and suite settings, readable from TOML.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusConfig {
    pub seed: u64,
    pub count: usize,
    pub min_n: usize,
    pub max_n: usize,
    pub styles: Vec<String>,
    /// Largest `n` for which interior mode and its oracle run.
    pub interior_max_n: usize,
    pub samples_per_window: usize,
    /// Mutation switch: never place `s3`.
    pub skip_s3: bool,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            seed: 0,
            count: 200,
            min_n: 6,
            max_n: 16,
            styles: ["random", "comb", "spiral", "staircase"].map(String::from).to_vec(),
            interior_max_n: 12,
            samples_per_window: 20,
            skip_s3: false,
        }
    }
}

impl CorpusConfig {
    pub fn from_toml(text: &str) -> Result<Self, IoError> {
        let cfg: CorpusConfig = toml::from_str(text).map_err(|e| IoError::BadParams(e.to_string()))?;
        cfg.styles()?;
        if cfg.min_n < 3 || cfg.min_n > cfg.max_n {
            return Err(IoError::BadParams(format!(
                "bad size range {}..={}",
                cfg.min_n, cfg.max_n
            )));
        }
        Ok(cfg)
    }

    pub fn styles(&self) -> Result<Vec<Style>, IoError> {
        self.styles.iter().map(|s| s.parse()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub polygon: Polygon,
    /// Prong count of comb instances, whose interior optimum is known.
    pub comb_prongs: Option<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub instances: Vec<Instance>,
}

impl Corpus {
    pub fn generate(cfg: &CorpusConfig) -> Result<Corpus, IoError> {
        let styles = cfg.styles()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut instances = Vec::with_capacity(cfg.count);
        for i in 0..cfg.count {
            let style = styles[i % styles.len()];
            let mut n = rng.gen_range(cfg.min_n..=cfg.max_n);
            let seed: u64 = rng.gen();
            if style == Style::Comb {
                n = (n - n % 3).max(3);
            }
            let polygon = generate_polygon(n, seed, style)?;
            instances.push(Instance {
                name: format!("{style}-n{n}-s{seed}"),
                polygon,
                comb_prongs: (style == Style::Comb).then_some(n / 3),
            });
        }
        Ok(Corpus { instances })
    }

    pub fn push(&mut self, name: &str, polygon: Polygon) {
        self.instances.push(Instance {
            name: name.to_string(),
            polygon,
            comb_prongs: None,
        });
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    RatioVertices,
    RatioBoundary,
    RatioInterior,
    Coverage,
    Budget,
    Partition,
    Spt,
    BVisibility,
    Nesting,
    LInCommonB,
    PseudoCap,
    TwoPrimaries,
    Chvatal,
    CombEquality,
    OptMonotone,
    Locality,
    Determinism,
}

impl Check {
    pub const ALL: [Check; 17] = [
        Check::RatioVertices,
        Check::RatioBoundary,
        Check::RatioInterior,
        Check::Coverage,
        Check::Budget,
        Check::Partition,
        Check::Spt,
        Check::BVisibility,
        Check::Nesting,
        Check::LInCommonB,
        Check::PseudoCap,
        Check::TwoPrimaries,
        Check::Chvatal,
        Check::CombEquality,
        Check::OptMonotone,
        Check::Locality,
        Check::Determinism,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::RatioVertices => "ratio-vertices",
            Check::RatioBoundary => "ratio-boundary",
            Check::RatioInterior => "ratio-interior",
            Check::Coverage => "coverage",
            Check::Budget => "budget",
            Check::Partition => "partition",
            Check::Spt => "spt",
            Check::BVisibility => "b-visibility",
            Check::Nesting => "nesting",
            Check::LInCommonB => "l-in-ci-b",
            Check::PseudoCap => "pseudo-cap",
            Check::TwoPrimaries => "two-primaries",
            Check::Chvatal => "chvatal",
            Check::CombEquality => "comb-equality",
            Check::OptMonotone => "opt-monotone",
            Check::Locality => "locality",
            Check::Determinism => "determinism",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub check: Check,
    pub ok: bool,
    pub detail: String,
}

struct Findings<'a> {
    wanted: &'a BTreeSet<Check>,
    out: Vec<Finding>,
}

impl Findings<'_> {
    fn wants(&self, c: Check) -> bool {
        self.wanted.contains(&c)
    }

    fn record(&mut self, check: Check, ok: bool, detail: impl FnOnce() -> String) {
        if self.wants(check) {
            let detail = if ok { String::new() } else { detail() };
            self.out.push(Finding { check, ok, detail });
        }
    }
}

fn modes_for(n: usize, cfg: &CorpusConfig) -> Vec<Mode> {
    let mut m = vec![Mode::Vertices, Mode::Boundary];
    if n <= cfg.interior_max_n {
        m.push(Mode::Interior);
    }
    m
}

/// Distinct interior sample points of a window, from fixed barycentric
/// weights over its triangles.
pub fn window_samples(tree: &PartitionTree, w: usize, count: usize) -> Vec<Point> {
    let tris = tree.windows[w].region.triangles();
    let weights: Vec<(i64, i64, i64)> = (1..=4)
        .flat_map(|i| (1..=4).flat_map(move |j| (1..=4).map(move |k| (i, j, k))))
        .collect();
    let mut out = Vec::with_capacity(count);
    for s in 0..count.max(1) * 4 {
        if out.len() == count {
            break;
        }
        let [a, b, c] = &tris[s % tris.len()];
        let (i, j, k) = weights[(s / tris.len()) % weights.len()];
        let sum = Rational::from_integer((i + j + k).into());
        let coord = |pa: &Rational, pb: &Rational, pc: &Rational| {
            (pa * Rational::from_integer(i.into())
                + pb * Rational::from_integer(j.into())
                + pc * Rational::from_integer(k.into()))
                / sum.clone()
        };
        let q = Point::new(coord(a.x(), b.x(), c.x()), coord(a.y(), b.y(), c.y()));
        if !out.contains(&q) {
            out.push(q);
        }
    }
    out
}

fn check_partition(p: &Polygon, tree: &PartitionTree, samples: usize) -> Result<(), String> {
    let total: Rational = tree.windows.iter().map(|w| w.area2()).sum();
    if total != p.area2() {
        return Err(format!("window areas sum to {total}, polygon has {}", p.area2()));
    }
    for (w, win) in tree.windows.iter().enumerate() {
        for q in window_samples(tree, w, samples) {
            let d = link_distance(p, tree.start_vertex, &q).map_err(|e| e.to_string())?;
            if d != win.level() {
                return Err(format!("window {:?}: sample {q} has link distance {d}", win.id));
            }
        }
    }
    Ok(())
}

fn check_spt(p: &Polygon) -> Result<(), String> {
    let mut roots: Vec<Point> = vec![p.vertex(0).clone(), p.vertex(p.n() / 2).clone()];
    if let Some([a, b, c]) = p.triangulate().first() {
        let three = Rational::from_integer(3.into());
        let (va, vb, vc) = (p.vertex(*a), p.vertex(*b), p.vertex(*c));
        roots.push(Point::new(
            (va.x() + vb.x() + vc.x()) / three.clone(),
            (va.y() + vb.y() + vc.y()) / three,
        ));
    }
    for s in roots {
        let tree = shortest_path_tree(p, &s).map_err(|e| e.to_string())?;
        let dij = dijkstra_parents(p, &s).map_err(|e| e.to_string())?;
        if let Some(x) = (0..p.n()).find(|&x| tree.parent[x] != dij[x]) {
            return Err(format!(
                "root {s}: vertex {x} has funnel parent {:?}, Dijkstra parent {:?}",
                tree.parent[x], dij[x]
            ));
        }
    }
    Ok(())
}

fn ccw_key(p: &Polygon, from: &BoundaryPos, bp: &BoundaryPoint) -> (u8, std::cmp::Reverse<BoundaryPos>) {
    p.ccw_key(from, &p.pos(bp))
}

/// Invariant checks on the primary records of one region run or pipeline run.
pub fn check_primary_records(p: &Polygon, label: &str, targets: &[Target], records: &[PrimaryRecord]) -> Vec<Finding> {
    let all: BTreeSet<Check> = Check::ALL.into();
    let mut f = Findings {
        wanted: &all,
        out: Vec::new(),
    };
    check_records(p, label, targets, records, &mut f);
    f.out
}

fn check_records(p: &Polygon, mode: &str, targets: &[Target], records: &[PrimaryRecord], f: &mut Findings<'_>) {
    let mut pseudo_per_edge: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut upper_counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for rec in records {
        let z = &targets[rec.z];
        check_b(p, mode, targets, rec, f);
        if let Some(l) = rec.sets.l {
            let ci: Vec<usize> = common(rec, &rec.b_set);
            f.record(Check::LInCommonB, ci.contains(&l), || {
                format!("{mode}: primary {}: l(z)={l} not in CI(B)={ci:?}", z.point)
            });
        }
        if rec.a_set.len() + rec.c_set.len() > 0 {
            check_nesting(p, mode, targets, rec, f);
        }
        if let Some(e) = z.edge() {
            *pseudo_per_edge.entry((rec.window, e)).or_default() += 1;
        }
        for &g in &rec.sets.vvp_plus {
            *upper_counts.entry((rec.window, g)).or_default() += 1;
        }
    }
    for ((w, e), k) in pseudo_per_edge {
        f.record(Check::PseudoCap, k <= 1, || {
            format!("{mode}: edge {e} has {k} pseudo-primaries in window {w}")
        });
    }
    for ((w, g), k) in upper_counts {
        f.record(Check::TwoPrimaries, k <= 2, || {
            format!("{mode}: vertex {g} is an inside vertex of {k} primaries in window {w}")
        });
    }
}

fn common(rec: &PrimaryRecord, xs: &[usize]) -> Vec<usize> {
    let sets: Vec<&Vec<usize>> = rec
        .ovv_minus
        .iter()
        .filter(|m| xs.contains(&m.target))
        .map(|m| &m.vvp_minus)
        .collect();
    match sets.first() {
        None => Vec::new(),
        Some(first) => first
            .iter()
            .copied()
            .filter(|w| sets.iter().all(|s| s.contains(w)))
            .collect(),
    }
}

/// Every member of B is seen from `l(z)` and from the round's `s3`.
fn check_b(p: &Polygon, mode: &str, targets: &[Target], rec: &PrimaryRecord, f: &mut Findings<'_>) {
    if rec.ovv_minus.is_empty() {
        return;
    }
    let z = &targets[rec.z].point;
    let s3 = rec.placed.iter().find(|(r, _)| *r == Role::S3).map(|&(_, g)| g);
    let l = rec.sets.l.expect("outside guards need l(z)");
    for &b in &rec.b_set {
        let q = &targets[b].point;
        let from_l = p.visible(p.vertex(l), q);
        let from_s3 = s3.is_some_and(|g| p.visible(p.vertex(g), q));
        f.record(Check::BVisibility, from_l && from_s3, || {
            format!("{mode}: primary {z}: B member {q} seen from l(z): {from_l}, from s3 {s3:?}: {from_s3}")
        });
    }
}

fn check_nesting(p: &Polygon, mode: &str, targets: &[Target], rec: &PrimaryRecord, f: &mut Findings<'_>) {
    let from = p.pos(&rec.entry.u);
    let key = |bp: &BoundaryPoint| ccw_key(p, &from, bp);
    let vkey = |v: usize| key(&BoundaryPoint::Vertex(v));
    let member = |t: usize| {
        rec.ovv_minus
            .iter()
            .find(|m| m.target == t)
            .expect("classified members are overlap members")
    };
    let disjoint = |a: usize, b: usize| !member(a).vvp_minus.iter().any(|w| member(b).vvp_minus.contains(w));
    for (set, is_a) in [(&rec.a_set, true), (&rec.c_set, false)] {
        for x in set.iter() {
            for y in set.iter() {
                if x.target == y.target || !disjoint(x.target, y.target) {
                    continue;
                }
                let my = member(y.target);
                let (Some(fy), Some(ly)) = (my.f, my.l) else {
                    continue;
                };
                let (tx, ty, tpx) = (vkey(x.t), vkey(y.t), key(&x.t_prime));
                let ok = if is_a {
                    // y nested in x's pocket, which runs from t(x) to t'(x)
                    !(tx < ty) || (tx <= vkey(fy) && vkey(fy) <= vkey(ly) && vkey(ly) <= tpx)
                } else {
                    !(ty < tx) || (tpx <= vkey(fy) && vkey(fy) <= vkey(ly) && vkey(ly) <= tx)
                };
                f.record(Check::Nesting, ok, || {
                    format!(
                        "{mode}: primary {}: {} members {} and {} are not nested",
                        targets[rec.z].point,
                        if is_a { "A" } else { "C" },
                        targets[x.target].point,
                        targets[y.target].point
                    )
                });
            }
        }
    }
}

/// Evaluates the wanted checks on one polygon.
pub fn evaluate(inst: &Instance, cfg: &CorpusConfig, wanted: &BTreeSet<Check>) -> Vec<Finding> {
    let p = &inst.polygon;
    let n = p.n();
    let mut f = Findings {
        wanted,
        out: Vec::new(),
    };
    let opts = PipelineOptions {
        start_vertex: 0,
        guard: crate::guard_placement::Options { skip_s3: cfg.skip_s3 },
    };
    let run_checks = [
        Check::RatioVertices,
        Check::RatioBoundary,
        Check::RatioInterior,
        Check::Coverage,
        Check::Budget,
        Check::BVisibility,
        Check::Nesting,
        Check::LInCommonB,
        Check::PseudoCap,
        Check::TwoPrimaries,
        Check::Locality,
    ];
    let mut runs: BTreeMap<Mode, RunReport> = BTreeMap::new();
    if run_checks.iter().any(|&c| f.wants(c)) {
        for mode in modes_for(n, cfg) {
            let ratio_check = match mode {
                Mode::Vertices => Check::RatioVertices,
                Mode::Boundary => Check::RatioBoundary,
                Mode::Interior => Check::RatioInterior,
            };
            let needed = run_checks
                .iter()
                .filter(|c| !matches!(c, Check::RatioVertices | Check::RatioBoundary | Check::RatioInterior))
                .any(|&c| f.wants(c))
                || f.wants(ratio_check);
            if !needed {
                continue;
            }
            match guard_polygon(p, mode, opts) {
                Ok(r) => {
                    runs.insert(mode, r);
                }
                Err(e) => f.record(Check::Coverage, false, || format!("{}: run failed: {e}", mode.name())),
            }
        }
    }
    let oracle_ok = n <= opt_cap();
    let mut opt: BTreeMap<Mode, usize> = BTreeMap::new();
    let want_opt = |m: Mode, f: &Findings<'_>| match m {
        Mode::Vertices => f.wants(Check::RatioVertices) || f.wants(Check::OptMonotone),
        Mode::Boundary => f.wants(Check::RatioBoundary) || f.wants(Check::OptMonotone),
        Mode::Interior => {
            n <= cfg.interior_max_n
                && [
                    Check::RatioInterior,
                    Check::OptMonotone,
                    Check::Chvatal,
                    Check::CombEquality,
                ]
                .iter()
                .any(|&c| f.wants(c))
        }
    };
    if oracle_ok {
        for m in [Mode::Vertices, Mode::Boundary, Mode::Interior] {
            if want_opt(m, &f) {
                if let Ok((k, _)) = optimal_vertex_guards(p, m, None) {
                    opt.insert(m, k);
                }
            }
        }
    }
    for (mode, run) in &runs {
        let size = run.guards().len();
        let (check, factor) = match mode {
            Mode::Vertices => (Check::RatioVertices, 18),
            Mode::Boundary => (Check::RatioBoundary, 18),
            Mode::Interior => (Check::RatioInterior, 27),
        };
        if let Some(&o) = opt.get(mode) {
            f.record(check, size <= factor * o, || {
                format!("|S|={size} > {factor}*OPT={}", factor * o)
            });
        }
        f.record(Check::Coverage, run.covered, || {
            format!("{}: guards {:?} leave gaps", mode.name(), run.guards())
        });
        let (before, after) = run.budget_counts();
        let z = run.primaries();
        f.record(Check::Budget, before <= 6 * z && after <= 9 * z, || {
            format!(
                "{}: {before} guards before repair, {after} after, {z} primaries",
                mode.name()
            )
        });
        f.record(Check::Locality, run.locality.is_empty(), || {
            format!("{}: {:?}", mode.name(), run.locality)
        });
        check_records(p, mode.name(), &run.targets, &run.records, &mut f);
    }
    if f.wants(Check::Partition) {
        let tree = crate::partition::window_partition(p, 0);
        let res = check_partition(p, &tree, cfg.samples_per_window);
        f.record(Check::Partition, res.is_ok(), || res.unwrap_err());
    }
    if f.wants(Check::Spt) {
        let res = check_spt(p);
        f.record(Check::Spt, res.is_ok(), || res.unwrap_err());
    }
    if let Some(&oi) = opt.get(&Mode::Interior) {
        f.record(Check::Chvatal, oi <= n / 3, || {
            format!("OPT(Interior)={oi} > floor(n/3)={}", n / 3)
        });
        if let Some(k) = inst.comb_prongs {
            f.record(Check::CombEquality, oi == k, || {
                format!("comb with {k} prongs has OPT(Interior)={oi}")
            });
        }
    }
    if let (Some(&v), Some(&b)) = (opt.get(&Mode::Vertices), opt.get(&Mode::Boundary)) {
        let i = opt.get(&Mode::Interior).copied().unwrap_or(usize::MAX);
        f.record(Check::OptMonotone, v <= b && b <= i, || {
            format!("OPT V={v} B={b} I={i}")
        });
    }
    if f.wants(Check::Determinism) {
        let res = determinism(p, opts);
        f.record(Check::Determinism, res.is_ok(), || res.unwrap_err());
    }
    f.out
}

fn determinism(p: &Polygon, opts: PipelineOptions) -> Result<(), String> {
    let once = || -> Result<(String, String), String> {
        let run = guard_polygon(p, Mode::Boundary, opts).map_err(|e| e.to_string())?;
        let report = format_report(&GuardReport::from_run(p, &run, None));
        let layers = SvgLayers {
            windows: Some(&run.tree),
            visibility: true,
        };
        Ok((report, render_svg(p, &run.guards(), layers)))
    };
    let (a, b) = (once()?, once()?);
    if a.0 != b.0 {
        return Err("guard reports differ between runs".into());
    }
    if a.1 != b.1 {
        return Err("SVG output differs between runs".into());
    }
    Ok(())
}

/// Removes vertex blocks, halving the block size, while the polygon stays
/// simple and `fails` still holds.
pub fn shrink(p: &Polygon, fails: impl Fn(&Polygon) -> bool, max_tries: usize) -> Polygon {
    let mut cur = p.clone();
    let mut tries = 0;
    let mut block = cur.n() / 2;
    while block >= 1 && tries < max_tries {
        let mut i = 0;
        while i < cur.n() && tries < max_tries {
            let pts: Vec<Point> = cur
                .vertices()
                .iter()
                .enumerate()
                .filter(|(k, _)| *k < i || *k >= i + block)
                .map(|(_, q)| q.clone())
                .collect();
            tries += 1;
            match Polygon::validate(pts) {
                Ok(q) if q.n() >= 3 && q.n() < cur.n() && fails(&q) => cur = q,
                _ => i += block,
            }
        }
        block /= 2;
    }
    cur
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub instance: String,
    pub detail: String,
    /// Shrunk instance, serialized for replay.
    pub replay: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckSummary {
    pub check: Check,
    pub evaluated: usize,
    pub failures: usize,
    pub first: Option<Counterexample>,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub instances: usize,
    pub summaries: Vec<CheckSummary>,
}

impl SuiteReport {
    pub fn summary(&self, c: Check) -> Option<&CheckSummary> {
        self.summaries.iter().find(|s| s.check == c)
    }

    pub fn passed(&self, c: Check) -> bool {
        self.summary(c).is_none_or(|s| s.failures == 0)
    }

    pub fn all_passed(&self) -> bool {
        self.summaries.iter().all(|s| s.failures == 0)
    }

    pub fn format(&self) -> String {
        let mut s = format!("instances {}\n", self.instances);
        for c in &self.summaries {
            let verdict = if c.failures == 0 { "pass" } else { "FAIL" };
            s.push_str(&format!(
                "{} {verdict} evaluated={} failures={}\n",
                c.check.name(),
                c.evaluated,
                c.failures
            ));
            if let Some(ce) = &c.first {
                s.push_str(&format!("  first: {} ({})\n", ce.instance, ce.detail));
                for l in ce.replay.lines() {
                    s.push_str(&format!("  | {l}\n"));
                }
            }
        }
        s
    }
}

/// Evaluates `checks` on every instance in parallel; the first failing
/// instance of each check is shrunk for replay.
pub fn run_property_suite(corpus: &Corpus, cfg: &CorpusConfig, checks: &[Check]) -> SuiteReport {
    let wanted: BTreeSet<Check> = checks.iter().copied().collect();
    let per_instance: Vec<Vec<Finding>> = corpus
        .instances
        .par_iter()
        .map(|inst| evaluate(inst, cfg, &wanted))
        .collect();
    let mut summaries: Vec<CheckSummary> = wanted
        .iter()
        .map(|&check| CheckSummary {
            check,
            evaluated: 0,
            failures: 0,
            first: None,
        })
        .collect();
    for (inst, findings) in corpus.instances.iter().zip(&per_instance) {
        for s in summaries.iter_mut() {
            let mine: Vec<&Finding> = findings.iter().filter(|x| x.check == s.check).collect();
            if mine.is_empty() {
                continue;
            }
            s.evaluated += 1;
            if let Some(bad) = mine.iter().find(|x| !x.ok) {
                s.failures += 1;
                if s.first.is_none() {
                    let only: BTreeSet<Check> = [s.check].into();
                    let fails = |q: &Polygon| {
                        let probe = Instance {
                            name: inst.name.clone(),
                            polygon: q.clone(),
                            comb_prongs: None,
                        };
                        evaluate(&probe, cfg, &only).iter().any(|x| !x.ok)
                    };
                    let small = if s.check == Check::CombEquality {
                        inst.polygon.clone()
                    } else {
                        shrink(&inst.polygon, fails, 64)
                    };
                    s.first = Some(Counterexample {
                        instance: inst.name.clone(),
                        detail: bad.detail.clone(),
                        replay: serialize_instance(&small),
                    });
                }
            }
        }
    }
    SuiteReport {
        instances: corpus.instances.len(),
        summaries,
    }
}
