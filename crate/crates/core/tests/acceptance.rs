//! Acceptance run: every criterion over the 200-instance corpus plus the
//! hand-built fixtures, one PASS/FAIL line each.

use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use vguard::io::parse_instance;
use vguard::properties::{run_property_suite, Check, Corpus, CorpusConfig, SuiteReport};

const CORPUS_SIZE: usize = 200;
const MIN_N: usize = 6;
const MAX_N: usize = 16;
const INTERIOR_MAX_N: usize = 12;
const SAMPLES_PER_WINDOW: usize = 20;
const VERTICES_LIMIT: Duration = Duration::from_secs(120);
const BOUNDARY_LIMIT: Duration = Duration::from_secs(600);
/// Large enough for the 28-vertex fixture.
const OPT_CAP: &str = "28";
const FIXTURES: [&str; 5] = ["notch", "ell", "spiral12", "spiked_room", "five_levels"];

fn corpus(cfg: &CorpusConfig) -> Corpus {
    let mut c = Corpus::generate(cfg).unwrap();
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    for name in FIXTURES {
        let text = std::fs::read_to_string(dir.join(format!("{name}.poly"))).unwrap();
        c.push(name, parse_instance(&text).unwrap());
    }
    c
}

struct Outcome {
    id: usize,
    title: &'static str,
    ok: bool,
    detail: String,
}

fn judge(report: &SuiteReport, checks: &[Check]) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for &c in checks {
        let s = report.summary(c).unwrap();
        ok &= s.failures == 0;
        parts.push(format!("{} {}/{}", c.name(), s.evaluated - s.failures, s.evaluated));
        if let Some(ce) = &s.first {
            parts.push(format!("first failure {}: {}", ce.instance, ce.detail));
        }
    }
    (ok, parts.join(", "))
}

fn suite(id: usize, title: &'static str, corpus: &Corpus, cfg: &CorpusConfig, checks: &[Check]) -> Outcome {
    let report = run_property_suite(corpus, cfg, checks);
    let (ok, detail) = judge(&report, checks);
    Outcome { id, title, ok, detail }
}

fn timed(
    id: usize,
    title: &'static str,
    corpus: &Corpus,
    cfg: &CorpusConfig,
    check: Check,
    limit: Duration,
) -> Outcome {
    let t = Instant::now();
    let report = run_property_suite(corpus, cfg, &[check]);
    let elapsed = t.elapsed();
    let (ok, detail) = judge(&report, &[check]);
    Outcome {
        id,
        title,
        ok: ok && elapsed < limit,
        detail: format!("{detail}, {:.1}s of {}s", elapsed.as_secs_f64(), limit.as_secs()),
    }
}

#[test]
fn acceptance() {
    // single test in this binary, so nothing races on the environment
    std::env::set_var("GUARD_OPT_CAP", OPT_CAP);
    let cfg = CorpusConfig {
        seed: 0,
        count: CORPUS_SIZE,
        min_n: MIN_N,
        max_n: MAX_N,
        interior_max_n: INTERIOR_MAX_N,
        samples_per_window: SAMPLES_PER_WINDOW,
        ..Default::default()
    };
    let corpus = corpus(&cfg);
    assert!(corpus.instances.len() >= CORPUS_SIZE + FIXTURES.len());

    let outcomes = vec![
        timed(
            1,
            "ratio, vertices (|S| <= 18 OPT)",
            &corpus,
            &cfg,
            Check::RatioVertices,
            VERTICES_LIMIT,
        ),
        timed(
            2,
            "ratio, boundary (|S| <= 18 OPT)",
            &corpus,
            &cfg,
            Check::RatioBoundary,
            BOUNDARY_LIMIT,
        ),
        suite(
            3,
            "ratio, interior (|S| <= 27 OPT, n <= 12)",
            &corpus,
            &cfg,
            &[Check::RatioInterior],
        ),
        suite(4, "coverage is exact in every mode", &corpus, &cfg, &[Check::Coverage]),
        suite(
            5,
            "budget (6|Z| before repair, 9|Z| after)",
            &corpus,
            &cfg,
            &[Check::Budget],
        ),
        suite(
            6,
            "window partition vs link distance",
            &corpus,
            &cfg,
            &[Check::Partition],
        ),
        suite(7, "shortest path tree vs Dijkstra", &corpus, &cfg, &[Check::Spt]),
        suite(
            8,
            "placement invariants",
            &corpus,
            &cfg,
            &[
                Check::BVisibility,
                Check::Nesting,
                Check::LInCommonB,
                Check::PseudoCap,
                Check::TwoPrimaries,
            ],
        ),
        suite(
            9,
            "OPT(Interior) <= n/3, combs tight",
            &corpus,
            &cfg,
            &[Check::Chvatal, Check::CombEquality],
        ),
        suite(
            10,
            "byte-identical reports and SVG",
            &corpus,
            &cfg,
            &[Check::Determinism],
        ),
    ];

    // straight to stderr so the lines show even when output is captured
    let mut err = std::io::stderr().lock();
    for o in &outcomes {
        let verdict = if o.ok { "PASS" } else { "FAIL" };
        writeln!(err, "criterion {:>2} {verdict} {}: {}", o.id, o.title, o.detail).unwrap();
    }
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.ok).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
