use vguard::io::parse_instance;
use vguard::properties::{run_property_suite, Check, Corpus, CorpusConfig};

#[test]
fn skipping_s3_breaks_b_visibility() {
    let cfg = CorpusConfig {
        count: 40,
        skip_s3: true,
        ..Default::default()
    };
    let corpus = Corpus::generate(&cfg).unwrap();
    let report = run_property_suite(&corpus, &cfg, &[Check::BVisibility]);
    assert!(!report.passed(Check::BVisibility));
    let ce = report.summary(Check::BVisibility).unwrap().first.as_ref().unwrap();
    let small = parse_instance(&ce.replay).unwrap();
    assert!(
        small.n()
            <= corpus
                .instances
                .iter()
                .find(|i| i.name == ce.instance)
                .unwrap()
                .polygon
                .n()
    );

    let clean = CorpusConfig { skip_s3: false, ..cfg };
    assert!(run_property_suite(&corpus, &clean, &[Check::BVisibility]).passed(Check::BVisibility));
}
