use std::path::Path;

use vguard::io::{generate_polygon, parse_instance, render_svg, Style, SvgLayers};
use vguard::oracle::{link_distance, optimal_vertex_guards};
use vguard::partition::window_partition;
use vguard::pipeline::guard_polygon;
use vguard::polygon::Polygon;
use vguard::properties::window_samples;
use vguard::Mode;

fn load(name: &str) -> Polygon {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(format!("{name}.poly"));
    parse_instance(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn five_levels_partition() {
    let p = load("five_levels");
    let tree = window_partition(&p, 0);
    assert_eq!(tree.level_sizes(), vec![1, 2, 3, 2, 3]);
    let layers = SvgLayers {
        windows: Some(&tree),
        visibility: false,
    };
    let svg = render_svg(&p, &[0], layers);
    assert_eq!(svg.matches("class=\"window\"").count(), 11);
    for &w in &tree.levels[4] {
        for q in window_samples(&tree, w, 20) {
            assert_eq!(link_distance(&p, 0, &q).unwrap(), 5);
        }
    }
}

#[test]
fn fixtures_are_guarded_in_every_mode() {
    for name in ["notch", "ell", "spiral12", "spiked_room", "five_levels"] {
        let p = load(name);
        for mode in [Mode::Vertices, Mode::Boundary, Mode::Interior] {
            let run = guard_polygon(&p, mode, Default::default()).unwrap();
            assert!(run.covered, "{name} {mode:?}");
            assert!(run.locality.is_empty(), "{name} {mode:?}");
        }
    }
}

#[test]
fn combs_need_one_guard_per_prong() {
    for k in 2..=4 {
        let p = generate_polygon(3 * k, 1, Style::Comb).unwrap();
        assert_eq!(optimal_vertex_guards(&p, Mode::Interior, None).unwrap().0, k);
    }
}

#[test]
fn generated_instances() {
    let a = generate_polygon(12, 7, Style::Random).unwrap();
    assert_eq!(a, generate_polygon(12, 7, Style::Random).unwrap());
    let spiral = generate_polygon(20, 0, Style::Spiral).unwrap();
    assert!(window_partition(&spiral, 0).depth() >= 3);
}

#[test]
fn convex_svg_has_one_guard() {
    let p = parse_instance("5\n0 0\n4 0\n5 3\n2 5\n-1 3\n").unwrap();
    let run = guard_polygon(&p, Mode::Interior, Default::default()).unwrap();
    assert_eq!(run.guards(), vec![0]);
    let svg = render_svg(
        &p,
        &run.guards(),
        SvgLayers {
            windows: None,
            visibility: false,
        },
    );
    assert_eq!(svg.matches("<circle").count(), 1);
}
