use std::path::PathBuf;

use incidence_core::configurations::{
    gen_complex_lines_product, gen_grid_lines, gen_random, gen_unit_circles, generate, GeneratorSpec,
};
use incidence_core::incidence::{
    build_matrix, certify_dof, kst_double_count, Configuration, DofStatus, GroundField,
};

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares against a stored golden file; `UPDATE_GOLDEN=1` rewrites it.
fn assert_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

#[test]
fn grid_lines_counts_up_to_eight() {
    for n in 1..=8usize {
        let c = gen_grid_lines(n as u32).unwrap();
        let m = build_matrix(&c);
        assert_eq!((m.m, m.n, m.count()), (2 * n.pow(3), n.pow(3), n.pow(4)));
    }
}

#[test]
fn unit_circles_golden() {
    let c = gen_unit_circles(4, 0).unwrap();
    assert_golden("unit_circles_n4_seed0.json", &c.to_json());
    assert_eq!(Configuration::from_json(&c.to_json()).unwrap(), c);
}

#[test]
fn complex_product_golden() {
    let c = gen_complex_lines_product(8, 8, 0).unwrap();
    assert_eq!((c.m(), c.n()), (64, 64));
    assert_eq!(build_matrix(&c).count(), 121);
    assert_golden("complex_product_8x8_seed0.json", &c.to_json());
}

#[test]
fn grid_lines_golden() {
    assert_golden("grid_lines_n2.json", &gen_grid_lines(2).unwrap().to_json());
}

#[test]
fn generators_are_pure() {
    let specs = [
        GeneratorSpec::GridLines { n: 3 },
        GeneratorSpec::UnitCircles { n: 3, seed: 7 },
        GeneratorSpec::ComplexProduct { a: 3, b: 4, seed: 2 },
        GeneratorSpec::Leaf { g: "z1^2".into(), count: 3, samples: 2, seed: 1 },
        GeneratorSpec::Random { m: 10, n: 3, degree: 2, ground_field: GroundField::C2, seed: 5 },
    ];
    for spec in &specs {
        assert_eq!(generate(spec).unwrap().to_json(), generate(spec).unwrap().to_json(), "{spec:?}");
    }
}

#[test]
fn certified_families_satisfy_double_counting() {
    let mut configs: Vec<(Configuration, usize, usize)> = Vec::new();
    for n in 1..=10 {
        configs.push((gen_grid_lines(n).unwrap(), 2, 1));
    }
    for seed in 0..10 {
        configs.push((gen_unit_circles(4, seed).unwrap(), 3, 2));
        configs.push((gen_complex_lines_product(5, 6, seed).unwrap(), 2, 1));
    }
    for (c, k, s) in &configs {
        let m = build_matrix(c);
        let cert = certify_dof(&m, *k, *s).unwrap();
        assert_eq!(cert.status, DofStatus::Certified);
        let report = kst_double_count(&m, *k, *s);
        assert!(report.holds, "{}: {} > {}", c.metadata.generator, report.lhs, report.rhs);
    }
}

#[test]
fn line_configurations_obey_two_point_bounds() {
    for n in 1..=5 {
        let m = build_matrix(&gen_grid_lines(n).unwrap());
        let (pts, lines, i) = (m.m, m.n, m.count());
        assert!(i <= pts + lines * lines);
        assert!(i <= lines + pts * pts);
    }
    for seed in 0..5 {
        let m = build_matrix(&gen_complex_lines_product(6, 6, seed).unwrap());
        assert!(m.count() <= m.m + m.n * m.n && m.count() <= m.n + m.m * m.m);
    }
}

#[test]
fn random_points_without_curves() {
    let c = gen_random(100, 0, 1, GroundField::R2, 0).unwrap();
    assert_eq!(build_matrix(&c).count(), 0);
    assert_eq!(c.m(), 100);
}
