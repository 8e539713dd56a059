mod common;

use common::{gaussian, q};
use incidence_core::algebra::{CPoly, Field, GaussianRational, Rational};
use incidence_core::configurations::gen_grid_lines;
use incidence_core::incidence::{
    build_matrix, certify_dof, evaluate_bounds, exponent_fit, kst_double_count, project_generic,
    BoundInput, Configuration, DofStatus, GroundField, Metadata, SeriesPoint,
};
use proptest::prelude::*;

/// Lines through pairs of small Gaussian points, so that incidences are common.
fn arrangement() -> impl Strategy<Value = Configuration> {
    (
        prop::collection::vec((gaussian(3, 2), gaussian(3, 2)), 2..12),
        prop::collection::vec((0usize..12, 0usize..12), 1..10),
    )
        .prop_map(|(pts, pairs)| {
            let points: Vec<[GaussianRational; 2]> = pts.into_iter().map(|(a, b)| [a, b]).collect();
            let (z1, z2) = (CPoly::var(2, 0), CPoly::var(2, 1));
            let curves: Vec<CPoly> = pairs
                .into_iter()
                .filter_map(|(i, j)| {
                    let (p, r) = (&points[i % points.len()], &points[j % points.len()]);
                    // (z2 - p2)(r1 - p1) - (z1 - p1)(r2 - p2)
                    let a = r[0].clone() - &p[0];
                    let b = r[1].clone() - &p[1];
                    let f = &(&z2 - &CPoly::constant(2, p[1].clone())).scale(&a)
                        - &(&z1 - &CPoly::constant(2, p[0].clone())).scale(&b);
                    (!f.is_zero()).then_some(f)
                })
                .collect();
            Configuration::new(GroundField::C2, points, curves, Metadata::default()).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_matches_exact_evaluation(c in arrangement()) {
        let m = build_matrix(&c);
        for (i, p) in c.points.iter().enumerate() {
            for (j, f) in c.curves.iter().enumerate() {
                prop_assert_eq!(m.contains(i, j), f.eval(p).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn matrix_is_order_independent(c in arrangement(), shift in 0usize..12) {
        let m = build_matrix(&c);
        let mut r = c.clone();
        let (pm, cn) = (c.m(), c.n());
        r.points.rotate_left(shift % pm);
        r.curves.reverse();
        let back: std::collections::BTreeSet<(usize, usize)> = build_matrix(&r)
            .incidences
            .into_iter()
            .map(|(i, j)| ((i + shift % pm) % pm, cn - 1 - j))
            .collect();
        prop_assert_eq!(back.into_iter().collect::<Vec<_>>(), m.incidences);
    }

    #[test]
    fn lines_obey_two_point_bounds(c in arrangement()) {
        let m = build_matrix(&c);
        prop_assert!(m.count() <= m.m + m.n * m.n);
        prop_assert!(m.count() <= m.n + m.m * m.m);
        let cert = certify_dof(&m, 2, 1).unwrap();
        prop_assert_eq!(cert.status, DofStatus::Certified);
    }

    #[test]
    fn certification_implies_double_counting(c in arrangement(), k in 1usize..4, s in 1usize..4) {
        let m = build_matrix(&c);
        let cert = certify_dof(&m, k, s).unwrap();
        prop_assert!(cert.verify_witnesses(&m));
        if cert.status == DofStatus::Certified {
            prop_assert!(kst_double_count(&m, k, s).holds);
        } else {
            prop_assert!(!cert.witnesses.is_empty());
        }
    }

    #[test]
    fn ps_value_is_monotone(m in 1u64..100_000, n in 1u64..100_000, dm in 0u64..1000, dn in 0u64..1000, k in 2u32..5) {
        let at = |m, n| evaluate_bounds(&BoundInput { m, n, k, s: 1, epsilon: 0.05, measured: 1, constant: 1.0 }).unwrap();
        let (base, more_m, more_n) = (at(m, n), at(m + dm, n), at(m, n + dn));
        prop_assert!(more_m.ps_value >= base.ps_value);
        prop_assert!(more_n.ps_value >= base.ps_value);
        prop_assert!(base.ps_complex_value >= base.ps_value);
    }

    #[test]
    fn fit_recovers_planted_exponents(a in 0.1f64..2.0, b in 0.1f64..2.0, c in -2.0f64..2.0) {
        let series: Vec<SeriesPoint> = [(10.0, 20.0), (300.0, 30.0), (50.0, 5000.0), (7.0, 7.0), (1000.0, 900.0)]
            .iter()
            .map(|&(m, n): &(f64, f64)| SeriesPoint { m, n, i: (c + a * m.ln() + b * n.ln()).exp().max(1.0) })
            .filter(|p| p.i > 1.0)
            .collect();
        prop_assume!(series.len() == 5);
        let f = exponent_fit(&series).unwrap();
        prop_assert!(((f.a - a) / a).abs() < 1e-6);
        prop_assert!(((f.b - b) / b).abs() < 1e-6);
    }

    #[test]
    fn projection_is_injective(raw in prop::collection::vec(prop::array::uniform4(-20i64..20), 2..40), seed in 0u64..100) {
        let mut pts: Vec<[Rational; 4]> = raw.into_iter().map(|p| p.map(q)).collect();
        pts.sort();
        pts.dedup();
        let proj = project_generic(&pts, seed).unwrap();
        for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                prop_assert_ne!(&proj.points[a], &proj.points[b]);
            }
        }
    }
}

#[test]
fn large_coordinates_fall_back_to_exact_arithmetic() {
    let big = Rational::new(i64::MAX, 3).unwrap();
    let huge = big.clone() * &big;
    let p = [GaussianRational::from(huge.clone()), GaussianRational::from(q(1))];
    let f = &CPoly::var(2, 0) - &CPoly::constant(2, GaussianRational::from(huge));
    let c = Configuration::new(GroundField::C2, vec![p], vec![f], Metadata::default()).unwrap();
    assert_eq!(build_matrix(&c).count(), 1);
}

#[test]
fn grid_fit_predicts_within_one_percent() {
    let series: Vec<SeriesPoint> = (3..=8)
        .map(|n| {
            let m = build_matrix(&gen_grid_lines(n).unwrap());
            SeriesPoint { m: m.m as f64, n: m.n as f64, i: m.count() as f64 }
        })
        .collect();
    let fit = exponent_fit(&series).unwrap();
    for p in &series {
        assert!((fit.predict(p.m, p.n) / p.i - 1.0).abs() < 0.01);
    }
}
