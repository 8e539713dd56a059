mod common;

use common::{q, qpoly, rational, rational_point};
use incidence_core::algebra::{
    isolate_all_real_roots, isolate_real_roots, jacobian_rank, resultant, Field, MultiPoly, QPoly, Rational,
};
use proptest::prelude::*;

fn univariate(coeffs: &[i64]) -> QPoly {
    let c: Vec<Rational> = coeffs.iter().map(|&k| q(k)).collect();
    QPoly::from_dense_univariate(&c)
}

/// Real roots counted by sign changes and exact zeros on a fine grid.
fn sign_change_oracle(p: &QPoly, lo: i64, hi: i64, steps_per_unit: i64) -> usize {
    let mut count = 0;
    let mut prev: Option<i32> = None;
    for k in lo * steps_per_unit..=hi * steps_per_unit {
        let x = Rational::new(k, steps_per_unit).unwrap();
        let s = p.eval(&[x]).unwrap().signum();
        if s == 0 {
            count += 1;
            prev = None;
            continue;
        }
        if let Some(t) = prev {
            if t != s {
                count += 1;
            }
        }
        prev = Some(s);
    }
    count
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(p in qpoly(3, 3, 5), r in qpoly(3, 3, 5), s in qpoly(3, 3, 5)) {
        prop_assert_eq!(&p * &(&r + &s), &(&p * &r) + &(&p * &s));
        prop_assert_eq!(&p * &r, &r * &p);
        prop_assert_eq!(&(&p + &r) + &s, &p + &(&r + &s));
        prop_assert_eq!(&(&p * &r) * &s, &p * &(&r * &s));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn eval_is_a_homomorphism(p in qpoly(3, 3, 5), r in qpoly(3, 3, 5), x in rational_point(3)) {
        let (a, b) = (p.eval(&x).unwrap(), r.eval(&x).unwrap());
        prop_assert_eq!((&p * &r).eval(&x).unwrap(), a.clone() * &b);
        prop_assert_eq!((&p + &r).eval(&x).unwrap(), a + &b);
    }

    #[test]
    fn derivative_is_linear_and_leibniz(p in qpoly(3, 4, 5), r in qpoly(3, 4, 5), c in rational(9, 5), var in 0usize..3) {
        let lin = &p.scale(&c) + &r;
        prop_assert_eq!(lin.partial(var), &p.partial(var).scale(&c) + &r.partial(var));
        prop_assert_eq!((&p * &r).partial(var), &(&p.partial(var) * &r) + &(&p * &r.partial(var)));
    }

    #[test]
    fn gradient_matches_partials(p in qpoly(2, 4, 6), x in rational_point(2)) {
        let g = p.gradient(&x).unwrap();
        for (k, gk) in g.iter().enumerate() {
            prop_assert_eq!(gk, &p.partial(k).eval(&x).unwrap());
        }
    }

    #[test]
    fn finite_difference_of_linear_part(p in qpoly(1, 4, 5), x in rational(6, 3)) {
        // Central difference is exact for cubics once the quartic term is removed.
        let cubic = MultiPoly::from_terms(1, p.terms().filter(|(m, _)| m.degree() <= 3).map(|(m, c)| (m.exps().to_vec(), c.clone()))).unwrap();
        let h = Rational::new(1, 1000).unwrap();
        let plus = cubic.eval(&[x.clone() + &h]).unwrap();
        let minus = cubic.eval(&[x.clone() - &h]).unwrap();
        let approx = (plus - &minus) / (h.clone() + &h);
        let third = cubic.partial(0).partial(0).partial(0).eval(std::slice::from_ref(&x)).unwrap();
        let exact = cubic.partial(0).eval(&[x]).unwrap() + &(third * &(h.clone() * &h) * &Rational::new(1, 6).unwrap());
        prop_assert_eq!(approx, exact);
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(
        fs in prop::collection::vec((-4i64..=4, -4i64..=4), 1..4),
        gs in prop::collection::vec((-4i64..=4, -4i64..=4), 1..4),
    ) {
        // Products of the linear factors x - a - c·y share a factor iff some (a, c) repeats.
        let product = |roots: &[(i64, i64)]| {
            roots.iter().fold(QPoly::one(2), |acc, &(a, c)| {
                let factor = &(&QPoly::var(2, 0) - &QPoly::constant(2, q(a))) - &QPoly::var(2, 1).scale(&q(c));
                &acc * &factor
            })
        };
        let common = fs.iter().any(|r| gs.contains(r));
        let r = resultant(&product(&fs), &product(&gs), 0).unwrap();
        prop_assert_eq!(r.is_zero(), common);
    }

    #[test]
    fn jacobian_rank_invariance(
        polys in prop::collection::vec(qpoly(3, 2, 4), 1..4),
        scale in prop::collection::vec(rational(9, 4).prop_filter("nonzero", |c| !c.is_zero()), 3),
        x in rational_point(3),
        rot in 0usize..3,
    ) {
        let base = jacobian_rank(&polys, &x).unwrap();
        let scaled: Vec<QPoly> = polys.iter().zip(&scale).map(|(p, c)| p.scale(c)).collect();
        prop_assert_eq!(jacobian_rank(&scaled, &x).unwrap(), base);
        let mut rotated = polys.clone();
        let len = rotated.len();
        rotated.rotate_left(rot % len);
        prop_assert_eq!(jacobian_rank(&rotated, &x).unwrap(), base);
    }
}

#[test]
fn root_counts_match_sign_change_oracle() {
    use rand::Rng;
    let mut rng = incidence_core::seed::rng_for(0, "root-oracle", 0);
    for _ in 0..100 {
        // Integer roots in [-6, 6] keep the oracle exact on a grid of step 1/4.
        let deg = rng.gen_range(1..=8);
        let mut p = univariate(&[1]);
        for _ in 0..deg {
            let root = rng.gen_range(-6..=6i64);
            if rng.gen_bool(0.3) {
                p = &p * &univariate(&[rng.gen_range(1..=5), 0, 1]);
            } else {
                p = &p * &univariate(&[-root, 1]);
            }
        }
        let roots = isolate_all_real_roots(&p).unwrap();
        let squarefree_oracle = {
            let mut distinct = 0;
            for k in -24..=24 {
                let x = Rational::new(k, 4).unwrap();
                if p.eval(&[x]).unwrap().is_zero() {
                    distinct += 1;
                }
            }
            distinct
        };
        assert_eq!(roots.len(), squarefree_oracle, "{p:?}");
        assert_eq!(sign_change_oracle(&p, -7, 7, 4), squarefree_oracle);
    }
}

/// Sign changes of an integer polynomial on the grid `k / den`, with
/// exact zeros counted once.
fn integer_sign_changes(coeffs: &[i64], lo: i64, hi: i64, den: i64) -> usize {
    let deg = coeffs.len() as u32 - 1;
    let eval = |n: i64| -> i128 {
        coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c as i128 * (n as i128).pow(k as u32) * (den as i128).pow(deg - k as u32))
            .sum()
    };
    let mut count = 0;
    let mut prev = 0i128;
    for n in lo * den..=hi * den {
        let s = eval(n).signum();
        if s == 0 || (prev != 0 && s != prev) {
            count += 1;
        }
        prev = s;
    }
    count
}

#[test]
fn degree_eight_root_count_on_fine_grid() {
    use rand::Rng;
    let mut rng = incidence_core::seed::rng_for(1, "root-oracle", 0);
    let mut checked = 0;
    while checked < 100 {
        let coeffs: Vec<i64> = (0..=8)
            .map(|k| if k == 8 { rng.gen_range(1..=5) } else { rng.gen_range(-20..=20) })
            .collect();
        let p = univariate(&coeffs);
        let roots = isolate_real_roots(&p, &q(-50), &q(50)).unwrap();
        let min_gap = roots
            .windows(2)
            .map(|w| (w[1].lo.clone() - &w[0].hi).to_f64())
            .fold(f64::INFINITY, f64::min);
        if min_gap < 1.0 / 16.0 {
            continue;
        }
        checked += 1;
        assert_eq!(roots.len(), integer_sign_changes(&coeffs, -50, 50, 64), "{coeffs:?}");
    }
}

#[test]
fn roots_are_disjoint_and_contain_sign_changes() {
    let p = univariate(&[-2, 0, 1]);
    let roots = isolate_all_real_roots(&p).unwrap();
    assert_eq!(roots.len(), 2);
    for r in &roots {
        let (a, b) = (p.eval(std::slice::from_ref(&r.lo)).unwrap(), p.eval(std::slice::from_ref(&r.hi)).unwrap());
        assert!(a.signum() * b.signum() < 0);
    }
    assert!(roots[0].hi <= roots[1].lo);
}
