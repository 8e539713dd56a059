#![allow(dead_code)]

use incidence_core::algebra::{CPoly, GaussianRational, Monomial, MultiPoly, QPoly, Rational};
use proptest::prelude::*;

pub fn rational(max: i64, max_den: i64) -> impl Strategy<Value = Rational> {
    (-max..=max, 1..=max_den).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

pub fn gaussian(max: i64, max_den: i64) -> impl Strategy<Value = GaussianRational> {
    (rational(max, max_den), rational(max, max_den)).prop_map(|(re, im)| GaussianRational::new(re, im))
}

fn exponents(nvars: usize, max_deg: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..=max_deg, nvars).prop_filter_map("degree bound", move |e| {
        (e.iter().sum::<u32>() <= max_deg).then_some(e)
    })
}

pub fn qpoly(nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = QPoly> {
    prop::collection::vec((exponents(nvars, max_deg), rational(9, 4)), 0..=max_terms).prop_map(move |terms| {
        terms.into_iter().fold(QPoly::zero(nvars), |acc, (e, c)| {
            &acc + &MultiPoly::monomial(nvars, Monomial::new(e), c)
        })
    })
}

pub fn cpoly(nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = CPoly> {
    prop::collection::vec((exponents(nvars, max_deg), gaussian(9, 4)), 1..=max_terms).prop_map(move |terms| {
        terms.into_iter().fold(CPoly::zero(nvars), |acc, (e, c)| {
            &acc + &MultiPoly::monomial(nvars, Monomial::new(e), c)
        })
    })
}

pub fn rational_point(dim: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(12, 6), dim)
}

pub fn q(n: i64) -> Rational {
    Rational::from(n)
}
