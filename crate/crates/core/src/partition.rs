//! Discrete polynomial partitioning by iterated simultaneous bisection on
//! Veronese lifts, with exact occupancy and curve-crossing statistics.
//!
//! Sign vectors of the bisecting polynomials stand in for the connected
//! cells of the complement of the partitioning surface.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::matrix::ExactMatrix;
use crate::algebra::roots::roots_with_samples;
use crate::algebra::{Field, GaussianRational, QPoly, Rational};
use crate::cr::{iota, ComplexCurve};
use crate::error::{Error, Result};
use crate::foliation::GraphForm;
use crate::seed::{rng_for, sub_seed};

/// Exponent vectors of all monomials of degree `1..=t` in `d` variables:
/// by degree, and lexicographically descending within a degree.
pub fn veronese_exponents(d: usize, t: u32) -> Vec<Vec<u32>> {
    fn fill(d: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == d - 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            fill(d, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if d == 0 {
        return out;
    }
    for deg in 1..=t {
        fill(d, deg, &mut Vec::with_capacity(d), &mut out);
    }
    out
}

/// `C(d + t, d) − 1`, the dimension of the degree-`t` lift of `ℝ^d`.
pub fn lift_dim(d: usize, t: u32) -> usize {
    let (n, k) = (d as u128 + t as u128, d.min(t as usize) as u128);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    (c - 1) as usize
}

/// All monomials of degree `1..=t` evaluated at `point`, in
/// [`veronese_exponents`] order.
pub fn veronese_lift(point: &[Rational], t: u32) -> Vec<Rational> {
    let max_pows: Vec<Vec<Rational>> = point
        .iter()
        .map(|x| {
            let mut row = vec![Rational::one()];
            for k in 1..=t as usize {
                let next = row[k - 1].clone() * x;
                row.push(next);
            }
            row
        })
        .collect();
    veronese_exponents(point.len(), t)
        .iter()
        .map(|e| {
            e.iter()
                .enumerate()
                .fold(Rational::one(), |acc, (k, &p)| acc * &max_pows[k][p as usize])
        })
        .collect()
}

/// Search knobs for [`ham_sandwich_bisect`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BisectOptions {
    /// Allowed relative excess of a side over half its set.
    pub delta: f64,
    pub restarts: usize,
    /// Newton steps per restart.
    pub max_iters: usize,
    pub seed: u64,
    /// Instances with at most this many candidate point tuples are solved
    /// by exhaustive search.
    pub direct_limit: u64,
}

impl Default for BisectOptions {
    fn default() -> Self {
        BisectOptions {
            delta: 0.1,
            restarts: 200,
            max_iters: 300,
            seed: 0,
            direct_limit: 20_000,
        }
    }
}

/// Exact side counts of one set against a hyperplane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideCounts {
    pub size: usize,
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl SideCounts {
    pub fn larger_side(&self) -> usize {
        self.positive.max(self.negative)
    }

    /// Points on the larger side beyond `⌊size/2⌋`.
    pub fn excess(&self) -> usize {
        self.larger_side().saturating_sub(self.size / 2)
    }

    /// Whether each side holds at most `⌈size/2⌉·(1+δ)` points.
    pub fn within(&self, delta: f64) -> bool {
        self.larger_side() as f64 <= self.size.div_ceil(2) as f64 * (1.0 + delta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BisectMethod {
    Direct,
    Descent,
}

/// A hyperplane `c₀ + Σ cₖ xₖ = 0` with its exact side counts per set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bisection {
    pub coeffs: Vec<Rational>,
    pub sides: Vec<SideCounts>,
    pub method: BisectMethod,
    /// Index of the winning restart for descent searches.
    pub restart: Option<usize>,
}

impl Bisection {
    pub fn excess(&self) -> usize {
        self.sides.iter().map(SideCounts::excess).sum()
    }

    /// Largest relative excess of a side over `⌈size/2⌉`.
    pub fn imbalance(&self) -> f64 {
        self.sides
            .iter()
            .filter(|s| s.size > 0)
            .map(|s| s.larger_side() as f64 / s.size.div_ceil(2) as f64 - 1.0)
            .fold(0.0, f64::max)
    }

    pub fn within(&self, delta: f64) -> bool {
        self.sides.iter().all(|s| s.within(delta))
    }
}

fn affine_value(c: &[Rational], x: &[Rational]) -> Rational {
    x.iter()
        .zip(&c[1..])
        .fold(c[0].clone(), |acc, (a, b)| acc + a.clone() * b)
}

pub fn side_counts(coeffs: &[Rational], set: &[Vec<Rational>]) -> SideCounts {
    let mut s = SideCounts {
        size: set.len(),
        positive: 0,
        negative: 0,
        zero: 0,
    };
    for x in set {
        match affine_value(coeffs, x).signum() {
            1 => s.positive += 1,
            -1 => s.negative += 1,
            _ => s.zero += 1,
        }
    }
    s
}

/// Lifted sets as integer rows `L·(1, x)`, with `L` the least common
/// denominator of the row. Signs against a hyperplane are unchanged by
/// the positive factor `L`.
struct IntSets {
    sets: Vec<Vec<Vec<BigInt>>>,
}

impl IntSets {
    fn new(sets: &[Vec<Vec<Rational>>]) -> Self {
        IntSets {
            sets: sets.iter().map(|s| s.par_iter().map(|x| int_row(x)).collect()).collect(),
        }
    }

    fn counts(&self, c: &[BigInt]) -> Vec<SideCounts> {
        self.sets
            .iter()
            .map(|s| {
                let mut out = SideCounts {
                    size: s.len(),
                    positive: 0,
                    negative: 0,
                    zero: 0,
                };
                for row in s {
                    match idot(c, row).sign() {
                        Sign::Plus => out.positive += 1,
                        Sign::Minus => out.negative += 1,
                        Sign::NoSign => out.zero += 1,
                    }
                }
                out
            })
            .collect()
    }
}

fn int_row(x: &[Rational]) -> Vec<BigInt> {
    let l = x.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    std::iter::once(l.clone())
        .chain(x.iter().map(|q| q.numer() * (&l / q.denom())))
        .collect()
}

/// Positive multiple of `c` with coprime integer entries.
fn int_vector(c: &[Rational]) -> Vec<BigInt> {
    let l = c.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let v: Vec<BigInt> = c.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

fn idot(c: &[BigInt], row: &[BigInt]) -> BigInt {
    c.iter().zip(row).map(|(a, b)| a * b).sum()
}

/// Moves the points lying on the hyperplane off it by a constant shift when
/// that keeps every side within `⌊size/2⌋`.
fn strictify(c: Vec<BigInt>, sets: &IntSets) -> (Vec<BigInt>, Vec<SideCounts>) {
    let sides = sets.counts(&c);
    if sides.iter().all(|s| s.zero == 0) {
        return (c, sides);
    }
    // The affine value at a point is c·row / L.
    let gap = sets
        .sets
        .iter()
        .flatten()
        .filter_map(|row| {
            let v = idot(&c, row);
            (!v.is_zero()).then(|| Rational::new(v.abs(), row[0].clone()).expect("positive"))
        })
        .min()
        .unwrap_or_else(Rational::one);
    let eps = gap * Rational::new(1, 2).expect("nonzero");
    for shift in [-eps.clone(), eps] {
        let mut q: Vec<Rational> = c.iter().cloned().map(Rational::from).collect();
        q[0] = q[0].clone() + &shift;
        let shifted = int_vector(&q);
        let s = sets.counts(&shifted);
        if s.iter().all(|x| x.excess() == 0) {
            return (shifted, s);
        }
    }
    (c, sides)
}

fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    let mut c: u64 = 1;
    for i in 0..k {
        c = c.checked_mul(n - i)? / (i + 1);
    }
    Some(c)
}

/// Hyperplanes through every `D`-tuple of input points, best by total
/// excess then tuple order.
fn direct_search(sets: &IntSets, dim: usize) -> Option<(Vec<BigInt>, Vec<SideCounts>)> {
    let all: Vec<&Vec<BigInt>> = sets.sets.iter().flatten().collect();
    let mut best: Option<(Vec<BigInt>, Vec<SideCounts>)> = None;
    let excess = |s: &[SideCounts]| s.iter().map(SideCounts::excess).sum::<usize>();
    let mut idx: Vec<usize> = (0..dim).collect();
    if all.len() < dim {
        return None;
    }
    loop {
        let rows: Vec<Vec<Rational>> = idx
            .iter()
            .map(|&i| all[i].iter().cloned().map(Rational::from).collect())
            .collect();
        let ker = ExactMatrix::from_rows(&rows).expect("equal rows").kernel();
        if ker.len() == 1 {
            let cand = strictify(int_vector(&ker[0]), sets);
            if best.as_ref().is_none_or(|b| excess(&cand.1) < excess(&b.1)) {
                let done = excess(&cand.1) == 0;
                best = Some(cand);
                if done {
                    return best;
                }
            }
        }
        // Next combination in lexicographic order.
        let n = all.len();
        let Some(pos) = (0..dim).rev().find(|&p| idx[p] < n - dim + p) else {
            return best;
        };
        idx[pos] += 1;
        for p in pos + 1..dim {
            idx[p] = idx[p - 1] + 1;
        }
    }
}

/// Float copies of the lifted sets, rows prefixed with 1.
struct FloatSets {
    sets: Vec<Vec<Vec<f64>>>,
    width: usize,
}

impl FloatSets {
    fn new(sets: &[Vec<Vec<Rational>>], dim: usize) -> Self {
        FloatSets {
            sets: sets
                .iter()
                .map(|s| {
                    s.iter()
                        .map(|x| std::iter::once(1.0).chain(x.iter().map(Rational::to_f64)).collect())
                        .collect()
                })
                .collect(),
            width: dim + 1,
        }
    }

    /// Per set: the index of the point of rank `⌈n/2⌉ − 1` under `c` and
    /// its value.
    fn medians(&self, c: &[f64]) -> Vec<(usize, f64)> {
        self.sets
            .iter()
            .map(|s| {
                let mut v: Vec<(f64, usize)> = s.iter().enumerate().map(|(i, x)| (fdot(x, c), i)).collect();
                let k = s.len().div_ceil(2) - 1;
                let (_, &mut (val, i), _) = v.select_nth_unstable_by(k, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                (i, val)
            })
            .collect()
    }

    fn balanced(&self, c: &[f64], medians: &[(usize, f64)]) -> bool {
        self.sets.iter().zip(medians).all(|(s, &(mi, _))| {
            let (mut pos, mut neg) = (0, 0);
            for (i, x) in s.iter().enumerate() {
                if i == mi {
                    continue;
                }
                let v = fdot(x, c);
                if v > 1e-12 {
                    pos += 1;
                } else if v < -1e-12 {
                    neg += 1;
                } else {
                    return false;
                }
            }
            pos.max(neg) <= s.len() / 2
        })
    }
}

fn fdot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(c: &mut [f64]) {
    let n = fdot(c, c).sqrt();
    if n > 0.0 {
        c.iter_mut().for_each(|x| *x /= n);
    }
}

fn merit(medians: &[(usize, f64)]) -> f64 {
    medians.iter().map(|m| m.1 * m.1).sum()
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    normalize(&mut c);
    c
}

fn snap(x: f64) -> Rational {
    Rational::approximate_f64(x, 1 << 32).unwrap_or_else(Rational::zero)
}

/// Exact hyperplane through the given median points, chosen in their
/// common kernel as close as possible to the float direction `c`.
fn exact_through(sets: &IntSets, medians: &[(usize, f64)], c: &[f64]) -> Option<Vec<BigInt>> {
    let rows: Vec<Vec<Rational>> = sets
        .sets
        .iter()
        .zip(medians)
        .map(|(s, &(i, _))| s[i].iter().cloned().map(Rational::from).collect())
        .collect();
    let basis = ExactMatrix::from_rows(&rows).ok()?.kernel();
    if basis.is_empty() {
        return None;
    }
    let width = c.len();
    let b = DMatrix::from_fn(width, basis.len(), |r, k| basis[k][r].to_f64());
    let alpha = b.svd(true, true).solve(&DVector::from_column_slice(c), 1e-12).ok()?;
    let scale = alpha.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return None;
    }
    let alpha: Vec<Rational> = alpha.iter().map(|a| snap(a / scale)).collect();
    let mut out = vec![Rational::zero(); width];
    for (a, v) in alpha.iter().zip(&basis) {
        if a.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o = o.clone() + a.clone() * x;
        }
    }
    out.iter().any(|x| !x.is_zero()).then(|| int_vector(&out))
}

/// Damped Newton iteration on the map `c ↦ (median value of each set)`,
/// finished by an exact hyperplane through the median points.
fn descent_restart(
    sets: &IntSets,
    fsets: &FloatSets,
    opts: &BisectOptions,
    index: usize,
) -> Bisection {
    let mut rng = rng_for(opts.seed, "ham-sandwich", index as u64);
    let mut c = random_unit(&mut rng, fsets.width);
    let mut best: Option<Bisection> = None;
    let finish = |coeffs: Vec<BigInt>| -> Bisection {
        let (coeffs, sides) = strictify(coeffs, sets);
        Bisection {
            coeffs: coeffs.into_iter().map(Rational::from).collect(),
            sides,
            method: BisectMethod::Descent,
            restart: Some(index),
        }
    };
    for _ in 0..opts.max_iters {
        let med = fsets.medians(&c);
        if fsets.balanced(&c, &med) {
            if let Some(coeffs) = exact_through(sets, &med, &c) {
                let cand = finish(coeffs);
                if cand.excess() == 0 {
                    return cand;
                }
                if best.as_ref().is_none_or(|b| cand.excess() < b.excess()) {
                    best = Some(cand);
                }
            }
        }
        let phi = merit(&med);
        let m = DMatrix::from_fn(med.len(), fsets.width, |r, k| fsets.sets[r][med[r].0][k]);
        let rhs = DVector::from_iterator(med.len(), med.iter().map(|x| -x.1));
        let step = m.pseudo_inverse(1e-12).ok().map(|p| p * rhs);
        let mut moved = false;
        if let Some(step) = step {
            let mut lam = 1.0;
            while lam > 1e-6 {
                let mut c2: Vec<f64> = c.iter().zip(step.iter()).map(|(a, d)| a + lam * d).collect();
                normalize(&mut c2);
                if merit(&fsets.medians(&c2)) < phi * (1.0 - 1e-4 * lam) {
                    c = c2;
                    moved = true;
                    break;
                }
                lam /= 2.0;
            }
        }
        if !moved {
            let kick = random_unit(&mut rng, fsets.width);
            c.iter_mut().zip(kick).for_each(|(a, k)| *a += 0.05 * k);
            normalize(&mut c);
        }
    }
    let snapped = finish(int_vector(&c.iter().map(|&x| snap(x)).collect::<Vec<_>>()));
    match best {
        Some(b) if b.excess() <= snapped.excess() => b,
        _ => snapped,
    }
}

const BATCH: usize = 8;

/// Finds a hyperplane simultaneously splitting every set as evenly as
/// possible. Points are given in lifted coordinates of a common dimension
/// `D ≥ number of sets`.
///
/// The search aims for at most `⌊n/2⌋` points strictly on each side of
/// every set. It returns the first exact solution in restart order, or
/// the best candidate when that candidate keeps every side within
/// `⌈n/2⌉·(1+δ)`. Otherwise it fails with [`Error::BisectionBudget`]
/// carrying the best hyperplane found.
pub fn ham_sandwich_bisect(sets: &[Vec<Vec<Rational>>], opts: &BisectOptions) -> Result<Bisection> {
    let Some(dim) = sets.iter().flatten().map(Vec::len).next() else {
        return Err(Error::InvalidInput("no points to bisect".into()));
    };
    if sets.iter().flatten().any(|x| x.len() != dim) {
        return Err(Error::InvalidInput("points of different dimensions".into()));
    }
    if dim == 0 || sets.len() > dim {
        return Err(Error::InvalidInput(format!("{} sets cannot be bisected in dimension {dim}", sets.len())));
    }
    let active: Vec<usize> = (0..sets.len()).filter(|&i| !sets[i].is_empty()).collect();
    let act_sets: Vec<Vec<Vec<Rational>>> = active.iter().map(|&i| sets[i].clone()).collect();
    let total = act_sets.iter().map(Vec::len).sum::<usize>() as u64;
    let isets = IntSets::new(&act_sets);

    // Side counts for all sets, including the empty ones left out of the
    // search.
    let expand = |b: Bisection| -> Bisection {
        let mut sides = vec![
            SideCounts {
                size: 0,
                positive: 0,
                negative: 0,
                zero: 0,
            };
            sets.len()
        ];
        for (&i, s) in active.iter().zip(&b.sides) {
            sides[i] = *s;
        }
        Bisection { sides, ..b }
    };

    if binomial_u64(total, dim as u64).is_some_and(|n| n <= opts.direct_limit) {
        if let Some((c, sides)) = direct_search(&isets, dim) {
            let b = Bisection {
                coeffs: c.into_iter().map(Rational::from).collect(),
                sides,
                method: BisectMethod::Direct,
                restart: None,
            };
            if b.excess() == 0 {
                return Ok(expand(b));
            }
        }
    }

    let fsets = FloatSets::new(&act_sets, dim);
    let mut best: Option<Bisection> = None;
    for start in (0..opts.restarts).step_by(BATCH) {
        let end = (start + BATCH).min(opts.restarts);
        let batch: Vec<Bisection> = (start..end)
            .into_par_iter()
            .map(|i| descent_restart(&isets, &fsets, opts, i))
            .collect();
        for cand in batch {
            if best.as_ref().is_none_or(|b| cand.excess() < b.excess()) {
                best = Some(cand);
            }
        }
        if best.as_ref().is_some_and(|b| b.excess() == 0) {
            break;
        }
    }
    let best = expand(best.ok_or_else(|| Error::InvalidInput("restart budget is zero".into()))?);
    if best.excess() == 0 || best.within(opts.delta) {
        Ok(best)
    } else {
        Err(Error::BisectionBudget(Box::new(best)))
    }
}

/// Signs of the bisecting polynomials at a point, written as a string
/// over `+`, `-` and `0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(pub Vec<i8>);

impl SignVector {
    pub fn on_surface(&self) -> bool {
        self.0.contains(&0)
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                1 => "+",
                -1 => "-",
                _ => "0",
            })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for SignVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                '0' => Ok(0),
                other => Err(Error::InvalidInput(format!("bad sign character {other:?}"))),
            })
            .collect::<Result<_>>()
            .map(SignVector)
    }
}

impl Serialize for SignVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SignVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Knobs for [`polynomial_partition`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionOptions {
    pub delta: f64,
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for PartitionOptions {
    fn default() -> Self {
        let b = BisectOptions::default();
        PartitionOptions {
            delta: b.delta,
            restarts: b.restarts,
            max_iters: b.max_iters,
            seed: b.seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    pub stage: usize,
    pub degree: u32,
    pub lift_dim: usize,
    pub sets: usize,
    pub largest_side: usize,
    pub method: BisectMethod,
    pub restart: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionResult {
    pub dim: usize,
    pub r: u32,
    /// Affine normalization `ξ = (x − center)/scale` used by the search.
    pub center: Vec<Rational>,
    pub scale: Vec<Rational>,
    pub stages: Vec<StageReport>,
    pub bisectors: Vec<QPoly>,
    pub product: QPoly,
    pub signs: Vec<SignVector>,
    /// Point count per sign class, for points off the surface.
    pub occupancy: BTreeMap<SignVector, usize>,
    pub on_surface: usize,
}

impl PartitionResult {
    pub fn max_class(&self) -> usize {
        self.occupancy.values().copied().max().unwrap_or(0)
    }

    /// `(1+δ)^s · m / 2^s` for the `s` completed stages.
    pub fn class_bound(&self, delta: f64) -> f64 {
        let s = self.stages.len() as i32;
        (1.0 + delta).powi(s) * self.signs.len() as f64 / 2f64.powi(s)
    }

    pub fn degree(&self) -> u32 {
        self.bisectors.iter().map(QPoly::total_degree).sum()
    }
}

/// Exact signs of the bisecting polynomials at `point`.
pub fn sign_class(point: &[Rational], result: &PartitionResult) -> Result<SignVector> {
    signs_of(&result.bisectors, point)
}

fn signs_of(bisectors: &[QPoly], point: &[Rational]) -> Result<SignVector> {
    bisectors
        .iter()
        .map(|b| Ok(b.eval(point)?.signum() as i8))
        .collect::<Result<_>>()
        .map(SignVector)
}

fn normalization(points: &[Vec<Rational>], d: usize) -> (Vec<Rational>, Vec<Rational>) {
    let half = Rational::new(1, 2).expect("nonzero");
    (0..d)
        .map(|k| {
            let lo = points.iter().map(|p| &p[k]).min().expect("non-empty");
            let hi = points.iter().map(|p| &p[k]).max().expect("non-empty");
            let center = (lo.clone() + hi) * &half;
            let scale = (hi.clone() - lo) * &half;
            (center, if scale.is_zero() { Rational::one() } else { scale })
        })
        .unzip()
}

/// Polynomial `c₀ + Σ c_α ξ^α` in the original coordinates.
fn bisector_poly(coeffs: &[Rational], d: usize, t: u32, center: &[Rational], scale: &[Rational]) -> Result<QPoly> {
    let exps = veronese_exponents(d, t);
    let mut terms = vec![(vec![0; d], coeffs[0].clone())];
    terms.extend(exps.into_iter().zip(coeffs[1..].iter().cloned()));
    let q = QPoly::from_terms(d, terms)?;
    let subs: Vec<QPoly> = (0..d)
        .map(|k| {
            let inv = scale[k].inv().expect("nonzero scale");
            (&QPoly::var(d, k) - &QPoly::constant(d, center[k].clone())).scale(&inv)
        })
        .collect();
    Ok(q.substitute(&subs)?.normalized())
}

/// Iterated simultaneous bisection. Stage `j` splits the `≤ 2^{j−1}`
/// current classes with one polynomial of the least degree `t` whose lift
/// has dimension at least `2^{j−1}`; stages stop once `2^j ≥ r^d` or when
/// the next degree would push the total past `r`.
///
/// A stage that misses the tolerance ends the run with
/// [`Error::PartitionBudget`] carrying the stages completed so far.
pub fn polynomial_partition(points: &[Vec<Rational>], r: u32, opts: &PartitionOptions) -> Result<PartitionResult> {
    if r < 2 {
        return Err(Error::InvalidInput("r must be at least 2".into()));
    }
    let Some(d) = points.first().map(Vec::len) else {
        return Err(Error::InvalidInput("no points".into()));
    };
    if d == 0 || points.iter().any(|p| p.len() != d) {
        return Err(Error::InvalidInput("points must share a positive dimension".into()));
    }
    let (center, scale) = normalization(points, d);
    let xi: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| {
            p.iter()
                .zip(&center)
                .zip(&scale)
                .map(|((x, c), s)| (x.clone() - c) / s.clone())
                .collect()
        })
        .collect();
    let target = (r as f64).powi(d as i32);

    let mut classes: Vec<Vec<usize>> = vec![(0..points.len()).collect()];
    let mut bisectors: Vec<QPoly> = Vec::new();
    let mut stages = Vec::new();
    let mut deg_sum = 0u32;
    let mut failure = None;
    for stage in 1usize.. {
        let budget = 1usize << (stage - 1);
        if budget as f64 >= target {
            break;
        }
        let t = (1u32..).find(|&t| lift_dim(d, t) >= budget).expect("lift grows");
        if deg_sum + t > r {
            break;
        }
        let splittable = classes.iter().filter(|c| c.len() > 1).count();
        if splittable == 0 {
            break;
        }
        let lifted: Vec<Vec<Vec<Rational>>> = classes
            .iter()
            .filter(|c| c.len() > 1)
            .map(|c| c.par_iter().map(|&i| veronese_lift(&xi[i], t)).collect())
            .collect();
        let bopts = BisectOptions {
            delta: opts.delta,
            restarts: opts.restarts,
            max_iters: opts.max_iters,
            seed: sub_seed(opts.seed, "partition-stage", stage as u64),
            ..BisectOptions::default()
        };
        let bis = match ham_sandwich_bisect(&lifted, &bopts) {
            Ok(b) => b,
            Err(Error::BisectionBudget(best)) => {
                failure = Some(best);
                break;
            }
            Err(e) => return Err(e),
        };
        let poly = bisector_poly(&bis.coeffs, d, t, &center, &scale)?;
        let signs: Vec<i32> = points
            .par_iter()
            .map(|p| poly.eval(p).map(|v| v.signum()))
            .collect::<Result<_, _>>()?;
        classes = classes
            .into_iter()
            .flat_map(|c| {
                let (neg, pos): (Vec<usize>, Vec<usize>) =
                    c.into_iter().filter(|&i| signs[i] != 0).partition(|&i| signs[i] < 0);
                [neg, pos]
            })
            .filter(|c| !c.is_empty())
            .collect();
        stages.push(StageReport {
            stage,
            degree: t,
            lift_dim: lift_dim(d, t),
            sets: splittable,
            largest_side: bis.sides.iter().map(SideCounts::larger_side).max().unwrap_or(0),
            method: bis.method,
            restart: bis.restart,
        });
        deg_sum += t;
        bisectors.push(poly);
    }

    let signs: Vec<SignVector> = points
        .par_iter()
        .map(|p| signs_of(&bisectors, p))
        .collect::<Result<_>>()?;
    let mut occupancy = BTreeMap::new();
    let mut on_surface = 0;
    for s in &signs {
        if s.on_surface() {
            on_surface += 1;
        } else {
            *occupancy.entry(s.clone()).or_insert(0) += 1;
        }
    }
    let product = bisectors.iter().fold(QPoly::one(d), |acc, b| &acc * b);
    let result = PartitionResult {
        dim: d,
        r,
        center,
        scale,
        stages,
        bisectors,
        product,
        signs,
        occupancy,
        on_surface,
    };
    match failure {
        None => Ok(result),
        Some(best) => Err(Error::PartitionBudget {
            partial: Box::new(result),
            best,
        }),
    }
}

/// A curve tested against a partition: a planar curve for partitions of
/// `ℝ²`, or a complex curve embedded by ι for partitions of `ℝ⁴`.
#[derive(Clone, Debug)]
pub enum CrossingCurve {
    Planar(QPoly),
    Embedded(ComplexCurve),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingStats {
    /// Some bisector vanishes identically on the curve.
    pub contained: bool,
    /// True when `classes` is the complete list (exact root isolation);
    /// false when it is a lower bound from sampling.
    pub exact: bool,
    pub classes: Vec<SignVector>,
    /// Distinct real roots of the product restricted to a line.
    pub roots: Option<usize>,
    pub samples: usize,
}

impl CrossingStats {
    pub fn classes_visited(&self) -> usize {
        self.classes.len()
    }

    fn contained() -> Self {
        CrossingStats {
            contained: true,
            exact: true,
            classes: Vec::new(),
            roots: None,
            samples: 0,
        }
    }
}

/// Grid resolution per free real coordinate for sampled crossings.
pub const DEFAULT_CROSSING_GRID: usize = 64;

/// Sign classes a curve passes through. Lines in the plane are handled
/// exactly: the product restricted to the line is a univariate polynomial
/// of degree at most `deg P`, so at most `deg P + 1` classes are visited.
/// Other curves need a rational parametrization (degree one in some
/// variable) and are sampled on a grid over the normalization box
/// enlarged twofold, giving a lower bound.
pub fn curve_crossings(curve: &CrossingCurve, result: &PartitionResult, grid: usize) -> Result<CrossingStats> {
    match curve {
        CrossingCurve::Planar(f) => {
            if result.dim != 2 || f.nvars() != 2 {
                return Err(Error::InvalidInput("planar curve needs a partition of the plane".into()));
            }
            if f.total_degree() == 1 {
                line_crossings(f, result)
            } else {
                planar_sampled(f, result, grid)
            }
        }
        CrossingCurve::Embedded(c) => {
            if result.dim != 4 {
                return Err(Error::InvalidInput("embedded curve needs a partition of R^4".into()));
            }
            embedded_sampled(c, result, grid)
        }
    }
}

fn line_crossings(f: &QPoly, result: &PartitionResult) -> Result<CrossingStats> {
    let (a, b, c) = (f.coeff(&[1, 0]), f.coeff(&[0, 1]), f.constant_term());
    let s = QPoly::var(1, 0);
    let subs = if !b.is_zero() {
        let binv = b.inv().expect("nonzero");
        [s.clone(), (&QPoly::constant(1, -c) - &s.scale(&a)).scale(&binv)]
    } else {
        let ainv = a.inv().expect("line has a nonzero coefficient");
        [QPoly::constant(1, -(c * &ainv)), s]
    };
    let restricted: Vec<QPoly> = result
        .bisectors
        .iter()
        .map(|q| q.substitute(&subs))
        .collect::<Result<_, _>>()?;
    if restricted.iter().any(QPoly::is_zero) {
        return Ok(CrossingStats::contained());
    }
    let product = restricted.iter().fold(QPoly::one(1), |acc, q| &acc * q);
    let (roots, samples) = if product.is_constant() {
        (0, vec![Rational::zero()])
    } else {
        let (r, s) = roots_with_samples(&product)?;
        (r.len(), s)
    };
    let classes: BTreeSet<SignVector> = samples
        .iter()
        .map(|x| signs_of(&restricted, std::slice::from_ref(x)))
        .collect::<Result<_>>()?;
    Ok(CrossingStats {
        contained: false,
        exact: true,
        classes: classes.into_iter().collect(),
        roots: Some(roots),
        samples: samples.len(),
    })
}

fn grid_values(center: &Rational, scale: &Rational, grid: usize) -> Vec<Rational> {
    let two = Rational::from(2);
    let lo = center.clone() - scale.clone() * &two;
    let width = scale.clone() * Rational::from(4);
    let steps = grid.max(2) - 1;
    (0..=steps)
        .map(|k| lo.clone() + width.clone() * Rational::new(k as i64, steps as i64).expect("nonzero"))
        .collect()
}

fn collect_classes(
    result: &PartitionResult,
    pts: impl IntoParallelIterator<Item = Vec<Rational>>,
) -> Result<(Vec<SignVector>, usize)> {
    let signs: Vec<SignVector> = pts
        .into_par_iter()
        .map(|p| signs_of(&result.bisectors, &p))
        .collect::<Result<_>>()?;
    let n = signs.len();
    let set: BTreeSet<SignVector> = signs.into_iter().filter(|s| !s.on_surface()).collect();
    Ok((set.into_iter().collect(), n))
}

fn planar_sampled(f: &QPoly, result: &PartitionResult, grid: usize) -> Result<CrossingStats> {
    let Some((solved, free)) = [(1usize, 0usize), (0, 1)]
        .into_iter()
        .find(|&(s, _)| f.degree_in(s) == 1)
    else {
        return Err(Error::InvalidInput(
            "planar curve has degree at least two in both variables".into(),
        ));
    };
    let mut coeffs = f.coefficients_in(solved);
    let a = coeffs.pop().expect("degree one");
    let b = coeffs.pop().expect("degree one");
    // Pull each bisector back along x_solved = −b/a, clearing a^deg.
    let contained = result.bisectors.iter().any(|q| {
        let deg = q.total_degree();
        let acc = q.terms().fold(QPoly::zero(2), |acc, (m, c)| {
            let e = m.exps();
            let t = QPoly::constant(2, c.clone())
                * QPoly::var(2, free).pow(e[free])
                * (-&b).pow(e[solved])
                * a.pow(deg - e[solved]);
            &acc + &t
        });
        acc.is_zero()
    });
    if contained {
        return Ok(CrossingStats::contained());
    }
    let mut pts = Vec::new();
    for s in grid_values(&result.center[free], &result.scale[free], grid) {
        let mut p = vec![Rational::zero(); 2];
        p[free] = s;
        let Some(ainv) = a.eval(&p)?.inv() else {
            continue;
        };
        p[solved] = -(b.eval(&p)? * &ainv);
        pts.push(p);
    }
    let (classes, samples) = collect_classes(result, pts)?;
    Ok(CrossingStats {
        contained: false,
        exact: false,
        classes,
        roots: None,
        samples,
    })
}

fn embedded_sampled(curve: &ComplexCurve, result: &PartitionResult, grid: usize) -> Result<CrossingStats> {
    let Some(graph) = GraphForm::of(curve.poly()) else {
        return Err(Error::InvalidInput(
            "complex curve has no rational parametrization".into(),
        ));
    };
    if result.bisectors.iter().any(|q| graph.pull_back(q).is_zero()) {
        return Ok(CrossingStats::contained());
    }
    let (kx, ky) = (2 * graph.free, 2 * graph.free + 1);
    let xs = grid_values(&result.center[kx], &result.scale[kx], grid);
    let ys = grid_values(&result.center[ky], &result.scale[ky], grid);
    let mut pts = Vec::new();
    for x in &xs {
        for y in &ys {
            if let Some(z) = graph.point_at(&GaussianRational::new(x.clone(), y.clone()))? {
                pts.push(iota(&z).to_vec());
            }
        }
    }
    let (classes, samples) = collect_classes(result, pts)?;
    Ok(CrossingStats {
        contained: false,
        exact: false,
        classes,
        roots: None,
        samples,
    })
}

/// Cell and curve-cell incidence counts of a partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionStats {
    /// Points per sign class (`m_j`).
    pub cell_counts: BTreeMap<SignVector, usize>,
    /// Curves visiting each sign class (`n_j`).
    pub curve_counts: BTreeMap<SignVector, usize>,
    /// Points on the partitioning surface (`m₀`).
    pub on_surface: usize,
    /// Points off the surface (`m′`).
    pub interior: usize,
    /// Curves contained in the surface.
    pub contained_curves: usize,
}

pub fn partition_stats(result: &PartitionResult, crossings: &[CrossingStats]) -> PartitionStats {
    let mut curve_counts = BTreeMap::new();
    for c in crossings {
        for s in &c.classes {
            *curve_counts.entry(s.clone()).or_insert(0) += 1;
        }
    }
    PartitionStats {
        cell_counts: result.occupancy.clone(),
        curve_counts,
        on_surface: result.on_surface,
        interior: result.occupancy.values().sum(),
        contained_curves: crossings.iter().filter(|c| c.contained).count(),
    }
}

/// Integer-valued rational in lowest terms, for building exact inputs.
pub fn rational_grid_point(coords: &[i64], den: i64) -> Vec<Rational> {
    coords
        .iter()
        .map(|&c| Rational::new(BigInt::from(c), BigInt::from(den)).expect("nonzero denominator"))
        .collect()
}
