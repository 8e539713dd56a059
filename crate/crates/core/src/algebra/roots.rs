//! Real root isolation for univariate rational polynomials (Sturm
//! sequences with bisection).

use num_bigint::BigInt;
use num_bigint::Sign;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::field::{Field, Rational};
use super::poly::MultiPoly;
use crate::error::AlgebraError;

/// Isolating intervals are refined until narrower than 2⁻³⁰.
pub const ROOT_WIDTH_BITS: u32 = 30;

/// A real root located either exactly (`lo == hi`) or inside the open
/// interval `(lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        if self.is_exact() {
            x == &self.lo
        } else {
            &self.lo < x && x < &self.hi
        }
    }
}

type Dense = Vec<Rational>;

fn trim(mut p: Dense) -> Dense {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn derivative(p: &[Rational]) -> Dense {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * Rational::from(k as i64))
            .collect(),
    )
}

/// Remainder of `a` divided by `b` (`b` nonzero).
fn rem(a: &[Rational], b: &[Rational]) -> Dense {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = b[db].inv().expect("nonzero leading coefficient");
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let factor = r[r.len() - 1].clone() * &lead_inv;
        for (k, c) in b.iter().enumerate() {
            let v = r[shift + k].clone() - factor.clone() * c;
            r[shift + k] = v;
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn quotient(a: &[Rational], b: &[Rational]) -> Dense {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() <= db {
        return vec![];
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    let lead_inv = b[db].inv().expect("nonzero leading coefficient");
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let factor = r[r.len() - 1].clone() * &lead_inv;
        for (k, c) in b.iter().enumerate() {
            let v = r[shift + k].clone() - factor.clone() * c;
            r[shift + k] = v;
        }
        q[shift] = factor;
        r.pop();
    }
    trim(q)
}

fn gcd(a: &[Rational], b: &[Rational]) -> Dense {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    x
}

/// Positive multiple of `p` with coprime integer coefficients.
fn primitive(p: &[Rational]) -> Vec<BigInt> {
    let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let v: Vec<BigInt> = p.iter().map(|c| c.numer() * (&l / c.denom())).collect();
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

fn to_dense(p: &[BigInt]) -> Dense {
    p.iter().cloned().map(Rational::from).collect()
}

/// Sign of `p(n/d)` for `d > 0`, from `Σ c_k n^k d^{deg−k}`.
fn sign_at(p: &[BigInt], x: &Rational) -> i32 {
    let (n, d) = (x.numer(), x.denom());
    let mut acc = BigInt::zero();
    let mut dpow = BigInt::one();
    // Horner from the top: acc ← acc·n + c_k·d^{deg−k}.
    for c in p.iter().rev() {
        acc = acc * n + c * &dpow;
        dpow *= d;
    }
    match acc.sign() {
        Sign::Plus => 1,
        Sign::Minus => -1,
        Sign::NoSign => 0,
    }
}

/// Sturm sequence of the squarefree part of a nonzero polynomial, each
/// member scaled by a positive constant to a primitive integer polynomial.
pub struct SturmSequence {
    chain: Vec<Vec<BigInt>>,
}

impl SturmSequence {
    pub fn new(p: &[Rational]) -> Result<Self, AlgebraError> {
        let p = trim(p.to_vec());
        if p.is_empty() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let p = to_dense(&primitive(&p));
        let dp = derivative(&p);
        let sqf = if dp.is_empty() {
            p
        } else {
            quotient(&p, &gcd(&p, &dp))
        };
        let mut chain = vec![primitive(&sqf)];
        let mut prev = to_dense(&chain[0]);
        let mut cur = to_dense(&primitive(&derivative(&prev)));
        while !cur.is_empty() {
            let r: Dense = rem(&prev, &cur).into_iter().map(|c| -c).collect();
            chain.push(primitive(&cur));
            prev = cur;
            cur = to_dense(&primitive(&r));
        }
        Ok(SturmSequence { chain })
    }

    /// The squarefree polynomial whose roots are isolated.
    pub fn squarefree(&self) -> Dense {
        to_dense(&self.chain[0])
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut last = 0i32;
        let mut count = 0;
        for s in &self.chain {
            let sign = sign_at(s, x);
            if sign == 0 {
                continue;
            }
            if last != 0 && sign != last {
                count += 1;
            }
            last = sign;
        }
        count
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a) - self.variations(b)
    }

    pub fn is_root(&self, x: &Rational) -> bool {
        sign_at(&self.chain[0], x) == 0
    }

    fn isolate(&self, a: &Rational, b: &Rational, eps: &Rational, out: &mut Vec<RootInterval>) {
        let n = self.count(a, b);
        if n == 0 {
            return;
        }
        if n == 1 {
            if self.is_root(b) {
                out.push(RootInterval {
                    lo: b.clone(),
                    hi: b.clone(),
                });
                return;
            }
            let (mut lo, mut hi) = (a.clone(), b.clone());
            while hi.clone() - &lo >= *eps {
                let mid = midpoint(&lo, &hi);
                if self.is_root(&mid) {
                    out.push(RootInterval {
                        lo: mid.clone(),
                        hi: mid,
                    });
                    return;
                }
                if self.count(&lo, &mid) == 1 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            out.push(RootInterval { lo, hi });
            return;
        }
        let mid = midpoint(a, b);
        self.isolate(a, &mid, eps, out);
        self.isolate(&mid, b, eps, out);
    }

    /// Picks a rational strictly between two consecutive isolated roots.
    fn point_between(&self, left: &RootInterval, right: &RootInterval) -> Rational {
        let (a, b) = (&left.hi, &right.lo);
        if a < b {
            return midpoint(a, b);
        }
        if !left.is_exact() && !right.is_exact() {
            return a.clone();
        }
        if left.is_exact() {
            // Walk toward the left endpoint until no root separates it.
            let mut x = midpoint(a, &right.hi);
            while self.count(a, &x) > 0 {
                x = midpoint(a, &x);
            }
            x
        } else {
            let mut x = midpoint(&left.lo, b);
            while self.count(&x, b) > 1 {
                x = midpoint(&x, b);
            }
            x
        }
    }
}

fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a.clone() + b) * Rational::new(1, 2).expect("nonzero")
}

fn width_bound() -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << ROOT_WIDTH_BITS).expect("nonzero")
}

fn dense_of(p: &MultiPoly<Rational>) -> Result<Dense, AlgebraError> {
    let d = trim(p.to_dense_univariate()?);
    if d.is_empty() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    Ok(d)
}

/// Isolates the real roots of `p` inside the closed interval `[lo, hi]`.
///
/// Every returned interval holds exactly one root, the intervals are
/// pairwise disjoint and sorted, and together they cover every root in the
/// query interval.
pub fn isolate_real_roots(
    p: &MultiPoly<Rational>,
    lo: &Rational,
    hi: &Rational,
) -> Result<Vec<RootInterval>, AlgebraError> {
    let sturm = SturmSequence::new(&dense_of(p)?)?;
    Ok(isolate_with(&sturm, lo, hi))
}

fn isolate_with(sturm: &SturmSequence, lo: &Rational, hi: &Rational) -> Vec<RootInterval> {
    let mut out = Vec::new();
    if lo > hi {
        return out;
    }
    if sturm.is_root(lo) {
        out.push(RootInterval {
            lo: lo.clone(),
            hi: lo.clone(),
        });
    }
    sturm.isolate(lo, hi, &width_bound(), &mut out);
    out
}

/// Cauchy bound: every real root lies in `[-B, B]`.
pub fn cauchy_bound(p: &[Rational]) -> Rational {
    let p = trim(p.to_vec());
    let lead = p.last().expect("nonzero polynomial").abs();
    let max = p[..p.len() - 1]
        .iter()
        .map(|c| c.abs() / lead.clone())
        .max()
        .unwrap_or_else(Rational::zero);
    max + Rational::one()
}

/// All real roots of `p`.
pub fn isolate_all_real_roots(p: &MultiPoly<Rational>) -> Result<Vec<RootInterval>, AlgebraError> {
    let d = dense_of(p)?;
    let sturm = SturmSequence::new(&d)?;
    let b = cauchy_bound(&sturm.squarefree());
    Ok(isolate_with(&sturm, &-b.clone(), &b))
}

/// One rational point in each open interval cut out of the real line by the
/// roots of `p`: before the first root, between consecutive roots, and
/// after the last. A polynomial without real roots yields the single point
/// 0.
pub fn sample_points_between_roots(p: &MultiPoly<Rational>) -> Result<Vec<Rational>, AlgebraError> {
    Ok(roots_with_samples(p)?.1)
}

/// All real roots of `p` together with [`sample_points_between_roots`].
pub fn roots_with_samples(p: &MultiPoly<Rational>) -> Result<(Vec<RootInterval>, Vec<Rational>), AlgebraError> {
    let d = dense_of(p)?;
    let sturm = SturmSequence::new(&d)?;
    let b = cauchy_bound(&sturm.squarefree());
    let roots = isolate_with(&sturm, &-b.clone(), &b);
    let Some(first) = roots.first() else {
        return Ok((roots, vec![Rational::zero()]));
    };
    let mut out = vec![first.lo.clone() - Rational::one()];
    for w in roots.windows(2) {
        out.push(sturm.point_between(&w[0], &w[1]));
    }
    out.push(roots.last().expect("non-empty").hi.clone() + Rational::one());
    Ok((roots, out))
}
