//! Exact coefficient fields: the rationals and the Gaussian rationals.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::AlgebraError;

/// An exact field of characteristic zero containing the rationals.
///
/// Implemented by [`Rational`] and [`GaussianRational`]. Arithmetic goes
/// through the standard operator traits, both by value and by reference on
/// the right-hand side.
pub trait Field:
    Clone
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + Add<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + Sub<Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + Mul<Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + 'static
{
    /// Tag used in serialized documents: `"Q"` or `"Q(i)"`.
    const TAG: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(q: Rational) -> Self;
    /// Narrows a Gaussian rational into this field; `None` when it does not
    /// belong to it.
    fn from_gaussian(z: GaussianRational) -> Option<Self>;
    fn from_i64(n: i64) -> Self {
        Self::from_rational(Rational::from(n))
    }
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn conj(&self) -> Self;
    fn re(&self) -> Rational;
    fn im(&self) -> Rational;
    fn is_real(&self) -> bool {
        self.im().is_zero()
    }

    /// The unit a polynomial's coefficients are divided by to bring it into
    /// normal form. `coeffs` is non-empty and ordered leading term first.
    fn normalizing_unit(coeffs: &[&Self]) -> Self;

    fn div_exact(&self, other: &Self) -> Result<Self, AlgebraError> {
        other
            .inv()
            .map(|inv| self.clone() * inv)
            .ok_or(AlgebraError::DivisionByZero)
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc *= &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        acc
    }
}

/// Arbitrary-precision rational number in lowest terms with positive
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, AlgebraError> {
        let den = den.into();
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_big(q: BigRational) -> Self {
        Rational(q)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.0.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact conversion of a finite float.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Rational)
    }

    /// Best rational approximation with denominator at most `max_den`,
    /// computed from the continued-fraction expansion of `x`.
    pub fn approximate_f64(x: f64, max_den: u64) -> Option<Self> {
        let exact = Rational::from_f64(x)?;
        Some(exact.limit_denominator(&BigInt::from(max_den)))
    }

    /// Closest fraction to `self` whose denominator does not exceed
    /// `max_den` (convergents plus the best semiconvergent).
    pub fn limit_denominator(&self, max_den: &BigInt) -> Self {
        if self.denom() <= max_den {
            return self.clone();
        }
        let (mut p0, mut q0, mut p1, mut q1) =
            (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
        let mut n = self.numer().clone();
        let mut d = self.denom().clone();
        loop {
            let a = n.div_floor(&d);
            let q2 = &q0 + &a * &q1;
            if &q2 > max_den {
                break;
            }
            let p2 = &p0 + &a * &p1;
            p0 = std::mem::replace(&mut p1, p2);
            q0 = std::mem::replace(&mut q1, q2);
            let r = &n - &a * &d;
            n = std::mem::replace(&mut d, r);
            if d.is_zero() {
                break;
            }
        }
        let k = (max_den - &q0).div_floor(&q1);
        let bound1 = Rational(BigRational::new(&p0 + &k * &p1, &q0 + &k * &q1));
        let bound2 = Rational(BigRational::new(p1, q1));
        let d1 = (bound1.clone() - self).abs();
        let d2 = (bound2.clone() - self).abs();
        if d2 <= d1 {
            bound2
        } else {
            bound1
        }
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parse_int = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| AlgebraError::Parse(format!("invalid rational {s:?}")))
        };
        match s.split_once('/') {
            Some((n, d)) => Rational::new(parse_int(n)?, parse_int(d)?),
            None => Ok(Rational::from(parse_int(s)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($ty:ident, $tr:ident, $method:ident, $assign_tr:ident, $assign:ident) => {
        impl $tr for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                $tr::$method(self, &rhs)
            }
        }
        impl<'a> $tr<&'a $ty> for &'a $ty {
            type Output = $ty;
            fn $method(self, rhs: &'a $ty) -> $ty {
                $tr::$method(self.clone(), rhs)
            }
        }
        impl<'a> $assign_tr<&'a $ty> for $ty {
            fn $assign(&mut self, rhs: &'a $ty) {
                let lhs = std::mem::take(self);
                *self = $tr::$method(lhs, rhs);
            }
        }
    };
}

impl<'a> Add<&'a Rational> for Rational {
    type Output = Rational;
    fn add(self, rhs: &'a Rational) -> Rational {
        Rational(self.0 + &rhs.0)
    }
}
impl<'a> Sub<&'a Rational> for Rational {
    type Output = Rational;
    fn sub(self, rhs: &'a Rational) -> Rational {
        Rational(self.0 - &rhs.0)
    }
}
impl<'a> Mul<&'a Rational> for Rational {
    type Output = Rational;
    fn mul(self, rhs: &'a Rational) -> Rational {
        Rational(self.0 * &rhs.0)
    }
}
impl<'a> Div<&'a Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        Rational(self.0 / &rhs.0)
    }
}
forward_binop!(Rational, Add, add, AddAssign, add_assign);
forward_binop!(Rational, Sub, sub, SubAssign, sub_assign);
forward_binop!(Rational, Mul, mul, MulAssign, mul_assign);

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        Rational(self.0 / rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0.clone())
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::from(0), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::from(1), |acc, x| acc * x)
    }
}

impl Field for Rational {
    const TAG: &'static str = "Q";

    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn from_gaussian(z: GaussianRational) -> Option<Self> {
        z.im.is_zero().then_some(z.re)
    }
    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn re(&self) -> Rational {
        self.clone()
    }
    fn im(&self) -> Rational {
        Rational::zero()
    }

    /// Content of the coefficient list (gcd of numerators over lcm of
    /// denominators), signed like the leading coefficient.
    fn normalizing_unit(coeffs: &[&Self]) -> Self {
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for c in coeffs {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        let unit = Rational(BigRational::new(g, l));
        if coeffs[0].signum() < 0 {
            -unit
        } else {
            unit
        }
    }
}

/// Complex number with rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn i() -> Self {
        GaussianRational::new(Rational::zero(), Rational::one())
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianRational::new(Rational::from(re), Rational::from(im))
    }

    /// |z|² as an exact rational.
    pub fn norm_sqr(&self) -> Rational {
        self.re.clone() * &self.re + self.im.clone() * &self.im
    }
}

impl From<Rational> for GaussianRational {
    fn from(q: Rational) -> Self {
        GaussianRational::new(q, Rational::zero())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.signum() < 0 {
                    write!(f, "({} - {}i)", self.re, self.im.abs())
                } else {
                    write!(f, "({} + {}i)", self.re, self.im)
                }
            }
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a GaussianRational> for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &'a GaussianRational) -> GaussianRational {
        GaussianRational::new(self.re + &rhs.re, self.im + &rhs.im)
    }
}
impl<'a> Sub<&'a GaussianRational> for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &'a GaussianRational) -> GaussianRational {
        GaussianRational::new(self.re - &rhs.re, self.im - &rhs.im)
    }
}
impl<'a> Mul<&'a GaussianRational> for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &'a GaussianRational) -> GaussianRational {
        if rhs.im.is_zero() {
            return GaussianRational::new(self.re * &rhs.re, self.im * &rhs.re);
        }
        if self.im.is_zero() {
            return GaussianRational::new(rhs.re.clone() * &self.re, rhs.im.clone() * &self.re);
        }
        let re = self.re.clone() * &rhs.re - self.im.clone() * &rhs.im;
        let im = self.re * &rhs.im + self.im * &rhs.re;
        GaussianRational::new(re, im)
    }
}
forward_binop!(GaussianRational, Add, add, AddAssign, add_assign);
forward_binop!(GaussianRational, Sub, sub, SubAssign, sub_assign);
forward_binop!(GaussianRational, Mul, mul, MulAssign, mul_assign);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -self.clone()
    }
}

impl Field for GaussianRational {
    const TAG: &'static str = "Q(i)";

    fn zero() -> Self {
        GaussianRational::default()
    }
    fn one() -> Self {
        GaussianRational::from(Rational::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn from_rational(q: Rational) -> Self {
        GaussianRational::from(q)
    }
    fn from_gaussian(z: GaussianRational) -> Option<Self> {
        Some(z)
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr().inv()?;
        Some(GaussianRational::new(
            self.re.clone() * &n,
            -(self.im.clone() * &n),
        ))
    }
    fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -&self.im)
    }
    fn re(&self) -> Rational {
        self.re.clone()
    }
    fn im(&self) -> Rational {
        self.im.clone()
    }

    /// Polynomials over ℚ(i) are normalized to be monic.
    fn normalizing_unit(coeffs: &[&Self]) -> Self {
        coeffs[0].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn rational_lowest_terms() {
        let r = Rational::new(6, -4).unwrap();
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"-3/2\"");
        assert!(Rational::new(1, 0).is_err());
    }

    #[test]
    fn rational_parse_roundtrip() {
        for s in ["0", "-7", "3/5", "-12/18"] {
            let r = q(s);
            let json = serde_json::to_string(&r).unwrap();
            assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), r);
        }
        assert!("1/x".parse::<Rational>().is_err());
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussianRational::i();
        assert_eq!(i.clone() * &i, GaussianRational::from_ints(-1, 0));
    }

    #[test]
    fn gaussian_inverse_and_conj() {
        let z = GaussianRational::new(q("3/2"), q("-2"));
        assert_eq!(z.clone() * z.inv().unwrap(), GaussianRational::one());
        assert_eq!(z.conj().conj(), z);
        assert!(GaussianRational::zero().inv().is_none());
        let json = serde_json::to_string(&z).unwrap();
        assert_eq!(json, r#"{"re":"3/2","im":"-2/1"}"#);
    }

    #[test]
    fn limit_denominator_matches_convergents() {
        let pi = Rational::approximate_f64(std::f64::consts::PI, 1000).unwrap();
        assert_eq!(pi, q("355/113"));
        let third = Rational::approximate_f64(1.0 / 3.0, 1 << 20).unwrap();
        assert_eq!(third, q("1/3"));
    }

    #[test]
    fn content_normalizer() {
        let a = q("-4/3");
        let b = q("2/9");
        assert_eq!(Rational::normalizing_unit(&[&a, &b]), q("-2/9"));
    }
}
