//! The dictionary between curves in ℂ² and surfaces in ℝ⁴: the embedding
//! ι, real/imaginary splitting, the Cauchy–Riemann equations, the complex
//! structure J, and the exceptional planes Π₁, Π₂.

use serde::{Deserialize, Serialize};

use crate::algebra::matrix::{dot, vectors_rank};
use crate::algebra::{CPoly, Field, GaussianRational, MultiPoly, QPoly, Rational};
use crate::error::{AlgebraError, Error, Result};

/// A complex algebraic curve `f(z1, z2) = 0` with a declared degree bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexCurve {
    f: CPoly,
    degree_bound: u32,
}

impl ComplexCurve {
    pub fn new(f: CPoly, degree_bound: u32) -> Result<Self> {
        if f.nvars() != 2 {
            return Err(AlgebraError::DimensionMismatch {
                expected: 2,
                got: f.nvars(),
            }
            .into());
        }
        if f.is_zero() {
            return Err(AlgebraError::ZeroPolynomial.into());
        }
        if f.total_degree() > degree_bound {
            return Err(Error::InvalidInput(format!(
                "curve degree {} exceeds bound {degree_bound}",
                f.total_degree()
            )));
        }
        Ok(ComplexCurve { f, degree_bound })
    }

    /// Curve whose degree bound is its own degree.
    pub fn from_poly(f: CPoly) -> Result<Self> {
        let d = f.total_degree();
        Self::new(f, d)
    }

    pub fn poly(&self) -> &CPoly {
        &self.f
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }
}

/// Real and imaginary parts `(u, v)` of a complex polynomial, as
/// polynomials in `(x1, y1, x2, y2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealPair {
    pub u: QPoly,
    pub v: QPoly,
}

/// ι(x1 + i·y1, x2 + i·y2) = (x1, y1, x2, y2).
pub fn iota(z: &[GaussianRational; 2]) -> [Rational; 4] {
    [
        z[0].re.clone(),
        z[0].im.clone(),
        z[1].re.clone(),
        z[1].im.clone(),
    ]
}

pub fn iota_inv(p: &[Rational; 4]) -> [GaussianRational; 2] {
    [
        GaussianRational::new(p[0].clone(), p[1].clone()),
        GaussianRational::new(p[2].clone(), p[3].clone()),
    ]
}

/// Writes `f(x1 + i·y1, x2 + i·y2) = u + i·v`.
pub fn realify_poly(f: &CPoly) -> RealPair {
    let n = f.nvars();
    let subs: Vec<CPoly> = (0..n)
        .map(|k| {
            let x = CPoly::var(2 * n, 2 * k);
            let y = CPoly::var(2 * n, 2 * k + 1).scale(&GaussianRational::i());
            &x + &y
        })
        .collect();
    let expanded = f.substitute(&subs).expect("substitution arity matches");
    let (u, v) = expanded.split_re_im();
    RealPair { u, v }
}

pub fn realify(curve: &ComplexCurve) -> RealPair {
    realify_poly(curve.poly())
}

/// Outcome of checking the Cauchy–Riemann equations symbolically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CauchyRiemannCheck {
    pub holds: bool,
    /// `∂u/∂x_k − ∂v/∂y_k` and `∂u/∂y_k + ∂v/∂x_k` for k = 1, 2.
    pub residuals: Vec<QPoly>,
}

pub fn check_cauchy_riemann(pair: &RealPair) -> CauchyRiemannCheck {
    let mut residuals = Vec::with_capacity(4);
    for k in 0..2 {
        let (x, y) = (2 * k, 2 * k + 1);
        residuals.push(&pair.u.partial(x) - &pair.v.partial(y));
        residuals.push(&pair.u.partial(y) + &pair.v.partial(x));
    }
    CauchyRiemannCheck {
        holds: residuals.iter().all(MultiPoly::is_zero),
        residuals,
    }
}

/// J(w1, w2, w3, w4) = (−w2, w1, −w4, w3).
pub fn j_apply<T>(w: &[T]) -> Result<Vec<T>, AlgebraError>
where
    T: Clone + std::ops::Neg<Output = T>,
{
    if w.len() != 4 {
        return Err(AlgebraError::DimensionMismatch {
            expected: 4,
            got: w.len(),
        });
    }
    Ok(vec![
        -w[1].clone(),
        w[0].clone(),
        -w[3].clone(),
        w[2].clone(),
    ])
}

/// λ with `a2 = −λ·a1` and `a4 = −λ·a3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lambda {
    PlusI,
    MinusI,
}

impl Lambda {
    pub fn value(self) -> GaussianRational {
        match self {
            Lambda::PlusI => GaussianRational::i(),
            Lambda::MinusI => -GaussianRational::i(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrClass {
    /// `a` and `J a` are linearly independent over ℂ.
    Independent,
    /// Dependent, witnessed by λ = ±i.
    Dependent(Lambda),
    Zero,
}

fn satisfies_lambda(a: &[GaussianRational; 4], lambda: Lambda) -> bool {
    let l = lambda.value();
    a[1] == -(l.clone() * &a[0]) && a[3] == -(l * &a[2])
}

/// Classifies `a ∈ ℂ⁴` by whether `a` and `J a` are independent; when they
/// are not, reports the λ ∈ {+i, −i} with `a2 = −λ a1`, `a4 = −λ a3`.
pub fn classify_cr_vector(a: &[GaussianRational; 4]) -> CrClass {
    if a.iter().all(Field::is_zero) {
        return CrClass::Zero;
    }
    let ja = j_apply(a).expect("length 4");
    if vectors_rank(&[a.to_vec(), ja]) == 2 {
        return CrClass::Independent;
    }
    if satisfies_lambda(a, Lambda::PlusI) {
        CrClass::Dependent(Lambda::PlusI)
    } else if satisfies_lambda(a, Lambda::MinusI) {
        CrClass::Dependent(Lambda::MinusI)
    } else {
        unreachable!("a nonzero vector with a, Ja dependent satisfies a2 = ∓i·a1, a4 = ∓i·a3")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlaneTag {
    Pi1,
    Pi2,
}

/// One of the planes Π₁ = {a2 = −i a1, a4 = −i a3} and Π₂ = conj(Π₁).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrPlane {
    pub tag: PlaneTag,
    pub basis: [[GaussianRational; 4]; 2],
}

impl CrPlane {
    pub fn pi1() -> Self {
        let (o, z, mi) = (
            GaussianRational::one(),
            GaussianRational::zero(),
            -GaussianRational::i(),
        );
        CrPlane {
            tag: PlaneTag::Pi1,
            basis: [
                [o.clone(), mi.clone(), z.clone(), z.clone()],
                [z.clone(), z, o, mi],
            ],
        }
    }

    pub fn pi2() -> Self {
        Self::pi1().conj()
    }

    pub fn conj(&self) -> Self {
        let tag = match self.tag {
            PlaneTag::Pi1 => PlaneTag::Pi2,
            PlaneTag::Pi2 => PlaneTag::Pi1,
        };
        let basis = self.basis.clone().map(|v| v.map(|c| c.conj()));
        CrPlane { tag, basis }
    }

    pub fn contains(&self, a: &[GaussianRational; 4]) -> bool {
        let sign = match self.tag {
            PlaneTag::Pi1 => -GaussianRational::i(),
            PlaneTag::Pi2 => GaussianRational::i(),
        };
        a[1] == sign.clone() * &a[0] && a[3] == sign * &a[2]
    }

    pub fn basis_vectors(&self) -> Vec<Vec<GaussianRational>> {
        self.basis.iter().map(|v| v.to_vec()).collect()
    }
}

/// Which of Π₁, Π₂ the tangent space `{w : ⟨∇P(p), w⟩ = 0}` contains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PiContainment {
    None,
    Pi1,
    Pi2,
    Both,
}

/// Tests whether the complexified gradient of `P` at `p` annihilates both
/// basis vectors of Π₁ (resp. Π₂).
pub fn tangent_contains_pi<F: Field>(p_poly: &MultiPoly<F>, p: &[F]) -> Result<PiContainment> {
    if p_poly.nvars() != 4 {
        return Err(AlgebraError::DimensionMismatch {
            expected: 4,
            got: p_poly.nvars(),
        }
        .into());
    }
    let grad: Vec<GaussianRational> = p_poly
        .gradient(p)?
        .into_iter()
        .map(|c| GaussianRational::new(c.re(), c.im()))
        .collect();
    if grad.iter().all(Field::is_zero) {
        return Err(Error::SingularPoint);
    }
    let annihilates =
        |plane: &CrPlane| plane.basis.iter().all(|b| dot(&grad, b).is_zero());
    Ok(
        match (annihilates(&CrPlane::pi1()), annihilates(&CrPlane::pi2())) {
            (false, false) => PiContainment::None,
            (true, false) => PiContainment::Pi1,
            (false, true) => PiContainment::Pi2,
            (true, true) => PiContainment::Both,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{COMPLEX_VARS, REAL4_VARS};

    fn c(s: &str) -> CPoly {
        CPoly::parse(s, &COMPLEX_VARS).unwrap()
    }

    fn r(s: &str) -> QPoly {
        QPoly::parse(s, &REAL4_VARS).unwrap()
    }

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    #[test]
    fn iota_examples() {
        let zero = [g(0, 0), g(0, 0)];
        assert!(iota(&zero).iter().all(|x| x.is_zero()));
        let p = [g(1, 2), g(3, 4)];
        let img = iota(&p);
        assert_eq!(img.clone().map(|x| x.to_f64()), [1.0, 2.0, 3.0, 4.0]);
        assert_eq!(iota_inv(&img), p);
    }

    #[test]
    fn realify_examples() {
        let pair = realify_poly(&c("z1"));
        assert_eq!((pair.u, pair.v), (r("x1"), r("y1")));
        let pair = realify_poly(&c("z1*z2"));
        assert_eq!(pair.u, r("x1*x2 - y1*y2"));
        assert_eq!(pair.v, r("x1*y2 + y1*x2"));
        let pair = realify_poly(&c("z1^2 - z2"));
        assert_eq!(pair.u, r("x1^2 - y1^2 - x2"));
        assert_eq!(pair.v, r("2*x1*y1 - y2"));
    }

    #[test]
    fn cauchy_riemann_examples() {
        assert!(check_cauchy_riemann(&realify_poly(&c("z1*z2"))).holds);
        let anti = RealPair {
            u: r("x1"),
            v: r("-y1"),
        };
        let check = check_cauchy_riemann(&anti);
        assert!(!check.holds);
        assert!(!check.residuals[0].is_zero());
        let lone = RealPair {
            u: r("x1^2"),
            v: r("0"),
        };
        assert!(!check_cauchy_riemann(&lone).holds);
    }

    #[test]
    fn j_examples() {
        let e1: Vec<Rational> = [1, 0, 0, 0].into_iter().map(Rational::from).collect();
        let je1: Vec<Rational> = [0, 1, 0, 0].into_iter().map(Rational::from).collect();
        assert_eq!(j_apply(&e1).unwrap(), je1);
        assert!(j_apply(&e1[..3]).is_err());
    }

    #[test]
    fn classify_examples() {
        let a = [g(1, 0), g(0, -1), g(0, 0), g(0, 0)];
        assert_eq!(classify_cr_vector(&a), CrClass::Dependent(Lambda::PlusI));
        assert!(CrPlane::pi1().contains(&a));
        let e1 = [g(1, 0), g(0, 0), g(0, 0), g(0, 0)];
        assert_eq!(classify_cr_vector(&e1), CrClass::Independent);
        let zero = [g(0, 0), g(0, 0), g(0, 0), g(0, 0)];
        assert_eq!(classify_cr_vector(&zero), CrClass::Zero);
        let b = [g(0, 0), g(0, 0), g(2, 0), g(0, 2)];
        assert_eq!(classify_cr_vector(&b), CrClass::Dependent(Lambda::MinusI));
    }

    #[test]
    fn planes_are_conjugate_and_span() {
        let (p1, p2) = (CrPlane::pi1(), CrPlane::pi2());
        assert_eq!(p1.conj(), p2);
        assert_eq!(p2.conj(), p1);
        let mut all = p1.basis_vectors();
        all.extend(p2.basis_vectors());
        assert_eq!(vectors_rank(&all), 4);
        for v in &p2.basis {
            assert!(p2.contains(v));
            assert!(!p1.contains(v));
        }
    }

    #[test]
    fn tangent_pi_examples() {
        let pt: Vec<Rational> = ["1/2", "3", "-1", "0"].iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(
            tangent_contains_pi(&r("y2 - y1"), &pt).unwrap(),
            PiContainment::None
        );
        assert_eq!(
            tangent_contains_pi(&r("x2 + y2"), &pt).unwrap(),
            PiContainment::None
        );
        let origin = vec![Rational::zero(); 4];
        assert!(matches!(
            tangent_contains_pi(&r("x1^2 + y1^2"), &origin),
            Err(Error::SingularPoint)
        ));
    }

    #[test]
    fn complex_gradient_can_contain_pi() {
        // ∇P = (1, −i, 0, 0) annihilates Π₁'s basis under the bilinear pairing.
        let p = CPoly::parse("x1 - i*y1", &REAL4_VARS).unwrap();
        let pt = vec![GaussianRational::zero(); 4];
        assert_eq!(tangent_contains_pi(&p, &pt).unwrap(), PiContainment::Pi1);
        let q = CPoly::parse("x1 + i*y1", &REAL4_VARS).unwrap();
        assert_eq!(tangent_contains_pi(&q, &pt).unwrap(), PiContainment::Pi2);
    }
}
