//! Sylvester resultants over multivariate coefficient rings.

use super::field::Field;
use super::poly::MultiPoly;
use crate::error::AlgebraError;

/// Sylvester resultant of `f` and `g` with respect to variable `var`.
///
/// The result lives in the same variable set with `var` absent. It is the
/// zero polynomial exactly when `f` and `g` share a factor of positive
/// degree in `var`.
pub fn resultant<F: Field>(
    f: &MultiPoly<F>,
    g: &MultiPoly<F>,
    var: usize,
) -> Result<MultiPoly<F>, AlgebraError> {
    if f.nvars() != g.nvars() {
        return Err(AlgebraError::DimensionMismatch {
            expected: f.nvars(),
            got: g.nvars(),
        });
    }
    if var >= f.nvars() {
        return Err(AlgebraError::VariableOutOfRange {
            index: var,
            nvars: f.nvars(),
        });
    }
    if f.is_zero() || g.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let m = f.degree_in(var) as usize;
    let n = g.degree_in(var) as usize;
    if m == 0 && n == 0 {
        return Err(AlgebraError::ConstantInVariable);
    }
    let fc = f.coefficients_in(var);
    let gc = g.coefficients_in(var);
    let size = m + n;
    let nvars = f.nvars();
    let mut mat = vec![vec![MultiPoly::zero(nvars); size]; size];
    // n shifted copies of f followed by m shifted copies of g, highest
    // power first.
    for r in 0..n {
        for k in 0..=m {
            mat[r][r + k] = fc[m - k].clone();
        }
    }
    for r in 0..m {
        for k in 0..=n {
            mat[n + r][r + k] = gc[n - k].clone();
        }
    }
    Ok(bareiss_det(mat, nvars))
}

/// Determinant of a square matrix of polynomials by Bareiss elimination;
/// every division is exact.
fn bareiss_det<F: Field>(mut m: Vec<Vec<MultiPoly<F>>>, nvars: usize) -> MultiPoly<F> {
    let size = m.len();
    if size == 0 {
        return MultiPoly::one(nvars);
    }
    let mut sign_flip = false;
    let mut prev = MultiPoly::one(nvars);
    for k in 0..size {
        let Some(p) = (k..size).find(|&r| !m[r][k].is_zero()) else {
            return MultiPoly::zero(nvars);
        };
        if p != k {
            m.swap(p, k);
            sign_flip = !sign_flip;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss quotients are exact");
            }
            m[i][k] = MultiPoly::zero(nvars);
        }
        prev = m[k][k].clone();
    }
    let det = m[size - 1][size - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{GaussianRational, Rational};
    use crate::algebra::poly::COMPLEX_VARS;

    type CPoly = MultiPoly<GaussianRational>;

    fn c(s: &str) -> CPoly {
        CPoly::parse(s, &COMPLEX_VARS).unwrap()
    }

    fn equal_up_to_sign(a: &CPoly, b: &CPoly) -> bool {
        a == b || *a == -b
    }

    #[test]
    fn two_lines() {
        let r = resultant(&c("z2 - z1"), &c("z2 + z1"), 1).unwrap();
        assert!(equal_up_to_sign(&r, &c("-2*z1")));
    }

    #[test]
    fn identical_polys_give_zero() {
        let f = c("z2^2 + i*z1*z2 - 3");
        assert!(resultant(&f, &f, 1).unwrap().is_zero());
    }

    #[test]
    fn parabola_against_axis() {
        let r = resultant(&c("z2^2 - z1"), &c("z2"), 1).unwrap();
        assert!(equal_up_to_sign(&r, &c("z1")));
    }

    #[test]
    fn constant_in_variable_rejected() {
        assert_eq!(
            resultant(&c("z1"), &c("z1 + 1"), 1),
            Err(AlgebraError::ConstantInVariable)
        );
    }

    #[test]
    fn one_side_constant() {
        // Res(f, c) = c^deg f when g is constant in the variable.
        let r = resultant(&c("z2^3 + z1"), &c("2*z1"), 1).unwrap();
        assert_eq!(r, c("8*z1^3"));
    }

    #[test]
    fn univariate_common_root() {
        let x = |s: &str| MultiPoly::<Rational>::parse(s, &["x"]).unwrap();
        let r = resultant(&x("(x-1)*(x+2)"), &x("(x-1)*(x-5)"), 0).unwrap();
        assert!(r.is_zero());
        let r = resultant(&x("x^2 - 2"), &x("x - 1"), 0).unwrap();
        assert!(!r.is_zero());
    }
}
