//! Dense exact matrices with rank and kernel computations.

use super::field::Field;
use super::poly::MultiPoly;
use crate::error::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> ExactMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    /// Builds a matrix from equal-length rows.
    pub fn from_rows(rows: &[Vec<F>]) -> Result<Self, AlgebraError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(AlgebraError::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend(r.iter().cloned());
        }
        Ok(ExactMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Rank by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut prev = F::one();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(p, rank);
            let pivot = m.get(rank, col).clone();
            let prev_inv = prev.inv().expect("Bareiss pivots are nonzero");
            for r in rank + 1..m.rows {
                let lead = m.get(r, col).clone();
                for c in col + 1..m.cols {
                    let v = (m.get(r, c).clone() * &pivot - lead.clone() * m.get(rank, c))
                        * &prev_inv;
                    m.data[r * m.cols + c] = v;
                }
                m.data[r * m.cols + col] = F::zero();
            }
            prev = pivot;
            rank += 1;
        }
        rank
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(p, row);
            let inv = m.get(row, col).inv().expect("nonzero pivot");
            for c in col..m.cols {
                let v = m.get(row, c).clone() * &inv;
                m.data[row * m.cols + c] = v;
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let v = m.get(r, c).clone() - factor.clone() * m.get(row, c);
                    m.data[r * m.cols + c] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Basis of the right kernel `{x : A x = 0}`, one vector per free
    /// column, each with a 1 in its free coordinate.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f).clone();
                }
                v
            })
            .collect()
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        (0..self.rows)
            .map(|r| dot(self.row(r), v))
            .collect()
    }
}

/// Bilinear pairing Σ aₖbₖ (no conjugation).
pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .fold(F::zero(), |acc, (x, y)| acc + x.clone() * y)
}

/// Rank of a list of vectors.
pub fn vectors_rank<F: Field>(vectors: &[Vec<F>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    ExactMatrix::from_rows(vectors)
        .expect("vectors share a length")
        .rank()
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span<F: Field>(basis: &[Vec<F>], v: &[F]) -> bool {
    let base = vectors_rank(basis);
    let mut ext = basis.to_vec();
    ext.push(v.to_vec());
    vectors_rank(&ext) == base
}

/// Whether two lists of vectors span the same subspace.
pub fn same_span<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> bool {
    let ra = vectors_rank(a);
    if ra != vectors_rank(b) {
        return false;
    }
    let mut both = a.to_vec();
    both.extend(b.iter().cloned());
    vectors_rank(&both) == ra
}

/// Rank of the stacked gradients of `polys` at `point`. An empty list has
/// rank 0.
pub fn jacobian_rank<F: Field>(polys: &[MultiPoly<F>], point: &[F]) -> Result<usize, AlgebraError> {
    let Some(first) = polys.first() else {
        return Ok(0);
    };
    let nvars = first.nvars();
    if let Some(bad) = polys.iter().find(|p| p.nvars() != nvars) {
        return Err(AlgebraError::DimensionMismatch {
            expected: nvars,
            got: bad.nvars(),
        });
    }
    let rows = polys
        .iter()
        .map(|p| p.gradient(point))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExactMatrix::from_rows(&rows)?.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{GaussianRational, Rational};
    use crate::algebra::poly::{COMPLEX_VARS, REAL4_VARS};

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    fn qrow(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x)).collect()
    }

    /// Plain Gaussian elimination with division, used as an independent
    /// rank oracle.
    fn oracle_rank(rows: &[Vec<Rational>]) -> usize {
        let mut m = rows.to_vec();
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
                continue;
            };
            m.swap(p, rank);
            let pivot = m[rank].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != rank && !row[c].is_zero() {
                    let f = row[c].clone() / pivot[c].clone();
                    for (x, p) in row.iter_mut().zip(&pivot) {
                        *x = x.clone() - f.clone() * p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn rank_matches_oracle() {
        let cases = vec![
            vec![qrow(&[1, 2, 3]), qrow(&[2, 4, 6]), qrow(&[0, 1, 1])],
            vec![qrow(&[0, 0]), qrow(&[0, 0])],
            vec![qrow(&[1, 0, 0, 0]), qrow(&[0, 1, 0, 0])],
            vec![qrow(&[3, -1, 2]), qrow(&[1, 1, 1]), qrow(&[5, 1, 4]), qrow(&[0, 0, 7])],
        ];
        for rows in cases {
            let m = ExactMatrix::from_rows(&rows).unwrap();
            assert_eq!(m.rank(), oracle_rank(&rows));
        }
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = ExactMatrix::from_rows(&[qrow(&[0, -1, 0, 1]), qrow(&[1, 0, 1, 0])]).unwrap();
        let ker = m.kernel();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        assert!(same_span(&ker, &[qrow(&[1, 0, -1, 0]), qrow(&[0, 1, 0, 1])]));
    }

    #[test]
    fn jacobian_rank_cases() {
        let parse = |s: &str| MultiPoly::<Rational>::parse(s, &REAL4_VARS).unwrap();
        let origin = qrow(&[0, 0, 0, 0]);
        assert_eq!(jacobian_rank(&[parse("x1"), parse("y1")], &origin).unwrap(), 2);
        assert_eq!(jacobian_rank(&[parse("x1^2"), parse("x1*y1")], &origin).unwrap(), 0);
        assert_eq!(jacobian_rank::<Rational>(&[], &origin).unwrap(), 0);
    }

    #[test]
    fn nodal_cubic_is_singular_at_origin() {
        let f = MultiPoly::<GaussianRational>::parse("z2^2 - z1^2*(z1+1)", &COMPLEX_VARS).unwrap();
        let origin = vec![GaussianRational::zero(); 2];
        // ∇f = (-3z1^2 - 2z1, 2z2) vanishes at the origin.
        let g = f.gradient(&origin).unwrap();
        assert!(g.iter().all(|x| x.is_zero()));
        assert_eq!(jacobian_rank(std::slice::from_ref(&f), &origin).unwrap(), 0);
        let p = vec![GaussianRational::from_ints(-1, 0), GaussianRational::zero()];
        assert_eq!(jacobian_rank(&[f], &p).unwrap(), 1);
    }
}
