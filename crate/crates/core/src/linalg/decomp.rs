use alloc::vec::Vec;

use super::DenseMatrix;
use crate::{Error, Result};

/// LU factorization with partial pivoting, `P M = L U`.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: DenseMatrix,
    perm: Vec<usize>,
    parity: f64,
    min_pivot: f64,
}

impl Lu {
    pub fn new(m: &DenseMatrix) -> Result<Self> {
        m.require_square()?;
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let n = m.rows();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut parity = 1.0;
        let mut min_pivot = f64::INFINITY;
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|i| (i, libm::fabs(lu[(i, k)])))
                .fold((k, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc });
            min_pivot = min_pivot.min(best);
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
                parity = -parity;
            }
            let pivot = lu[(k, k)];
            if pivot == 0.0 {
                continue;
            }
            for i in (k + 1)..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor != 0.0 {
                    for j in (k + 1)..n {
                        lu[(i, j)] -= factor * lu[(k, j)];
                    }
                }
            }
        }
        if n == 0 {
            min_pivot = 0.0;
        }
        Ok(Self {
            lu,
            perm,
            parity,
            min_pivot,
        })
    }

    pub fn determinant(&self) -> f64 {
        (0..self.lu.rows()).fold(self.parity, |d, i| d * self.lu[(i, i)])
    }

    /// Singular when some pivot is at or below `tol`.
    pub fn is_singular(&self, tol: f64) -> bool {
        self.lu.rows() > 0 && self.min_pivot <= tol
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.lu.rows();
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        if self.is_singular(0.0) {
            return Err(Error::SingularBlock);
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                x[i] -= self.lu[(i, k)] * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                x[i] -= self.lu[(i, k)] * x[k];
            }
            x[i] /= self.lu[(i, i)];
        }
        Ok(x)
    }

    pub fn solve_matrix(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        let cols: Result<Vec<Vec<f64>>> = (0..b.cols()).map(|j| self.solve(&b.column(j))).collect();
        let cols = cols?;
        Ok(DenseMatrix::from_fn(b.rows(), b.cols(), |i, j| cols[j][i]))
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        self.solve_matrix(&DenseMatrix::identity(self.lu.rows()))
    }
}

/// Floating-point determinant by partial-pivoting LU.
pub fn determinant(m: &DenseMatrix) -> Result<f64> {
    Ok(Lu::new(m)?.determinant())
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix,
/// or `None` if a nonpositive pivot shows up.
pub fn cholesky(m: &DenseMatrix) -> Result<Option<DenseMatrix>> {
    m.require_square()?;
    let n = m.rows();
    let mut l = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > 0.0) {
            return Ok(None);
        }
        let d = libm::sqrt(d);
        l[(j, j)] = d;
        for i in (j + 1)..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(Some(l))
}

/// 1-norm condition number `‖M‖₁ ‖M⁻¹‖₁`, infinite for singular input.
pub fn condition_estimate(m: &DenseMatrix) -> Result<f64> {
    let lu = Lu::new(m)?;
    if lu.is_singular(0.0) {
        return Ok(f64::INFINITY);
    }
    Ok(m.norm_1() * lu.inverse()?.norm_1())
}

fn forward_substitute(l: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let mut y = b.clone();
    for c in 0..b.cols() {
        for i in 0..l.rows() {
            let mut s = y[(i, c)];
            for k in 0..i {
                s -= l[(i, k)] * y[(k, c)];
            }
            y[(i, c)] = s / l[(i, i)];
        }
    }
    y
}

fn backward_substitute_transposed(l: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let n = l.rows();
    let mut x = b.clone();
    for c in 0..b.cols() {
        for i in (0..n).rev() {
            let mut s = x[(i, c)];
            for k in (i + 1)..n {
                s -= l[(k, i)] * x[(k, c)];
            }
            x[(i, c)] = s / l[(i, i)];
        }
    }
    x
}

/// Result of eliminating the trailing block of a square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SchurReduction {
    /// `M11 - M12 M22⁻¹ M21`.
    pub reduced: DenseMatrix,
    /// `-M22⁻¹ M21`: eliminated variables as a function of retained ones.
    pub elimination_map: DenseMatrix,
}

/// Schur complement of the block starting at row/column `split`.
///
/// When `M` is exactly symmetric and `M22` is definite, the complement is
/// formed as `M11 ∓ YᵀY` from a Cholesky factor, which keeps the result
/// exactly symmetric. Otherwise an LU factorization of `M22` is used.
pub fn schur_reduce(m: &DenseMatrix, split: usize) -> Result<SchurReduction> {
    m.require_square()?;
    let n = m.rows();
    if split == 0 || split >= n {
        return Err(Error::InvalidSplit { split, n });
    }
    let m11 = m.submatrix(0..split, 0..split);
    let m12 = m.submatrix(0..split, split..n);
    let m21 = m.submatrix(split..n, 0..split);
    let m22 = m.submatrix(split..n, split..n);

    if m.asymmetry()? == 0.0 {
        for sign in [1.0, -1.0] {
            let block = if sign > 0.0 { m22.clone() } else { m22.neg() };
            if let Some(l) = cholesky(&block)? {
                // sign * M22 = L Lᵀ, so M12 M22⁻¹ M21 = sign * (L⁻¹M21)ᵀ(L⁻¹M21).
                let y = forward_substitute(&l, &m21);
                let gram = y.transpose().matmul(&y)?;
                let reduced = if sign > 0.0 {
                    m11.sub(&gram)?
                } else {
                    m11.add(&gram)?
                };
                let solved = backward_substitute_transposed(&l, &y);
                let elimination_map = if sign > 0.0 { solved.neg() } else { solved };
                return Ok(SchurReduction {
                    reduced,
                    elimination_map,
                });
            }
        }
    }

    let lu = Lu::new(&m22)?;
    let scale = m22.max_abs();
    if lu.is_singular(m22.rows() as f64 * f64::EPSILON * scale) {
        return Err(Error::SingularBlock);
    }
    let solved = lu.solve_matrix(&m21)?;
    let reduced = m11.sub(&m12.matmul(&solved)?)?;
    Ok(SchurReduction {
        reduced,
        elimination_map: solved.neg(),
    })
}
