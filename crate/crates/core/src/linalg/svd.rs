use alloc::vec::Vec;

use super::{dot, DenseMatrix};

const MAX_SWEEPS: usize = 80;

/// One-sided (Hestenes) Jacobi: orthogonalizes the columns of `M V`.
/// Returns the column norms (singular values, one per column of `M`) and `V`.
fn jacobi_svd(m: &DenseMatrix) -> (Vec<f64>, DenseMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    // Work on columns for contiguous access.
    let mut u: Vec<Vec<f64>> = (0..cols).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..cols)
        .map(|j| (0..cols).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha = dot(&u[p], &u[p]);
                let beta = dot(&u[q], &u[q]);
                let gamma = dot(&u[p], &u[q]);
                if gamma == 0.0 || libm::fabs(gamma) <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = libm::copysign(1.0, zeta) / (libm::fabs(zeta) + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                rotate(&mut u, p, q, c, s, rows);
                rotate(&mut v, p, q, c, s, cols);
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = u.iter().map(|c| libm::sqrt(dot(c, c))).collect();
    let v = DenseMatrix::from_fn(cols, cols, |i, j| v[j][i]);
    (sigma, v)
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64, len: usize) {
    for k in 0..len {
        let a = cols[p][k];
        let b = cols[q][k];
        cols[p][k] = c * a - s * b;
        cols[q][k] = s * a + c * b;
    }
}

/// The `min(rows, cols)` singular values in descending order.
pub fn singular_values(m: &DenseMatrix) -> Vec<f64> {
    let (mut s, _) = jacobi_svd(m);
    s.sort_by(|a, b| b.total_cmp(a));
    s.truncate(m.rows().min(m.cols()));
    s
}

/// Numerical rank and an orthonormal basis of the numerical null space.
#[derive(Clone, Debug, PartialEq)]
pub struct RankKernel {
    pub rank: usize,
    /// Orthonormal vectors of length `cols`.
    pub kernel: Vec<Vec<f64>>,
    /// All column norms of `M V`, descending; entries past
    /// `min(rows, cols)` are round-off.
    pub singular_values: Vec<f64>,
    /// Absolute cutoff applied to the singular values.
    pub threshold: f64,
}

impl RankKernel {
    pub fn corank(&self) -> usize {
        self.kernel.len()
    }
}

/// Rank and kernel of `m`. Singular values above `tol * σ_max` count toward the
/// rank; `tol` defaults to `max(rows, cols) * ε`.
pub fn rank_kernel(m: &DenseMatrix, tol: Option<f64>) -> RankKernel {
    let (sigma, v) = jacobi_svd(m);
    let largest = sigma.iter().copied().fold(0.0, f64::max);
    let tol = tol.unwrap_or(m.rows().max(m.cols()) as f64 * f64::EPSILON);
    let threshold = tol * largest;
    let mut rank = 0;
    let mut kernel = Vec::new();
    for (j, &s) in sigma.iter().enumerate() {
        if largest > 0.0 && s > threshold {
            rank += 1;
        } else {
            kernel.push(v.column(j));
        }
    }
    // Rank cannot exceed min(rows, cols); for wide matrices the extra
    // column norms are already tiny and land in the kernel.
    let mut singular_values = sigma;
    singular_values.sort_by(|a, b| b.total_cmp(a));
    RankKernel {
        rank,
        kernel,
        singular_values,
        threshold,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn zero_matrix_has_full_kernel() {
        let rk = rank_kernel(&DenseMatrix::zeros(2, 2), None);
        assert_eq!(rk.rank, 0);
        assert_eq!(rk.kernel.len(), 2);
    }

    #[test]
    fn diagonal_singular_values() {
        let m = DenseMatrix::from_diagonal(&[3.0, -5.0, 0.0]);
        assert_eq!(singular_values(&m), vec![5.0, 3.0, 0.0]);
        let rk = rank_kernel(&m, None);
        assert_eq!(rk.rank, 2);
        assert_eq!(rk.kernel, vec![vec![0.0, 0.0, 1.0]]);
    }

    #[test]
    fn wide_matrix_kernel() {
        // Incidence of the path 0-1-2 transposed is 2x3 with kernel span{1}.
        let m = DenseMatrix::from_rows(&[[1.0, -1.0, 0.0], [0.0, 1.0, -1.0]]).unwrap();
        let rk = rank_kernel(&m, None);
        assert_eq!(rk.rank, 2);
        let k = &rk.kernel[0];
        let s = 1.0 / libm::sqrt(3.0);
        for x in k {
            assert!((libm::fabs(*x) - s).abs() < 1e-12);
        }
    }
}
