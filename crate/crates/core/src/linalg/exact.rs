use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{DenseMatrix, Rational};
use crate::Result;

/// Exact rational value of a finite `f64` (every finite double is a dyadic
/// rational). Returns `None` for NaN or infinities.
pub fn rational_from_f64(value: f64) -> Option<Rational> {
    Rational::from_float(value)
}

/// Exact determinant of a rational matrix.
///
/// Each row is scaled by the lcm of its denominators so the elimination runs
/// over integers with Bareiss' fraction-free update; the row scalings are
/// divided out at the end.
pub fn determinant_exact(m: &DenseMatrix<Rational>) -> Result<Rational> {
    m.require_square()?;
    let n = m.rows();
    if n == 0 {
        return Ok(Rational::one());
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let row = m.row(i);
        let lcm = row
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        a.push(
            row.iter()
                .map(|v| v.numer() * (&lcm / v.denom()))
                .collect(),
        );
        scale *= lcm;
    }

    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return Ok(Rational::zero()),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                // Exact by Sylvester's identity.
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    Ok(Rational::new(sign * &a[n - 1][n - 1], scale))
}

/// Reduced row echelon form over the rationals, with zero rows dropped.
///
/// The returned rows are a canonical basis of the row space: each starts
/// with a 1 in its pivot column, and pivot columns are zero elsewhere.
/// For a matrix `J` they are the relations `row · x = 0` that cut out
/// `ker J`.
pub fn row_space_basis(m: &DenseMatrix<Rational>) -> Vec<Vec<Rational>> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.to_rows();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let inv = a[rank][c].recip();
        for v in a[rank].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != rank && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let d = &f * &a[rank][j];
                    a[i][j] -= d;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    a.truncate(rank);
    a
}
