use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;
use super::LatticeError;

/// Some rational `x` with `A x = b`, or `None` if the system is inconsistent.
///
/// Gauss-Jordan elimination taking, in each column, the topmost usable row as
/// pivot; free variables are set to zero.
pub fn solve_rational(
    a: &IntMatrix,
    b: &[BigInt],
) -> Result<Option<Vec<BigRational>>, LatticeError> {
    let rhs: Vec<BigRational> = b.iter().cloned().map(BigRational::from_integer).collect();
    solve_rational_rhs(a, &rhs)
}

pub fn solve_rational_rhs(
    a: &IntMatrix,
    b: &[BigRational],
) -> Result<Option<Vec<BigRational>>, LatticeError> {
    if b.len() != a.rows() {
        return Err(LatticeError::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    let (m, n) = (a.rows(), a.cols());
    let mut aug: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row: Vec<BigRational> = a
                .row(i)
                .iter()
                .cloned()
                .map(BigRational::from_integer)
                .collect();
            row.push(b[i].clone());
            row
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| !aug[i][c].is_zero()) else {
            continue;
        };
        aug.swap(r, p);
        let inv = BigRational::one() / aug[r][c].clone();
        for x in aug[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m {
            if i == r || aug[i][c].is_zero() {
                continue;
            }
            let f = aug[i][c].clone();
            let pivot_row = aug[r].clone();
            for (x, p) in aug[i].iter_mut().zip(&pivot_row).skip(c) {
                *x -= &f * p;
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    if aug[r..].iter().any(|row| !row[n].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = aug[i][n].clone();
    }
    Ok(Some(x))
}
