use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Smith normal form `U * A * V = S` with `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    /// Inverse of `u`, maintained alongside it.
    pub u_inv: IntMatrix,
    /// Nonzero diagonal entries of `s`, each dividing the next.
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

/// Pivots on the smallest nonzero absolute value in the remaining block, ties
/// broken by row index then column index.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut u_inv = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut factors = Vec::new();

    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = smallest_entry(&s, t) else {
                return finish(u, s, v, u_inv, factors);
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = s.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..m {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = -(s.get(i, t) / &pivot);
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                // inverse of row_i += q row_t is col_t -= q col_i
                u_inv.add_col_multiple(t, i, &-&q);
                clean &= s.get(i, t).is_zero();
            }
            for j in t + 1..n {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = -(s.get(t, j) / &pivot);
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= s.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row t and repeat
            let offending =
                (t + 1..m).find(|&i| (t + 1..n).any(|j| !s.get(i, j).mod_floor(&pivot).is_zero()));
            match offending {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                    u_inv.add_col_multiple(i, t, &-one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        factors.push(s.get(t, t).clone());
    }
    finish(u, s, v, u_inv, factors)
}

fn finish(
    u: IntMatrix,
    s: IntMatrix,
    v: IntMatrix,
    u_inv: IntMatrix,
    invariant_factors: Vec<BigInt>,
) -> SmithForm {
    SmithForm {
        u,
        s,
        v,
        u_inv,
        invariant_factors,
    }
}

fn smallest_entry(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let x = s.get(i, j);
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                best = Some((i, j, ax));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}
