//! Hermite normal form and the sublattice type built on it.
//!
//! Generators are stored as rows. The canonical form is upper row echelon with
//! positive pivots and every entry above a pivot reduced into `[0, pivot)`, which
//! makes two generating sets of the same lattice produce identical bases.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::LatticeError;

/// Row-style Hermite normal form `H = U * A` with `U` unimodular.
#[derive(Clone, Debug)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Column of the pivot of each nonzero row of `h`, in row order.
    pub pivots: Vec<usize>,
}

impl HermiteForm {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn hermite_normal_form(a: &IntMatrix) -> HermiteForm {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols() {
        if r == h.rows() {
            break;
        }
        loop {
            // smallest |entry| at or below row r, lowest index on ties
            let mut best: Option<(usize, BigInt)> = None;
            for i in r..h.rows() {
                let x = h.get(i, c);
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, b)| ax < *b) {
                    best = Some((i, ax));
                }
            }
            let Some((p, _)) = best else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..h.rows() {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = -h.get(i, c).div_floor(h.get(r, c));
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                if !h.get(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h.get(i, c).div_floor(h.get(r, c));
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    HermiteForm { h, u, pivots }
}

pub(crate) fn row_echelon_rank(a: &IntMatrix) -> usize {
    hermite_normal_form(a).rank()
}

/// Basis of `{x : A x = 0}` over the integers, as a canonical lattice in `Z^cols`.
pub fn integer_kernel(a: &IntMatrix) -> Lattice {
    let hf = hermite_normal_form(&a.transpose());
    let kernel_rows = (hf.rank()..a.cols())
        .map(|i| hf.u.row_vec(i))
        .collect::<Vec<_>>();
    Lattice::from_generators(a.cols(), &kernel_rows).expect("kernel rows have matching width")
}

/// Integer solution of `A x = b`, or `None` when no integer solution exists.
///
/// Works on the column Hermite form `A * U^T = H^T` and substitutes forward along
/// its pivots; free coordinates are set to zero.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, LatticeError> {
    if b.len() != a.rows() {
        return Err(LatticeError::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    let hf = hermite_normal_form(&a.transpose());
    let mut residual = b.to_vec();
    let mut y = vec![BigInt::zero(); a.cols()];
    for (k, &p) in hf.pivots.iter().enumerate() {
        let pivot = hf.h.get(k, p);
        let (q, rem) = residual[p].div_rem(pivot);
        if !rem.is_zero() {
            return Ok(None);
        }
        for (i, r) in residual.iter_mut().enumerate() {
            let e = hf.h.get(k, i);
            if !e.is_zero() {
                *r -= &q * e;
            }
        }
        y[k] = q;
    }
    if residual.iter().any(|r| !r.is_zero()) {
        return Ok(None);
    }
    let x = hf.u.transpose().mul_vec(&y)?;
    Ok(Some(x))
}

/// A sublattice of `Z^dim`, held as its canonical Hermite basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice {
            dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        let gens = (0..dim).map(|i| unit(dim, i)).collect::<Vec<_>>();
        Self::from_generators(dim, &gens).expect("unit vectors")
    }

    pub fn from_generators(dim: usize, generators: &[Vec<BigInt>]) -> Result<Self, LatticeError> {
        let m = IntMatrix::from_rows(dim, generators.to_vec())?;
        let hf = hermite_normal_form(&m);
        let basis = (0..hf.rank()).map(|i| hf.h.row_vec(i)).collect();
        Ok(Lattice {
            dim,
            basis,
            pivots: hf.pivots,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.dim
            && self
                .basis
                .iter()
                .zip(&self.pivots)
                .all(|(b, &p)| b[p].is_one())
    }

    /// Coordinates of `v` in the Hermite basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.len() != self.dim {
            return None;
        }
        let mut residual = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let (q, rem) = residual[p].div_rem(&b[p]);
            if !rem.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (r, x) in residual.iter_mut().zip(b) {
                    *r -= &q * x;
                }
            }
            coords.push(q);
        }
        residual.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        self.dim == other.dim && other.basis.iter().all(|b| self.contains(b))
    }

    pub fn join(&self, other: &Lattice) -> Result<Lattice, LatticeError> {
        if self.dim != other.dim {
            return Err(LatticeError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let gens: Vec<_> = self.basis.iter().chain(&other.basis).cloned().collect();
        Lattice::from_generators(self.dim, &gens)
    }

    /// Reduces `v` modulo the lattice to the canonical representative of its coset.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut r = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let q = r[p].div_floor(&b[p]);
            if !q.is_zero() {
                for (x, y) in r.iter_mut().zip(b) {
                    *x -= &q * y;
                }
            }
        }
        r
    }

    /// Image of the lattice under a linear map given as a matrix acting on columns.
    pub fn map(&self, m: &IntMatrix) -> Result<Lattice, LatticeError> {
        let images = self
            .basis
            .iter()
            .map(|b| m.mul_vec(b))
            .collect::<Result<Vec<_>, _>>()?;
        Lattice::from_generators(m.rows(), &images)
    }
}

pub fn unit(dim: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); dim];
    v[i] = BigInt::one();
    v
}
