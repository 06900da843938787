//! Rational polyhedral cones and fans.
//!
//! Conventions: a cone `sigma` lives in `N_R = R^n`; its affine chart has
//! coordinate ring spanned by the lattice points of the dual cone in `M = Z^n`.

mod cone;
#[allow(clippy::module_inception)]
mod fan;
pub mod polyhedral;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::lattice::{dot, primitive, vec_gcd};

pub use cone::{
    contains, dual_cone, faces, is_simplicial, is_smooth, make_cone, multiplicity, Cone,
};
pub use fan::{
    affine_space, p1_times_p1, projective_plane, sigma_n_fan, single_cone_fan, validate_fan, Fan,
    FanReport, Violation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("a cone needs at least one generator")]
    EmptyCone,
    #[error("zero vector cannot generate a ray")]
    ZeroVector,
    #[error("generators span a cone containing a line")]
    NotPointed,
    #[error("vector length {found} does not match ambient rank {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cone is not simplicial")]
    NonSimplicial,
    #[error("ray {index} is not primitive")]
    NotPrimitive { index: usize },
    #[error("ray {index} appears twice")]
    DuplicateRay { index: usize },
    #[error("ray index {index} out of range in cone {cone}")]
    RayIndexOutOfRange { cone: usize, index: usize },
    #[error("ray {index} is not used by any cone")]
    UnusedRay { index: usize },
    #[error("cone index {0} out of range")]
    ConeIndexOutOfRange(usize),
    #[error("sigma_n requires n >= 2, got {0}")]
    InvalidDimension(usize),
}

/// Integer vector in `N = Z^n` (or, for dual data, in `M`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<BigInt>);

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        LatticeVector(crate::lattice::unit(dim, i))
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_primitive(&self) -> bool {
        vec_gcd(&self.0).is_one()
    }

    pub fn primitive(&self) -> Self {
        LatticeVector(primitive(&self.0))
    }

    pub fn dot(&self, other: &[BigInt]) -> BigInt {
        dot(&self.0, other)
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        LatticeVector(self.0.iter().map(|x| x * k).collect())
    }

    /// Concatenation `(self, tail)`.
    pub fn extended(&self, tail: &[BigInt]) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(tail);
        LatticeVector(v)
    }
}

impl From<Vec<BigInt>> for LatticeVector {
    fn from(v: Vec<BigInt>) -> Self {
        LatticeVector(v)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}
