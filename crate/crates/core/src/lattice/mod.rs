//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers: Smith and Hermite
//! normal forms, integer kernels and cokernels, finitely generated abelian groups
//! and homomorphisms between them.

mod group;
mod hermite;
mod matrix;
mod rational;
mod smith;

use thiserror::Error;

pub use group::{
    cokernel, hom_image, images_equal, is_surjective, CokernelMap, FgAbelianGroup, GroupHom,
};
pub use hermite::{hermite_normal_form, integer_kernel, solve_integer, unit, HermiteForm, Lattice};
pub use matrix::{dot, primitive, to_big, vec_gcd, IntMatrix};
pub use rational::{solve_rational, solve_rational_rhs};
pub use smith::{smith_normal_form, SmithForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("invariant factors must be >= 2 and form a divisibility chain")]
    InvalidInvariantFactors,
    #[error("homomorphism does not respect the relation of generator {generator}")]
    RelationNotPreserved { generator: usize },
    #[error("homomorphisms have different codomains")]
    IncompatibleCodomains,
}
