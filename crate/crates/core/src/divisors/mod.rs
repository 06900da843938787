//! Torus-invariant Weil divisors on a toric variety `X_Sigma`.
//!
//! A divisor `D = sum a_rho D_rho` is stored as its coefficient vector over the
//! fan's rays. Sign conventions:
//!
//! * `div(chi^m) = sum <m, v_rho> D_rho`;
//! * `D` is Cartier on the chart of `sigma` iff some integral `m_sigma` has
//!   `<m_sigma, v_rho> = -a_rho` for every ray `rho` of `sigma`.
//!
//! The local class group at the distinguished point of `sigma` is computed as
//! the class group of the affine chart `U_sigma`.

mod class_group;
mod subgroup;

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::fan::{Fan, FanError, LatticeVector};
use crate::lattice::{solve_integer, LatticeError};

pub use class_group::{
    cartier_data, cartier_index, class_group, class_of, is_cartier, is_principal, is_qcartier,
    local_class_group, weil_mod_cartier, ClassGroup, WeilModCartier,
};
pub use subgroup::DivisorSubgroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisorError {
    #[error("divisor has {found} coefficients but the fan has {expected} rays")]
    WrongLength { expected: usize, found: usize },
    #[error("character has length {found}, expected lattice rank {expected}")]
    WrongCharacterLength { expected: usize, found: usize },
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Integral torus-invariant Weil divisor, by coefficients over the fan's rays.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantDivisor {
    coeffs: Vec<BigInt>,
}

impl InvariantDivisor {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        InvariantDivisor { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        InvariantDivisor::new(coeffs.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(num_rays: usize) -> Self {
        InvariantDivisor::new(vec![BigInt::zero(); num_rays])
    }

    /// The prime divisor `D_rho`.
    pub fn prime(num_rays: usize, ray: usize) -> Self {
        InvariantDivisor::new(crate::lattice::unit(num_rays, ray))
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        InvariantDivisor::new(self.coeffs.iter().map(|x| x * k).collect())
    }

    /// Coefficients on the given rays, in the given order.
    pub fn restrict(&self, rays: &[usize]) -> Vec<BigInt> {
        rays.iter().map(|&i| self.coeffs[i].clone()).collect()
    }

    pub(crate) fn check_on(&self, f: &Fan) -> Result<(), DivisorError> {
        if self.coeffs.len() != f.num_rays() {
            return Err(DivisorError::WrongLength {
                expected: f.num_rays(),
                found: self.coeffs.len(),
            });
        }
        Ok(())
    }
}

impl Add for &InvariantDivisor {
    type Output = InvariantDivisor;
    fn add(self, rhs: &InvariantDivisor) -> InvariantDivisor {
        assert_eq!(self.len(), rhs.len(), "divisors on different fans");
        InvariantDivisor::new(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &InvariantDivisor {
    type Output = InvariantDivisor;
    fn sub(self, rhs: &InvariantDivisor) -> InvariantDivisor {
        assert_eq!(self.len(), rhs.len(), "divisors on different fans");
        InvariantDivisor::new(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for &InvariantDivisor {
    type Output = InvariantDivisor;
    fn neg(self) -> InvariantDivisor {
        InvariantDivisor::new(self.coeffs.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for InvariantDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// `div(chi^m) = sum <m, v_rho> D_rho`.
pub fn principal_divisor(f: &Fan, m: &LatticeVector) -> Result<InvariantDivisor, DivisorError> {
    if m.dim() != f.ambient_rank() {
        return Err(DivisorError::WrongCharacterLength {
            expected: f.ambient_rank(),
            found: m.dim(),
        });
    }
    Ok(InvariantDivisor::new(
        f.rays().iter().map(|v| v.dot(m.coords())).collect(),
    ))
}

/// Some `m` with `d - d_prime = div(chi^m)`, if the two divisors are linearly equivalent.
pub fn linearly_equivalent(
    f: &Fan,
    d: &InvariantDivisor,
    d_prime: &InvariantDivisor,
) -> Result<Option<LatticeVector>, DivisorError> {
    d.check_on(f)?;
    d_prime.check_on(f)?;
    let diff = d - d_prime;
    Ok(solve_integer(&f.ray_matrix(), diff.coeffs())?.map(LatticeVector::new))
}
