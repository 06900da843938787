use std::fmt;

use num_bigint::BigInt;

use super::{DivisorError, InvariantDivisor};
use crate::fan::Fan;
use crate::lattice::{unit, IntMatrix, Lattice};

/// Subgroup of `WDiv_T(X_Sigma)` spanned by finitely many invariant divisors.
///
/// The generators are kept as given; equality compares the spanned lattices.
#[derive(Clone, Debug)]
pub struct DivisorSubgroup {
    generators: Vec<InvariantDivisor>,
    lattice: Lattice,
}

impl DivisorSubgroup {
    pub fn new(f: &Fan, generators: Vec<InvariantDivisor>) -> Result<Self, DivisorError> {
        for g in &generators {
            g.check_on(f)?;
        }
        Self::from_generators(f.num_rays(), generators)
    }

    pub(crate) fn from_generators(
        num_rays: usize,
        generators: Vec<InvariantDivisor>,
    ) -> Result<Self, DivisorError> {
        let rows: Vec<Vec<BigInt>> = generators.iter().map(|g| g.coeffs().to_vec()).collect();
        let lattice = Lattice::from_generators(num_rays, &rows)?;
        Ok(DivisorSubgroup {
            generators,
            lattice,
        })
    }

    pub fn from_lattice(lattice: Lattice) -> Self {
        let generators = lattice
            .basis()
            .iter()
            .cloned()
            .map(InvariantDivisor::new)
            .collect();
        DivisorSubgroup {
            generators,
            lattice,
        }
    }

    pub fn trivial(f: &Fan) -> Self {
        DivisorSubgroup::from_lattice(Lattice::zero(f.num_rays()))
    }

    /// The whole of `WDiv_T`, generated by every prime invariant divisor.
    pub fn all(f: &Fan) -> Self {
        let k = f.num_rays();
        let gens = (0..k).map(|i| InvariantDivisor::prime(k, i)).collect();
        DivisorSubgroup::from_generators(k, gens).expect("prime divisors have fan length")
    }

    /// Subgroup spanned by the given prime divisors.
    pub fn of_primes(f: &Fan, rays: &[usize]) -> Result<Self, DivisorError> {
        let k = f.num_rays();
        let gens = rays
            .iter()
            .map(|&i| {
                if i >= k {
                    Err(DivisorError::WrongLength {
                        expected: k,
                        found: i + 1,
                    })
                } else {
                    Ok(InvariantDivisor::new(unit(k, i)))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        DivisorSubgroup::from_generators(k, gens)
    }

    pub fn num_rays(&self) -> usize {
        self.lattice.dim()
    }

    pub fn generators(&self) -> &[InvariantDivisor] {
        &self.generators
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// Hermite basis of the subgroup, as divisors.
    pub fn basis(&self) -> Vec<InvariantDivisor> {
        self.lattice
            .basis()
            .iter()
            .cloned()
            .map(InvariantDivisor::new)
            .collect()
    }

    /// Generator matrix with one generator per row.
    pub fn generator_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(
            self.num_rays(),
            self.generators
                .iter()
                .map(|g| g.coeffs().to_vec())
                .collect(),
        )
        .expect("generators have fan length")
    }

    /// Whether the listed generators are linearly independent.
    pub fn is_independent(&self) -> bool {
        self.rank() == self.generators.len()
    }

    pub fn contains(&self, d: &InvariantDivisor) -> bool {
        self.lattice.contains(d.coeffs())
    }

    pub fn contains_subgroup(&self, other: &DivisorSubgroup) -> bool {
        self.lattice.contains_lattice(&other.lattice)
    }

    pub fn join(&self, other: &DivisorSubgroup) -> Result<DivisorSubgroup, DivisorError> {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        if self.num_rays() != other.num_rays() {
            return Err(DivisorError::WrongLength {
                expected: self.num_rays(),
                found: other.num_rays(),
            });
        }
        DivisorSubgroup::from_generators(self.num_rays(), gens)
    }
}

impl PartialEq for DivisorSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice
    }
}

impl Eq for DivisorSubgroup {}

impl fmt::Display for DivisorSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}
