use std::fmt;

use num_bigint::BigInt;

use super::cone::Cone;
use super::polyhedral::solve_inequalities;
use super::{FanError, LatticeVector};
use crate::lattice::IntMatrix;

/// A fan given by a global ray list and its maximal cones as sorted ray-index sets.
///
/// Construction checks only the combinatorial shape (indices, primitivity, every
/// ray used). Geometric conditions are checked by [`validate_fan`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fan {
    ambient_rank: usize,
    rays: Vec<LatticeVector>,
    cones: Vec<Vec<usize>>,
}

impl Fan {
    pub fn new(
        ambient_rank: usize,
        rays: Vec<LatticeVector>,
        cones: Vec<Vec<usize>>,
    ) -> Result<Fan, FanError> {
        for (i, r) in rays.iter().enumerate() {
            if r.dim() != ambient_rank {
                return Err(FanError::DimensionMismatch {
                    expected: ambient_rank,
                    found: r.dim(),
                });
            }
            if r.is_zero() {
                return Err(FanError::ZeroVector);
            }
            if !r.is_primitive() {
                return Err(FanError::NotPrimitive { index: i });
            }
            if rays[..i].contains(r) {
                return Err(FanError::DuplicateRay { index: i });
            }
        }
        let mut used = vec![false; rays.len()];
        let mut sorted = Vec::with_capacity(cones.len());
        for (c, cone) in cones.into_iter().enumerate() {
            if cone.is_empty() {
                return Err(FanError::EmptyCone);
            }
            let mut cone = cone;
            cone.sort_unstable();
            cone.dedup();
            for &i in &cone {
                if i >= rays.len() {
                    return Err(FanError::RayIndexOutOfRange { cone: c, index: i });
                }
                used[i] = true;
            }
            sorted.push(cone);
        }
        if let Some(index) = used.iter().position(|u| !u) {
            return Err(FanError::UnusedRay { index });
        }
        Ok(Fan {
            ambient_rank,
            rays,
            cones: sorted,
        })
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn num_cones(&self) -> usize {
        self.cones.len()
    }

    pub fn cone_rays(&self, index: usize) -> Result<&[usize], FanError> {
        self.cones
            .get(index)
            .map(Vec::as_slice)
            .ok_or(FanError::ConeIndexOutOfRange(index))
    }

    /// The cone with the given index as a standalone [`Cone`].
    pub fn cone(&self, index: usize) -> Result<Cone, FanError> {
        let idx = self.cone_rays(index)?;
        let gens: Vec<LatticeVector> = idx.iter().map(|&i| self.rays[i].clone()).collect();
        Cone::new(&gens)
    }

    /// `#rays x n` matrix whose rows are the ray generators; as a map `M -> Z^rays`
    /// it sends `m` to the principal divisor of the character `m`.
    pub fn ray_matrix(&self) -> IntMatrix {
        self.ray_submatrix(&(0..self.rays.len()).collect::<Vec<_>>())
    }

    pub fn ray_submatrix(&self, indices: &[usize]) -> IntMatrix {
        IntMatrix::from_rows(
            self.ambient_rank,
            indices
                .iter()
                .map(|&i| self.rays[i].coords().to_vec())
                .collect(),
        )
        .expect("rays share the ambient rank")
    }

    /// Indices of maximal cones that are not smooth.
    pub fn singular_cones(&self) -> Vec<usize> {
        (0..self.cones.len())
            .filter(|&c| !self.cone(c).is_ok_and(|k| k.is_smooth()))
            .collect()
    }

    pub fn is_smooth(&self) -> bool {
        self.singular_cones().is_empty()
    }

    pub fn is_simplicial(&self) -> bool {
        (0..self.cones.len()).all(|c| self.cone(c).is_ok_and(|k| k.is_simplicial()))
    }

    /// Index of a maximal cone containing `v`, the first one in cone order.
    pub fn cone_containing(&self, v: &LatticeVector) -> Option<usize> {
        (0..self.cones.len()).find(|&c| self.cone(c).is_ok_and(|k| k.contains(v)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotPointed {
        cone: usize,
    },
    /// A listed ray of the cone is not one of its extremal rays.
    RedundantRay {
        cone: usize,
        ray: usize,
    },
    /// The two cones do not meet in a common face.
    BadIntersection {
        first: usize,
        second: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotPointed { cone } => write!(f, "cone {cone} is not strongly convex"),
            Violation::RedundantRay { cone, ray } => {
                write!(f, "cone {cone} lists ray {ray}, which is not extremal")
            }
            Violation::BadIntersection { first, second } => {
                write!(f, "cones {first} and {second} do not meet in a common face")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FanReport {
    pub violations: Vec<Violation>,
}

impl FanReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_fan(f: &Fan) -> FanReport {
    let mut violations = Vec::new();
    let mut cones: Vec<Option<(Cone, Vec<usize>)>> = Vec::with_capacity(f.num_cones());
    for c in 0..f.num_cones() {
        let idx = &f.cones[c];
        match f.cone(c) {
            Err(_) => {
                violations.push(Violation::NotPointed { cone: c });
                cones.push(None);
            }
            Ok(cone) => {
                let mut ok = true;
                for &r in idx {
                    if !cone.rays().contains(&f.rays[r]) {
                        violations.push(Violation::RedundantRay { cone: c, ray: r });
                        ok = false;
                    }
                }
                // position in cone.rays() -> fan ray index
                let lookup = cone
                    .rays()
                    .iter()
                    .map(|v| f.rays.iter().position(|r| r == v).expect("listed ray"))
                    .collect();
                cones.push(ok.then_some((cone, lookup)));
            }
        }
    }
    for i in 0..cones.len() {
        for j in i + 1..cones.len() {
            let (Some(a), Some(b)) = (&cones[i], &cones[j]) else {
                continue;
            };
            if !meet_in_common_face(f, a, b) {
                violations.push(Violation::BadIntersection {
                    first: i,
                    second: j,
                });
            }
        }
    }
    FanReport { violations }
}

fn meet_in_common_face(f: &Fan, a: &(Cone, Vec<usize>), b: &(Cone, Vec<usize>)) -> bool {
    let common: Vec<usize> = a.1.iter().filter(|i| b.1.contains(i)).copied().collect();
    let is_face_of = |(cone, lookup): &(Cone, Vec<usize>)| {
        cone.face_ray_sets().iter().any(|s| {
            let mut mapped: Vec<usize> = s.iter().map(|&p| lookup[p]).collect();
            mapped.sort_unstable();
            let mut want = common.clone();
            want.sort_unstable();
            mapped == want
        })
    };
    if !is_face_of(a) || !is_face_of(b) {
        return false;
    }
    let shared = if common.is_empty() {
        Cone::origin(f.ambient_rank)
    } else {
        let gens: Vec<LatticeVector> = common.iter().map(|&i| f.rays[i].clone()).collect();
        match Cone::new(&gens) {
            Ok(c) => c,
            Err(_) => return false,
        }
    };
    let mut constraints = a.0.dual_description().generators();
    constraints.extend(b.0.dual_description().generators());
    let meet = solve_inequalities(f.ambient_rank, &constraints);
    meet.lineality.is_empty()
        && meet
            .rays
            .iter()
            .all(|g| shared.contains(&LatticeVector::new(g.clone())))
}

/// The fan `Sigma_n` in `Z^n`: rays `e_1, ..., e_n, v` with `v = 2e_1 + e_2 + ... + e_n`
/// and maximal cones `<e_1, ..., e_{i-1}, e_{i+1}, ..., e_n, v>` for `i = 1..n`.
///
/// The cone omitting `e_1` has multiplicity 2; all others are smooth.
pub fn sigma_n_fan(n: usize) -> Result<Fan, FanError> {
    if n < 2 {
        return Err(FanError::InvalidDimension(n));
    }
    let mut rays: Vec<LatticeVector> = (0..n).map(|i| LatticeVector::unit(n, i)).collect();
    let mut v = vec![BigInt::from(1); n];
    v[0] = BigInt::from(2);
    rays.push(LatticeVector::new(v));
    let cones = (0..n)
        .map(|skip| (0..=n).filter(|&j| j != skip).collect())
        .collect();
    Fan::new(n, rays, cones)
}

pub fn projective_plane() -> Fan {
    let rays = [[1, 0], [0, 1], [-1, -1]]
        .map(|r| LatticeVector::from_i64(&r))
        .to_vec();
    Fan::new(2, rays, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).expect("P^2 fan")
}

pub fn p1_times_p1() -> Fan {
    let rays = [[1, 0], [0, 1], [-1, 0], [0, -1]]
        .map(|r| LatticeVector::from_i64(&r))
        .to_vec();
    Fan::new(
        2,
        rays,
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
    )
    .expect("P^1 x P^1 fan")
}

/// Affine space `A^n`: the single cone spanned by the standard basis.
pub fn affine_space(n: usize) -> Fan {
    let rays = (0..n).map(|i| LatticeVector::unit(n, i)).collect();
    Fan::new(n, rays, vec![(0..n).collect()]).expect("standard cone")
}

/// Fan consisting of one cone (and its faces); rays are the cone's extremal rays
/// in lexicographic order.
pub fn single_cone_fan(generators: &[LatticeVector]) -> Result<Fan, FanError> {
    let cone = Cone::new(generators)?;
    let n = cone.ambient_rank();
    let k = cone.rays().len();
    Fan::new(n, cone.rays().to_vec(), vec![(0..k).collect()])
}
