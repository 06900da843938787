use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::polyhedral::{solve_inequalities, DualDescription};
use super::{FanError, LatticeVector};
use crate::lattice::{dot, smith_normal_form, IntMatrix};

/// Strongly convex rational polyhedral cone, stored by its primitive extremal
/// rays in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    ambient_rank: usize,
    rays: Vec<LatticeVector>,
}

/// Builds a cone from arbitrary nonzero generators.
pub fn make_cone(vectors: &[LatticeVector]) -> Result<Cone, FanError> {
    Cone::new(vectors)
}

impl Cone {
    pub fn new(vectors: &[LatticeVector]) -> Result<Cone, FanError> {
        let Some(first) = vectors.first() else {
            return Err(FanError::EmptyCone);
        };
        let n = first.dim();
        let mut prim = Vec::with_capacity(vectors.len());
        for v in vectors {
            if v.dim() != n {
                return Err(FanError::DimensionMismatch {
                    expected: n,
                    found: v.dim(),
                });
            }
            if v.is_zero() {
                return Err(FanError::ZeroVector);
            }
            prim.push(v.primitive());
        }
        prim.sort();
        prim.dedup();

        let dual = dual_of(n, &prim);
        if dual.dimension() < n {
            return Err(FanError::NotPointed);
        }
        let rays = prim.into_iter().filter(|v| is_extreme(&dual, v)).collect();
        Ok(Cone {
            ambient_rank: n,
            rays,
        })
    }

    /// The cone `{0}` in `Z^n`.
    pub fn origin(ambient_rank: usize) -> Cone {
        Cone {
            ambient_rank,
            rays: Vec::new(),
        }
    }

    pub(crate) fn from_sorted_rays(ambient_rank: usize, rays: Vec<LatticeVector>) -> Cone {
        Cone { ambient_rank, rays }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(
            self.ambient_rank,
            self.rays.iter().map(|r| r.coords().to_vec()).collect(),
        )
        .expect("rays share the ambient rank")
    }

    /// Dimension of the linear span.
    pub fn dimension(&self) -> usize {
        span_rank(self.ambient_rank, &self.rays)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dimension() == self.ambient_rank
    }

    pub fn dual_description(&self) -> DualDescription {
        dual_of(self.ambient_rank, &self.rays)
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        v.dim() == self.ambient_rank && self.dual_description().admits(v.coords())
    }

    pub fn is_simplicial(&self) -> bool {
        self.dimension() == self.rays.len()
    }

    /// Lattice index of the ray span in its saturation: the gcd of the maximal minors.
    pub fn multiplicity(&self) -> Result<BigInt, FanError> {
        if !self.is_simplicial() {
            return Err(FanError::NonSimplicial);
        }
        let snf = smith_normal_form(&self.ray_matrix());
        Ok(snf.invariant_factors.iter().product())
    }

    pub fn is_smooth(&self) -> bool {
        self.is_simplicial() && self.multiplicity().is_ok_and(|m| m.is_one())
    }

    /// All faces as subsets of ray positions (indices into `rays()`), from the
    /// origin up to the cone itself, sorted by size then lexicographically.
    pub fn face_ray_sets(&self) -> Vec<Vec<usize>> {
        let dual = self.dual_description();
        let facets: Vec<BTreeSet<usize>> = dual
            .rays
            .iter()
            .map(|u| {
                (0..self.rays.len())
                    .filter(|&i| dot(u, self.rays[i].coords()).is_zero())
                    .collect()
            })
            .collect();
        let full: BTreeSet<usize> = (0..self.rays.len()).collect();
        let mut found: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        let mut queue = VecDeque::from([full.clone()]);
        found.insert(full);
        while let Some(face) = queue.pop_front() {
            for f in &facets {
                let meet: BTreeSet<usize> = face.intersection(f).copied().collect();
                if found.insert(meet.clone()) {
                    queue.push_back(meet);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = found.into_iter().map(|s| s.into_iter().collect()).collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    pub fn faces(&self) -> Vec<Cone> {
        self.face_ray_sets()
            .into_iter()
            .map(|s| {
                Cone::from_sorted_rays(
                    self.ambient_rank,
                    s.into_iter().map(|i| self.rays[i].clone()).collect(),
                )
            })
            .collect()
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ">")
    }
}

/// Primitive generators of the dual cone, sorted; lineality directions of the
/// dual appear with both signs.
pub fn dual_cone(c: &Cone) -> Vec<LatticeVector> {
    c.dual_description()
        .generators()
        .into_iter()
        .map(LatticeVector::new)
        .collect()
}

pub fn faces(c: &Cone) -> Vec<Cone> {
    c.faces()
}

pub fn contains(c: &Cone, v: &LatticeVector) -> bool {
    c.contains(v)
}

pub fn multiplicity(c: &Cone) -> Result<BigInt, FanError> {
    c.multiplicity()
}

pub fn is_smooth(c: &Cone) -> bool {
    c.is_smooth()
}

pub fn is_simplicial(c: &Cone) -> bool {
    c.is_simplicial()
}

pub(crate) fn dual_of(n: usize, rays: &[LatticeVector]) -> DualDescription {
    let constraints: Vec<Vec<BigInt>> = rays.iter().map(|r| r.coords().to_vec()).collect();
    solve_inequalities(n, &constraints)
}

fn span_rank(n: usize, vectors: &[LatticeVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    IntMatrix::from_rows(n, vectors.iter().map(|v| v.coords().to_vec()).collect())
        .expect("uniform width")
        .rank()
}

/// `v` (assumed in the cone) spans an extremal ray iff the dual generators
/// vanishing on it, together with the dual lineality, have corank one.
fn is_extreme(dual: &DualDescription, v: &LatticeVector) -> bool {
    let n = v.dim();
    let active: Vec<Vec<BigInt>> = dual
        .rays
        .iter()
        .filter(|u| dot(u, v.coords()).is_zero())
        .chain(&dual.lineality)
        .cloned()
        .collect();
    let rank = if active.is_empty() {
        0
    } else {
        IntMatrix::from_rows(n, active).expect("width").rank()
    };
    rank + 1 == n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(v)
    }

    #[test]
    fn primitivizes_generators() {
        let c = make_cone(&[lv(&[2, 0]), lv(&[0, 3])]).unwrap();
        assert_eq!(c.rays(), &[lv(&[0, 1]), lv(&[1, 0])]);
    }

    #[test]
    fn drops_redundant_generator() {
        let c = make_cone(&[lv(&[1, 0]), lv(&[1, 2]), lv(&[1, 1])]).unwrap();
        assert_eq!(c.rays(), &[lv(&[1, 0]), lv(&[1, 2])]);
    }

    #[test]
    fn rejects_lines_and_zero() {
        assert_eq!(
            make_cone(&[lv(&[1, 0]), lv(&[-1, 0])]),
            Err(FanError::NotPointed)
        );
        assert_eq!(make_cone(&[lv(&[0, 0])]), Err(FanError::ZeroVector));
        assert_eq!(make_cone(&[]), Err(FanError::EmptyCone));
        assert!(make_cone(&[lv(&[1, 0]), lv(&[1, 0, 0])]).is_err());
    }

    #[test]
    fn rejects_hidden_line() {
        // (1,0), (0,1), (-1,-1) span the whole plane
        assert_eq!(
            make_cone(&[lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, -1])]),
            Err(FanError::NotPointed)
        );
    }

    #[test]
    fn dual_examples() {
        let q = make_cone(&[lv(&[1, 0]), lv(&[0, 1])]).unwrap();
        assert_eq!(dual_cone(&q), vec![lv(&[0, 1]), lv(&[1, 0])]);
        let c = make_cone(&[lv(&[1, 0]), lv(&[1, 2])]).unwrap();
        assert_eq!(dual_cone(&c), vec![lv(&[0, 1]), lv(&[2, -1])]);
        let e3 = make_cone(&[lv(&[1, 0, 0]), lv(&[0, 1, 0]), lv(&[0, 0, 1])]).unwrap();
        assert_eq!(
            dual_cone(&e3),
            vec![lv(&[0, 0, 1]), lv(&[0, 1, 0]), lv(&[1, 0, 0])]
        );
    }

    #[test]
    fn multiplicity_examples() {
        let a1 = make_cone(&[lv(&[0, 1]), lv(&[2, 1])]).unwrap();
        assert_eq!(a1.multiplicity().unwrap(), BigInt::from(2));
        assert!(!a1.is_smooth());
        let e3 = make_cone(&[lv(&[1, 0, 0]), lv(&[0, 1, 0]), lv(&[0, 0, 1])]).unwrap();
        assert!(e3.is_smooth());
        let flat = make_cone(&[lv(&[1, 0, 1]), lv(&[1, 2, 0])]).unwrap();
        assert!(flat.is_smooth());
        assert!(!flat.is_full_dimensional());
    }

    #[test]
    fn multiplicity_requires_simplicial() {
        let sq = make_cone(&[
            lv(&[1, 0, 1]),
            lv(&[0, 1, 1]),
            lv(&[-1, 0, 1]),
            lv(&[0, -1, 1]),
        ])
        .unwrap();
        assert_eq!(sq.rays().len(), 4);
        assert!(!sq.is_simplicial());
        assert_eq!(sq.multiplicity(), Err(FanError::NonSimplicial));
        assert!(!sq.is_smooth());
    }

    #[test]
    fn face_lattice_of_square_cone() {
        let sq = make_cone(&[
            lv(&[1, 0, 1]),
            lv(&[0, 1, 1]),
            lv(&[-1, 0, 1]),
            lv(&[0, -1, 1]),
        ])
        .unwrap();
        let faces = sq.face_ray_sets();
        // origin, 4 rays, 4 facets, the cone
        assert_eq!(faces.len(), 10);
        assert_eq!(faces.iter().filter(|f| f.len() == 2).count(), 4);
    }

    #[test]
    fn face_lattice_of_flat_cone() {
        let flat = make_cone(&[lv(&[1, 0, 1]), lv(&[1, 2, 0])]).unwrap();
        assert_eq!(
            flat.face_ray_sets(),
            vec![vec![], vec![0], vec![1], vec![0, 1]]
        );
    }

    #[test]
    fn membership() {
        let c = make_cone(&[lv(&[1, 0]), lv(&[1, 2])]).unwrap();
        assert!(c.contains(&lv(&[1, 1])));
        assert!(c.contains(&lv(&[3, 6])));
        assert!(!c.contains(&lv(&[0, 1])));
        assert!(!c.contains(&lv(&[1, 1, 0])));
    }
}
