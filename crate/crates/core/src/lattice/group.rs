use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::hermite::{unit, Lattice};
use super::matrix::IntMatrix;
use super::smith::smith_normal_form;
use super::LatticeError;

/// Finitely generated abelian group `Z^rank + Z/d_1 + ... + Z/d_t` in
/// invariant-factor form (`d_i | d_{i+1}`, every `d_i >= 2`).
///
/// Elements are coordinate vectors over the standard generators: the free
/// generators first, then one generator per invariant factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self, LatticeError> {
        for w in torsion.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(LatticeError::InvalidInvariantFactors);
            }
        }
        if torsion.iter().any(|d| d < &BigInt::from(2)) {
            return Err(LatticeError::InvalidInvariantFactors);
        }
        Ok(FgAbelianGroup { rank, torsion })
    }

    pub fn trivial() -> Self {
        FgAbelianGroup {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    /// Canonical form of `Z/c_1 + ... + Z/c_k`; a zero entry contributes a copy of `Z`.
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Self {
        cokernel(&IntMatrix::diagonal(orders))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn num_generators(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Least common multiple of the element orders (the last invariant factor).
    pub fn exponent(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.torsion.last().cloned().unwrap_or_else(BigInt::one))
    }

    /// Length of the longest strictly increasing chain of subgroups of the
    /// torsion part: the number of prime factors of its order, with multiplicity.
    pub fn torsion_chain_length(&self) -> usize {
        self.torsion.iter().map(prime_factor_count).sum()
    }

    /// Relation lattice in `Z^num_generators`: `d_i` times each torsion generator.
    pub fn relations(&self) -> Lattice {
        let g = self.num_generators();
        let gens = self
            .torsion
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let mut v = unit(g, self.rank + i);
                v[self.rank + i] = d.clone();
                v
            })
            .collect::<Vec<_>>();
        Lattice::from_generators(g, &gens).expect("relation vectors have matching width")
    }

    /// Brings torsion coordinates into `[0, d_i)`.
    pub fn reduce(&self, element: &[BigInt]) -> Vec<BigInt> {
        let mut out = element.to_vec();
        for (i, d) in self.torsion.iter().enumerate() {
            out[self.rank + i] = out[self.rank + i].mod_floor(d);
        }
        out
    }

    pub fn is_zero_element(&self, element: &[BigInt]) -> bool {
        self.reduce(element).iter().all(Zero::is_zero)
    }

    /// Order of an element; `None` for elements of infinite order.
    pub fn element_order(&self, element: &[BigInt]) -> Option<BigInt> {
        let e = self.reduce(element);
        if e[..self.rank].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut order = BigInt::one();
        for (i, d) in self.torsion.iter().enumerate() {
            let c = &e[self.rank + i];
            let o = d / d.gcd(c);
            order = order.lcm(&o);
        }
        Some(order)
    }

    /// Direct sum, returned in canonical form.
    pub fn direct_sum(&self, other: &FgAbelianGroup) -> FgAbelianGroup {
        let mut orders: Vec<BigInt> = vec![BigInt::zero(); self.rank + other.rank];
        orders.extend(self.torsion.iter().cloned());
        orders.extend(other.torsion.iter().cloned());
        Self::from_cyclic_orders(&orders)
    }
}

fn prime_factor_count(n: &BigInt) -> usize {
    let mut n = n.abs();
    let mut count = 0;
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        while n.is_multiple_of(&p) {
            n /= &p;
            count += 1;
        }
        p += 1;
    }
    if n > BigInt::one() {
        count += 1;
    }
    count
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|x| *x == d).count();
            if run == 1 {
                parts.push(format!("Z/{d}"));
            } else {
                parts.push(format!("(Z/{d})^{run}"));
            }
            i += run;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Cokernel of `A` viewed as a map `Z^cols -> Z^rows`.
pub fn cokernel(a: &IntMatrix) -> FgAbelianGroup {
    let snf = smith_normal_form(a);
    let torsion = snf
        .invariant_factors
        .iter()
        .filter(|d| !d.is_one())
        .cloned()
        .collect();
    FgAbelianGroup {
        rank: a.rows() - snf.rank(),
        torsion,
    }
}

/// Cokernel together with the projection from `Z^rows` onto canonical coordinates.
#[derive(Clone, Debug)]
pub struct CokernelMap {
    pub group: FgAbelianGroup,
    /// `num_generators x rows`; rows are the free coordinates first, then torsion.
    pub projection: IntMatrix,
}

impl CokernelMap {
    pub fn new(a: &IntMatrix) -> Self {
        let snf = smith_normal_form(a);
        let r = snf.rank();
        let mut torsion = Vec::new();
        let mut torsion_rows = Vec::new();
        for (i, d) in snf.invariant_factors.iter().enumerate() {
            if !d.is_one() {
                torsion.push(d.clone());
                torsion_rows.push(i);
            }
        }
        let mut rows: Vec<usize> = (r..a.rows()).collect();
        rows.extend(torsion_rows);
        let projection = snf.u.select_rows(&rows);
        CokernelMap {
            group: FgAbelianGroup {
                rank: a.rows() - r,
                torsion,
            },
            projection,
        }
    }

    /// Canonical (reduced) coordinates of the class of `v`.
    pub fn class_of(&self, v: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
        Ok(self.group.reduce(&self.projection.mul_vec(v)?))
    }
}

/// Homomorphism between groups in canonical form, acting on generator coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    domain: FgAbelianGroup,
    codomain: FgAbelianGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    /// `matrix` is `codomain.num_generators() x domain.num_generators()`; each domain
    /// relation must land in the codomain's relation lattice.
    pub fn new(
        domain: FgAbelianGroup,
        codomain: FgAbelianGroup,
        matrix: IntMatrix,
    ) -> Result<Self, LatticeError> {
        if matrix.rows() != codomain.num_generators() {
            return Err(LatticeError::DimensionMismatch {
                expected: codomain.num_generators(),
                found: matrix.rows(),
            });
        }
        if matrix.cols() != domain.num_generators() {
            return Err(LatticeError::DimensionMismatch {
                expected: domain.num_generators(),
                found: matrix.cols(),
            });
        }
        let rel = codomain.relations();
        for (i, d) in domain.torsion.iter().enumerate() {
            let image: Vec<BigInt> = matrix
                .column(domain.rank + i)
                .into_iter()
                .map(|x| x * d)
                .collect();
            if !rel.contains(&image) {
                return Err(LatticeError::RelationNotPreserved {
                    generator: domain.rank + i,
                });
            }
        }
        Ok(GroupHom {
            domain,
            codomain,
            matrix,
        })
    }

    /// Homomorphism out of a free group `Z^k`, given by the images of its basis.
    pub fn from_free(
        codomain: FgAbelianGroup,
        images: &[Vec<BigInt>],
    ) -> Result<Self, LatticeError> {
        let m = IntMatrix::from_columns(codomain.num_generators(), images)?;
        Self::new(FgAbelianGroup::free(images.len()), codomain, m)
    }

    pub fn domain(&self) -> &FgAbelianGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FgAbelianGroup {
        &self.codomain
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
        Ok(self.codomain.reduce(&self.matrix.mul_vec(x)?))
    }

    /// Image plus codomain relations, as a lattice in codomain coordinates.
    /// Two homomorphisms into the same group have equal images iff these agree.
    pub fn image_lattice(&self) -> Lattice {
        let mut gens = self.matrix.column_vectors();
        gens.extend(self.codomain.relations().basis().iter().cloned());
        Lattice::from_generators(self.codomain.num_generators(), &gens)
            .expect("columns match codomain width")
    }

    /// Image subgroup as an abstract group.
    pub fn image(&self) -> FgAbelianGroup {
        let span = self.image_lattice();
        let rel = self.codomain.relations();
        let coords = rel
            .basis()
            .iter()
            .map(|r| span.coordinates(r).expect("relations lie in the span"))
            .collect::<Vec<_>>();
        let c = IntMatrix::from_columns(span.rank(), &coords).expect("coordinate widths");
        cokernel(&c)
    }

    pub fn is_surjective(&self) -> bool {
        self.image_lattice().is_full()
    }

    /// Kernel as the preimage lattice in domain generator coordinates (it contains
    /// the domain relations).
    pub fn kernel_lattice(&self) -> Lattice {
        let g = self.domain.num_generators();
        let rel = self.codomain.relations();
        // x in kernel  <=>  M x - R y = 0 for some y
        let mut cols = self.matrix.column_vectors();
        cols.extend(
            rel.basis()
                .iter()
                .map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()),
        );
        let stacked = IntMatrix::from_columns(self.codomain.num_generators(), &cols)
            .expect("matching codomain width");
        let k = super::hermite::integer_kernel(&stacked);
        let mut gens: Vec<Vec<BigInt>> = k.basis().iter().map(|v| v[..g].to_vec()).collect();
        gens.extend(self.domain.relations().basis().iter().cloned());
        Lattice::from_generators(g, &gens).expect("domain width")
    }
}

pub fn hom_image(h: &GroupHom) -> FgAbelianGroup {
    h.image()
}

pub fn is_surjective(h: &GroupHom) -> bool {
    h.is_surjective()
}

/// Whether two homomorphisms into the same group have the same image.
pub fn images_equal(h1: &GroupHom, h2: &GroupHom) -> Result<bool, LatticeError> {
    if h1.codomain != h2.codomain {
        return Err(LatticeError::IncompatibleCodomains);
    }
    Ok(h1.image_lattice() == h2.image_lattice())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::matrix::to_big;

    fn z2() -> FgAbelianGroup {
        FgAbelianGroup::new(0, vec![BigInt::from(2)]).unwrap()
    }

    #[test]
    fn cokernel_examples() {
        assert!(cokernel(&IntMatrix::identity(2)).is_trivial());
        assert_eq!(cokernel(&IntMatrix::from_i64(&[&[1, 1], &[0, 2]])), z2());
        let p2 = IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[-1, -1]]);
        assert_eq!(cokernel(&p2), FgAbelianGroup::free(1));
    }

    #[test]
    fn invariant_factor_validation() {
        assert!(FgAbelianGroup::new(0, vec![BigInt::from(2), BigInt::from(3)]).is_err());
        assert!(FgAbelianGroup::new(0, vec![BigInt::from(1)]).is_err());
        let g =
            FgAbelianGroup::from_cyclic_orders(&[BigInt::from(2), BigInt::from(3), BigInt::zero()]);
        assert_eq!(g, FgAbelianGroup::new(1, vec![BigInt::from(6)]).unwrap());
    }

    #[test]
    fn display_forms() {
        assert_eq!(FgAbelianGroup::trivial().to_string(), "0");
        assert_eq!(FgAbelianGroup::free(1).to_string(), "Z");
        let g = FgAbelianGroup::new(2, vec![2.into(), 2.into(), 4.into()]).unwrap();
        assert_eq!(g.to_string(), "Z^2 + (Z/2)^2 + Z/4");
    }

    #[test]
    fn inclusion_of_even_integers() {
        let h = GroupHom::from_free(FgAbelianGroup::free(1), &[to_big(&[2])]).unwrap();
        assert_eq!(hom_image(&h), FgAbelianGroup::free(1));
        assert!(!is_surjective(&h));
        assert_eq!(h.kernel_lattice().rank(), 0);
    }

    #[test]
    fn identity_on_z2() {
        let h = GroupHom::new(z2(), z2(), IntMatrix::identity(1)).unwrap();
        assert!(is_surjective(&h));
        assert_eq!(hom_image(&h), z2());
    }

    #[test]
    fn relation_must_be_preserved() {
        // Z/2 -> Z/3 sending the generator to 1 is not well defined
        let z3 = FgAbelianGroup::new(0, vec![BigInt::from(3)]).unwrap();
        assert!(GroupHom::new(z2(), z3, IntMatrix::identity(1)).is_err());
    }

    #[test]
    fn equal_images_from_different_generators() {
        let z2sq = FgAbelianGroup::free(2);
        let h1 = GroupHom::from_free(z2sq.clone(), &[to_big(&[2, 0]), to_big(&[0, 1])]).unwrap();
        let h2 = GroupHom::from_free(z2sq, &[to_big(&[2, 1]), to_big(&[0, 1])]).unwrap();
        assert!(images_equal(&h1, &h2).unwrap());
        let other = GroupHom::from_free(FgAbelianGroup::free(1), &[to_big(&[1])]).unwrap();
        assert!(images_equal(&h1, &other).is_err());
    }

    #[test]
    fn image_with_torsion_codomain() {
        // Z -> Z/4 via 2 has image Z/2 and kernel 2Z
        let z4 = FgAbelianGroup::new(0, vec![BigInt::from(4)]).unwrap();
        let h = GroupHom::from_free(z4, &[to_big(&[2])]).unwrap();
        assert_eq!(h.image(), z2());
        assert_eq!(
            h.kernel_lattice(),
            Lattice::from_generators(1, &[to_big(&[2])]).unwrap()
        );
    }

    #[test]
    fn element_orders() {
        let g = FgAbelianGroup::new(1, vec![2.into(), 6.into()]).unwrap();
        assert_eq!(g.element_order(&to_big(&[0, 1, 3])), Some(BigInt::from(2)));
        assert_eq!(g.element_order(&to_big(&[0, 0, 4])), Some(BigInt::from(3)));
        assert_eq!(g.element_order(&to_big(&[1, 0, 0])), None);
        assert_eq!(g.torsion_chain_length(), 3);
    }

    #[test]
    fn cokernel_map_classes() {
        let p2 = IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[-1, -1]]);
        let cm = CokernelMap::new(&p2);
        // D_0, D_1, D_2 are all linearly equivalent on P^2
        let c0 = cm.class_of(&to_big(&[1, 0, 0])).unwrap();
        let c2 = cm.class_of(&to_big(&[0, 0, 1])).unwrap();
        assert_eq!(c0, c2);
        assert!(cm
            .class_of(&to_big(&[1, 0, -1]))
            .unwrap()
            .iter()
            .all(Zero::is_zero));
    }
}
