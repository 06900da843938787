use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{DivisorError, InvariantDivisor};
use crate::fan::Fan;
use crate::lattice::{
    integer_kernel, solve_integer, solve_rational, CokernelMap, FgAbelianGroup, GroupHom,
    IntMatrix, Lattice,
};

/// Class group of `X_Sigma` or of one of its affine charts, with the map from
/// divisors to canonical class coordinates.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    rays: Vec<usize>,
    map: CokernelMap,
}

impl ClassGroup {
    /// `Cl(X_Sigma) = coker(M -> Z^{Sigma(1)})`.
    pub fn global(f: &Fan) -> Self {
        Self::of_rays(f, (0..f.num_rays()).collect())
    }

    /// `Cl(U_sigma)` for the maximal cone with the given index.
    pub fn local(f: &Fan, cone: usize) -> Result<Self, DivisorError> {
        Ok(Self::of_rays(f, f.cone_rays(cone)?.to_vec()))
    }

    /// Class group of the chart of the cone spanned by the given rays.
    pub fn of_rays(f: &Fan, rays: Vec<usize>) -> Self {
        let map = CokernelMap::new(&f.ray_submatrix(&rays));
        ClassGroup { rays, map }
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.map.group
    }

    /// Ray indices (into the fan) whose prime divisors generate this group.
    pub fn rays(&self) -> &[usize] {
        &self.rays
    }

    /// Canonical reduced coordinates of the class of `d` restricted to the chart.
    pub fn class_of(&self, d: &InvariantDivisor) -> Result<Vec<BigInt>, DivisorError> {
        Ok(self.map.class_of(&d.restrict(&self.rays))?)
    }

    pub fn is_trivial_class(&self, d: &InvariantDivisor) -> Result<bool, DivisorError> {
        Ok(self.class_of(d)?.iter().all(Zero::is_zero))
    }

    /// Homomorphism `Z^k -> Cl` sending the i-th basis vector to the class of `divisors[i]`.
    pub fn hom_from(&self, divisors: &[InvariantDivisor]) -> Result<GroupHom, DivisorError> {
        let images = divisors
            .iter()
            .map(|d| self.class_of(d))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GroupHom::from_free(self.group().clone(), &images)?)
    }
}

pub fn class_group(f: &Fan) -> FgAbelianGroup {
    ClassGroup::global(f).group().clone()
}

pub fn class_of(f: &Fan, d: &InvariantDivisor) -> Result<Vec<BigInt>, DivisorError> {
    d.check_on(f)?;
    ClassGroup::global(f).class_of(d)
}

pub fn local_class_group(f: &Fan, cone: usize) -> Result<FgAbelianGroup, DivisorError> {
    Ok(ClassGroup::local(f, cone)?.group().clone())
}

pub fn is_principal(f: &Fan, d: &InvariantDivisor) -> Result<bool, DivisorError> {
    d.check_on(f)?;
    Ok(solve_integer(&f.ray_matrix(), d.coeffs())?.is_some())
}

/// Per maximal cone, an integral `m_sigma` with `<m_sigma, v_rho> = -a_rho` on the
/// cone's rays, or `None` where `d` is not Cartier.
pub fn cartier_data(
    f: &Fan,
    d: &InvariantDivisor,
) -> Result<Vec<Option<Vec<BigInt>>>, DivisorError> {
    d.check_on(f)?;
    (0..f.num_cones())
        .map(|c| {
            let idx = f.cone_rays(c)?;
            let rhs: Vec<BigInt> = d.restrict(idx).into_iter().map(|x| -x).collect();
            Ok(solve_integer(&f.ray_submatrix(idx), &rhs)?)
        })
        .collect()
}

pub fn is_cartier(f: &Fan, d: &InvariantDivisor) -> Result<bool, DivisorError> {
    Ok(cartier_data(f, d)?.iter().all(Option::is_some))
}

pub fn is_qcartier(f: &Fan, d: &InvariantDivisor) -> Result<bool, DivisorError> {
    d.check_on(f)?;
    for c in 0..f.num_cones() {
        let idx = f.cone_rays(c)?;
        let rhs: Vec<BigInt> = d.restrict(idx).into_iter().map(|x| -x).collect();
        if solve_rational(&f.ray_submatrix(idx), &rhs)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Least `k >= 1` with `k d` Cartier, or `None` when `d` is not Q-Cartier.
///
/// On each chart this is the order of the class of `d` in `Cl(U_sigma)`.
pub fn cartier_index(f: &Fan, d: &InvariantDivisor) -> Result<Option<BigInt>, DivisorError> {
    d.check_on(f)?;
    let mut index = BigInt::one();
    for c in 0..f.num_cones() {
        let local = ClassGroup::local(f, c)?;
        match local.group().element_order(&local.class_of(d)?) {
            Some(o) => index = index.lcm(&o),
            None => return Ok(None),
        }
    }
    Ok(Some(index))
}

/// `WDiv_T(X) / CaDiv_T(X)` together with its embedding into the sum of the local
/// class groups of the maximal charts.
#[derive(Clone, Debug)]
pub struct WeilModCartier {
    /// The image of the restriction map, isomorphic to Weil modulo Cartier.
    pub group: FgAbelianGroup,
    /// `Cl(U_sigma)` for every maximal cone, in cone order.
    pub local_groups: Vec<FgAbelianGroup>,
    /// Canonical form of the direct sum of the local groups.
    pub target: FgAbelianGroup,
    /// `Z^{Sigma(1)} -> target`, restricting and taking local classes.
    pub restriction: GroupHom,
    /// `local_classes[rho][sigma]`: class of `D_rho` in `Cl(U_sigma)`.
    pub local_classes: Vec<Vec<Vec<BigInt>>>,
    /// Kernel of `restriction`.
    pub kernel: Lattice,
    /// Cartier divisors, computed directly from the chart-wise principality systems.
    pub cartier: Lattice,
}

impl WeilModCartier {
    /// Whether the restriction kernel is exactly the Cartier subgroup.
    pub fn is_monomorphism(&self) -> bool {
        self.kernel == self.cartier
    }
}

pub fn weil_mod_cartier(f: &Fan) -> Result<WeilModCartier, DivisorError> {
    let n = f.ambient_rank();
    let k = f.num_rays();
    let r = f.num_cones();
    let locals = (0..r)
        .map(|c| ClassGroup::local(f, c))
        .collect::<Result<Vec<_>, _>>()?;

    // block sum of the chart pairing matrices: (sum_sigma M) -> (sum_sigma Z^{sigma(1)})
    let total_rows: usize = (0..r).map(|c| f.cones()[c].len()).sum();
    let mut block = IntMatrix::zeros(total_rows, r * n);
    let mut restrict = IntMatrix::zeros(total_rows, k);
    let mut row = 0;
    for c in 0..r {
        for &rho in &f.cones()[c] {
            for j in 0..n {
                *block.get_mut(row, c * n + j) = f.ray(rho).coords()[j].clone();
            }
            *restrict.get_mut(row, rho) = BigInt::one();
            row += 1;
        }
    }
    let sum_map = CokernelMap::new(&block);
    let images = (0..k)
        .map(|rho| sum_map.class_of(&restrict.column(rho)))
        .collect::<Result<Vec<_>, _>>()?;
    let restriction = GroupHom::from_free(sum_map.group.clone(), &images)?;
    let kernel = restriction.kernel_lattice();

    // (D, m_1, ..., m_r) with D|sigma + P_sigma m_sigma = 0 on every chart
    let mut system_cols = restrict.column_vectors();
    system_cols.extend(block.column_vectors());
    let system = IntMatrix::from_columns(total_rows, &system_cols)?;
    let solutions = integer_kernel(&system);
    let projected: Vec<Vec<BigInt>> = solutions.basis().iter().map(|v| v[..k].to_vec()).collect();
    let cartier = Lattice::from_generators(k, &projected)?;

    let local_classes = (0..k)
        .map(|rho| {
            let d = InvariantDivisor::prime(k, rho);
            locals
                .iter()
                .map(|l| l.class_of(&d))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(WeilModCartier {
        group: restriction.image(),
        local_groups: locals.iter().map(|l| l.group().clone()).collect(),
        target: sum_map.group,
        restriction,
        local_classes,
        kernel,
        cartier,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{affine_space, projective_plane, sigma_n_fan, single_cone_fan, LatticeVector};

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(v)
    }

    fn z2() -> FgAbelianGroup {
        FgAbelianGroup::new(0, vec![BigInt::from(2)]).unwrap()
    }

    #[test]
    fn global_class_groups() {
        assert_eq!(class_group(&projective_plane()), FgAbelianGroup::free(1));
        assert!(class_group(&affine_space(2)).is_trivial());
        let a1 = single_cone_fan(&[lv(&[0, 1]), lv(&[2, 1])]).unwrap();
        assert_eq!(class_group(&a1), z2());
    }

    #[test]
    fn local_class_groups() {
        let a2 = affine_space(2);
        assert!(local_class_group(&a2, 0).unwrap().is_trivial());
        let c = single_cone_fan(&[lv(&[1, 0]), lv(&[1, 2])]).unwrap();
        assert_eq!(local_class_group(&c, 0).unwrap(), z2());
        for n in 2..=4 {
            let s = sigma_n_fan(n).unwrap();
            assert_eq!(local_class_group(&s, 0).unwrap(), z2());
            for c in 1..n {
                assert!(local_class_group(&s, c).unwrap().is_trivial());
            }
        }
        assert!(local_class_group(&a2, 3).is_err());
    }

    #[test]
    fn cartier_on_a1_cone() {
        let a1 = single_cone_fan(&[lv(&[0, 1]), lv(&[2, 1])]).unwrap();
        let d = InvariantDivisor::from_i64(&[1, 0]);
        assert!(!is_cartier(&a1, &d).unwrap());
        assert!(is_qcartier(&a1, &d).unwrap());
        assert_eq!(cartier_index(&a1, &d).unwrap(), Some(BigInt::from(2)));
        let twice = d.scaled(&BigInt::from(2));
        assert!(is_cartier(&a1, &twice).unwrap());
        // m = (1, -2) solves <m,(0,1)> = -2, <m,(2,1)> = 0
        assert_eq!(
            cartier_data(&a1, &twice).unwrap(),
            vec![Some(crate::lattice::to_big(&[1, -2]))]
        );
    }

    #[test]
    fn smooth_fans_are_factorial() {
        let p2 = projective_plane();
        assert!(is_cartier(&p2, &InvariantDivisor::from_i64(&[1, 0, 0])).unwrap());
        let wmc = weil_mod_cartier(&p2).unwrap();
        assert!(wmc.group.is_trivial());
        assert!(wmc.is_monomorphism());
    }

    #[test]
    fn principal_divisors_are_cartier() {
        let s = sigma_n_fan(3).unwrap();
        let m = lv(&[1, -2, 3]);
        let d = super::super::principal_divisor(&s, &m).unwrap();
        assert!(is_principal(&s, &d).unwrap());
        assert!(is_cartier(&s, &d).unwrap());
        assert_eq!(cartier_index(&s, &d).unwrap(), Some(BigInt::one()));
    }

    #[test]
    fn non_qcartier_divisor() {
        // cone over a square: D_0 alone is not Q-Cartier
        let sq = single_cone_fan(&[
            lv(&[0, 0, 1]),
            lv(&[1, 0, 1]),
            lv(&[1, 1, 1]),
            lv(&[0, 1, 1]),
        ])
        .unwrap();
        let d = InvariantDivisor::prime(4, 0);
        assert!(!is_qcartier(&sq, &d).unwrap());
        assert_eq!(cartier_index(&sq, &d).unwrap(), None);
        assert_eq!(local_class_group(&sq, 0).unwrap(), FgAbelianGroup::free(1));
    }

    #[test]
    fn weil_mod_cartier_of_sigma_n() {
        for n in 2..=4 {
            let wmc = weil_mod_cartier(&sigma_n_fan(n).unwrap()).unwrap();
            assert_eq!(wmc.group, z2());
            assert!(wmc.is_monomorphism());
        }
    }

    #[test]
    fn disjoint_singular_charts() {
        let f = Fan::new(
            4,
            vec![
                lv(&[1, 0, 0, 0]),
                lv(&[1, 2, 0, 0]),
                lv(&[0, 0, 1, 0]),
                lv(&[0, 0, 1, 2]),
            ],
            vec![vec![0, 1], vec![2, 3]],
        )
        .unwrap();
        let wmc = weil_mod_cartier(&f).unwrap();
        assert_eq!(
            wmc.group,
            FgAbelianGroup::new(0, vec![BigInt::from(2), BigInt::from(2)]).unwrap()
        );
        assert!(wmc.is_monomorphism());
        assert_eq!(wmc.local_groups, vec![z2(), z2()]);
    }
}
