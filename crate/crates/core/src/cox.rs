//! Relative Cox spaces of toric varieties as lifted fans.
//!
//! For `N = <W_1, ..., W_k>` with `W_i = sum a_{i,rho} D_rho`, the relative
//! spectrum of `sum_m O(m_1 W_1 + ... + m_k W_k)` is the toric variety of the fan
//! in rank `n + k` whose cones are spanned by the lifted rays
//! `(v_rho, a_{1,rho}, ..., a_{k,rho})`. The `k`-torus acts through the last `k`
//! coordinates.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::divisors::{
    principal_divisor, ClassGroup, DivisorError, DivisorSubgroup, InvariantDivisor,
};
use crate::fan::{validate_fan, Fan, FanError, LatticeVector};
use crate::lattice::{smith_normal_form, solve_integer, IntMatrix, Lattice};
use crate::singularities::{klt_report, KltReport, ToricPair};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxError {
    #[error("subgroup generators have rank {rank} but there are {generators} of them")]
    RankDeficientSubgroup { rank: usize, generators: usize },
    #[error("lifted cones do not form a fan: {0}")]
    LiftNotFan(String),
    #[error("the smaller subgroup is not contained in the larger one")]
    NotContained,
    #[error("subgroups live on fans with different ray counts")]
    IncompatibleFans,
    #[error("generator index {0} out of range")]
    GeneratorOutOfRange(usize),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Fan(#[from] FanError),
}

/// The lifted fan of a relative Cox space over a base fan.
#[derive(Clone, Debug)]
pub struct RelativeCoxSpace {
    pub base: Fan,
    pub subgroup: DivisorSubgroup,
    /// The divisors `W_i` whose coefficients form the lift, in grading order.
    pub lift_divisors: Vec<InvariantDivisor>,
    pub total: Fan,
}

impl RelativeCoxSpace {
    pub fn grading_rank(&self) -> usize {
        self.lift_divisors.len()
    }

    /// `k x (n + k)` projection onto the grading coordinates.
    pub fn grading(&self) -> IntMatrix {
        let n = self.base.ambient_rank();
        let k = self.grading_rank();
        let mut g = IntMatrix::zeros(k, n + k);
        for i in 0..k {
            *g.get_mut(i, n + i) = BigInt::one();
        }
        g
    }

    /// Whether every lifted cone is smooth.
    pub fn is_smooth(&self) -> bool {
        self.total.is_smooth()
    }

    /// Unimodular shear of `Z^{n+k}` sending the lifted cone of `cone` to
    /// `sigma x {0}`, when every lift divisor is Cartier on that chart.
    pub fn torsor_trivialization(&self, cone: usize) -> Result<Option<IntMatrix>, CoxError> {
        let idx = self.base.cone_rays(cone)?;
        let p = self.base.ray_submatrix(idx);
        let mut chars = Vec::with_capacity(self.grading_rank());
        for w in &self.lift_divisors {
            let rhs: Vec<BigInt> = w.restrict(idx).into_iter().map(|x| -x).collect();
            match solve_integer(&p, &rhs).map_err(DivisorError::from)? {
                Some(m) => chars.push(m),
                None => return Ok(None),
            }
        }
        Ok(Some(shear(self.base.ambient_rank(), &chars)))
    }

    /// Checks the trivialization: the shear maps each lifted ray to `(v_rho, 0)`.
    pub fn chart_is_trivial(&self, cone: usize) -> Result<bool, CoxError> {
        let Some(s) = self.torsor_trivialization(cone)? else {
            return Ok(false);
        };
        let n = self.base.ambient_rank();
        for &rho in self.total.cone_rays(cone)? {
            let image = s
                .mul_vec(self.total.ray(rho).coords())
                .expect("square shear");
            if image[..n] != *self.base.ray(rho).coords() || image[n..].iter().any(|x| !x.is_zero())
            {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `(v, t) -> (v, t_1 + <m_1, v>, ..., t_k + <m_k, v>)` on `Z^{n+k}`.
pub fn shear(n: usize, characters: &[Vec<BigInt>]) -> IntMatrix {
    let k = characters.len();
    let mut s = IntMatrix::identity(n + k);
    for (i, m) in characters.iter().enumerate() {
        for (j, x) in m.iter().enumerate() {
            *s.get_mut(n + i, j) = x.clone();
        }
    }
    s
}

fn lift(f: &Fan, divisors: &[InvariantDivisor]) -> Result<Fan, CoxError> {
    let n = f.ambient_rank();
    let rays = (0..f.num_rays())
        .map(|rho| {
            let tail: Vec<BigInt> = divisors.iter().map(|w| w.coeffs()[rho].clone()).collect();
            f.ray(rho).extended(&tail)
        })
        .collect();
    Ok(Fan::new(n + divisors.len(), rays, f.cones().to_vec())?)
}

/// Relative Cox space of `n` with grading by its listed generators, which must be
/// linearly independent.
pub fn relative_cox_fan(f: &Fan, n: &DivisorSubgroup) -> Result<RelativeCoxSpace, CoxError> {
    if n.num_rays() != f.num_rays() {
        return Err(CoxError::IncompatibleFans);
    }
    if !n.is_independent() {
        return Err(CoxError::RankDeficientSubgroup {
            rank: n.rank(),
            generators: n.generators().len(),
        });
    }
    build(f, n, n.generators().to_vec())
}

/// Relative Cox space graded by the Hermite basis of `n`, so any generating set
/// is accepted.
pub fn relative_cox_fan_by_basis(
    f: &Fan,
    n: &DivisorSubgroup,
) -> Result<RelativeCoxSpace, CoxError> {
    if n.num_rays() != f.num_rays() {
        return Err(CoxError::IncompatibleFans);
    }
    build(f, n, n.basis())
}

fn build(
    f: &Fan,
    n: &DivisorSubgroup,
    lift_divisors: Vec<InvariantDivisor>,
) -> Result<RelativeCoxSpace, CoxError> {
    let total = lift(f, &lift_divisors)?;
    let report = validate_fan(&total);
    if !report.is_valid() {
        let msg = report
            .violations
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ");
        return Err(CoxError::LiftNotFan(msg));
    }
    Ok(RelativeCoxSpace {
        base: f.clone(),
        subgroup: n.clone(),
        lift_divisors,
        total,
    })
}

/// Relative Cox space for `N = WDiv_T`, lifting each ray to `(v_rho, e_rho)`.
pub fn smooth_full_cover(f: &Fan) -> Result<RelativeCoxSpace, CoxError> {
    relative_cox_fan(f, &DivisorSubgroup::all(f))
}

/// Lifted space after replacing the `i`-th generator `W_i` by `W_i + div(chi^m)`.
pub fn with_shifted_generator(
    space: &RelativeCoxSpace,
    i: usize,
    m: &LatticeVector,
) -> Result<RelativeCoxSpace, CoxError> {
    let mut divisors = space.lift_divisors.clone();
    let w = divisors.get(i).ok_or(CoxError::GeneratorOutOfRange(i))?;
    divisors[i] = w + &principal_divisor(&space.base, m)?;
    let n = DivisorSubgroup::new(&space.base, divisors.clone())?;
    build(&space.base, &n, divisors)
}

/// Whether the shear by `m` in grading coordinate `i` carries every lifted ray of
/// `space` onto the corresponding lifted ray of `shifted`, cone by cone.
pub fn shear_relates(
    space: &RelativeCoxSpace,
    shifted: &RelativeCoxSpace,
    i: usize,
    m: &LatticeVector,
) -> bool {
    let n = space.base.ambient_rank();
    let k = space.grading_rank();
    let mut chars = vec![vec![BigInt::zero(); n]; k];
    chars[i] = m.coords().to_vec();
    let s = shear(n, &chars);
    space.total.cones() == shifted.total.cones()
        && (0..space.total.num_rays()).all(|rho| {
            s.mul_vec(space.total.ray(rho).coords())
                .expect("square shear")
                == shifted.total.ray(rho).coords()
        })
}

/// A generator of `N` with nontrivial local class on a maximal chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsorWitness {
    pub cone: usize,
    pub generator: usize,
    pub class: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsorVerdict {
    pub witnesses: Vec<TorsorWitness>,
}

impl TorsorVerdict {
    pub fn is_torsor(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Torsor iff every generator of `n` is Cartier on every maximal chart.
pub fn is_torsor(f: &Fan, n: &DivisorSubgroup) -> Result<TorsorVerdict, CoxError> {
    if n.num_rays() != f.num_rays() {
        return Err(CoxError::IncompatibleFans);
    }
    let mut witnesses = Vec::new();
    for c in 0..f.num_cones() {
        let local = ClassGroup::local(f, c)?;
        for (g, w) in n.generators().iter().enumerate() {
            let class = local.class_of(w)?;
            if class.iter().any(|x| !x.is_zero()) {
                witnesses.push(TorsorWitness {
                    cone: c,
                    generator: g,
                    class,
                });
            }
        }
    }
    Ok(TorsorVerdict { witnesses })
}

/// Image of a subgroup in the sum of the local class groups, as a lattice in the
/// canonical coordinates of that sum (relations included).
pub fn local_image(
    wmc: &crate::divisors::WeilModCartier,
    n: &DivisorSubgroup,
) -> Result<Lattice, CoxError> {
    let target = &wmc.target;
    let mut gens = n
        .generators()
        .iter()
        .map(|g| wmc.restriction.apply(g.coeffs()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(DivisorError::from)?;
    gens.extend(target.relations().basis().iter().cloned());
    Ok(Lattice::from_generators(target.num_generators(), &gens).map_err(DivisorError::from)?)
}

/// Verdict for the step `Cox(N_prev) <- Cox(N_next)`: a torsor when both images
/// in the sum of local class groups agree. Witnesses are generators of `next`
/// whose local class is not reached by `prev`.
pub fn relative_verdict(
    f: &Fan,
    prev: &DivisorSubgroup,
    next: &DivisorSubgroup,
) -> Result<TorsorVerdict, CoxError> {
    if prev.num_rays() != f.num_rays() || next.num_rays() != f.num_rays() {
        return Err(CoxError::IncompatibleFans);
    }
    let wmc = crate::divisors::weil_mod_cartier(f)?;
    let before = local_image(&wmc, prev)?;
    let mut witnesses = Vec::new();
    for (g, w) in next.generators().iter().enumerate() {
        let image = wmc
            .restriction
            .apply(w.coeffs())
            .map_err(DivisorError::from)?;
        if before.contains(&image) {
            continue;
        }
        let mut fallback = None;
        let mut chosen = None;
        for c in 0..f.num_cones() {
            let local = ClassGroup::local(f, c)?;
            let class = local.class_of(w)?;
            if class.iter().all(Zero::is_zero) {
                continue;
            }
            let mut prev_gens = prev
                .generators()
                .iter()
                .map(|p| local.class_of(p))
                .collect::<Result<Vec<_>, _>>()?;
            prev_gens.extend(local.group().relations().basis().iter().cloned());
            let reach = Lattice::from_generators(local.group().num_generators(), &prev_gens)
                .map_err(DivisorError::from)?;
            if !reach.contains(&class) {
                chosen = Some((c, class));
                break;
            }
            fallback.get_or_insert((c, class));
        }
        if let Some((cone, class)) = chosen.or(fallback) {
            witnesses.push(TorsorWitness {
                cone,
                generator: g,
                class,
            });
        }
    }
    Ok(TorsorVerdict { witnesses })
}

/// Subgroup of the composite of two base-presented quasi-torsors.
pub fn compose_quasi_torsors(
    inner: &DivisorSubgroup,
    outer: &DivisorSubgroup,
) -> Result<DivisorSubgroup, CoxError> {
    if inner.num_rays() != outer.num_rays() {
        return Err(CoxError::IncompatibleFans);
    }
    Ok(inner.join(outer)?)
}

pub fn subgroup_containment(smaller: &DivisorSubgroup, larger: &DivisorSubgroup) -> bool {
    smaller.num_rays() == larger.num_rays() && larger.contains_subgroup(smaller)
}

/// Result of comparing `N_Y <= N_Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientStep {
    /// `N_Z = N_Y + complement` with torsion-free quotient.
    Split { complement: DivisorSubgroup },
    /// The quotient has torsion with these invariant factors.
    Torsion { torsion: Vec<BigInt> },
}

pub fn intermediate_quotient(
    larger: &DivisorSubgroup,
    smaller: &DivisorSubgroup,
) -> Result<QuotientStep, CoxError> {
    if !subgroup_containment(smaller, larger) {
        return Err(CoxError::NotContained);
    }
    let basis = larger.lattice().basis();
    let r = basis.len();
    let coords: Vec<Vec<BigInt>> = smaller
        .lattice()
        .basis()
        .iter()
        .map(|v| larger.lattice().coordinates(v).expect("contained"))
        .collect();
    let inclusion = IntMatrix::from_columns(r, &coords).map_err(DivisorError::from)?;
    let snf = smith_normal_form(&inclusion);
    let torsion: Vec<BigInt> = snf
        .invariant_factors
        .iter()
        .filter(|d| !d.is_one())
        .cloned()
        .collect();
    if !torsion.is_empty() {
        return Ok(QuotientStep::Torsion { torsion });
    }
    // columns rank.. of u_inv complete the image of the smaller subgroup to a basis
    let k = larger.num_rays();
    let complement = (snf.rank()..r)
        .map(|c| {
            let mut d = vec![BigInt::zero(); k];
            for (j, b) in basis.iter().enumerate() {
                let a = snf.u_inv.get(j, c);
                for (x, y) in d.iter_mut().zip(b) {
                    *x += a * y;
                }
            }
            InvariantDivisor::new(d)
        })
        .collect();
    Ok(QuotientStep::Split {
        complement: DivisorSubgroup::from_generators(k, complement)?,
    })
}

/// Factoriality of the relative Cox space, decided two ways.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorialReport {
    /// `N -> Cl(U_sigma)` is onto for every maximal cone.
    pub surjective: bool,
    /// Every lifted cone, graded by a basis of `N`, is smooth.
    pub lift_smooth: bool,
}

impl FactorialReport {
    pub fn is_factorial(&self) -> bool {
        self.surjective && self.lift_smooth
    }

    pub fn agree(&self) -> bool {
        self.surjective == self.lift_smooth
    }
}

pub fn is_factorial_cover(f: &Fan, n: &DivisorSubgroup) -> Result<FactorialReport, CoxError> {
    if n.num_rays() != f.num_rays() {
        return Err(CoxError::IncompatibleFans);
    }
    let mut surjective = true;
    for c in 0..f.num_cones() {
        let local = ClassGroup::local(f, c)?;
        if !local.hom_from(n.generators())?.is_surjective() {
            surjective = false;
            break;
        }
    }
    let lift_smooth = relative_cox_fan_by_basis(f, n)?.is_smooth();
    Ok(FactorialReport {
        surjective,
        lift_smooth,
    })
}

/// klt report for every lifted chart with empty boundary.
pub fn klt_shadow(space: &RelativeCoxSpace) -> Vec<KltReport> {
    (0..space.total.num_cones())
        .map(|c| {
            let idx = &space.total.cones()[c];
            let rays: Vec<LatticeVector> =
                idx.iter().map(|&i| space.total.ray(i).clone()).collect();
            let chart = Fan::new(
                space.total.ambient_rank(),
                rays,
                vec![(0..idx.len()).collect()],
            )
            .expect("chart of a valid fan");
            klt_report(&ToricPair::without_boundary(chart))
        })
        .collect()
}
