//! Singularities of toric pairs.
//!
//! For a pair `(X_Sigma, Delta)` with `Delta = sum b_rho D_rho`, the log
//! discrepancy of the divisor attached to a lattice point `v` in the support is
//! `phi(v)`, where `phi` is linear on each maximal cone and `phi(v_rho) = 1 - b_rho`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::divisors::{local_class_group, DivisorError, InvariantDivisor};
use crate::fan::{single_cone_fan, Cone, Fan, LatticeVector};
use crate::lattice::solve_rational_rhs;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SingularityError {
    #[error("K + boundary is not Q-Cartier on cone {cone}")]
    NotQCartier { cone: usize },
    #[error("vector lies outside the support of the fan")]
    OutsideSupport,
    #[error("log discrepancy is undefined at the origin")]
    ZeroVector,
    #[error("boundary coefficient {index} is outside [0, 1]")]
    BoundaryOutOfRange { index: usize },
    #[error("boundary has {found} coefficients but the fan has {expected} rays")]
    WrongLength { expected: usize, found: usize },
    #[error("vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Divisor(#[from] DivisorError),
}

/// `K_X = -sum D_rho`.
pub fn canonical_divisor(f: &Fan) -> InvariantDivisor {
    InvariantDivisor::new(vec![-BigInt::one(); f.num_rays()])
}

/// A toric variety with an invariant boundary `Delta = sum b_rho D_rho`, `0 <= b_rho <= 1`.
#[derive(Clone, Debug)]
pub struct ToricPair {
    fan: Fan,
    boundary: Vec<BigRational>,
}

impl ToricPair {
    pub fn new(fan: Fan, boundary: Vec<BigRational>) -> Result<Self, SingularityError> {
        if boundary.len() != fan.num_rays() {
            return Err(SingularityError::WrongLength {
                expected: fan.num_rays(),
                found: boundary.len(),
            });
        }
        if let Some(index) = boundary
            .iter()
            .position(|b| b.is_negative() || *b > BigRational::one())
        {
            return Err(SingularityError::BoundaryOutOfRange { index });
        }
        Ok(ToricPair { fan, boundary })
    }

    /// The pair with empty boundary.
    pub fn without_boundary(fan: Fan) -> Self {
        let boundary = vec![BigRational::zero(); fan.num_rays()];
        ToricPair { fan, boundary }
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn boundary(&self) -> &[BigRational] {
        &self.boundary
    }

    /// Coefficients of `K_X + Delta`, namely `b_rho - 1`.
    pub fn log_canonical_coeffs(&self) -> Vec<BigRational> {
        self.boundary
            .iter()
            .map(|b| b - BigRational::one())
            .collect()
    }

    pub fn discrepancy_function(&self) -> Result<DiscrepancyFunction, SingularityError> {
        discrepancy_function(self)
    }
}

/// Piecewise-linear log discrepancy: one rational `m_sigma` per maximal cone with
/// `<m_sigma, v_rho> = 1 - b_rho` on the cone's rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscrepancyFunction {
    pub per_cone: Vec<Vec<BigRational>>,
}

impl DiscrepancyFunction {
    pub fn evaluate_on(&self, cone: usize, v: &[BigInt]) -> BigRational {
        self.per_cone[cone]
            .iter()
            .zip(v)
            .map(|(m, x)| m * BigRational::from_integer(x.clone()))
            .fold(BigRational::zero(), |acc, t| acc + t)
    }

    /// Whether `m_sigma` and `m_tau` agree on every ray shared by two maximal cones.
    pub fn is_consistent(&self, f: &Fan) -> bool {
        let cones = f.cones();
        for i in 0..cones.len() {
            for j in i + 1..cones.len() {
                for rho in cones[i].iter().filter(|r| cones[j].contains(r)) {
                    let v = f.ray(*rho).coords();
                    if self.evaluate_on(i, v) != self.evaluate_on(j, v) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub fn discrepancy_function(p: &ToricPair) -> Result<DiscrepancyFunction, SingularityError> {
    let f = &p.fan;
    let target: Vec<BigRational> = p.boundary.iter().map(|b| BigRational::one() - b).collect();
    let mut per_cone = Vec::with_capacity(f.num_cones());
    for c in 0..f.num_cones() {
        let idx = f.cone_rays(c).map_err(DivisorError::from)?;
        let rhs: Vec<BigRational> = idx.iter().map(|&i| target[i].clone()).collect();
        let m = solve_rational_rhs(&f.ray_submatrix(idx), &rhs)
            .map_err(DivisorError::from)?
            .ok_or(SingularityError::NotQCartier { cone: c })?;
        per_cone.push(m);
    }
    Ok(DiscrepancyFunction { per_cone })
}

/// Log discrepancy of the toric valuation of `v`.
///
/// Non-primitive `v` is accepted and gives the homogeneous extension.
pub fn log_discrepancy(p: &ToricPair, v: &LatticeVector) -> Result<BigRational, SingularityError> {
    if v.dim() != p.fan.ambient_rank() {
        return Err(SingularityError::DimensionMismatch {
            expected: p.fan.ambient_rank(),
            found: v.dim(),
        });
    }
    if v.is_zero() {
        return Err(SingularityError::ZeroVector);
    }
    let phi = discrepancy_function(p)?;
    let cone = p
        .fan
        .cone_containing(v)
        .ok_or(SingularityError::OutsideSupport)?;
    Ok(phi.evaluate_on(cone, v.coords()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KltFailure {
    NotQCartier {
        cone: usize,
    },
    /// Boundary coefficient equal to one (klt fails, lc may hold).
    ReducedComponent {
        ray: usize,
    },
}

impl fmt::Display for KltFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KltFailure::NotQCartier { cone } => write!(f, "K+D not Q-Cartier on cone {cone}"),
            KltFailure::ReducedComponent { ray } => {
                write!(f, "boundary coefficient 1 on ray {ray}")
            }
        }
    }
}

pub const KLT_TYPE_NOTE: &str = "klt type via toric standard boundary";

/// Outcome of the toric klt/lc test. Never errors: a failure carries its reason.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KltReport {
    pub klt: bool,
    pub lc: bool,
    pub failure: Option<KltFailure>,
    /// Set when the boundary is empty and `K_X` is not Q-Cartier: the variety is
    /// still of klt type, but no boundary certificate is computed.
    pub note: Option<&'static str>,
}

pub fn klt_report(p: &ToricPair) -> KltReport {
    if let Err(SingularityError::NotQCartier { cone }) = discrepancy_function(p) {
        let empty = p.boundary.iter().all(Zero::is_zero);
        return KltReport {
            klt: false,
            lc: false,
            failure: Some(KltFailure::NotQCartier { cone }),
            note: empty.then_some(KLT_TYPE_NOTE),
        };
    }
    match p.boundary.iter().position(One::is_one) {
        Some(ray) => KltReport {
            klt: false,
            lc: true,
            failure: Some(KltFailure::ReducedComponent { ray }),
            note: None,
        },
        None => KltReport {
            klt: true,
            lc: true,
            failure: None,
            note: None,
        },
    }
}

pub fn is_klt(p: &ToricPair) -> bool {
    klt_report(p).klt
}

pub fn is_lc(p: &ToricPair) -> bool {
    klt_report(p).lc
}

/// Nonzero lattice points `v` of the support with `phi(v) <= 1` (empty boundary),
/// each tagged with the first maximal cone containing it and `phi(v)`.
pub fn low_discrepancy_points(
    f: &Fan,
) -> Result<Vec<(LatticeVector, BigRational)>, SingularityError> {
    let phi = discrepancy_function(&ToricPair::without_boundary(f.clone()))?;
    let n = f.ambient_rank();
    let mut out = Vec::new();
    for c in 0..f.num_cones() {
        let idx = f.cone_rays(c).map_err(DivisorError::from)?;
        let cone = f.cone(c).map_err(DivisorError::from)?;
        // phi is 1 on every ray, so the region is conv(0, rays)
        let mut lo = vec![BigInt::zero(); n];
        let mut hi = vec![BigInt::zero(); n];
        for &i in idx {
            for (j, x) in f.ray(i).coords().iter().enumerate() {
                lo[j] = lo[j].clone().min(x.clone());
                hi[j] = hi[j].clone().max(x.clone());
            }
        }
        for v in box_points(&lo, &hi) {
            let lv = LatticeVector::new(v);
            if lv.is_zero() || !cone.contains(&lv) || f.cone_containing(&lv) != Some(c) {
                continue;
            }
            let value = phi.evaluate_on(c, lv.coords());
            if value <= BigRational::one() {
                out.push((lv, value));
            }
        }
    }
    Ok(out)
}

fn box_points(lo: &[BigInt], hi: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut points = vec![Vec::new()];
    for (a, b) in lo.iter().zip(hi) {
        let mut next = Vec::new();
        for p in &points {
            let mut x = a.clone();
            while x <= *b {
                let mut q = p.clone();
                q.push(x.clone());
                next.push(q);
                x += 1;
            }
        }
        points = next;
    }
    points
}

/// No nonzero lattice point of the support has log discrepancy below one.
pub fn is_canonical(f: &Fan) -> Result<bool, SingularityError> {
    Ok(low_discrepancy_points(f)?
        .iter()
        .all(|(_, value)| *value >= BigRational::one()))
}

/// The only nonzero points with log discrepancy at most one are the ray generators.
pub fn is_terminal(f: &Fan) -> Result<bool, SingularityError> {
    Ok(low_discrepancy_points(f)?
        .iter()
        .all(|(v, _)| f.rays().contains(v)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmoothFactorial {
    pub is_smooth: bool,
    pub is_factorial: bool,
    pub agree: bool,
}

/// Compares smoothness of the cone with triviality of its local class group.
pub fn smooth_iff_factorial_check(c: &Cone) -> Result<SmoothFactorial, SingularityError> {
    let chart = single_cone_fan(c.rays()).map_err(DivisorError::from)?;
    let is_smooth = c.is_smooth();
    let is_factorial = local_class_group(&chart, 0)?.is_trivial();
    Ok(SmoothFactorial {
        is_smooth,
        is_factorial,
        agree: is_smooth == is_factorial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisors::class_of;
    use crate::fan::{affine_space, projective_plane, sigma_n_fan};

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(v)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn a1() -> Fan {
        single_cone_fan(&[lv(&[0, 1]), lv(&[2, 1])]).unwrap()
    }

    #[test]
    fn canonical_divisors() {
        let p2 = projective_plane();
        let k = canonical_divisor(&p2);
        assert_eq!(k, InvariantDivisor::from_i64(&[-1, -1, -1]));
        assert_eq!(class_of(&p2, &k).unwrap(), vec![BigInt::from(-3)]);
        let a2 = affine_space(2);
        assert!(crate::divisors::is_principal(&a2, &canonical_divisor(&a2)).unwrap());
    }

    #[test]
    fn log_discrepancies() {
        let p = ToricPair::without_boundary(a1());
        assert_eq!(log_discrepancy(&p, &lv(&[1, 1])).unwrap(), q(1, 1));
        assert_eq!(log_discrepancy(&p, &lv(&[2, 2])).unwrap(), q(2, 1));
        let s = ToricPair::without_boundary(affine_space(2));
        assert_eq!(log_discrepancy(&s, &lv(&[1, 1])).unwrap(), q(2, 1));
        assert_eq!(
            log_discrepancy(&s, &lv(&[-1, 0])),
            Err(SingularityError::OutsideSupport)
        );
        let b = ToricPair::new(a1(), vec![q(1, 3), q(1, 2)]).unwrap();
        assert_eq!(log_discrepancy(&b, &lv(&[0, 1])).unwrap(), q(2, 3));
        assert_eq!(log_discrepancy(&b, &lv(&[2, 1])).unwrap(), q(1, 2));
    }

    #[test]
    fn klt_and_lc() {
        let p = ToricPair::without_boundary(sigma_n_fan(3).unwrap());
        assert!(is_klt(&p));
        let half = ToricPair::new(a1(), vec![q(1, 2), q(1, 2)]).unwrap();
        assert!(is_klt(&half));
        let reduced = ToricPair::new(a1(), vec![q(1, 1), q(0, 1)]).unwrap();
        let r = klt_report(&reduced);
        assert!(!r.klt && r.lc);
        assert_eq!(r.failure, Some(KltFailure::ReducedComponent { ray: 0 }));
        assert!(ToricPair::new(a1(), vec![q(3, 2), q(0, 1)]).is_err());
    }

    #[test]
    fn non_gorenstein_without_boundary_gets_note() {
        // four rays not on a common affine hyperplane: K is not Q-Cartier
        let f = single_cone_fan(&[
            lv(&[1, 0, 0]),
            lv(&[0, 1, 0]),
            lv(&[0, 0, 1]),
            lv(&[1, 1, -2]),
        ])
        .unwrap();
        let r = klt_report(&ToricPair::without_boundary(f));
        assert!(!r.klt);
        assert_eq!(r.failure, Some(KltFailure::NotQCartier { cone: 0 }));
        assert_eq!(r.note, Some(KLT_TYPE_NOTE));
    }

    #[test]
    fn canonical_and_terminal() {
        assert!(is_canonical(&a1()).unwrap());
        assert!(!is_terminal(&a1()).unwrap());
        let a2 = single_cone_fan(&[lv(&[0, 1]), lv(&[3, 1])]).unwrap();
        assert!(is_canonical(&a2).unwrap());
        assert!(is_terminal(&affine_space(3)).unwrap());
        // 1/3(1,1): the point (1,1) has discrepancy 2/3
        let c = single_cone_fan(&[lv(&[0, 1]), lv(&[3, 2])]).unwrap();
        assert!(!is_canonical(&c).unwrap());
    }

    #[test]
    fn smooth_versus_factorial() {
        let smooth = Cone::new(&[lv(&[1, 0]), lv(&[0, 1])]).unwrap();
        let r = smooth_iff_factorial_check(&smooth).unwrap();
        assert_eq!((r.is_smooth, r.is_factorial, r.agree), (true, true, true));
        let sing = Cone::new(&[lv(&[0, 1]), lv(&[2, 1])]).unwrap();
        let r = smooth_iff_factorial_check(&sing).unwrap();
        assert_eq!((r.is_smooth, r.is_factorial, r.agree), (false, false, true));
    }

    #[test]
    fn consistency_on_complete_fan() {
        let p = ToricPair::without_boundary(sigma_n_fan(2).unwrap());
        assert!(p.discrepancy_function().unwrap().is_consistent(p.fan()));
    }
}
