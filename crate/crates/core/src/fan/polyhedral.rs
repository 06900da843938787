//! Dual descriptions of polyhedral cones by incremental Fourier-Motzkin
//! (double description) elimination over the integers.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::lattice::{dot, primitive, unit, IntMatrix};

/// Generators of `{u : <u, a> >= 0 for every constraint a}`: a pointed part given
/// by `rays` plus the linear subspace spanned by `lineality`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualDescription {
    pub rays: Vec<Vec<BigInt>>,
    pub lineality: Vec<Vec<BigInt>>,
}

impl DualDescription {
    /// Rays together with both signs of every lineality vector, sorted.
    pub fn generators(&self) -> Vec<Vec<BigInt>> {
        let mut out = self.rays.clone();
        for l in &self.lineality {
            out.push(l.clone());
            out.push(l.iter().map(|x| -x).collect());
        }
        out.sort();
        out.dedup();
        out
    }

    /// Whether `v` satisfies every generator as an inequality.
    pub fn admits(&self, v: &[BigInt]) -> bool {
        self.rays.iter().all(|r| !dot(r, v).is_negative())
            && self.lineality.iter().all(|l| dot(l, v).is_zero())
    }

    pub fn dimension(&self) -> usize {
        let all: Vec<_> = self.rays.iter().chain(&self.lineality).cloned().collect();
        if all.is_empty() {
            return 0;
        }
        IntMatrix::from_rows(all[0].len(), all)
            .expect("uniform width")
            .rank()
    }
}

/// Computes the cone of solutions of `<u, a> >= 0` for the given constraints in `Z^dim`.
pub fn solve_inequalities(dim: usize, constraints: &[Vec<BigInt>]) -> DualDescription {
    let mut lineality: Vec<Vec<BigInt>> = (0..dim).map(|i| unit(dim, i)).collect();
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    let mut seen: Vec<&Vec<BigInt>> = Vec::new();

    for a in constraints {
        if a.iter().all(Zero::is_zero) {
            continue;
        }
        seen.push(a);
        if let Some(k) = lineality.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lineality.remove(k);
            let mut al0 = dot(a, &l0);
            if al0.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                al0 = -al0;
            }
            let project = |v: &Vec<BigInt>| -> Vec<BigInt> {
                let av = dot(a, v);
                if av.is_zero() {
                    return v.clone();
                }
                let w: Vec<BigInt> = v.iter().zip(&l0).map(|(x, y)| &al0 * x - &av * y).collect();
                primitive(&w)
            };
            lineality = lineality.iter().map(project).collect();
            rays = rays.iter().map(project).collect();
            rays.push(primitive(&l0));
            continue;
        }

        let values: Vec<BigInt> = rays.iter().map(|r| dot(a, r)).collect();
        let mut next = Vec::new();
        for (r, v) in rays.iter().zip(&values) {
            if !v.is_negative() {
                next.push(r.clone());
            }
        }
        for (p, vp) in rays.iter().zip(&values) {
            if !vp.is_positive() {
                continue;
            }
            for (n, vn) in rays.iter().zip(&values) {
                if !vn.is_negative() {
                    continue;
                }
                let w: Vec<BigInt> = n.iter().zip(p).map(|(x, y)| vp * x - vn * y).collect();
                if w.iter().any(|x| !x.is_zero()) {
                    next.push(primitive(&w));
                }
            }
        }
        rays = prune(dim, next, &seen, lineality.len());
    }

    rays.sort();
    rays.dedup();
    let lineality = canonical_subspace_basis(dim, &lineality);
    DualDescription { rays, lineality }
}

/// Keeps one representative per extreme ray of `{x : <a, x> >= 0, a in seen}`.
fn prune(
    dim: usize,
    candidates: Vec<Vec<BigInt>>,
    seen: &[&Vec<BigInt>],
    lineality_dim: usize,
) -> Vec<Vec<BigInt>> {
    let pointed_dim = dim - lineality_dim;
    let mut kept: Vec<(Vec<bool>, Vec<BigInt>)> = Vec::new();
    for r in candidates {
        let active: Vec<bool> = seen.iter().map(|a| dot(a, &r).is_zero()).collect();
        if kept.iter().any(|(k, _)| *k == active) {
            continue;
        }
        let active_rows: Vec<Vec<BigInt>> = seen
            .iter()
            .zip(&active)
            .filter(|(_, &on)| on)
            .map(|(a, _)| (*a).clone())
            .collect();
        let rank = if active_rows.is_empty() {
            0
        } else {
            IntMatrix::from_rows(dim, active_rows)
                .expect("width")
                .rank()
        };
        if rank + 1 == pointed_dim {
            kept.push((active, r));
        }
    }
    kept.into_iter().map(|(_, r)| r).collect()
}

/// Primitive Hermite basis of the rational span of `vectors`.
fn canonical_subspace_basis(dim: usize, vectors: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = IntMatrix::from_rows(dim, vectors.to_vec()).expect("width");
    let hf = crate::lattice::hermite_normal_form(&m);
    (0..hf.rank()).map(|i| primitive(hf.h.row(i))).collect()
}
