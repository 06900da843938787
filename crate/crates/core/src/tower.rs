//! Towers of quasi-torsors.
//!
//! Two engines live here. [`run_tower`] follows an increasing chain of divisor
//! subgroups on one base fan and records where their images in the sum of local
//! class groups stop growing. The abstract model ([`AbstractCoverLevel`],
//! [`demo_iteration2`]) tracks labelled `Z/2` singular points through alternating
//! finite covers and Cox steps, which is all the class group bookkeeping needs.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::cox::{local_image, relative_verdict, CoxError, TorsorVerdict};
use crate::divisors::{weil_mod_cartier, ClassGroup, DivisorError, DivisorSubgroup};
use crate::fan::{sigma_n_fan, Fan};
use crate::lattice::{CokernelMap, FgAbelianGroup, GroupHom, IntMatrix, Lattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("subgroup {step} does not contain its predecessor")]
    ChainNotIncreasing { step: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Cox(#[from] CoxError),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
}

/// Result of running a chain `N_1 <= N_2 <= ...` over a base fan.
#[derive(Clone, Debug)]
pub struct TowerState {
    pub base: Fan,
    pub chain: Vec<DivisorSubgroup>,
    /// `Cl(U_sigma)` summed over maximal cones.
    pub target: FgAbelianGroup,
    /// Image of each `N_i` in `target`, as an abstract group.
    pub images: Vec<FgAbelianGroup>,
    image_lattices: Vec<Lattice>,
    /// Verdict of step `i` relative to step `i - 1`; the first step is relative to
    /// the trivial subgroup.
    pub verdicts: Vec<TorsorVerdict>,
    /// Least 1-based `j` with all images from `j` on equal; 0 for an empty chain.
    pub stabilization_index: usize,
}

impl TowerState {
    /// Number of strict image increases, counting the first step against zero.
    pub fn image_changes(&self) -> usize {
        let zero = Lattice::zero(self.target.num_generators())
            .join(&self.target.relations())
            .expect("same width");
        let mut prev = &zero;
        let mut changes = 0;
        for l in &self.image_lattices {
            if l != prev {
                changes += 1;
            }
            prev = l;
        }
        changes
    }

    /// Every step after the stabilization index is a torsor over its predecessor.
    pub fn post_stabilization_torsors(&self) -> bool {
        self.verdicts
            .iter()
            .skip(self.stabilization_index)
            .all(TorsorVerdict::is_torsor)
    }

    /// Upper bound on [`image_changes`](Self::image_changes) when the target is
    /// finite: the length of a maximal subgroup chain, the number of prime factors
    /// of its order counted with multiplicity.
    pub fn change_bound(&self) -> Option<usize> {
        self.target
            .is_finite()
            .then(|| self.target.torsion_chain_length())
    }
}

pub fn run_tower(f: &Fan, steps: &[DivisorSubgroup]) -> Result<TowerState, TowerError> {
    for (i, w) in steps.windows(2).enumerate() {
        if w[0].num_rays() != f.num_rays() || !w[1].contains_subgroup(&w[0]) {
            return Err(TowerError::ChainNotIncreasing { step: i + 1 });
        }
    }
    if let Some(s) = steps.first() {
        if s.num_rays() != f.num_rays() {
            return Err(TowerError::ChainNotIncreasing { step: 0 });
        }
    }
    let wmc = weil_mod_cartier(f)?;
    let mut image_lattices = Vec::with_capacity(steps.len());
    let mut images = Vec::with_capacity(steps.len());
    let mut verdicts = Vec::with_capacity(steps.len());
    let trivial = DivisorSubgroup::trivial(f);
    for (i, n) in steps.iter().enumerate() {
        image_lattices.push(local_image(&wmc, n)?);
        let hom = GroupHom::from_free(
            wmc.target.clone(),
            &n.generators()
                .iter()
                .map(|g| wmc.restriction.apply(g.coeffs()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(DivisorError::from)?,
        )
        .map_err(DivisorError::from)?;
        images.push(hom.image());
        let prev = if i == 0 { &trivial } else { &steps[i - 1] };
        verdicts.push(relative_verdict(f, prev, n)?);
    }
    let stabilization_index = match image_lattices.last() {
        None => 0,
        Some(last) => image_lattices
            .iter()
            .rposition(|l| l != last)
            .map_or(1, |p| p + 2),
    };
    Ok(TowerState {
        base: f.clone(),
        chain: steps.to_vec(),
        target: wmc.target,
        images,
        image_lattices,
        verdicts,
        stabilization_index,
    })
}

/// Multi-index `(m_0, ..., m_{i-1})` of a point, entries starting at 1.
pub type PointLabel = Vec<usize>;

pub fn format_label(label: &[usize]) -> String {
    let parts: Vec<String> = label.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

/// One level of the abstract tower: `k_0 * ... * k_{i-1}` isolated `Z/2` points,
/// each with one distinguished divisor carrying the same multi-index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractCoverLevel {
    pub index: usize,
    pub degrees: Vec<usize>,
    /// Sorted lexicographically.
    pub points: Vec<PointLabel>,
    /// Labels of the divisors generating the current subgroup.
    pub subgroup: BTreeSet<PointLabel>,
}

impl AbstractCoverLevel {
    /// A single point whose label generates nothing yet.
    pub fn base() -> Self {
        AbstractCoverLevel {
            index: 0,
            degrees: Vec::new(),
            points: vec![Vec::new()],
            subgroup: BTreeSet::new(),
        }
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    fn position(&self, label: &[usize]) -> Option<usize> {
        self.points
            .binary_search_by(|p| p.as_slice().cmp(label))
            .ok()
    }

    /// Image of a set of labels in the sum of the local `Z/2` groups.
    pub fn image_of(&self, labels: &BTreeSet<PointLabel>) -> Lattice {
        let k = self.num_points();
        let map = local_sum(k);
        let mut gens: Vec<Vec<BigInt>> = labels
            .iter()
            .filter_map(|l| self.position(l))
            .map(|p| {
                let mut e = vec![BigInt::zero(); k];
                e[p] = BigInt::from(1);
                map.class_of(&e).expect("width")
            })
            .collect();
        gens.extend(map.group.relations().basis().iter().cloned());
        Lattice::from_generators(k, &gens).expect("width")
    }
}

fn local_sum(k: usize) -> CokernelMap {
    CokernelMap::new(&IntMatrix::diagonal(&vec![BigInt::from(2); k]))
}

/// Pull a level back along a finite etale cover of degree `k`: every point and every
/// divisor label splits into `k` copies indexed by a new last entry.
pub fn finite_cover_pullback(level: &AbstractCoverLevel, k: usize) -> AbstractCoverLevel {
    if k == 1 {
        return level.clone();
    }
    let split = |l: &PointLabel| -> Vec<PointLabel> {
        (1..=k)
            .map(|m| {
                let mut x = l.clone();
                x.push(m);
                x
            })
            .collect()
    };
    let mut degrees = level.degrees.clone();
    degrees.push(k);
    AbstractCoverLevel {
        index: level.index + 1,
        degrees,
        points: level.points.iter().flat_map(split).collect(),
        subgroup: level.subgroup.iter().flat_map(split).collect(),
    }
}

/// `WDiv/CaDiv` of a level: the image of all point labels in the sum of `Z/2`'s.
pub fn weil_mod_cartier_abstract(level: &AbstractCoverLevel) -> FgAbelianGroup {
    let k = level.num_points();
    let map = local_sum(k);
    let images: Vec<Vec<BigInt>> = (0..k)
        .map(|p| {
            let mut e = vec![BigInt::zero(); k];
            e[p] = BigInt::from(1);
            map.class_of(&e).expect("width")
        })
        .collect();
    GroupHom::from_free(map.group.clone(), &images)
        .expect("labels land in the sum")
        .image()
}

/// Which labels a Cox step adds to the pulled-back subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelRecipe {
    /// Labels whose last index is below the latest degree.
    Sparse,
    /// Every label.
    FullLabels,
}

impl fmt::Display for LabelRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelRecipe::Sparse => write!(f, "sparse"),
            LabelRecipe::FullLabels => write!(f, "full"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Finite,
    Cox,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepVerdict {
    Torsor,
    NotTorsor,
    EtaleByConstruction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub index: usize,
    pub kind: StepKind,
    pub verdict: StepVerdict,
    pub witness: Option<PointLabel>,
    /// For Cox steps: the subgroup reaches every local `Z/2`.
    pub factorial: bool,
}

impl fmt::Display for StepRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            StepKind::Finite => "finite",
            StepKind::Cox => "cox",
        };
        let verdict = match self.verdict {
            StepVerdict::Torsor => "torsor",
            StepVerdict::NotTorsor => "not-torsor",
            StepVerdict::EtaleByConstruction => "etale-by-construction",
        };
        let witness = self
            .witness
            .as_deref()
            .map_or_else(|| "-".to_string(), format_label);
        write!(f, "{} {kind} {verdict} {witness}", self.index)
    }
}

#[derive(Clone, Debug)]
pub struct Transcript {
    pub steps: Vec<StepRecord>,
    /// Levels after each Cox step, starting with the base level.
    pub levels: Vec<AbstractCoverLevel>,
    pub weil_mod_cartier: Vec<FgAbelianGroup>,
    pub lines: Vec<String>,
}

impl Transcript {
    pub fn cox_steps(&self) -> impl Iterator<Item = &StepRecord> {
        self.steps.iter().filter(|s| s.kind == StepKind::Cox)
    }

    pub fn not_torsor_count(&self) -> usize {
        self.cox_steps()
            .filter(|s| s.verdict == StepVerdict::NotTorsor)
            .count()
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Alternates finite covers of the given degrees with Cox steps over the `Z/2`
/// singularity of `sigma_n_fan(n)`.
pub fn demo_iteration2(
    n: usize,
    degrees: &[usize],
    recipe: LabelRecipe,
) -> Result<Transcript, TowerError> {
    if n < 2 {
        return Err(TowerError::InvalidParameters(format!(
            "n = {n} must be at least 2"
        )));
    }
    if let Some(k) = degrees.iter().find(|&&k| k < 2) {
        return Err(TowerError::InvalidParameters(format!(
            "degree {k} must be at least 2"
        )));
    }
    let seed = seed_local_group(n)?;
    let mut lines = vec![
        format!(
            "# iteration2 n={n} degrees={} recipe={recipe}",
            degrees
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        ),
        format!("# local class group {seed} generated by the exceptional ray divisor"),
    ];
    let mut level = AbstractCoverLevel::base();
    let mut levels = vec![level.clone()];
    let mut wmc = vec![weil_mod_cartier_abstract(&level)];
    lines.push(level_line(&level, &wmc[0]));
    let mut steps = Vec::new();

    for (i, &k) in degrees.iter().enumerate() {
        let pulled = finite_cover_pullback(&level, k);
        steps.push(StepRecord {
            index: steps.len() + 1,
            kind: StepKind::Finite,
            verdict: StepVerdict::EtaleByConstruction,
            witness: None,
            factorial: false,
        });
        lines.push(steps.last().expect("pushed").to_string());

        let mut next = pulled.clone();
        next.subgroup.extend(
            pulled
                .points
                .iter()
                .filter(|p| match recipe {
                    LabelRecipe::Sparse => *p.last().expect("nonempty after a cover") < k,
                    LabelRecipe::FullLabels => true,
                })
                .cloned(),
        );
        let before = pulled.image_of(&pulled.subgroup);
        let after = next.image_of(&next.subgroup);
        let failing: Vec<&PointLabel> = next
            .points
            .iter()
            .filter(|p| next.subgroup.contains(*p) && !pulled.subgroup.contains(*p))
            .collect();
        let (verdict, witness) = if before == after {
            (StepVerdict::Torsor, None)
        } else {
            // the all-maximal path followed by 1
            let mut w: PointLabel = degrees[..i].to_vec();
            w.push(1);
            let w = if failing.contains(&&w) {
                w
            } else {
                failing[0].clone()
            };
            (StepVerdict::NotTorsor, Some(w))
        };
        let full = Lattice::full(next.num_points());
        steps.push(StepRecord {
            index: steps.len() + 1,
            kind: StepKind::Cox,
            verdict,
            witness,
            factorial: after == full,
        });
        lines.push(steps.last().expect("pushed").to_string());
        level = next;
        let group = weil_mod_cartier_abstract(&level);
        lines.push(level_line(&level, &group));
        levels.push(level.clone());
        wmc.push(group);
    }
    Ok(Transcript {
        steps,
        levels,
        weil_mod_cartier: wmc,
        lines,
    })
}

fn level_line(level: &AbstractCoverLevel, group: &FgAbelianGroup) -> String {
    format!(
        "# level {} points {} weil/cartier {} subgroup {}",
        level.index,
        level.num_points(),
        group,
        level.subgroup.len()
    )
}

/// Checks that the singular chart of `sigma_n_fan(n)` has local class group `Z/2`
/// generated by the class of the exceptional ray's divisor.
fn seed_local_group(n: usize) -> Result<FgAbelianGroup, TowerError> {
    let f = sigma_n_fan(n).map_err(|e| TowerError::InvalidParameters(e.to_string()))?;
    let singular = f.singular_cones();
    let [cone] = singular.as_slice() else {
        return Err(TowerError::InvalidParameters(
            "expected exactly one singular cone".into(),
        ));
    };
    let local = ClassGroup::local(&f, *cone)?;
    let exceptional = crate::divisors::InvariantDivisor::prime(f.num_rays(), n);
    let gen = local.hom_from(&[exceptional])?;
    let z2 = FgAbelianGroup::from_cyclic_orders(&[BigInt::from(2)]);
    if *local.group() != z2 || !gen.is_surjective() {
        return Err(TowerError::InvalidParameters(format!(
            "local class group is {}, not generated by the exceptional divisor",
            local.group()
        )));
    }
    Ok(local.group().clone())
}
