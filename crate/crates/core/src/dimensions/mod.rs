//! Sequential Minimax dimension and the classical dimensions it generalizes.
//!
//! [`DimensionEngine`] computes SMdim_γ of every version space it is asked
//! about, memoizing on the canonical version space. A version space `V` is
//! shattered to depth `d + 1` when some instance `x` admits a game value of
//! at least γ (strictly positive when γ = 0) over the rows
//! `μ ↦ E_μ[ℓ(y, ·)] − ε` of all candidates `(y, ε)` whose child
//! `{h ∈ V : ℓ(y, h(x)) ≤ ε}` is itself shattered to depth `d`. Thresholds
//! are only enumerated at the distinct losses `ℓ(y, h(x))`, `h ∈ V`, since
//! the child is a step function of ε and the row is largest at the smallest
//! ε producing a given child.
//!
//! Every achieved level is stored as a [`ShatterNode`]; together they form
//! a replayable [`ShatteringCertificate`].

mod certificate;
mod littlestone;
mod measure;
mod seqfat;

pub use certificate::{CertificateDocument, ShatteringCertificate};
pub use littlestone::ldim_k;
pub use measure::{msdim, msdim_direct, SetValuedProblem};
pub use seqfat::{numeric_values, seqfat};

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::game::{self, AffineRow};
use crate::problem::{Candidate, Task, VersionSpace};
use crate::rational::{self, Rational};

/// Default bound on memoized version spaces.
pub const DEFAULT_MEMO_CAP: usize = 1 << 20;

/// Scale γ ≥ 0; γ = 0 means the strict variant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GammaValue {
    gamma: Rational,
    strict: bool,
}

impl GammaValue {
    pub fn new(gamma: Rational) -> Result<Self> {
        if gamma.is_negative() {
            return Err(Error::InvalidParameter(format!(
                "gamma {} is negative",
                rational::format(&gamma)
            )));
        }
        let strict = gamma.is_zero();
        Ok(GammaValue { gamma, strict })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(rational::parse(text)?)
    }

    pub fn value(&self) -> &Rational {
        &self.gamma
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    /// Whether a game value certifies shattering at this scale.
    pub fn accepts(&self, game_value: &Rational) -> bool {
        if self.strict {
            game_value.is_positive()
        } else {
            *game_value >= self.gamma
        }
    }
}

impl std::fmt::Display for GammaValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&rational::format(&self.gamma))
    }
}

/// A candidate together with the child space it induces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedCandidate {
    pub candidate: Candidate,
    pub child: VersionSpace,
    pub child_dimension: usize,
}

/// Proof that a version space is shattered to one particular depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShatterNode {
    pub instance: usize,
    /// Exactly the rows of the game whose value is `value`.
    pub candidates: Vec<CertifiedCandidate>,
    pub value: Rational,
}

impl ShatterNode {
    pub fn rows(&self, task: &Task) -> Vec<AffineRow> {
        self.candidates
            .iter()
            .map(|c| candidate_row(task, &c.candidate))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceEntry {
    pub dimension: usize,
    /// `levels[d - 1]` proves depth `d`.
    pub levels: Vec<ShatterNode>,
}

/// The row `μ ↦ E_μ[ℓ(y, ·)] − ε` of a candidate.
pub fn candidate_row(task: &Task, cand: &Candidate) -> AffineRow {
    AffineRow::new(task.problem.loss_row(cand.label).to_vec(), -cand.threshold.clone())
}

/// All candidates at `x` with nonempty children, thresholds restricted to
/// the distinct losses realized in `space`. Ordered by label, then ε.
pub fn candidates_at(task: &Task, space: &VersionSpace, instance: usize) -> Vec<(Candidate, VersionSpace)> {
    let mut out = Vec::new();
    for label in 0..task.problem.num_labels() {
        let mut eps: Vec<Rational> = space
            .iter()
            .map(|h| task.hypothesis_loss(h, instance, label).clone())
            .collect();
        eps.sort();
        eps.dedup();
        for threshold in eps {
            let cand = Candidate { label, threshold };
            let child = task.restrict(space, instance, &cand);
            out.push((cand, child));
        }
    }
    out
}

/// Memoized SMdim_γ over the version spaces of one task.
///
/// Readers share the memo table; a computed entry is inserted under a write
/// lock. Concurrent computation of the same key is harmless since entries
/// are deterministic.
#[derive(Debug)]
pub struct DimensionEngine {
    task: Task,
    gamma: GammaValue,
    memo: RwLock<HashMap<VersionSpace, Arc<SpaceEntry>>>,
    memo_cap: usize,
    depth_cap: Option<usize>,
}

impl DimensionEngine {
    pub fn new(task: Task, gamma: GammaValue) -> Self {
        DimensionEngine {
            task,
            gamma,
            memo: RwLock::new(HashMap::new()),
            memo_cap: DEFAULT_MEMO_CAP,
            depth_cap: None,
        }
    }

    pub fn with_memo_cap(mut self, cap: usize) -> Self {
        self.memo_cap = cap;
        self
    }

    /// Stop searching beyond this depth; reported dimensions are then
    /// `min(SMdim, cap)`.
    pub fn with_depth_cap(mut self, cap: Option<usize>) -> Self {
        self.depth_cap = cap;
        self
    }

    pub fn task(&self) -> &Task {
        &self.task
    }

    pub fn gamma(&self) -> &GammaValue {
        &self.gamma
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().expect("memo lock").len()
    }

    pub fn dimension(&self, space: &VersionSpace) -> Result<usize> {
        Ok(self.entry(space)?.dimension)
    }

    /// SMdim with the empty space mapped to −1.
    pub fn dimension_or_sentinel(&self, space: &VersionSpace) -> Result<i64> {
        if space.is_empty() {
            Ok(-1)
        } else {
            Ok(self.dimension(space)? as i64)
        }
    }

    pub fn entry(&self, space: &VersionSpace) -> Result<Arc<SpaceEntry>> {
        if space.is_empty() {
            return Err(Error::Empty("version space"));
        }
        if let Some(e) = self.memo.read().expect("memo lock").get(space) {
            return Ok(Arc::clone(e));
        }
        let entry = Arc::new(self.compute(space)?);
        let mut memo = self.memo.write().expect("memo lock");
        if let Some(e) = memo.get(space) {
            return Ok(Arc::clone(e));
        }
        if memo.len() >= self.memo_cap {
            return Err(Error::MemoCap { cap: self.memo_cap });
        }
        memo.insert(space.clone(), Arc::clone(&entry));
        Ok(entry)
    }

    fn compute(&self, space: &VersionSpace) -> Result<SpaceEntry> {
        let task = &self.task;
        let per_instance: Vec<Vec<(Candidate, VersionSpace, Option<usize>)>> = (0..task
            .problem
            .num_instances())
            .map(|x| {
                candidates_at(task, space, x)
                    .into_iter()
                    .map(|(cand, child)| {
                        let dim = if child == *space {
                            None
                        } else {
                            Some(self.dimension(&child)?)
                        };
                        Ok((cand, child, dim))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;

        // Against the Dirac mixture on a surviving hypothesis every
        // qualifying child is a strict subset, so depth ≤ 1 + max strict.
        let strict_max = per_instance
            .iter()
            .flatten()
            .filter_map(|(_, _, d)| *d)
            .max();
        let mut limit = strict_max.map_or(0, |m| m + 1).min(space.len() - 1);
        if let Some(cap) = self.depth_cap {
            limit = limit.min(cap);
        }

        let mut levels = Vec::new();
        while levels.len() < limit {
            let depth = levels.len();
            let node = per_instance.iter().enumerate().find_map(|(x, cands)| {
                let chosen: Vec<&(Candidate, VersionSpace, Option<usize>)> = cands
                    .iter()
                    .filter(|(_, _, d)| d.is_none_or(|d| d >= depth))
                    .collect();
                if chosen.is_empty() {
                    return None;
                }
                let rows: Vec<AffineRow> = chosen.iter().map(|(c, _, _)| candidate_row(task, c)).collect();
                let (_, bound) = game::pure_strategy_bound(&rows)?;
                if !self.gamma.accepts(&bound) {
                    return None;
                }
                let solution = game::solve_min_max(&rows).ok()?;
                self.gamma.accepts(&solution.value).then(|| ShatterNode {
                    instance: x,
                    candidates: chosen
                        .iter()
                        .map(|(c, child, d)| CertifiedCandidate {
                            candidate: c.clone(),
                            child: child.clone(),
                            // a self-child has at least the depth being proved
                            child_dimension: d.unwrap_or(depth),
                        })
                        .collect(),
                    value: solution.value,
                })
            });
            match node {
                Some(n) => levels.push(n),
                None => break,
            }
        }
        // self-children were recorded with a provisional depth; patch them
        let dimension = levels.len();
        for level in levels.iter_mut() {
            for c in level.candidates.iter_mut() {
                if c.child == *space {
                    c.child_dimension = dimension;
                }
            }
        }
        Ok(SpaceEntry { dimension, levels })
    }

    /// The node proving that `space` is shattered to `depth ≥ 1`.
    pub fn node(&self, space: &VersionSpace, depth: usize) -> Result<ShatterNode> {
        let entry = self.entry(space)?;
        depth
            .checked_sub(1)
            .and_then(|i| entry.levels.get(i))
            .cloned()
            .ok_or(Error::DepthExhausted)
    }

    pub fn certificate(&self, root: &VersionSpace) -> Result<ShatteringCertificate> {
        ShatteringCertificate::extract(self, root)
    }
}

/// SMdim_γ of `space` with its certificate.
pub fn smdim(task: &Task, space: &VersionSpace, gamma: &GammaValue) -> Result<(usize, ShatteringCertificate)> {
    let engine = DimensionEngine::new(task.clone(), gamma.clone());
    let cert = engine.certificate(space)?;
    Ok((cert.depth, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::builtin;
    use crate::rational::{int, ratio};

    fn gamma(p: i64, q: i64) -> GammaValue {
        GammaValue::new(ratio(p, q)).unwrap()
    }

    #[test]
    fn gamma_value_strictness() {
        assert!(GammaValue::new(int(0)).unwrap().is_strict());
        assert!(!gamma(1, 4).is_strict());
        assert!(GammaValue::new(ratio(-1, 4)).is_err());
        let g0 = GammaValue::new(int(0)).unwrap();
        assert!(!g0.accepts(&int(0)));
        assert!(g0.accepts(&ratio(1, 100)));
        assert!(gamma(1, 4).accepts(&ratio(1, 4)));
    }

    #[test]
    fn p1_has_dimension_one() {
        let t = builtin::p1();
        let (d, cert) = smdim(&t, &t.full_space(), &gamma(1, 4)).unwrap();
        assert_eq!(d, 1);
        assert_eq!(cert.nodes.len(), 1);
        let node = cert.node(&t.full_space(), 1).unwrap();
        assert!(node.value >= ratio(1, 4));
    }

    #[test]
    fn singletons_are_never_shattered() {
        let t = builtin::hilbert();
        for h in 0..t.class.len() {
            let v = VersionSpace::from_indices(t.class.len(), [h]);
            for g in [gamma(1, 100), gamma(1, 2), GammaValue::new(int(0)).unwrap()] {
                assert_eq!(smdim(&t, &v, &g).unwrap().0, 0);
            }
        }
    }

    #[test]
    fn hilbert_half_scale() {
        let t = builtin::hilbert();
        let (d, _) = smdim(&t, &t.full_space(), &gamma(1, 2)).unwrap();
        assert!(d >= 1);
    }

    #[test]
    fn empty_space_errors() {
        let t = builtin::p1();
        assert_eq!(
            smdim(&t, &VersionSpace::empty(2), &gamma(1, 4)).unwrap_err(),
            Error::Empty("version space")
        );
        let e = DimensionEngine::new(t, gamma(1, 4));
        assert_eq!(e.dimension_or_sentinel(&VersionSpace::empty(2)).unwrap(), -1);
    }

    #[test]
    fn thresholds_have_log_depth() {
        // 4 thresholds on 3 points: Littlestone dimension 2
        let t = builtin::thresholds(3).unwrap();
        let e = DimensionEngine::new(t.clone(), gamma(1, 4));
        assert_eq!(e.dimension(&t.full_space()).unwrap(), 2);
        assert_eq!(ldim_k(&t, &t.full_space(), 1).unwrap(), 2);
    }

    #[test]
    fn memo_cap_aborts() {
        let t = builtin::thresholds(3).unwrap();
        let e = DimensionEngine::new(t.clone(), gamma(1, 4)).with_memo_cap(2);
        assert!(matches!(e.dimension(&t.full_space()), Err(Error::MemoCap { cap: 2 })));
    }

    #[test]
    fn depth_cap_truncates() {
        let t = builtin::thresholds(3).unwrap();
        let e = DimensionEngine::new(t.clone(), gamma(1, 4)).with_depth_cap(Some(1));
        assert_eq!(e.dimension(&t.full_space()).unwrap(), 1);
    }

    #[test]
    fn large_gamma_kills_shattering() {
        let t = builtin::p1();
        // c = 1, so no candidate can gain more than 1/2 against uniform
        let (d, _) = smdim(&t, &t.full_space(), &gamma(3, 4)).unwrap();
        assert_eq!(d, 0);
    }
}
