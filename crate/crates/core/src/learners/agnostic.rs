use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::mrsoa::MrsoaCore;
use super::Learner;
use crate::error::{Error, Result};
use crate::problem::{expected_loss, Candidate, Mixture, Problem, VersionSpace};
use crate::rational::{self, Rational};

/// Default cap on the number of experts.
pub const DEFAULT_POOL_BUDGET: usize = 200_000;

/// An expert that updates its MRSOA copy only at the rounds in
/// `timepoints`, using the matching grid threshold instead of the
/// revealed one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpertId {
    /// Zero-based round indices, ascending.
    pub timepoints: Vec<usize>,
    pub thresholds: Vec<Rational>,
}

impl ExpertId {
    pub fn threshold_at(&self, round: usize) -> Option<&Rational> {
        self.timepoints
            .binary_search(&round)
            .ok()
            .map(|i| &self.thresholds[i])
    }
}

/// The grid {0, α, …, ⌈c/α⌉α}.
pub fn threshold_grid(alpha: &Rational, c: &Rational) -> Vec<Rational> {
    let steps = rational::ceil(&(c / alpha));
    let n = steps.to_u64().expect("grid fits in memory");
    (0..=n)
        .map(|i| alpha * Rational::from_integer(i.into()))
        .collect()
}

fn binomial(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Σ_{i ≤ d} g^i·C(T, i), the exact pool size.
pub fn pool_size(horizon: usize, d: usize, grid: usize) -> BigUint {
    (0..=d.min(horizon))
        .map(|i| BigUint::from(grid).pow(i as u32) * binomial(horizon, i))
        .sum()
}

fn combinations(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        cur.push(i);
        combinations(n, k, i + 1, cur, out);
        cur.pop();
    }
}

/// Every (L, φ_L) with |L| ≤ d, ordered by |L|, then L, then φ_L.
pub fn build_expert_pool(
    horizon: usize,
    d: usize,
    alpha: &Rational,
    c: &Rational,
    budget: usize,
) -> Result<Vec<ExpertId>> {
    if !alpha.is_positive() || alpha > c {
        return Err(Error::InvalidParameter(format!(
            "alpha = {} must lie in (0, c = {}]",
            rational::format(alpha),
            rational::format(c)
        )));
    }
    let grid = threshold_grid(alpha, c);
    let size = pool_size(horizon, d, grid.len());
    if size > BigUint::from(budget) {
        return Err(Error::PoolBudget {
            size: size.to_string(),
            budget,
        });
    }
    let mut pool = Vec::new();
    for k in 0..=d.min(horizon) {
        let mut subsets = Vec::new();
        combinations(horizon, k, 0, &mut Vec::new(), &mut subsets);
        for l in subsets {
            let mut digits = vec![0usize; k];
            loop {
                pool.push(ExpertId {
                    timepoints: l.clone(),
                    thresholds: digits.iter().map(|&i| grid[i].clone()).collect(),
                });
                // odometer over grid indices, last position fastest
                let Some(pos) = (0..k).rev().find(|&p| digits[p] + 1 < grid.len()) else {
                    break;
                };
                digits[pos] += 1;
                for v in digits.iter_mut().skip(pos + 1) {
                    *v = 0;
                }
            }
        }
    }
    debug_assert_eq!(BigUint::from(pool.len()), size);
    Ok(pool)
}

/// Multiplicative weights over experts, with losses normalized by `c`.
/// Weights are kept as logarithms in double precision.
#[derive(Debug, Clone, PartialEq)]
pub struct MwState {
    pub log_weights: Vec<f64>,
    pub eta: f64,
    pub bound: f64,
}

impl MwState {
    /// η = √(2 ln|E| / T).
    pub fn new(experts: usize, horizon: usize, bound: &Rational) -> Self {
        let eta = if experts > 1 && horizon > 0 {
            (2.0 * (experts as f64).ln() / horizon as f64).sqrt()
        } else {
            0.0
        };
        MwState {
            log_weights: vec![0.0; experts],
            eta,
            bound: rational::to_f64(bound),
        }
    }

    /// Weights normalized to sum to one.
    pub fn probabilities(&self) -> Vec<f64> {
        let max = self.log_weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = self.log_weights.iter().map(|l| (l - max).exp()).collect();
        let total: f64 = w.iter().sum();
        w.into_iter().map(|v| v / total).collect()
    }

    /// Weight-averaged mixture, converted exactly from the float weights.
    pub fn aggregate(&self, mixtures: &[Mixture]) -> Result<Mixture> {
        average(&self.probabilities(), mixtures)
    }

    /// w_e ← w_e · exp(−η·loss_e / c).
    pub fn update(&mut self, losses: &[Rational]) {
        let scale = if self.bound > 0.0 { self.eta / self.bound } else { 0.0 };
        for (lw, loss) in self.log_weights.iter_mut().zip(losses) {
            *lw -= scale * rational::to_f64(loss);
        }
    }
}

fn average(probabilities: &[f64], mixtures: &[Mixture]) -> Result<Mixture> {
    let width = mixtures.first().ok_or(Error::Empty("expert pool"))?.len();
    let mut acc = vec![Rational::zero(); width];
    for (p, m) in probabilities.iter().zip(mixtures) {
        let p = rational::from_f64(*p);
        if p.is_zero() {
            continue;
        }
        for (a, w) in acc.iter_mut().zip(m.weights()) {
            *a += &p * w;
        }
    }
    Mixture::normalized(acc)
}

/// One MW round: play the average, then reweight on the realized label.
pub fn mw_step(state: &mut MwState, mixtures: &[Mixture], problem: &Problem, label: usize) -> Result<Mixture> {
    let played = state.aggregate(mixtures)?;
    let losses: Vec<Rational> = mixtures.iter().map(|m| expected_loss(problem, m, label)).collect();
    state.update(&losses);
    Ok(played)
}

/// Expert pool of thresholded MRSOA copies aggregated by multiplicative
/// weights.
///
/// Experts sharing a version space play the same mixture, so each round
/// needs one minimax solve per distinct version space rather than per
/// expert.
#[derive(Debug, Clone)]
pub struct AgnosticLearner {
    core: Arc<MrsoaCore>,
    pool: Vec<ExpertId>,
    /// `None` until the expert's first update.
    spaces: Vec<Option<VersionSpace>>,
    mw: MwState,
    cumulative: Vec<Rational>,
    round: usize,
    dimension: usize,
    alpha: Rational,
    pending: Option<(usize, BTreeMap<VersionSpace, Mixture>)>,
}

impl AgnosticLearner {
    /// `alpha` defaults to min(1/T, c).
    pub fn new(core: Arc<MrsoaCore>, horizon: usize, alpha: Option<Rational>, budget: usize) -> Result<Self> {
        let task = core.task().clone();
        let c = task.problem.bound().clone();
        if c.is_zero() {
            return Err(Error::InvalidParameter("all losses are zero".into()));
        }
        let alpha = match alpha {
            Some(a) => a,
            None => {
                let inv = rational::ratio(1, horizon.max(1) as i64);
                inv.min(c.clone())
            }
        };
        let dimension = core.engine().dimension(&task.full_space())?;
        let pool = build_expert_pool(horizon, dimension, &alpha, &c, budget)?;
        let n = pool.len();
        Ok(AgnosticLearner {
            core,
            spaces: vec![None; n],
            mw: MwState::new(n, horizon, &c),
            cumulative: vec![Rational::zero(); n],
            pool,
            round: 0,
            dimension,
            alpha,
            pending: None,
        })
    }

    pub fn pool(&self) -> &[ExpertId] {
        &self.pool
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn eta(&self) -> f64 {
        self.mw.eta
    }

    /// Cumulative expected loss of every expert so far.
    pub fn expert_losses(&self) -> &[Rational] {
        &self.cumulative
    }

    fn space(&self, e: usize) -> VersionSpace {
        self.spaces[e].clone().unwrap_or_else(|| self.core.task().full_space())
    }
}

impl Learner for AgnosticLearner {
    fn predict(&mut self, x: usize) -> Result<Mixture> {
        let probabilities = self.mw.probabilities();
        let mut groups: BTreeMap<VersionSpace, f64> = BTreeMap::new();
        for (e, p) in probabilities.iter().enumerate() {
            *groups.entry(self.space(e)).or_insert(0.0) += p;
        }
        let mut mixtures = BTreeMap::new();
        let mut weights = Vec::with_capacity(groups.len());
        let mut plays = Vec::with_capacity(groups.len());
        for (space, w) in groups {
            let m = self.core.predict(&space, x)?;
            weights.push(w);
            plays.push(m.clone());
            mixtures.insert(space, m);
        }
        self.pending = Some((x, mixtures));
        average(&weights, &plays)
    }

    fn update(&mut self, x: usize, y: usize, _eps: &Rational) -> Result<()> {
        let task = self.core.task().clone();
        task.check_label(y)?;
        let mixtures = match self.pending.take() {
            Some((px, m)) if px == x => m,
            _ => {
                self.predict(x)?;
                self.pending.take().expect("just predicted").1
            }
        };
        let losses: Vec<Rational> = (0..self.pool.len())
            .map(|e| expected_loss(&task.problem, &mixtures[&self.space(e)], y))
            .collect();
        self.mw.update(&losses);
        for (c, l) in self.cumulative.iter_mut().zip(&losses) {
            *c += l;
        }
        for e in 0..self.pool.len() {
            if let Some(threshold) = self.pool[e].threshold_at(self.round) {
                let cand = Candidate {
                    label: y,
                    threshold: threshold.clone(),
                };
                let next = task.restrict(&self.space(e), x, &cand);
                // an expert whose guess contradicts the data keeps its space
                if !next.is_empty() {
                    self.spaces[e] = Some(next);
                }
            }
        }
        self.round += 1;
        Ok(())
    }
}
