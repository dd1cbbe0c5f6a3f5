use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::Signed;

use super::Learner;
use crate::dimensions::{candidate_row, candidates_at, DimensionEngine, GammaValue};
use crate::error::{Error, Result};
use crate::game::{self, AffineRow};
use crate::problem::{Candidate, Mixture, Task, VersionSpace};
use crate::rational::{self, Rational};

/// Shared minimax machinery: the dimension engine plus a cache of the
/// mixture played at each (version space, instance). Many learner copies
/// (the agnostic expert pool in particular) share one core.
#[derive(Debug)]
pub struct MrsoaCore {
    engine: DimensionEngine,
    cache: RwLock<HashMap<(VersionSpace, usize), Mixture>>,
}

impl MrsoaCore {
    pub fn new(task: Task, gamma: GammaValue) -> Result<Arc<Self>> {
        Self::with_engine(DimensionEngine::new(task, gamma))
    }

    pub fn with_engine(engine: DimensionEngine) -> Result<Arc<Self>> {
        if !engine.gamma().value().is_positive() {
            return Err(Error::InvalidParameter("the minimax learner needs gamma > 0".into()));
        }
        Ok(Arc::new(MrsoaCore {
            engine,
            cache: RwLock::new(HashMap::new()),
        }))
    }

    pub fn engine(&self) -> &DimensionEngine {
        &self.engine
    }

    pub fn task(&self) -> &Task {
        self.engine.task()
    }

    pub fn gamma(&self) -> &Rational {
        self.engine.gamma().value()
    }

    /// The mixture MRSOA plays at `x` with version space `space`.
    pub fn predict(&self, space: &VersionSpace, x: usize) -> Result<Mixture> {
        let key = (space.clone(), x);
        if let Some(m) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(m.clone());
        }
        let m = self.compute(space, x)?;
        self.cache.write().expect("cache lock").insert(key, m.clone());
        Ok(m)
    }

    fn compute(&self, space: &VersionSpace, x: usize) -> Result<Mixture> {
        let task = self.task();
        task.check_instance(x)?;
        let gamma = self.gamma();
        let dim = self.engine.dimension(space)?;
        if dim == 0 {
            // the hardest threshold per label is the smallest loss any
            // survivor achieves
            let rows: Vec<AffineRow> = (0..task.problem.num_labels())
                .map(|label| {
                    let threshold = space
                        .iter()
                        .map(|h| task.hypothesis_loss(h, x, label))
                        .min()
                        .expect("nonempty space")
                        .clone();
                    candidate_row(task, &Candidate { label, threshold })
                })
                .collect();
            let s = game::solve_min_max(&rows)?;
            if s.value >= *gamma {
                return Err(Error::NoSafeMixture {
                    value: rational::format(&s.value),
                });
            }
            return Ok(s.mixture);
        }

        let mut scored = Vec::new();
        for (cand, child) in candidates_at(task, space, x) {
            let d = if child == *space { dim } else { self.engine.dimension(&child)? };
            scored.push((candidate_row(task, &cand), d));
        }
        // smallest level m such that no candidate with child dimension > m
        // is violated; m = dim − 1 always works
        let mut last_value = None;
        for level in 0..=dim {
            let rows: Vec<AffineRow> = scored
                .iter()
                .filter(|(_, d)| *d >= level)
                .map(|(r, _)| r.clone())
                .collect();
            if rows.is_empty() {
                let h = space.first().expect("nonempty space");
                return Ok(Mixture::dirac(task.problem.num_predictions(), task.class.predict(h, x)));
            }
            let s = game::solve_min_max(&rows)?;
            if s.value < *gamma {
                return Ok(s.mixture);
            }
            last_value = Some(s.value);
        }
        Err(Error::NoSafeMixture {
            value: last_value.map(|v| rational::format(&v)).unwrap_or_default(),
        })
    }
}

/// Per-run state: the version space and what was last played.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MrsoaState {
    pub version_space: VersionSpace,
    pub dimension: Option<usize>,
    pub last: Option<Mixture>,
}

impl MrsoaState {
    pub fn new(space: VersionSpace) -> Self {
        MrsoaState {
            version_space: space,
            dimension: None,
            last: None,
        }
    }
}

/// Plays the minimax mixture for the current version space.
pub fn mrsoa_predict(core: &MrsoaCore, state: &mut MrsoaState, x: usize) -> Result<Mixture> {
    if state.version_space.is_empty() {
        return Err(Error::Empty("version space"));
    }
    if state.dimension.is_none() {
        state.dimension = Some(core.engine().dimension(&state.version_space)?);
    }
    let m = core.predict(&state.version_space, x)?;
    state.last = Some(m.clone());
    Ok(m)
}

/// Keeps the hypotheses with loss at most `eps` on `(x, y)`.
pub fn mrsoa_update(task: &Task, state: &mut MrsoaState, x: usize, y: usize, eps: &Rational) -> Result<()> {
    task.check_instance(x)?;
    task.check_label(y)?;
    let next = task.restrict(
        &state.version_space,
        x,
        &Candidate {
            label: y,
            threshold: eps.clone(),
        },
    );
    if next.is_empty() {
        return Err(Error::NotRealizable);
    }
    if next != state.version_space {
        state.version_space = next;
        state.dimension = None;
    }
    Ok(())
}

/// Minimax randomized standard optimal algorithm for ε-realizable streams.
#[derive(Debug, Clone)]
pub struct Mrsoa {
    core: Arc<MrsoaCore>,
    state: MrsoaState,
}

impl Mrsoa {
    pub fn new(core: Arc<MrsoaCore>) -> Self {
        let state = MrsoaState::new(core.task().full_space());
        Mrsoa { core, state }
    }

    pub fn state(&self) -> &MrsoaState {
        &self.state
    }

    pub fn core(&self) -> &Arc<MrsoaCore> {
        &self.core
    }
}

impl Learner for Mrsoa {
    fn predict(&mut self, x: usize) -> Result<Mixture> {
        mrsoa_predict(&self.core, &mut self.state, x)
    }

    fn update(&mut self, x: usize, y: usize, eps: &Rational) -> Result<()> {
        mrsoa_update(self.core.task(), &mut self.state, x, y, eps)
    }
}
