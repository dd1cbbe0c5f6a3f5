//! Online learners: the minimax version-space learner, the agnostic
//! expert-pool learner, follow-the-leader and two oblivious baselines.

mod agnostic;
mod mrsoa;

pub use agnostic::{
    build_expert_pool, mw_step, pool_size, threshold_grid, AgnosticLearner, ExpertId, MwState,
    DEFAULT_POOL_BUDGET,
};
pub use mrsoa::{mrsoa_predict, mrsoa_update, Mrsoa, MrsoaCore, MrsoaState};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::problem::{Mixture, Task};
use crate::rational::{self, Rational};

/// A learner sees the instance, commits to a mixture over predictions, then
/// observes the label and threshold.
pub trait Learner {
    fn predict(&mut self, x: usize) -> Result<Mixture>;
    fn update(&mut self, x: usize, y: usize, eps: &Rational) -> Result<()>;
}

impl<L: Learner + ?Sized> Learner for Box<L> {
    fn predict(&mut self, x: usize) -> Result<Mixture> {
        (**self).predict(x)
    }

    fn update(&mut self, x: usize, y: usize, eps: &Rational) -> Result<()> {
        (**self).update(x, y, eps)
    }
}

/// Follow the leader: the Dirac on the prediction of the hypothesis with
/// the least cumulative loss so far, lowest index on ties.
#[derive(Debug, Clone)]
pub struct Ftl {
    task: Task,
    cumulative: Vec<Rational>,
}

impl Ftl {
    pub fn new(task: Task) -> Self {
        let n = task.class.len();
        Ftl {
            task,
            cumulative: vec![rational::zero(); n],
        }
    }

    pub fn leader(&self) -> usize {
        let mut best = 0;
        for (h, l) in self.cumulative.iter().enumerate() {
            if *l < self.cumulative[best] {
                best = h;
            }
        }
        best
    }
}

impl Learner for Ftl {
    fn predict(&mut self, x: usize) -> Result<Mixture> {
        self.task.check_instance(x)?;
        let z = self.task.class.predict(self.leader(), x);
        Ok(Mixture::dirac(self.task.problem.num_predictions(), z))
    }

    fn update(&mut self, x: usize, y: usize, _eps: &Rational) -> Result<()> {
        self.task.check_instance(x)?;
        self.task.check_label(y)?;
        for (h, c) in self.cumulative.iter_mut().enumerate() {
            *c += self.task.hypothesis_loss(h, x, y);
        }
        Ok(())
    }
}

/// Always plays the uniform mixture.
#[derive(Debug, Clone)]
pub struct Uniform {
    predictions: usize,
}

impl Uniform {
    pub fn new(task: &Task) -> Self {
        Uniform {
            predictions: task.problem.num_predictions(),
        }
    }
}

impl Learner for Uniform {
    fn predict(&mut self, _x: usize) -> Result<Mixture> {
        Ok(Mixture::uniform(self.predictions))
    }

    fn update(&mut self, _x: usize, _y: usize, _eps: &Rational) -> Result<()> {
        Ok(())
    }
}

/// Plays a fresh seeded random mixture every round, ignoring feedback.
#[derive(Debug, Clone)]
pub struct RandomMixture {
    predictions: usize,
    rng: ChaCha8Rng,
}

impl RandomMixture {
    pub fn new(task: &Task, seed: u64) -> Self {
        RandomMixture {
            predictions: task.problem.num_predictions(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Learner for RandomMixture {
    fn predict(&mut self, _x: usize) -> Result<Mixture> {
        let mut w: Vec<Rational> = (0..self.predictions)
            .map(|_| rational::int(self.rng.gen_range(0..=8)))
            .collect();
        if w.iter().all(|v| *v == rational::zero()) {
            w[0] = rational::one();
        }
        Mixture::normalized(w)
    }

    fn update(&mut self, _x: usize, _y: usize, _eps: &Rational) -> Result<()> {
        Ok(())
    }
}
