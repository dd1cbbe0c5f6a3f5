//! Lower-bound adversaries.
//!
//! [`ShatteringAdversary`] walks a shattering certificate, answering each
//! learner mixture with the best-responding candidate of the current node.
//! [`find_sqrt_witness`] searches for the two-hypothesis configuration
//! behind the √T lower bound and [`rademacher_stream`] turns a sign
//! sequence into the corresponding label stream.

use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::dimensions::ShatteringCertificate;
use crate::error::{Error, Result};
use crate::game;
use crate::problem::{Mixture, Stream, Task, ThresholdedExample, VersionSpace};
use crate::rational::Rational;

/// An adaptive opponent: it fixes the instance, sees the learner's mixture
/// (never its sampled prediction), then reveals the label and threshold.
pub trait Adversary {
    fn next_instance(&mut self) -> Result<usize>;
    fn respond(&mut self, mixture: &Mixture) -> Result<(usize, Rational)>;
}

#[derive(Debug, Clone)]
pub struct ShatteringAdversary {
    task: Task,
    certificate: Arc<ShatteringCertificate>,
    space: VersionSpace,
    depth: usize,
}

impl ShatteringAdversary {
    pub fn new(task: Task, certificate: Arc<ShatteringCertificate>) -> Self {
        ShatteringAdversary {
            space: certificate.root.clone(),
            depth: certificate.depth,
            task,
            certificate,
        }
    }

    /// Hypotheses consistent with every revealed threshold so far.
    pub fn surviving(&self) -> &VersionSpace {
        &self.space
    }

    pub fn remaining(&self) -> usize {
        self.depth
    }
}

impl Adversary for ShatteringAdversary {
    fn next_instance(&mut self) -> Result<usize> {
        if self.depth == 0 {
            return Err(Error::DepthExhausted);
        }
        Ok(self.certificate.node(&self.space, self.depth)?.instance)
    }

    fn respond(&mut self, mixture: &Mixture) -> Result<(usize, Rational)> {
        if self.depth == 0 {
            return Err(Error::DepthExhausted);
        }
        let node = self.certificate.node(&self.space, self.depth)?;
        let (i, _) = game::best_response(mixture, &node.rows(&self.task))?;
        let chosen = &node.candidates[i];
        let answer = (chosen.candidate.label, chosen.candidate.threshold.clone());
        self.space = chosen.child.clone();
        self.depth -= 1;
        Ok(answer)
    }
}

/// Two hypotheses and two labels at one instance separated by a gap `eta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrtTWitness {
    pub instance: usize,
    pub minus: usize,
    pub plus: usize,
    pub y_minus: usize,
    pub y_plus: usize,
    pub eta: Rational,
}

impl SqrtTWitness {
    /// Label for a sign: +1 → `y_plus`, −1 → `y_minus`.
    pub fn label(&self, sign: i8) -> usize {
        if sign > 0 {
            self.y_plus
        } else {
            self.y_minus
        }
    }
}

/// min over both signs of ℓ(y_{−σ}, h_σ(x)) − ℓ(y_σ, h_σ(x)).
pub fn witness_gap(task: &Task, x: usize, minus: usize, plus: usize, y_minus: usize, y_plus: usize) -> Rational {
    let l = |y, h| task.hypothesis_loss(h, x, y).clone();
    let plus_gap = l(y_minus, plus) - l(y_plus, plus);
    let minus_gap = l(y_plus, minus) - l(y_minus, minus);
    plus_gap.min(minus_gap)
}

/// inf_z ℓ(y₋, z) + ℓ(y₊, z) ≥ ½ Σ_{σ₁,σ₂} ℓ(y_{σ₁}, h_{σ₂}(x)).
pub fn witness_mixing(task: &Task, x: usize, minus: usize, plus: usize, y_minus: usize, y_plus: usize) -> bool {
    let p = &task.problem;
    let inf = (0..p.num_predictions())
        .map(|z| p.loss(y_minus, z) + p.loss(y_plus, z))
        .min()
        .expect("nonempty prediction space");
    let mut total = Rational::zero();
    for y in [y_minus, y_plus] {
        for h in [minus, plus] {
            total += task.hypothesis_loss(h, x, y);
        }
    }
    inf * Rational::from_integer(2.into()) >= total
}

/// The lexicographically first witness of maximal gap, if any exists.
pub fn find_sqrt_witness(task: &Task) -> Option<SqrtTWitness> {
    let p = &task.problem;
    let n = task.class.len();
    let mut best: Option<SqrtTWitness> = None;
    for x in 0..p.num_instances() {
        for minus in 0..n {
            for plus in (0..n).filter(|&h| h != minus) {
                for y_minus in 0..p.num_labels() {
                    for y_plus in 0..p.num_labels() {
                        let eta = witness_gap(task, x, minus, plus, y_minus, y_plus);
                        if !eta.is_positive() || best.as_ref().is_some_and(|b| eta <= b.eta) {
                            continue;
                        }
                        if witness_mixing(task, x, minus, plus, y_minus, y_plus) {
                            best = Some(SqrtTWitness {
                                instance: x,
                                minus,
                                plus,
                                y_minus,
                                y_plus,
                                eta,
                            });
                        }
                    }
                }
            }
        }
    }
    best
}

/// The stream (x, y_{σ₁}), …, (x, y_{σ_T}).
pub fn rademacher_stream(witness: &SqrtTWitness, signs: &[i8]) -> Stream {
    let examples = signs
        .iter()
        .map(|&s| ThresholdedExample::labeled(witness.instance, witness.label(s)))
        .collect();
    Stream::new(examples).expect("unthresholded examples are consistent")
}
