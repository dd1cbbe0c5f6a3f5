//! Learner-versus-source games with exact expected-regret accounting.
//!
//! The learner commits to μ_t before the label is revealed, and the source
//! conditions on μ_t only, so the expected loss E_{z∼μ_t}[ℓ(y_t, z)] is
//! computed exactly instead of sampled. Monte-carlo mode additionally
//! samples z_t from the recorded mixtures to exercise that path.

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adversaries::{rademacher_stream, Adversary, SqrtTWitness};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::learners::Learner;
use crate::problem::{expected_loss, Mixture, Stream, Task, ThresholdedExample};
use crate::rational::{self, Rational};

/// Largest horizon accepted by [`exact_expectation_over_signs`].
pub const SIGN_ENUMERATION_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    MonteCarlo { seed: u64, trials: usize },
}

pub enum Source<'a> {
    Stream(&'a Stream),
    Adversary(&'a mut dyn Adversary),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub instance: usize,
    pub label: usize,
    pub eps: Option<Rational>,
    pub mixture: Mixture,
    pub expected_loss: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReportMode {
    Exact,
    MonteCarlo {
        seed: u64,
        trials: usize,
        /// Mean sampled regret.
        mean: f64,
        std_err: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegretReport {
    pub rounds: Vec<RoundRecord>,
    pub cumulative: Rational,
    pub hindsight: usize,
    pub hindsight_loss: Rational,
    pub regret: Rational,
    pub mode: ReportMode,
}

impl RegretReport {
    pub fn expected_losses(&self) -> Vec<Rational> {
        self.rounds.iter().map(|r| r.expected_loss.clone()).collect()
    }

    /// The realized (x, y, ε) sequence.
    pub fn stream(&self) -> Stream {
        Stream::new(
            self.rounds
                .iter()
                .map(|r| ThresholdedExample {
                    instance: r.instance,
                    label: r.label,
                    eps: r.eps.clone(),
                })
                .collect(),
        )
        .expect("recorded thresholds are consistent")
    }

    pub fn to_document(&self) -> ReportDocument {
        let (mode, seed, trials, mean, std_err) = match &self.mode {
            ReportMode::Exact => ("exact", None, None, None, None),
            ReportMode::MonteCarlo {
                seed,
                trials,
                mean,
                std_err,
            } => ("monte-carlo", Some(*seed), Some(*trials), Some(*mean), Some(*std_err)),
        };
        ReportDocument {
            rounds: self
                .rounds
                .iter()
                .enumerate()
                .map(|(t, r)| RoundDocument {
                    round: t + 1,
                    instance: r.instance,
                    label: r.label,
                    eps: r.eps.as_ref().map(rational::format),
                    mixture: r.mixture.to_string(),
                    expected_loss: rational::format(&r.expected_loss),
                })
                .collect(),
            cumulative_loss: rational::format(&self.cumulative),
            hindsight_hypothesis: self.hindsight,
            hindsight_loss: rational::format(&self.hindsight_loss),
            regret: rational::format(&self.regret),
            mode: mode.to_string(),
            seed,
            trials,
            mean,
            std_err,
        }
    }

    /// Sorted-key JSON with rationals as strings.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self.to_document()).expect("report serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
        s.push('\n');
        s
    }

    /// Transcript with columns round, instance, label, eps, mixture,
    /// expected_loss.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        w.write_record(["round", "instance", "label", "eps", "mixture", "expected_loss"])?;
        for (t, r) in self.rounds.iter().enumerate() {
            w.write_record([
                (t + 1).to_string(),
                r.instance.to_string(),
                r.label.to_string(),
                r.eps.as_ref().map(rational::format).unwrap_or_default(),
                r.mixture.to_string(),
                rational::format(&r.expected_loss),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub rounds: Vec<RoundDocument>,
    pub cumulative_loss: String,
    pub hindsight_hypothesis: usize,
    pub hindsight_loss: String,
    pub regret: String,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_err: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundDocument {
    pub round: usize,
    pub instance: usize,
    pub label: usize,
    pub eps: Option<String>,
    pub mixture: String,
    pub expected_loss: String,
}

/// argmin_h Σ ℓ(y_t, h(x_t)) with the lowest index on ties.
pub fn best_in_hindsight(task: &Task, examples: &[ThresholdedExample]) -> (usize, Rational) {
    let mut best = (0, None::<Rational>);
    for h in 0..task.class.len() {
        let loss: Rational = examples
            .iter()
            .map(|e| task.hypothesis_loss(h, e.instance, e.label))
            .sum();
        if best.1.as_ref().is_none_or(|b| loss < *b) {
            best = (h, Some(loss));
        }
    }
    (best.0, best.1.unwrap_or_else(rational::zero))
}

/// Plays `rounds` rounds (all of a stream when it is shorter).
pub fn run_game(task: &Task, learner: &mut dyn Learner, source: Source<'_>, rounds: usize, mode: Mode) -> Result<RegretReport> {
    let mut records = Vec::with_capacity(rounds);
    match source {
        Source::Stream(stream) => {
            stream.validate_for(&task.problem)?;
            for (t, e) in stream.examples().iter().take(rounds).enumerate() {
                let mut play = || -> Result<RoundRecord> {
                    let mixture = learner.predict(e.instance)?;
                    let eps = e.eps.clone().unwrap_or_else(rational::zero);
                    learner.update(e.instance, e.label, &eps)?;
                    Ok(RoundRecord {
                        instance: e.instance,
                        label: e.label,
                        eps: e.eps.clone(),
                        expected_loss: expected_loss(&task.problem, &mixture, e.label),
                        mixture,
                    })
                };
                records.push(play().map_err(|err| err.at_round(t + 1))?);
            }
        }
        Source::Adversary(adversary) => {
            for t in 0..rounds {
                let mut play = || -> Result<RoundRecord> {
                    let x = adversary.next_instance()?;
                    let mixture = learner.predict(x)?;
                    let (y, eps) = adversary.respond(&mixture)?;
                    learner.update(x, y, &eps)?;
                    Ok(RoundRecord {
                        instance: x,
                        label: y,
                        expected_loss: expected_loss(&task.problem, &mixture, y),
                        eps: Some(eps),
                        mixture,
                    })
                };
                records.push(play().map_err(|err| err.at_round(t + 1))?);
            }
        }
    }
    report(task, records, mode)
}

pub fn run_stream(task: &Task, learner: &mut dyn Learner, stream: &Stream, mode: Mode) -> Result<RegretReport> {
    run_game(task, learner, Source::Stream(stream), stream.len(), mode)
}

fn report(task: &Task, rounds: Vec<RoundRecord>, mode: Mode) -> Result<RegretReport> {
    let cumulative: Rational = rounds.iter().map(|r| &r.expected_loss).sum();
    let examples: Vec<ThresholdedExample> = rounds
        .iter()
        .map(|r| ThresholdedExample::labeled(r.instance, r.label))
        .collect();
    let (hindsight, hindsight_loss) = best_in_hindsight(task, &examples);
    let regret = &cumulative - &hindsight_loss;
    let mode = match mode {
        Mode::Exact => ReportMode::Exact,
        Mode::MonteCarlo { seed, trials } => {
            let (mean, std_err) = sample_regret(task, &rounds, &hindsight_loss, seed, trials)?;
            ReportMode::MonteCarlo {
                seed,
                trials,
                mean,
                std_err,
            }
        }
    };
    Ok(RegretReport {
        rounds,
        cumulative,
        hindsight,
        hindsight_loss,
        regret,
        mode,
    })
}

/// Samples z_t ∼ μ_t independently per round and trial.
fn sample_regret(task: &Task, rounds: &[RoundRecord], hindsight: &Rational, seed: u64, trials: usize) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::InvalidParameter("monte-carlo needs at least one trial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dists = rounds
        .iter()
        .map(|r| {
            WeightedIndex::new(r.mixture.weights().iter().map(rational::to_f64))
                .map_err(|e| Error::InvalidParameter(e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    let offset = rational::to_f64(hindsight);
    let samples: Vec<f64> = (0..trials)
        .map(|_| {
            rounds
                .iter()
                .zip(&dists)
                .map(|(r, d)| rational::to_f64(task.problem.loss(r.label, d.sample(&mut rng))))
                .sum::<f64>()
                - offset
        })
        .collect();
    let n = trials as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = if trials > 1 {
        samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok((mean, (var / n).sqrt()))
}

/// Sign sequence number `mask` of length `t`: bit i set means σ_{i+1} = +1.
pub fn signs(mask: u64, t: usize) -> Vec<i8> {
    (0..t).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect()
}

/// Average exact regret over all 2^T sign sequences, a fresh learner per
/// sequence.
pub fn exact_expectation_over_signs<L, F>(
    task: &Task,
    witness: &SqrtTWitness,
    factory: F,
    horizon: usize,
    exec: Execution,
) -> Result<Rational>
where
    L: Learner,
    F: Fn() -> Result<L> + Sync + Send,
{
    if horizon > SIGN_ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            requested: horizon,
            cap: SIGN_ENUMERATION_CAP,
        });
    }
    let count = 1usize << horizon;
    let regrets = exec.map_range(count, |mask| -> Result<Rational> {
        let stream = rademacher_stream(witness, &signs(mask as u64, horizon));
        let mut learner = factory()?;
        Ok(run_stream(task, &mut learner, &stream, Mode::Exact)?.regret)
    });
    let total: Rational = regrets.into_iter().sum::<Result<Rational>>()?;
    Ok(total / Rational::from_integer(count.into()))
}

/// E|σ₁ + … + σ_T| by enumeration.
pub fn expected_abs_sign_sum(horizon: usize) -> Rational {
    let count = 1u64 << horizon;
    let total: i64 = (0..count)
        .map(|m| signs(m, horizon).iter().map(|&s| i64::from(s)).sum::<i64>().abs())
        .sum();
    rational::ratio(total, count as i64)
}
