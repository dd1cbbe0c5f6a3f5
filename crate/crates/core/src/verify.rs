//! Seeded equivalence checks between SMdim and the classical dimensions,
//! plus the exact-versus-grid check of the game solver.
//!
//! Case `i` of a run with seed `s` draws its instance from the ChaCha
//! stream `(s, i)`, so results do not depend on execution order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dimensions::{ldim_k, msdim, msdim_direct, seqfat, DimensionEngine, GammaValue};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::game::{self, reference};
use crate::instances::{instance_to_json, random};
use crate::rational::{self, int, ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Proposition {
    /// SMdim = Ldim under 0-1 loss.
    Ldim,
    /// seq-fat ≤ SMdim on regression grids.
    SeqFat,
    /// SMdim = (k+1)-Ldim for lists of size ≤ k.
    List,
    /// SMdim = MSdim for set-valued feedback.
    SetValued,
}

impl Proposition {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "6.1" => Ok(Proposition::Ldim),
            "6.2" => Ok(Proposition::SeqFat),
            "6.3" => Ok(Proposition::List),
            "6.4" => Ok(Proposition::SetValued),
            other => Err(Error::InvalidParameter(format!(
                "unknown proposition {other:?}; expected 6.1, 6.2, 6.3 or 6.4"
            ))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Proposition::Ldim => "6.1",
            Proposition::SeqFat => "6.2",
            Proposition::List => "6.3",
            Proposition::SetValued => "6.4",
        }
    }
}

/// Outcome of one verification case.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CaseResult {
    pub checks: usize,
    pub counterexamples: Vec<String>,
    /// Informational observations that are not failures.
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerifyReport {
    pub cases: usize,
    pub checks: usize,
    pub counterexamples: Vec<String>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    fn collect(results: Vec<Result<CaseResult>>) -> Result<Self> {
        let mut report = VerifyReport::default();
        for r in results {
            let r = r?;
            report.cases += 1;
            report.checks += r.checks;
            report.counterexamples.extend(r.counterexamples);
            report.notes.extend(r.notes);
        }
        Ok(report)
    }
}

pub fn case_rng(seed: u64, case: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case as u64);
    rng
}

fn gamma(g: Rational) -> GammaValue {
    GammaValue::new(g).expect("nonnegative gamma")
}

/// Runs `cases` random cases of one proposition.
pub fn verify(prop: Proposition, seed: u64, cases: usize, exec: Execution) -> Result<VerifyReport> {
    let results = exec.map_range(cases, |i| {
        let rng = case_rng(seed, i);
        match prop {
            Proposition::Ldim => ldim_case(rng, i),
            Proposition::SeqFat => seqfat_case(rng, i),
            Proposition::List => list_case(rng, i),
            Proposition::SetValued => set_case(rng, i),
        }
    });
    VerifyReport::collect(results)
}

fn ldim_case(mut rng: ChaCha8Rng, case: usize) -> Result<CaseResult> {
    let task = random::multiclass(&mut rng);
    let full = task.full_space();
    let ldim = ldim_k(&task, &full, 1)?;
    let mut out = CaseResult::default();
    for g in [int(0), ratio(1, 8), ratio(1, 4), ratio(1, 2)] {
        let d = DimensionEngine::new(task.clone(), gamma(g.clone())).dimension(&full)?;
        out.checks += 1;
        if d != ldim {
            out.counterexamples.push(format!(
                "case {case}: gamma {} gives SMdim {d} but Ldim {ldim}\n{}",
                rational::format(&g),
                instance_to_json(&task)
            ));
        }
    }
    Ok(out)
}

fn list_case(mut rng: ChaCha8Rng, case: usize) -> Result<CaseResult> {
    let k = 1 + case % 2;
    let task = random::list(&mut rng, k);
    let full = task.full_space();
    let target = ldim_k(&task, &full, k)?;
    let top = ratio(1, k as i64 + 1);
    let mut out = CaseResult::default();
    for g in [top.clone(), &top / int(2), &top / int(4)] {
        let d = DimensionEngine::new(task.clone(), gamma(g.clone())).dimension(&full)?;
        out.checks += 1;
        if d != target {
            out.counterexamples.push(format!(
                "case {case}: k = {k}, gamma {} gives SMdim {d} but (k+1)-Ldim {target}\n{}",
                rational::format(&g),
                instance_to_json(&task)
            ));
        }
    }
    Ok(out)
}

fn set_case(mut rng: ChaCha8Rng, case: usize) -> Result<CaseResult> {
    let (problem, class) = random::set_valued(&mut rng);
    let full = class.full_space();
    let mut out = CaseResult::default();
    for g in [int(0), ratio(1, 8), ratio(1, 3), ratio(1, 2), int(1)] {
        let g = gamma(g);
        let a = msdim(&problem, &class, &full, &g)?;
        let b = msdim_direct(&problem, &class, &full, &g)?;
        out.checks += 1;
        if a != b {
            out.counterexamples.push(format!(
                "case {case}: gamma {g} gives SMdim {a} but MSdim {b}\n{}",
                instance_to_json(&problem.task(class.clone())?)
            ));
        }
    }
    Ok(out)
}

/// Slack for the informational upper direction: the spacing of the
/// random regression grids.
pub const SEQFAT_SLACK: (i64, i64) = (1, 2);

fn seqfat_case(mut rng: ChaCha8Rng, case: usize) -> Result<CaseResult> {
    let task = random::grid_regression(&mut rng);
    let full = task.full_space();
    let delta = ratio(SEQFAT_SLACK.0, SEQFAT_SLACK.1);
    let mut out = CaseResult::default();
    for g in [ratio(1, 4), ratio(1, 2), int(1)] {
        let fat = seqfat(&task, &full, &g)?;
        let d = DimensionEngine::new(task.clone(), gamma(g.clone())).dimension(&full)?;
        out.checks += 1;
        if fat > d {
            out.counterexamples.push(format!(
                "case {case}: gamma {} gives seq-fat {fat} above SMdim {d}\n{}",
                rational::format(&g),
                instance_to_json(&task)
            ));
        }
        let lower = &g - &delta;
        if lower > Rational::from_integer(0.into()) {
            let relaxed = seqfat(&task, &full, &lower)?;
            if d > relaxed {
                out.notes.push(format!(
                    "case {case}: SMdim at {} is {d}, seq-fat at {} is {relaxed}",
                    rational::format(&g),
                    rational::format(&lower)
                ));
            }
        }
    }
    Ok(out)
}

/// Resolution of the grid oracle for the game solver.
pub const GRID_RESOLUTION: u32 = 256;

/// Checks the exact game value against the simplex grid at resolution
/// 1/256 and against vertex enumeration.
pub fn game_oracle(seed: u64, cases: usize, exec: Execution) -> Result<VerifyReport> {
    let results = exec.map_range(cases, |i| -> Result<CaseResult> {
        let mut rng = case_rng(seed, i);
        let rows = random::game_rows(&mut rng);
        let solution = game::solve_min_max(&rows)?;
        let grid = reference::grid_min_max(&rows, GRID_RESOLUTION)?;
        let spread = rows.iter().map(|r| r.spread()).max().expect("nonempty rows");
        let slack = spread / int(i64::from(GRID_RESOLUTION));
        let vertex = reference::min_max_by_vertices(&rows)?;
        let mut out = CaseResult {
            checks: 3,
            ..CaseResult::default()
        };
        if solution.value > grid {
            out.counterexamples.push(format!(
                "case {i}: LP value {} above grid minimum {}",
                rational::format(&solution.value),
                rational::format(&grid)
            ));
        }
        if &grid - &solution.value > slack {
            out.counterexamples.push(format!(
                "case {i}: grid gap {} exceeds {}",
                rational::format(&(&grid - &solution.value)),
                rational::format(&slack)
            ));
        }
        if solution.value != vertex {
            out.counterexamples.push(format!(
                "case {i}: LP value {} but vertex enumeration {}",
                rational::format(&solution.value),
                rational::format(&vertex)
            ));
        }
        Ok(out)
    });
    VerifyReport::collect(results)
}
