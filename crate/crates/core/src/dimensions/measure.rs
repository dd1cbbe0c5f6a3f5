use std::collections::HashMap;

use num_traits::{One, Zero};

use super::{DimensionEngine, GammaValue};
use crate::error::{Error, Result};
use crate::game::{reference, AffineRow};
use crate::problem::{validate_problem, HypothesisClass, Problem, Task, VersionSpace};
use crate::rational::{self, Rational};

/// Feedback given as subsets of the prediction space, scored by the
/// indicator loss `ℓ(y, z) = 1{z ∉ y}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetValuedProblem {
    pub instances: Vec<String>,
    pub predictions: Vec<String>,
    pub sets: Vec<Vec<String>>,
}

impl SetValuedProblem {
    /// Tabulates the indicator loss; labels are named `{a,b}`.
    pub fn tabulate(&self) -> Result<Problem> {
        let mut labels = Vec::with_capacity(self.sets.len());
        let mut loss = Vec::with_capacity(self.sets.len());
        for set in &self.sets {
            let mut members = vec![false; self.predictions.len()];
            for element in set {
                let z = self
                    .predictions
                    .iter()
                    .position(|p| p == element)
                    .ok_or_else(|| Error::NotASubset {
                        element: element.clone(),
                    })?;
                members[z] = true;
            }
            labels.push(format!("{{{}}}", set.join(",")));
            loss.push(
                members
                    .iter()
                    .map(|&m| if m { Rational::zero() } else { Rational::one() })
                    .collect(),
            );
        }
        Problem::new(
            self.instances.clone(),
            labels,
            self.predictions.clone(),
            loss,
            Rational::one(),
        )
    }

    /// Reads the sets back from a {0,1} loss table.
    pub fn from_problem(problem: &Problem) -> Result<Self> {
        if !problem.is_zero_one() {
            return Err(Error::NonZeroOneLoss);
        }
        let sets = (0..problem.num_labels())
            .map(|y| {
                problem
                    .loss_row(y)
                    .iter()
                    .zip(problem.predictions())
                    .filter(|(l, _)| l.is_zero())
                    .map(|(_, z)| z.clone())
                    .collect()
            })
            .collect();
        Ok(SetValuedProblem {
            instances: problem.instances().to_vec(),
            predictions: problem.predictions().to_vec(),
            sets,
        })
    }

    pub fn task(&self, class: HypothesisClass) -> Result<Task> {
        validate_problem(self.tabulate()?, class)
    }
}

/// MSdim_γ, computed as SMdim_γ of the tabulated indicator-loss problem.
pub fn msdim(problem: &SetValuedProblem, class: &HypothesisClass, space: &VersionSpace, gamma: &GammaValue) -> Result<usize> {
    let task = problem.task(class.clone())?;
    DimensionEngine::new(task, gamma.clone()).dimension(space)
}

/// MSdim_γ by its own recursion: depth `d + 1` needs an instance at which
/// every mixture leaves some label set of depth-`d` survivors with mass at
/// most `1 − γ` (strictly below 1 when γ = 0). The inner max-min is solved
/// by vertex enumeration rather than the simplex.
pub fn msdim_direct(problem: &SetValuedProblem, class: &HypothesisClass, space: &VersionSpace, gamma: &GammaValue) -> Result<usize> {
    let task = problem.task(class.clone())?;
    if space.is_empty() {
        return Err(Error::Empty("version space"));
    }
    let members: Vec<Vec<bool>> = problem
        .sets
        .iter()
        .map(|s| problem.predictions.iter().map(|p| s.contains(p)).collect())
        .collect();
    let mut direct = Direct {
        task: &task,
        members,
        gamma,
        memo: HashMap::new(),
    };
    direct.depth(space)
}

struct Direct<'a> {
    task: &'a Task,
    members: Vec<Vec<bool>>,
    gamma: &'a GammaValue,
    memo: HashMap<VersionSpace, usize>,
}

impl Direct<'_> {
    fn depth(&mut self, space: &VersionSpace) -> Result<usize> {
        if let Some(&d) = self.memo.get(space) {
            return Ok(d);
        }
        let class = self.task.class.clone();
        // per instance: (set index, child depth or None for the parent itself)
        let mut options: Vec<Vec<(usize, Option<usize>)>> = Vec::new();
        for x in 0..self.task.problem.num_instances() {
            let mut here = Vec::new();
            for (y, member) in self.members.clone().iter().enumerate() {
                let child: Vec<usize> = space.iter().filter(|&h| member[class.predict(h, x)]).collect();
                if child.is_empty() {
                    continue;
                }
                let depth = if child.len() == space.len() {
                    None
                } else {
                    Some(self.depth(&VersionSpace::from_indices(class.len(), child))?)
                };
                here.push((y, depth));
            }
            options.push(here);
        }
        let mut d = 0;
        loop {
            let mut shattered = false;
            for here in &options {
                let rows: Vec<AffineRow> = here
                    .iter()
                    .filter(|(_, c)| c.is_none_or(|c| c >= d))
                    .map(|&(y, _)| {
                        let coefficients = self.members[y]
                            .iter()
                            .map(|&m| if m { rational::int(-1) } else { Rational::zero() })
                            .collect();
                        AffineRow::new(coefficients, Rational::zero())
                    })
                    .collect();
                if rows.is_empty() {
                    continue;
                }
                // max_μ min_y μ(y)
                let mass = -reference::min_max_by_vertices(&rows)?;
                let limit = Rational::one() - self.gamma.value();
                let ok = if self.gamma.is_strict() { mass < limit } else { mass <= limit };
                if ok {
                    shattered = true;
                    break;
                }
            }
            if !shattered {
                break;
            }
            d += 1;
        }
        self.memo.insert(space.clone(), d);
        Ok(d)
    }
}
