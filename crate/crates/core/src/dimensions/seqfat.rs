use std::collections::HashMap;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::problem::{Task, VersionSpace};
use crate::rational::{self, Rational};

/// Parses names such as `-1/2` or `0.5` as the numbers they denote.
pub fn numeric_values(names: &[String]) -> Result<Vec<Rational>> {
    names
        .iter()
        .map(|n| rational::parse(n).map_err(|_| Error::NonNumeric(n.clone())))
        .collect()
}

/// Sequential fat-shattering dimension at scale γ > 0 with witnesses
/// drawn from the label grid.
pub fn seqfat(task: &Task, space: &VersionSpace, gamma: &Rational) -> Result<usize> {
    if !gamma.is_positive() {
        return Err(Error::InvalidParameter("seqfat needs gamma > 0".into()));
    }
    if space.is_empty() {
        return Err(Error::Empty("version space"));
    }
    let mut witnesses = numeric_values(task.problem.labels())?;
    witnesses.sort();
    witnesses.dedup();
    let values = numeric_values(task.problem.predictions())?;
    let mut search = Fat {
        task,
        gamma,
        witnesses,
        values,
        memo: HashMap::new(),
    };
    Ok(search.depth(space))
}

struct Fat<'a> {
    task: &'a Task,
    gamma: &'a Rational,
    witnesses: Vec<Rational>,
    values: Vec<Rational>,
    memo: HashMap<VersionSpace, usize>,
}

impl Fat<'_> {
    // the two sides of a split are disjoint strict subsets, so this recursion
    // is well founded
    fn depth(&mut self, space: &VersionSpace) -> usize {
        if let Some(&d) = self.memo.get(space) {
            return d;
        }
        let class = self.task.class.clone();
        let mut best = 0;
        for x in 0..self.task.problem.num_instances() {
            for s in self.witnesses.clone() {
                let hi = &s + self.gamma;
                let lo = &s - self.gamma;
                let up: Vec<usize> = space
                    .iter()
                    .filter(|&h| self.values[class.predict(h, x)] >= hi)
                    .collect();
                let down: Vec<usize> = space
                    .iter()
                    .filter(|&h| self.values[class.predict(h, x)] <= lo)
                    .collect();
                if up.is_empty() || down.is_empty() {
                    continue;
                }
                let a = self.depth(&VersionSpace::from_indices(class.len(), up));
                if a < best {
                    continue;
                }
                let b = self.depth(&VersionSpace::from_indices(class.len(), down));
                best = best.max(1 + a.min(b));
            }
        }
        self.memo.insert(space.clone(), best);
        best
    }
}
