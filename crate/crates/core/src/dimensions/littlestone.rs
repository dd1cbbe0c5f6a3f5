use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::problem::{Task, VersionSpace};

/// k-ary Littlestone dimension under a {0,1} loss.
///
/// A node at `x` branches on every label `y` whose zero-loss child
/// `{h : ℓ(y, h(x)) = 0}` is nonempty; depth `d + 1` needs at least `k + 1`
/// branches of depth `d`.
pub fn ldim_k(task: &Task, space: &VersionSpace, k: usize) -> Result<usize> {
    if !task.problem.is_zero_one() {
        return Err(Error::NonZeroOneLoss);
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if space.is_empty() {
        return Err(Error::Empty("version space"));
    }
    Ldim {
        task,
        k,
        memo: HashMap::new(),
    }
    .depth(space)
}

struct Ldim<'a> {
    task: &'a Task,
    k: usize,
    memo: HashMap<VersionSpace, usize>,
}

impl Ldim<'_> {
    fn depth(&mut self, space: &VersionSpace) -> Result<usize> {
        if let Some(&d) = self.memo.get(space) {
            return Ok(d);
        }
        let problem = &self.task.problem;
        let class = &self.task.class;
        // per instance: one entry per nonempty branch, None for a self-branch
        let mut branches: Vec<Vec<Option<usize>>> = Vec::new();
        for x in 0..problem.num_instances() {
            let mut here = Vec::new();
            for y in 0..problem.num_labels() {
                let child: Vec<usize> = space
                    .iter()
                    .filter(|&h| problem.loss(y, class.predict(h, x)).is_zero())
                    .collect();
                if child.is_empty() {
                    continue;
                }
                if child.len() == space.len() {
                    here.push(None);
                } else {
                    let child = VersionSpace::from_indices(class.len(), child);
                    here.push(Some(self.depth(&child)?));
                }
            }
            if here.iter().filter(|b| b.is_none()).count() > self.k {
                return Err(Error::Unbounded);
            }
            branches.push(here);
        }
        let mut d = 0;
        while branches
            .iter()
            .any(|b| b.iter().filter(|c| c.is_none_or(|c| c >= d)).count() > self.k)
        {
            d += 1;
        }
        self.memo.insert(space.clone(), d);
        Ok(d)
    }
}
