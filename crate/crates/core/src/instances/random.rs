//! Seeded generators of small random instances for the equivalence checks.

use rand::seq::SliceRandom;
use rand::Rng;

use super::builtin::{regression_on, subsets_up_to};
use crate::dimensions::SetValuedProblem;
use crate::game::AffineRow;
use crate::problem::{validate_problem, HypothesisClass, Problem, Task};
use crate::rational::{int, ratio, Rational};

pub const MAX_INSTANCES: usize = 4;
pub const MAX_LABELS: usize = 3;
pub const MAX_CLASS: usize = 8;

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Up to `max` distinct random maps from `instances` points into `0..range`.
fn random_table<R: Rng>(rng: &mut R, instances: usize, range: usize, max: usize) -> Vec<Vec<usize>> {
    let total = range.checked_pow(instances as u32).unwrap_or(usize::MAX);
    let size = rng.gen_range(1..=max.min(total));
    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(size);
    while rows.len() < size {
        let row: Vec<usize> = (0..instances).map(|_| rng.gen_range(0..range)).collect();
        if !rows.contains(&row) {
            rows.push(row);
        }
    }
    rows
}

/// 0-1 loss with `Y = Z`, |X| ≤ 4, |Y| ≤ 3, |H| ≤ 8.
pub fn multiclass<R: Rng>(rng: &mut R) -> Task {
    let k = rng.gen_range(2..=MAX_LABELS);
    let nx = rng.gen_range(1..=MAX_INSTANCES);
    let labels = names("y", k);
    let loss = (0..k)
        .map(|y| (0..k).map(|z| int(i64::from(y != z))).collect())
        .collect();
    let problem = Problem::new(names("x", nx), labels.clone(), labels, loss, int(1)).expect("valid 0-1 table");
    let class = HypothesisClass::new(random_table(rng, nx, k, MAX_CLASS)).expect("distinct rows");
    validate_problem(problem, class).expect("indices in range")
}

/// List loss `1{y ∉ z}` over lists of size ≤ k drawn from `k + 1` labels.
pub fn list<R: Rng>(rng: &mut R, k: usize) -> Task {
    let nlabels = k + 1;
    let nx = rng.gen_range(1..=3);
    let lists = subsets_up_to(nlabels, k);
    let predictions = lists.iter().map(|s| format!("{s:?}")).collect();
    let loss = (0..nlabels)
        .map(|y| lists.iter().map(|s| int(i64::from(!s.contains(&y)))).collect())
        .collect();
    let problem = Problem::new(names("x", nx), names("y", nlabels), predictions, loss, int(1)).expect("valid list table");
    let class = HypothesisClass::new(random_table(rng, nx, lists.len(), MAX_CLASS)).expect("distinct rows");
    validate_problem(problem, class).expect("indices in range")
}

/// Random nonempty families of subsets of a 2- or 3-point prediction space.
pub fn set_valued<R: Rng>(rng: &mut R) -> (SetValuedProblem, HypothesisClass) {
    let nz = rng.gen_range(2..=3);
    let nx = rng.gen_range(1..=3);
    let predictions = names("z", nz);
    let mut all = subsets_up_to(nz, nz);
    all.shuffle(rng);
    let count = rng.gen_range(1..=4.min(all.len()));
    let sets = all[..count]
        .iter()
        .map(|s| s.iter().map(|&z| predictions[z].clone()).collect())
        .collect();
    let problem = SetValuedProblem {
        instances: names("x", nx),
        predictions,
        sets,
    };
    let class = HypothesisClass::new(random_table(rng, nx, nz, 6)).expect("distinct rows");
    (problem, class)
}

/// Absolute loss on a random subgrid of {−1, −1/2, 0, 1/2, 1} containing ±1.
pub fn grid_regression<R: Rng>(rng: &mut R) -> Task {
    let mut grid = vec![int(-1)];
    for v in [ratio(-1, 2), int(0), ratio(1, 2)] {
        if rng.gen_bool(0.5) {
            grid.push(v);
        }
    }
    grid.push(int(1));
    let nx = rng.gen_range(1..=3);
    let table = random_table(rng, nx, grid.len(), 6);
    regression_on(&grid, nx, table).expect("valid grid instance")
}

/// Random game with |Z| ≤ 3 and ≤ 5 rows, entries in quarters of [−2, 2].
pub fn game_rows<R: Rng>(rng: &mut R) -> Vec<AffineRow> {
    let n = rng.gen_range(1..=3);
    let k = rng.gen_range(1..=5);
    let mut q = || -> Rational { ratio(rng.gen_range(-8..=8), 4) };
    (0..k)
        .map(|_| AffineRow::new((0..n).map(|_| q()).collect(), q()))
        .collect()
}
