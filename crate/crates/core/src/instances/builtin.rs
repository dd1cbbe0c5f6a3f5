//! Built-in problem families. Every constructor returns a validated task
//! with exact rational losses.

use num_traits::{One, Signed, Zero};

use crate::dimensions::SetValuedProblem;
use crate::error::{Error, Result};
use crate::problem::{validate_problem, HypothesisClass, Problem, Task};
use crate::rational::{self, int, ratio, Rational};

pub const MAX_HYPOTHESES: usize = 12;
pub const MAX_GRID: usize = 9;
pub const MAX_MULTILABEL: usize = 4;

/// Every family accepted by [`make_builtin`], with its parameter syntax.
pub const FAMILIES: &[&str] = &[
    "multiclass:binary-constants",
    "multiclass:constants:K",
    "multiclass:thresholds:N",
    "list:K",
    "set:pair",
    "set:full",
    "regression:N",
    "vector:p1",
    "vector:p2",
    "multilabel:K",
    "hilbert",
];

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn single_instance() -> Vec<String> {
    vec!["x0".to_string()]
}

fn constant_class(n: usize) -> Result<HypothesisClass> {
    HypothesisClass::new((0..n).map(|z| vec![z]).collect())
}

fn budget(what: &str, value: usize, lo: usize, hi: usize) -> Result<()> {
    if (lo..=hi).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{what} = {value} outside [{lo}, {hi}]")))
    }
}

fn zero_one(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|y| (0..n).map(|z| if y == z { Rational::zero() } else { Rational::one() }).collect())
        .collect()
}

/// Multiclass 0-1 loss with one constant hypothesis per label.
pub fn constants(k: usize) -> Result<Task> {
    budget("K", k, 1, MAX_HYPOTHESES)?;
    let labels = names("y", k);
    let problem = Problem::new(single_instance(), labels.clone(), labels, zero_one(k), int(1))?;
    validate_problem(problem, constant_class(k)?)
}

/// Binary classification with the two constant hypotheses.
pub fn p1() -> Task {
    constants(2).expect("two constants are in budget")
}

/// Thresholds `h_j(x_i) = 1{i ≥ j}` on `n` points, `j = 0..=n`.
pub fn thresholds(n: usize) -> Result<Task> {
    budget("N", n, 1, MAX_HYPOTHESES - 1)?;
    let labels = names("y", 2);
    let problem = Problem::new(names("x", n), labels.clone(), labels, zero_one(2), int(1))?;
    let table = (0..=n)
        .map(|j| (0..n).map(|i| usize::from(i >= j)).collect())
        .collect();
    validate_problem(problem, HypothesisClass::new(table)?)
}

/// List classification: labels `0..=k`, predictions are the label lists of
/// size at most `k`, hypotheses are the singleton-list constants.
pub fn list(k: usize) -> Result<Task> {
    budget("K", k, 1, 3)?;
    let labels: Vec<String> = (0..=k).map(|y| y.to_string()).collect();
    let lists = subsets_up_to(k + 1, k);
    let predictions: Vec<String> = lists
        .iter()
        .map(|s| format!("{{{}}}", s.iter().map(|y| y.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    let loss = (0..=k)
        .map(|y| {
            lists
                .iter()
                .map(|s| if s.contains(&y) { Rational::zero() } else { Rational::one() })
                .collect()
        })
        .collect();
    let problem = Problem::new(single_instance(), labels, predictions, loss, int(1))?;
    let table = (0..=k)
        .map(|y| vec![lists.iter().position(|s| *s == [y]).expect("singleton list present")])
        .collect();
    validate_problem(problem, HypothesisClass::new(table)?)
}

/// All subsets of `0..n` with at most `k` elements, by size then lexicographically.
pub fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0u32..1 << n)
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect::<Vec<_>>())
        .filter(|s| s.len() <= k)
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

fn set_valued(sets: &[&[&str]]) -> Result<Task> {
    let problem = SetValuedProblem {
        instances: single_instance(),
        predictions: vec!["a".into(), "b".into()],
        sets: sets.iter().map(|s| s.iter().map(|e| e.to_string()).collect()).collect(),
    };
    problem.task(constant_class(2)?)
}

/// Evenly spaced grid of `n ≥ 2` points from −1 to 1.
pub fn grid(n: usize) -> Result<Vec<Rational>> {
    budget("N", n, 2, MAX_GRID)?;
    let step = ratio(2, n as i64 - 1);
    Ok((0..n).map(|i| int(-1) + &step * int(i as i64)).collect())
}

/// Absolute loss on a grid of reals with the given hypotheses, each a list
/// of grid indices per instance.
pub fn regression_on(grid: &[Rational], instances: usize, table: Vec<Vec<usize>>) -> Result<Task> {
    let labels: Vec<String> = grid.iter().map(rational::format).collect();
    let loss = grid
        .iter()
        .map(|y| grid.iter().map(|z| (y - z).abs()).collect())
        .collect();
    let problem = Problem::new(names("x", instances), labels.clone(), labels, loss, int(2))?;
    validate_problem(problem, HypothesisClass::new(table)?)
}

/// Absolute loss on an `n`-point grid with the constants −1 and +1.
pub fn regression(n: usize) -> Result<Task> {
    let g = grid(n)?;
    regression_on(&g, 1, vec![vec![0], vec![n - 1]])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorNorm {
    /// ‖y − z‖, which must be rational on the chosen points.
    Euclidean,
    /// ‖y − z‖².
    Squared,
}

/// Vector-valued prediction in ℝ² with `Y = Z = points` and the constant
/// hypotheses.
pub fn vector(points: &[(Rational, Rational)], norm: VectorNorm) -> Result<Task> {
    let labels: Vec<String> = points
        .iter()
        .map(|(a, b)| format!("({},{})", rational::format(a), rational::format(b)))
        .collect();
    let mut loss = Vec::with_capacity(points.len());
    let mut bound = Rational::zero();
    for (i, (ya, yb)) in points.iter().enumerate() {
        let mut row = Vec::with_capacity(points.len());
        for (j, (za, zb)) in points.iter().enumerate() {
            let sq = (ya - za) * (ya - za) + (yb - zb) * (yb - zb);
            let v = match norm {
                VectorNorm::Squared => sq,
                VectorNorm::Euclidean => rational::sqrt_exact(&sq)
                    .ok_or_else(|| Error::IrrationalLoss(labels[i].clone(), labels[j].clone()))?,
            };
            bound = bound.max(v.clone());
            row.push(v);
        }
        loss.push(row);
    }
    let problem = Problem::new(single_instance(), labels.clone(), labels, loss, bound)?;
    validate_problem(problem, constant_class(points.len())?)
}

/// Multilabel prediction over `{0,1}^K` with normalized Hamming loss and
/// the all-zeros and all-ones constants.
pub fn multilabel(k: usize) -> Result<Task> {
    budget("K", k, 1, MAX_MULTILABEL)?;
    let n = 1usize << k;
    let labels: Vec<String> = (0..n)
        .map(|v| (0..k).rev().map(|b| if v & (1 << b) != 0 { '1' } else { '0' }).collect())
        .collect();
    let loss = (0..n)
        .map(|y| (0..n).map(|z| ratio((y ^ z).count_ones() as i64, k as i64)).collect())
        .collect();
    let problem = Problem::new(single_instance(), labels.clone(), labels, loss, int(1))?;
    validate_problem(problem, HypothesisClass::new(vec![vec![0], vec![n - 1]])?)
}

/// `Y = Z = {e1, e2, 0}` under the squared norm with the three constants.
pub fn hilbert() -> Task {
    let pts = [(int(1), int(0)), (int(0), int(1)), (int(0), int(0))];
    vector(&pts, VectorNorm::Squared).expect("squared norm is rational")
}

/// Resolves a `NAME[:params]` spec.
pub fn make_builtin(spec: &str) -> Result<Task> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::InvalidParameter(format!("{s:?} is not a nonnegative integer")))
    };
    match parts.as_slice() {
        ["multiclass", "binary-constants"] => Ok(p1()),
        ["multiclass", "constants", k] => constants(num(k)?),
        ["multiclass", "thresholds", n] => thresholds(num(n)?),
        ["list", k] => list(num(k)?),
        ["set", "pair"] => set_valued(&[&["a"], &["b"]]),
        ["set", "full"] => set_valued(&[&["a", "b"]]),
        ["regression", n] => regression(num(n)?),
        ["vector", "p1"] => vector(
            &[(int(0), int(0)), (ratio(3, 5), ratio(4, 5)), (ratio(-3, 5), ratio(4, 5))],
            VectorNorm::Euclidean,
        ),
        ["vector", "p2"] => vector(&[(int(1), int(0)), (int(-1), int(0)), (int(0), int(0))], VectorNorm::Squared),
        ["multilabel", k] => multilabel(num(k)?),
        ["hilbert"] => Ok(hilbert()),
        _ => Err(Error::InvalidParameter(format!(
            "unknown builtin {spec:?}; known: {}",
            FAMILIES.join(", ")
        ))),
    }
}

/// A small representative of every family.
pub fn desk_suite() -> Vec<(&'static str, Task)> {
    [
        "multiclass:binary-constants",
        "multiclass:constants:3",
        "multiclass:thresholds:3",
        "list:2",
        "set:pair",
        "set:full",
        "regression:3",
        "vector:p1",
        "vector:p2",
        "multilabel:2",
        "hilbert",
    ]
    .into_iter()
    .map(|s| (s, make_builtin(s).expect("desk builtins are valid")))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle(task: &Task) -> bool {
        let p = &task.problem;
        let n = p.num_labels();
        (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| p.loss(a, c) <= &(p.loss(a, b) + p.loss(b, c))))
        })
    }

    #[test]
    fn every_family_builds() {
        for (name, t) in desk_suite() {
            assert!(!t.class.is_empty(), "{name}");
        }
    }

    #[test]
    fn multilabel_max_loss_is_one() {
        let t = multilabel(2).unwrap();
        assert_eq!(*t.problem.bound(), int(1));
        assert_eq!(*t.problem.loss(0, 3), int(1));
        assert_eq!(*t.problem.loss(0, 1), ratio(1, 2));
    }

    #[test]
    fn metric_families_satisfy_triangle_inequality() {
        for spec in ["multiclass:constants:4", "multilabel:3", "vector:p1", "regression:5"] {
            assert!(triangle(&make_builtin(spec).unwrap()), "{spec}");
        }
        // the squared norm is not a metric
        assert!(!triangle(&make_builtin("vector:p2").unwrap()));
    }

    #[test]
    fn hilbert_losses() {
        let t = hilbert();
        assert_eq!(*t.problem.loss(0, 1), int(2));
        assert_eq!(*t.problem.loss(0, 2), int(1));
        assert_eq!(*t.problem.bound(), int(2));
    }

    #[test]
    fn irrational_distances_are_rejected() {
        let pts = [(int(1), int(0)), (int(0), int(1))];
        assert!(matches!(vector(&pts, VectorNorm::Euclidean), Err(Error::IrrationalLoss(..))));
    }

    #[test]
    fn list_predictions() {
        let t = list(2).unwrap();
        // {}, three singletons, three pairs
        assert_eq!(t.problem.num_predictions(), 7);
        assert_eq!(t.class.len(), 3);
    }

    #[test]
    fn out_of_budget() {
        assert!(make_builtin("multilabel:5").is_err());
        assert!(make_builtin("regression:10").is_err());
        assert!(make_builtin("nope").is_err());
        assert!(make_builtin("multiclass:constants:x").is_err());
    }
}
