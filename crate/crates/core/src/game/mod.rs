//! Exact minimax over the prediction simplex against finitely many affine
//! rows `μ ↦ ⟨row, μ⟩ + offset`.
//!
//! This is the kernel behind the dimension engine, the minimax learner and
//! the shattering adversary. [`solve_min_max`] phrases the game as a linear
//! program and solves it with the exact simplex in [`simplex`];
//! [`reference::min_max_by_vertices`] computes the same value by brute-force
//! vertex enumeration and exists as an independent cross-check.

pub mod reference;
pub mod simplex;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::problem::Mixture;
use crate::rational::{self, Rational};
use simplex::LpOutcome;

/// One adversary candidate: `μ ↦ ⟨coefficients, μ⟩ + offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineRow {
    pub coefficients: Vec<Rational>,
    pub offset: Rational,
}

impl AffineRow {
    pub fn new(coefficients: Vec<Rational>, offset: Rational) -> Self {
        AffineRow {
            coefficients,
            offset,
        }
    }

    pub fn eval(&self, mixture: &Mixture) -> Rational {
        mixture.dot(&self.coefficients) + &self.offset
    }

    /// max − min coefficient.
    pub fn spread(&self) -> Rational {
        let max = self.coefficients.iter().max().cloned().unwrap_or_else(Rational::zero);
        let min = self.coefficients.iter().min().cloned().unwrap_or_else(Rational::zero);
        max - min
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSolution {
    pub value: Rational,
    pub mixture: Mixture,
    /// Rows attaining `value` at `mixture`, ascending.
    pub tight_rows: Vec<usize>,
}

fn check_rows(rows: &[AffineRow]) -> Result<usize> {
    let first = rows.first().ok_or(Error::Empty("row list"))?;
    let width = first.coefficients.len();
    if width == 0 {
        return Err(Error::Empty("prediction space"));
    }
    if let Some(i) = rows.iter().position(|r| r.coefficients.len() != width) {
        return Err(Error::DimensionMismatch(format!(
            "row {i} has {} coefficients, row 0 has {width}",
            rows[i].coefficients.len()
        )));
    }
    Ok(width)
}

/// max_i (⟨row_i, μ⟩ + offset_i).
pub fn max_value(rows: &[AffineRow], mixture: &Mixture) -> Rational {
    rows.iter()
        .map(|r| r.eval(mixture))
        .max()
        .expect("nonempty rows")
}

/// min_z max_i (row_i[z] + offset_i): the best pure strategy, an upper
/// bound on the game value that costs no LP.
pub fn pure_strategy_bound(rows: &[AffineRow]) -> Option<(usize, Rational)> {
    let width = rows.first()?.coefficients.len();
    (0..width)
        .map(|z| {
            let worst = rows
                .iter()
                .map(|r| &r.coefficients[z] + &r.offset)
                .max()
                .expect("nonempty rows");
            (z, worst)
        })
        .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
}

/// Solves min_{μ ∈ Δ(Z)} max_i (⟨row_i, μ⟩ + offset_i) exactly.
///
/// LP variables are μ, a shifted epigraph variable `u = t − L` and one slack
/// per row, where `L = max_i (min_j row_ij + offset_i)` is a lower bound on
/// the value so that `u ≥ 0`.
pub fn solve_min_max(rows: &[AffineRow]) -> Result<GameSolution> {
    let n = check_rows(rows)?;
    let k = rows.len();
    let lower = rows
        .iter()
        .map(|r| r.coefficients.iter().min().expect("nonempty") + &r.offset)
        .max()
        .expect("nonempty rows");

    let cols = n + 1 + k;
    let mut a = Vec::with_capacity(k + 1);
    let mut b = Vec::with_capacity(k + 1);
    for (i, row) in rows.iter().enumerate() {
        let mut line = vec![Rational::zero(); cols];
        line[..n].clone_from_slice(&row.coefficients);
        line[n] = rational::int(-1);
        line[n + 1 + i] = rational::one();
        a.push(line);
        b.push(&lower - &row.offset);
    }
    let mut simplex_row = vec![Rational::zero(); cols];
    for v in simplex_row.iter_mut().take(n) {
        *v = rational::one();
    }
    a.push(simplex_row);
    b.push(rational::one());
    let mut cost = vec![Rational::zero(); cols];
    cost[n] = rational::one();

    let LpOutcome::Optimal { x, .. } = simplex::minimize(&a, &b, &cost) else {
        unreachable!("the minimax LP is feasible and bounded below by construction");
    };
    let mixture = Mixture::new(x[..n].to_vec()).expect("simplex constraint enforces a distribution");
    let value = max_value(rows, &mixture);
    debug_assert_eq!(value, &lower + &x[n]);
    let tight_rows = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.eval(&mixture) == value)
        .map(|(i, _)| i)
        .collect();
    Ok(GameSolution {
        value,
        mixture,
        tight_rows,
    })
}

/// argmax_i ⟨row_i, μ⟩ + offset_i with the lowest index winning ties.
pub fn best_response(mixture: &Mixture, rows: &[AffineRow]) -> Result<(usize, Rational)> {
    let width = check_rows(rows)?;
    if width != mixture.len() {
        return Err(Error::DimensionMismatch(format!(
            "mixture has {} weights, rows have {width} coefficients",
            mixture.len()
        )));
    }
    let mut best: Option<(usize, Rational)> = None;
    for (i, row) in rows.iter().enumerate() {
        let v = row.eval(mixture);
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((i, v));
        }
    }
    Ok(best.expect("nonempty rows"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn row(c: &[Rational], off: Rational) -> AffineRow {
        AffineRow::new(c.to_vec(), off)
    }

    fn p1_rows() -> Vec<AffineRow> {
        vec![
            row(&[int(0), int(1)], int(0)),
            row(&[int(1), int(0)], int(0)),
        ]
    }

    #[test]
    fn symmetric_zero_one_game() {
        let s = solve_min_max(&p1_rows()).unwrap();
        assert_eq!(s.value, ratio(1, 2));
        assert_eq!(s.mixture, Mixture::uniform(2));
        assert_eq!(s.tight_rows, vec![0, 1]);
    }

    #[test]
    fn single_row_puts_mass_on_zero_loss() {
        let s = solve_min_max(&[row(&[int(0), int(1)], int(0))]).unwrap();
        assert_eq!(s.value, int(0));
        assert_eq!(s.mixture, Mixture::dirac(2, 0));
    }

    #[test]
    fn offset_game_matches_grid_oracle() {
        // equalizing μ(1) − 1/4 = 1 − μ(1) gives value 3/8 at μ = (3/8, 5/8)
        let rows = vec![row(&[int(0), int(1)], ratio(-1, 4)), row(&[int(1), int(0)], int(0))];
        // grid oracle at resolution 1/64
        let grid_min = (0..=64)
            .map(|k| {
                let m = Mixture::new(vec![ratio(64 - k, 64), ratio(k, 64)]).unwrap();
                max_value(&rows, &m)
            })
            .min()
            .unwrap();
        assert_eq!(grid_min, ratio(3, 8));
        let s = solve_min_max(&rows).unwrap();
        assert_eq!(s.value, ratio(3, 8));
        assert_eq!(s.mixture, Mixture::new(vec![ratio(3, 8), ratio(5, 8)]).unwrap());
    }

    #[test]
    fn empty_rows_error() {
        assert_eq!(solve_min_max(&[]).unwrap_err(), Error::Empty("row list"));
        assert!(best_response(&Mixture::uniform(2), &[]).is_err());
    }

    #[test]
    fn best_response_examples() {
        let rows = p1_rows();
        // rows are (y=0, ε=0) then (y=1, ε=0)
        assert_eq!(best_response(&Mixture::dirac(2, 0), &rows).unwrap(), (1, int(1)));
        assert_eq!(best_response(&Mixture::uniform(2), &rows).unwrap(), (0, ratio(1, 2)));
        let m = Mixture::new(vec![ratio(1, 4), ratio(3, 4)]).unwrap();
        assert_eq!(best_response(&m, &rows).unwrap(), (0, ratio(3, 4)));
    }

    #[test]
    fn pure_bound_dominates_value() {
        let rows = p1_rows();
        let (_, bound) = pure_strategy_bound(&rows).unwrap();
        assert_eq!(bound, int(1));
    }

    fn rows_strategy() -> impl Strategy<Value = Vec<AffineRow>> {
        (1usize..=3, 1usize..=5).prop_flat_map(|(n, k)| {
            proptest::collection::vec(
                (proptest::collection::vec(-8i64..=8, n), -8i64..=8).prop_map(|(c, o)| {
                    AffineRow::new(c.into_iter().map(|v| ratio(v, 4)).collect(), ratio(o, 4))
                }),
                k,
            )
        })
    }

    proptest! {
        #[test]
        fn weak_duality_and_certificate(rows in rows_strategy(), w in proptest::collection::vec(0i64..5, 3)) {
            let s = solve_min_max(&rows).unwrap();
            prop_assert_eq!(max_value(&rows, &s.mixture), s.value.clone());
            prop_assert!(!s.tight_rows.is_empty());
            for r in &rows {
                prop_assert!(r.eval(&s.mixture) <= s.value);
            }
            let n = rows[0].coefficients.len();
            let mut w: Vec<Rational> = w.into_iter().take(n).map(int).collect();
            if w.iter().all(|v| v.is_zero()) { w[0] = int(1); }
            let other = Mixture::normalized(w).unwrap();
            prop_assert!(max_value(&rows, &other) >= s.value);
        }

        #[test]
        fn deterministic_and_scale_covariant(rows in rows_strategy(), l in 1i64..7) {
            let a = solve_min_max(&rows).unwrap();
            let b = solve_min_max(&rows).unwrap();
            prop_assert_eq!(&a, &b);
            let lambda = ratio(l, 3);
            let scaled: Vec<AffineRow> = rows.iter().map(|r| AffineRow::new(
                r.coefficients.iter().map(|c| c * &lambda).collect(), &r.offset * &lambda)).collect();
            let s = solve_min_max(&scaled).unwrap();
            prop_assert_eq!(&s.value, &(&a.value * &lambda));
            // the unscaled optimum stays optimal after scaling
            prop_assert_eq!(max_value(&scaled, &a.mixture), s.value);
        }

        #[test]
        fn matches_vertex_enumeration(rows in rows_strategy()) {
            let s = solve_min_max(&rows).unwrap();
            prop_assert_eq!(s.value, reference::min_max_by_vertices(&rows).unwrap());
        }
    }
}
