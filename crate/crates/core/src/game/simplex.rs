//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Solves `min cᵀx  s.t.  Ax = b, x ≥ 0`. Bland's rule (lowest-index
//! entering column, lowest-index leaving basic variable on ratio ties)
//! guarantees termination and makes the returned vertex a deterministic
//! function of the input.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    // rows × (cols + 1); last column is the right-hand side
    cells: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn rhs(&self, row: usize) -> &Rational {
        &self.cells[row][self.cols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.cells[row][col].clone();
        for v in self.cells[row].iter_mut() {
            if !v.is_zero() {
                *v /= &p;
            }
        }
        let pivot_row = self.cells[row].clone();
        for (r, cells) in self.cells.iter_mut().enumerate() {
            if r == row || cells[col].is_zero() {
                continue;
            }
            let factor = cells[col].clone();
            for (v, pv) in cells.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Reduced costs of `cost` (restricted to the first `active` columns)
    /// with respect to the current basis.
    fn reduced_costs(&self, cost: &[Rational], active: usize) -> Vec<Rational> {
        let mut red: Vec<Rational> = cost[..active].to_vec();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, v) in red.iter_mut().enumerate() {
                let a = &self.cells[r][j];
                if !a.is_zero() {
                    *v -= cb * a;
                }
            }
        }
        red
    }

    /// Runs simplex iterations minimizing `cost` over columns `< active`.
    /// Returns false when unbounded.
    fn optimize(&mut self, cost: &[Rational], active: usize) -> bool {
        loop {
            let red = self.reduced_costs(cost, active);
            let Some(enter) = red.iter().position(|v| v.is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.cells.len() {
                let a = &self.cells[r][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

pub fn minimize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), m);

    // columns: n originals, then one artificial per row
    let cols = n + m;
    let mut cells = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut cells_row: Vec<Rational> = Vec::with_capacity(cols + 1);
        for v in row {
            cells_row.push(if flip { -v } else { v.clone() });
        }
        for k in 0..m {
            cells_row.push(if k == i { Rational::from_integer(1.into()) } else { Rational::zero() });
        }
        cells_row.push(if flip { -bi } else { bi.clone() });
        cells.push(cells_row);
    }
    let mut t = Tableau {
        cells,
        basis: (n..n + m).collect(),
        cols,
    };

    let mut phase1 = vec![Rational::zero(); cols];
    for v in phase1.iter_mut().skip(n) {
        *v = Rational::from_integer(1.into());
    }
    t.optimize(&phase1, cols);
    let infeasibility: Rational = t
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &bv)| bv >= n)
        .map(|(r, _)| t.rhs(r).clone())
        .sum();
    if infeasibility.is_positive() {
        return LpOutcome::Infeasible;
    }

    // Drive zero-level artificials out of the basis; drop redundant rows.
    let mut r = 0;
    while r < t.cells.len() {
        if t.basis[r] >= n {
            match (0..n).find(|&j| !t.cells[r][j].is_zero()) {
                Some(j) => t.pivot(r, j),
                None => {
                    t.cells.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    let mut phase2 = c.to_vec();
    phase2.resize(cols, Rational::zero());
    if !t.optimize(&phase2, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &bv) in t.basis.iter().enumerate() {
        if bv < n {
            x[bv] = t.rhs(row).clone();
        }
    }
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    LpOutcome::Optimal { x, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn small_lp() {
        // min -x - y  s.t. x + s1 = 2, y + s2 = 3, x + y + s3 = 4
        let a = vec![
            q(&[1, 0, 1, 0, 0]),
            q(&[0, 1, 0, 1, 0]),
            q(&[1, 1, 0, 0, 1]),
        ];
        match minimize(&a, &q(&[2, 3, 4]), &q(&[-1, -1, 0, 0, 0])) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, int(-4)),
            o => panic!("unexpected {o:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        // x = -1 with x ≥ 0
        assert_eq!(minimize(&[q(&[1])], &q(&[-1]), &q(&[0])), LpOutcome::Infeasible);
        // min -x s.t. x - y = 0
        assert_eq!(minimize(&[q(&[1, -1])], &q(&[0]), &q(&[-1, 0])), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        // x + y = 1 twice, min x
        let a = vec![q(&[1, 1]), q(&[1, 1])];
        match minimize(&a, &q(&[1, 1]), &q(&[1, 0])) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, int(0));
                assert_eq!(x, vec![int(0), int(1)]);
            }
            o => panic!("unexpected {o:?}"),
        }
    }

    #[test]
    fn fractional_optimum() {
        // min x s.t. 2x - y = 0... with x + y = 3/2 → x = 1/2
        let a = vec![q(&[2, -1]), q(&[1, 1])];
        match minimize(&a, &[int(0), ratio(3, 2)], &q(&[1, 0])) {
            LpOutcome::Optimal { x, .. } => assert_eq!(x, vec![ratio(1, 2), int(1)]),
            o => panic!("unexpected {o:?}"),
        }
    }
}
