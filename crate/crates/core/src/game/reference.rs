//! Brute-force minimax by vertex enumeration.
//!
//! The epigraph `{(μ, t) : μ ∈ Δ(Z), t ≥ ⟨row_i, μ⟩ + offset_i}` attains its
//! lowest `t` at a vertex. Every vertex is pinned by the simplex equality
//! plus `|Z|` active inequalities chosen among `μ_j = 0` and
//! `t = ⟨row_i, μ⟩ + offset_i`; each choice is one exact linear solve.
//! Exponential in size, independent of the simplex code path.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AffineRow;
use crate::error::{Error, Result};
use crate::rational::Rational;

fn solve_linear(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v /= &p;
        }
        rhs[col] /= &p;
        let pivot_row = m[col].clone();
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for (v, p) in m[r].iter_mut().zip(&pivot_row) {
                    *v -= &f * p;
                }
                let delta = &f * &rhs[col];
                rhs[r] -= delta;
            }
        }
    }
    Some(rhs)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Value of min_{μ ∈ Δ(Z)} max_i (⟨row_i, μ⟩ + offset_i).
pub fn min_max_by_vertices(rows: &[AffineRow]) -> Result<Rational> {
    let n = rows.first().ok_or(Error::Empty("row list"))?.coefficients.len();
    let k = rows.len();
    // variables: μ_0..μ_{n-1}, t
    let mut best: Option<Rational> = None;
    for active in combinations(n + k, n) {
        let mut m = Vec::with_capacity(n + 1);
        let mut rhs = Vec::with_capacity(n + 1);
        let mut simplex = vec![Rational::one(); n];
        simplex.push(Rational::zero());
        m.push(simplex);
        rhs.push(Rational::one());
        for &c in &active {
            let mut line = vec![Rational::zero(); n + 1];
            if c < n {
                line[c] = Rational::one();
                rhs.push(Rational::zero());
            } else {
                let row = &rows[c - n];
                line[..n].clone_from_slice(&row.coefficients);
                line[n] = -Rational::one();
                rhs.push(-row.offset.clone());
            }
            m.push(line);
        }
        let Some(sol) = solve_linear(m, rhs) else {
            continue;
        };
        if sol[..n].iter().any(|v| v.is_negative()) {
            continue;
        }
        let t = &sol[n];
        let feasible = rows.iter().all(|r| {
            let v: Rational = r.coefficients.iter().zip(&sol[..n]).map(|(a, b)| a * b).sum::<Rational>() + &r.offset;
            v <= *t
        });
        if feasible && best.as_ref().is_none_or(|b| t < b) {
            best = Some(t.clone());
        }
    }
    Ok(best.expect("the epigraph of a max of affine functions over a simplex has a vertex"))
}

/// Minimum of max_i (⟨row_i, μ⟩ + offset_i) over mixtures whose masses are
/// multiples of `1/resolution`. Rows are scaled to integers first so the
/// sweep runs in machine arithmetic.
pub fn grid_min_max(rows: &[AffineRow], resolution: u32) -> Result<Rational> {
    let n = rows.first().ok_or(Error::Empty("row list"))?.coefficients.len();
    if resolution == 0 {
        return Err(Error::InvalidParameter("grid resolution must be positive".into()));
    }
    let scale = rows
        .iter()
        .flat_map(|r| r.coefficients.iter().chain(std::iter::once(&r.offset)))
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let to_int = |v: &Rational| -> Result<i128> {
        (v * Rational::from_integer(scale.clone()))
            .to_integer()
            .to_i128()
            .ok_or_else(|| Error::InvalidParameter("row entries too large for the grid oracle".into()))
    };
    let mut int_rows = Vec::with_capacity(rows.len());
    for r in rows {
        let coefficients = r.coefficients.iter().map(to_int).collect::<Result<Vec<_>>>()?;
        int_rows.push((coefficients, to_int(&r.offset)? * i128::from(resolution)));
    }
    let mut counts = vec![0i128; n];
    let mut best = i128::MAX;
    sweep(&int_rows, &mut counts, 0, i128::from(resolution), &mut best);
    Ok(Rational::new(
        BigInt::from(best),
        scale * BigInt::from(resolution),
    ))
}

fn sweep(rows: &[(Vec<i128>, i128)], counts: &mut [i128], j: usize, left: i128, best: &mut i128) {
    if j + 1 == counts.len() {
        counts[j] = left;
        let value = rows
            .iter()
            .map(|(a, b)| a.iter().zip(counts.iter()).map(|(x, c)| x * c).sum::<i128>() + b)
            .max()
            .expect("nonempty rows");
        *best = (*best).min(value);
        return;
    }
    for c in 0..=left {
        counts[j] = c;
        sweep(rows, counts, j + 1, left - c, best);
    }
}
