//! Dense two-phase simplex over exact rationals.
//!
//! Solves `min c.x  s.t.  A x = b, x >= 0` with Bland's anti-cycling rule,
//! so the pivot sequence (and hence the returned vertex solution) is fully
//! deterministic. Sized for the small balance systems produced by labelled
//! transition digraphs, not for general-purpose LP work.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpResult {
    Optimal {
        x: Vec<BigRational>,
        value: BigRational,
    },
    Infeasible,
    /// Objective unbounded below on the feasible set.
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
    cost: Vec<BigRational>,
    cost_rhs: BigRational,
    num_cols: usize,
}

impl Tableau {
    fn pivot(&mut self, pivot_row: usize, pivot_col: usize) {
        let factor = self.rows[pivot_row][pivot_col].clone();
        debug_assert!(!factor.is_zero());
        for entry in self.rows[pivot_row].iter_mut() {
            *entry /= &factor;
        }
        self.rhs[pivot_row] /= &factor;
        for i in 0..self.rows.len() {
            if i == pivot_row {
                continue;
            }
            let mult = self.rows[i][pivot_col].clone();
            if mult.is_zero() {
                continue;
            }
            for j in 0..self.num_cols {
                if self.rows[pivot_row][j].is_zero() {
                    continue;
                }
                let delta = &mult * &self.rows[pivot_row][j];
                self.rows[i][j] -= delta;
            }
            let delta = &mult * &self.rhs[pivot_row];
            self.rhs[i] -= delta;
        }
        let mult = self.cost[pivot_col].clone();
        if !mult.is_zero() {
            for j in 0..self.num_cols {
                if self.rows[pivot_row][j].is_zero() {
                    continue;
                }
                let delta = &mult * &self.rows[pivot_row][j];
                self.cost[j] -= delta;
            }
            let delta = &mult * &self.rhs[pivot_row];
            self.cost_rhs -= delta;
        }
        self.basis[pivot_row] = pivot_col;
    }

    /// Runs Bland-rule simplex until optimal or unbounded.
    fn run(&mut self, active_cols: usize) -> Result<(), ()> {
        loop {
            let entering = (0..active_cols).find(|&j| self.cost[j].is_negative());
            let Some(je) = entering else {
                return Ok(());
            };
            let mut best: Option<(BigRational, usize, usize)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][je];
                if a.is_positive() {
                    let ratio = &self.rhs[i] / a;
                    let candidate = (ratio, self.basis[i], i);
                    best = match best {
                        None => Some(candidate),
                        Some(cur) => {
                            if candidate.0 < cur.0 || (candidate.0 == cur.0 && candidate.1 < cur.1)
                            {
                                Some(candidate)
                            } else {
                                Some(cur)
                            }
                        }
                    };
                }
            }
            match best {
                Some((_, _, pivot_row)) => self.pivot(pivot_row, je),
                None => return Err(()),
            }
        }
    }
}

/// Minimizes `objective . x` over `{A x = b, x >= 0}` in exact arithmetic.
pub fn solve_min(
    num_vars: usize,
    constraints: &[(Vec<BigRational>, BigRational)],
    objective: &[BigRational],
) -> LpResult {
    assert_eq!(objective.len(), num_vars);
    let m = constraints.len();
    let total_cols = num_vars + m;
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (coeffs, b) in constraints {
        assert_eq!(coeffs.len(), num_vars);
        let mut row: Vec<BigRational> = Vec::with_capacity(total_cols);
        let flip = b.is_negative();
        for c in coeffs {
            row.push(if flip { -c.clone() } else { c.clone() });
        }
        row.extend(std::iter::repeat_with(BigRational::zero).take(m));
        rows.push(row);
        rhs.push(if flip { -b.clone() } else { b.clone() });
    }
    for (i, row) in rows.iter_mut().enumerate() {
        row[num_vars + i] = BigRational::one();
    }

    // Phase 1: minimize the sum of artificials. Canonical cost row has the
    // artificial columns zeroed, i.e. cost[j] = -sum of column j.
    let mut cost = vec![BigRational::zero(); total_cols];
    let mut cost_rhs = BigRational::zero();
    for j in 0..num_vars {
        let mut s = BigRational::zero();
        for row in &rows {
            s += &row[j];
        }
        cost[j] = -s;
    }
    for b in &rhs {
        cost_rhs -= b;
    }
    let mut t = Tableau {
        rows,
        rhs,
        basis: (num_vars..num_vars + m).collect(),
        cost,
        cost_rhs,
        num_cols: total_cols,
    };
    if t.run(num_vars).is_err() {
        // Phase-1 objective is bounded below by zero, so this is unreachable.
        return LpResult::Unbounded;
    }
    // Optimal phase-1 value is -cost_rhs.
    if !t.cost_rhs.is_zero() {
        return LpResult::Infeasible;
    }
    // Drive remaining artificials out of the basis; rows where no structural
    // pivot exists are redundant and get neutralized.
    let mut redundant = vec![false; m];
    for i in 0..m {
        if t.basis[i] < num_vars {
            continue;
        }
        match (0..num_vars).find(|&j| !t.rows[i][j].is_zero()) {
            Some(j) => t.pivot(i, j),
            None => redundant[i] = true,
        }
    }

    // Phase 2 with the real objective, artificial columns frozen.
    t.cost = objective.to_vec();
    t.cost.extend(std::iter::repeat_with(BigRational::zero).take(m));
    t.cost_rhs = BigRational::zero();
    for i in 0..m {
        if redundant[i] {
            continue;
        }
        let cb = t.cost[t.basis[i]].clone();
        if cb.is_zero() {
            continue;
        }
        for j in 0..t.num_cols {
            if t.rows[i][j].is_zero() {
                continue;
            }
            let delta = &cb * &t.rows[i][j];
            t.cost[j] -= delta;
        }
        let delta = &cb * &t.rhs[i];
        t.cost_rhs -= delta;
    }
    if t.run(num_vars).is_err() {
        return LpResult::Unbounded;
    }
    let mut x = vec![BigRational::zero(); num_vars];
    for i in 0..m {
        if !redundant[i] && t.basis[i] < num_vars {
            x[t.basis[i]] = t.rhs[i].clone();
        }
    }
    let value = objective
        .iter()
        .zip(&x)
        .map(|(c, v)| c * v)
        .fold(BigRational::zero(), |a, b| a + b);
    LpResult::Optimal { x, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::parse_ratio;

    fn r(s: &str) -> BigRational {
        parse_ratio(s).unwrap()
    }

    #[test]
    fn simple_equality_system() {
        // x0 + x1 = 2, x0 - x1 = 0 -> x = (1, 1); minimize x0.
        let cons = vec![
            (vec![r("1"), r("1")], r("2")),
            (vec![r("1"), r("-1")], r("0")),
        ];
        match solve_min(2, &cons, &[r("1"), r("0")]) {
            LpResult::Optimal { x, value } => {
                assert_eq!(x, vec![r("1"), r("1")]);
                assert_eq!(value, r("1"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn detects_infeasible() {
        // x0 = 1 and x0 = 2.
        let cons = vec![(vec![r("1")], r("1")), (vec![r("1")], r("2"))];
        assert_eq!(solve_min(1, &cons, &[r("0")]), LpResult::Infeasible);
        // x0 + x1 = -1 with x >= 0.
        let cons = vec![(vec![r("1"), r("1")], r("-1"))];
        assert_eq!(solve_min(2, &cons, &[r("0"), r("0")]), LpResult::Infeasible);
    }

    #[test]
    fn handles_redundant_rows() {
        let cons = vec![
            (vec![r("1"), r("1")], r("2")),
            (vec![r("2"), r("2")], r("4")),
        ];
        match solve_min(2, &cons, &[r("1"), r("2")]) {
            LpResult::Optimal { x, value } => {
                assert_eq!(value, r("2"));
                assert_eq!(x, vec![r("2"), r("0")]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn detects_unbounded() {
        // x0 - x1 = 0, minimize -x0: can grow forever.
        let cons = vec![(vec![r("1"), r("-1")], r("0"))];
        assert_eq!(
            solve_min(2, &cons, &[r("-1"), r("0")]),
            LpResult::Unbounded
        );
    }

    #[test]
    fn fractional_optimum_is_exact() {
        // 2x0 + 3x1 = 1, minimize x0 + x1: optimum at x1 = 1/3.
        let cons = vec![(vec![r("2"), r("3")], r("1"))];
        match solve_min(2, &cons, &[r("1"), r("1")]) {
            LpResult::Optimal { x, value } => {
                assert_eq!(x, vec![r("0"), r("1/3")]);
                assert_eq!(value, r("1/3"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
