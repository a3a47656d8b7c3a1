//! A small dense linear-programming solver.
//!
//! Solves `maximize c·x subject to A·x ≤ b` with free variables and
//! nonnegative right-hand sides, which is exactly the shape of both LP
//! families in this crate: the transport dual (potentials pinned at the
//! identity element) and the cutting-plane master problem (box plus
//! accumulated supporting hyperplanes). With `b ≥ 0` the slack basis is
//! feasible from the start, so no phase-one is needed.
//!
//! Free variables are split as `x = x⁺ − x⁻`. Pivoting uses Bland's rule
//! throughout: slower than Dantzig on big problems but cycle-free and fully
//! deterministic, which matters more at these sizes (tens of variables,
//! hundreds of rows).

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LpError {
    #[error("right-hand side must be nonnegative (row {row}: {value})")]
    NegativeRhs { row: usize, value: f64 },
    #[error("problem is unbounded along column {col}")]
    Unbounded { col: usize },
    #[error("pivot limit {0} exceeded")]
    PivotLimit(usize),
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    /// Optimal values of the free variables.
    pub x: Vec<f64>,
    /// Optimal objective value.
    pub value: f64,
    /// Shadow prices, one per constraint row, all ≥ 0.
    pub duals: Vec<f64>,
}

const ENTER_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-11;
const MAX_PIVOTS: usize = 200_000;

/// Maximize `c·x` over `rows[i].0 · x ≤ rows[i].1` with `x` free.
pub fn solve(c: &[f64], rows: &[(Vec<f64>, f64)]) -> Result<LpSolution, LpError> {
    let n = c.len();
    let m = rows.len();
    for (i, (coeffs, rhs)) in rows.iter().enumerate() {
        debug_assert_eq!(coeffs.len(), n);
        if *rhs < 0.0 {
            return Err(LpError::NegativeRhs {
                row: i,
                value: *rhs,
            });
        }
    }

    // Columns: n positive parts, n negative parts, m slacks, then the rhs.
    let width = 2 * n + m + 1;
    let rhs_col = width - 1;
    let mut tab: Vec<Vec<f64>> = Vec::with_capacity(m);
    for (i, (coeffs, rhs)) in rows.iter().enumerate() {
        let mut row = vec![0.0; width];
        for (j, &a) in coeffs.iter().enumerate() {
            row[j] = a;
            row[n + j] = -a;
        }
        row[2 * n + i] = 1.0;
        row[rhs_col] = *rhs;
        tab.push(row);
    }
    // Reduced-cost row; its rhs entry holds minus the objective.
    let mut obj = vec![0.0; width];
    for (j, &cj) in c.iter().enumerate() {
        obj[j] = cj;
        obj[n + j] = -cj;
    }
    let mut basis: Vec<usize> = (0..m).map(|i| 2 * n + i).collect();

    for _pivot in 0..MAX_PIVOTS {
        // Bland: smallest-index column with positive reduced cost.
        let Some(col) = (0..width - 1).find(|&j| obj[j] > ENTER_TOL) else {
            return Ok(extract(&tab, &obj, &basis, n, m, rhs_col));
        };
        // Ratio test; ties broken by smallest basis variable index.
        let mut leave: Option<(usize, f64)> = None;
        for (i, row) in tab.iter().enumerate() {
            if row[col] > PIVOT_TOL {
                let ratio = row[rhs_col] / row[col];
                let better = match leave {
                    None => true,
                    Some((cur, best)) => {
                        ratio < best - PIVOT_TOL
                            || (ratio < best + PIVOT_TOL && basis[i] < basis[cur])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((piv_row, _)) = leave else {
            return Err(LpError::Unbounded { col });
        };

        let piv = tab[piv_row][col];
        for v in tab[piv_row].iter_mut() {
            *v /= piv;
        }
        for i in 0..m {
            if i != piv_row && tab[i][col].abs() > 0.0 {
                let factor = tab[i][col];
                let src = std::mem::take(&mut tab[piv_row]);
                let dst = &mut tab[i];
                for (d, s) in dst.iter_mut().zip(&src) {
                    *d -= factor * s;
                }
                tab[piv_row] = src;
            }
        }
        let factor = obj[col];
        if factor.abs() > 0.0 {
            for (d, s) in obj.iter_mut().zip(&tab[piv_row]) {
                *d -= factor * s;
            }
        }
        basis[piv_row] = col;
    }
    Err(LpError::PivotLimit(MAX_PIVOTS))
}

fn extract(
    tab: &[Vec<f64>],
    obj: &[f64],
    basis: &[usize],
    n: usize,
    m: usize,
    rhs_col: usize,
) -> LpSolution {
    let mut split = vec![0.0; 2 * n];
    for (i, &b) in basis.iter().enumerate() {
        if b < 2 * n {
            split[b] = tab[i][rhs_col];
        }
    }
    let x: Vec<f64> = (0..n).map(|j| split[j] - split[n + j]).collect();
    let duals: Vec<f64> = (0..m).map(|i| (-obj[2 * n + i]).max(0.0)).collect();
    LpSolution {
        x,
        value: -obj[rhs_col],
        duals,
    }
}
