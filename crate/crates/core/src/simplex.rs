//! Dense two-phase primal simplex for the small equality-form programs the
//! crate needs: cone-membership feasibility and Minkowski-functional gauges.
//!
//! Problems here have at most a few dozen rows and columns, so a dense
//! tableau with Bland's rule is simple, deterministic and fast enough.

#![allow(clippy::needless_range_loop)]

use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub enum LpError {
    Infeasible,
    Unbounded,
    /// Iteration guard tripped; should not happen with Bland's rule.
    Stalled,
}

#[derive(Clone, Debug)]
pub struct LpSolution<F> {
    pub objective: F,
    pub x: Vec<F>,
}

/// Outcome of a pure feasibility question `∃ x ≥ 0 : Σ x_j col_j = rhs`.
#[derive(Clone, Debug)]
pub struct Feasibility<F> {
    /// Phase-1 optimum: the L1 infeasibility of the system (0 when solvable).
    pub residual: F,
    /// The recovered combination (the best found when infeasible).
    pub x: Vec<F>,
}

impl<F: Real> Feasibility<F> {
    pub fn feasible(&self, rows: usize) -> bool {
        self.residual <= F::RCOST_TOL * F::of_usize(1 + rows)
    }
}

struct Tableau<F> {
    rows: usize,
    structural: usize,
    /// rows x (structural + rows) coefficient matrix; artificial j lives at
    /// column structural + j.
    t: Vec<Vec<F>>,
    rhs: Vec<F>,
    basis: Vec<usize>,
}

impl<F: Real> Tableau<F> {
    /// Build from column-major data, flipping rows so rhs >= 0, with the
    /// artificial columns as the starting basis.
    fn new(columns: &[Vec<F>], rhs: &[F]) -> Self {
        let rows = rhs.len();
        let structural = columns.len();
        let mut t = vec![vec![F::zero(); structural + rows]; rows];
        let mut b = rhs.to_vec();
        for i in 0..rows {
            let flip = b[i] < F::zero();
            for (j, col) in columns.iter().enumerate() {
                debug_assert_eq!(col.len(), rows);
                t[i][j] = if flip { -col[i] } else { col[i] };
            }
            if flip {
                b[i] = -b[i];
            }
            t[i][structural + i] = F::one();
        }
        let basis = (structural..structural + rows).collect();
        Tableau {
            rows,
            structural,
            t,
            rhs: b,
            basis,
        }
    }

    fn objective(&self, cost: &[F]) -> F {
        (0..self.rows)
            .map(|i| cost[self.basis[i]] * self.rhs[i])
            .sum()
    }

    fn reduced_costs(&self, cost: &[F]) -> Vec<F> {
        let ncols = self.structural + self.rows;
        let mut r = cost.to_vec();
        for i in 0..self.rows {
            let cb = cost[self.basis[i]];
            if cb != F::zero() {
                for j in 0..ncols {
                    r[j] = r[j] - cb * self.t[i][j];
                }
            }
        }
        r
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let d = self.t[row][col];
        let ncols = self.structural + self.rows;
        for j in 0..ncols {
            self.t[row][j] = self.t[row][j] / d;
        }
        self.rhs[row] = self.rhs[row] / d;
        for i in 0..self.rows {
            if i == row {
                continue;
            }
            let factor = self.t[i][col];
            if factor != F::zero() {
                for j in 0..ncols {
                    let v = self.t[row][j];
                    self.t[i][j] = self.t[i][j] - factor * v;
                }
                let rv = self.rhs[row];
                self.rhs[i] = self.rhs[i] - factor * rv;
                if self.rhs[i].abs() < F::PIVOT_TOL * F::PIVOT_TOL {
                    self.rhs[i] = F::zero();
                }
            }
        }
        self.basis[row] = col;
    }

    /// Run Bland-rule simplex minimizing `cost`; `allow` filters entering
    /// columns. Returns Err(Unbounded) or Err(Stalled).
    fn iterate(&mut self, cost: &[F], allow: impl Fn(usize) -> bool) -> Result<(), LpError> {
        let max_iters = 200 * (self.structural + self.rows + 1);
        for _ in 0..max_iters {
            let r = self.reduced_costs(cost);
            // Bland: smallest eligible column index with negative reduced cost.
            let entering = (0..self.structural + self.rows)
                .find(|&j| allow(j) && !self.basis.contains(&j) && r[j] < -F::RCOST_TOL);
            let col = match entering {
                Some(c) => c,
                None => return Ok(()),
            };
            // Ratio test; Bland tie-break on smallest basis variable.
            let mut leaving: Option<(usize, F)> = None;
            for i in 0..self.rows {
                if self.t[i][col] > F::PIVOT_TOL {
                    let ratio = self.rhs[i].max(F::zero()) / self.t[i][col];
                    leaving = match leaving {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br
                                || (ratio == br && self.basis[i] < self.basis[bi])
                            {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            match leaving {
                Some((row, _)) => self.pivot(row, col),
                None => return Err(LpError::Unbounded),
            }
        }
        Err(LpError::Stalled)
    }

    fn extract(&self) -> Vec<F> {
        let mut x = vec![F::zero(); self.structural];
        for i in 0..self.rows {
            if self.basis[i] < self.structural {
                x[self.basis[i]] = self.rhs[i];
            }
        }
        x
    }

    fn phase1(&mut self) -> Result<F, LpError> {
        let mut cost = vec![F::zero(); self.structural + self.rows];
        for j in self.structural..self.structural + self.rows {
            cost[j] = F::one();
        }
        self.iterate(&cost, |_| true)?;
        Ok(self.objective(&cost))
    }

    /// Pivot basic artificials out where possible so phase 2 cannot move them.
    fn purge_artificials(&mut self) {
        for i in 0..self.rows {
            if self.basis[i] >= self.structural {
                if let Some(j) =
                    (0..self.structural).find(|&j| self.t[i][j].abs() > F::PIVOT_TOL)
                {
                    self.pivot(i, j);
                }
            }
        }
    }
}

/// Decide `∃ x ≥ 0 : Σ x_j columns_j = rhs`. The residual is in the units of
/// the supplied data; callers are expected to pre-scale columns and rhs.
pub fn feasible_nonneg<F: Real>(columns: &[Vec<F>], rhs: &[F]) -> Result<Feasibility<F>, LpError> {
    let mut tab = Tableau::new(columns, rhs);
    let residual = tab.phase1()?;
    Ok(Feasibility {
        residual,
        x: tab.extract(),
    })
}

/// Minimize `c · x` subject to `Σ x_j columns_j = rhs, x ≥ 0`.
pub fn minimize<F: Real>(
    c: &[F],
    columns: &[Vec<F>],
    rhs: &[F],
    feasibility_tol: F,
) -> Result<LpSolution<F>, LpError> {
    let mut tab = Tableau::new(columns, rhs);
    let infeas = tab.phase1()?;
    if infeas > feasibility_tol {
        return Err(LpError::Infeasible);
    }
    tab.purge_artificials();
    let structural = tab.structural;
    let mut cost = vec![F::zero(); structural + tab.rows];
    cost[..structural].copy_from_slice(c);
    tab.iterate(&cost, |j| j < structural)?;
    Ok(LpSolution {
        objective: tab.objective(&cost),
        x: tab.extract(),
    })
}
