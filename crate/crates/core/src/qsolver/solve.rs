use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::qnum::{LevelContext, QReal};
use crate::real::Real;

use super::grid::{Provenance, QGrid};

/// Controls for the restricted fixed-point iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveSettings {
    /// Target for the normalized residual.
    pub tolerance: f64,
    pub max_sweeps: usize,
    /// Initial relaxation factor in `(0, 1]`.
    pub damping: f64,
}

impl Default for SolveSettings {
    fn default() -> Self {
        SolveSettings {
            tolerance: 1e-30,
            max_sweeps: 100_000,
            damping: 1.0,
        }
    }
}

impl SolveSettings {
    pub fn validate(&self, precision_bits: usize) -> Result<()> {
        let floor = Real::pow2(8 - precision_bits as i32, precision_bits);
        if !(self.tolerance.is_finite() && Real::from_f64(self.tolerance, precision_bits) > floor) {
            return Err(Error::Settings(alloc::format!(
                "tolerance {:e} must exceed 2^-{} at {precision_bits} bits",
                self.tolerance,
                precision_bits - 8
            )));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::Settings("damping must lie in (0, 1]".to_string()));
        }
        if self.max_sweeps == 0 {
            return Err(Error::Settings("max_sweeps must be positive".to_string()));
        }
        Ok(())
    }
}

/// Iteration statistics of a converged solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveStats {
    pub sweeps: usize,
    pub final_damping: f64,
}

fn restricted_residual(q: &[Vec<Real>], nbrs: &[Vec<usize>], one: &Real) -> Real {
    let mut worst = Real::zero(one.precision());
    let ell = q[0].len() - 1;
    for (i, row) in q.iter().enumerate() {
        for k in 1..ell {
            let mut prod = one.clone();
            for &j in &nbrs[i] {
                prod *= &q[j][k];
            }
            let q2 = row[k].square();
            let r = (&q2 - &(&row[k - 1] * &row[k + 1]) - prod).abs() / q2.max(one);
            if r > worst {
                worst = r;
            }
        }
    }
    worst
}

/// Solves the `ℓ`-restricted Q-system with `Q_0 = Q_ℓ = 1` by damped
/// Gauss-Seidel sweeps `Q_k^{(i)} ← sqrt(Q_{k-1}Q_{k+1} + Π_{j∼i} Q_k^{(j)})`,
/// in increasing `(k, i)` order from the all-ones grid.
pub fn solve_restricted(ctx: &LevelContext<'_>, settings: &SolveSettings) -> Result<(QGrid, SolveStats)> {
    let rs = ctx.root_system();
    let prec = ctx.precision_bits();
    settings.validate(prec)?;
    let n = rs.rank();
    let ell = ctx.level() as usize;
    let one = Real::one(prec);
    let nbrs: Vec<Vec<usize>> = rs.nodes().map(|i| rs.neighbours(i).iter().map(|j| j - 1).collect()).collect();
    let mut q = vec![vec![one.clone(); ell + 1]; n];
    let tol = Real::from_f64(settings.tolerance, prec);
    let mut damping = settings.damping;
    let mut sweeps = 0usize;
    let mut res = restricted_residual(&q, &nbrs, &one);
    let mut prev = res.clone();
    let mut rises = 0usize;
    while res > tol {
        if sweeps == settings.max_sweeps {
            return Err(Error::NonConvergence {
                sweeps,
                residual: res.to_f64(),
            });
        }
        let w = Real::from_f64(damping, prec);
        let w1 = Real::from_f64(1.0 - damping, prec);
        for k in 1..ell {
            for i in 0..n {
                let mut prod = one.clone();
                for &j in &nbrs[i] {
                    prod *= &q[j][k];
                }
                let target = (&q[i][k - 1] * &q[i][k + 1] + prod).sqrt();
                q[i][k] = if damping == 1.0 { target } else { &w * &target + &w1 * &q[i][k] };
            }
        }
        sweeps += 1;
        res = restricted_residual(&q, &nbrs, &one);
        if res > prev {
            rises += 1;
            if rises == 2 {
                damping /= 2.0;
                rises = 0;
            }
        } else {
            rises = 0;
        }
        prev = res.clone();
    }
    for (i, row) in q.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            if !v.is_positive() {
                return Err(Error::NonPositive { node: i + 1, k });
            }
        }
    }
    let values = q
        .into_iter()
        .map(|row| row.into_iter().map(|v| Some(QReal::exact(v))).collect())
        .collect();
    let provenance = (0..n)
        .map(|_| {
            (0..=ell)
                .map(|k| {
                    Some(if k == 0 || k == ell {
                        Provenance::Boundary
                    } else {
                        Provenance::Solver
                    })
                })
                .collect()
        })
        .collect();
    let grid = QGrid::from_rows(rs, ctx.level(), ctx.shifted_level(), prec, values, provenance);
    Ok((
        grid,
        SolveStats {
            sweeps,
            final_damping: damping,
        },
    ))
}
