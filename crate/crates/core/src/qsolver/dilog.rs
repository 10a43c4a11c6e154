use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::real::{MathConsts, Real};

use super::grid::QGrid;

/// `x_k^{(i)} = Π_{j∼i} Q_k^{(j)} / (Q_k^{(i)})²` on `0 ≤ k ≤ ℓ`.
#[derive(Debug, Clone)]
pub struct DilogArgs {
    pub level: usize,
    /// `args[i - 1][k]`.
    pub args: Vec<Vec<Real>>,
}

impl DilogArgs {
    /// Interior cells `1 ≤ k ≤ ℓ-1` outside the open unit interval.
    pub fn out_of_range(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for (i, row) in self.args.iter().enumerate() {
            for k in 1..self.level {
                let x = &row[k];
                if !(x.is_positive() && *x < Real::one(x.precision())) {
                    bad.push((i + 1, k));
                }
            }
        }
        bad
    }

    /// Smallest distance of an interior argument to `{0, 1}`.
    pub fn margin(&self) -> Option<Real> {
        let mut best: Option<Real> = None;
        for row in &self.args {
            for x in &row[1..self.level.max(1)] {
                let m = x.min(&(Real::one(x.precision()) - x));
                best = Some(match best {
                    Some(b) => b.min(&m),
                    None => m,
                });
            }
        }
        best
    }
}

/// Computes the dilogarithm arguments of a grid restricted to `[0, ℓ]`.
pub fn dilog_args(grid: &QGrid) -> Result<DilogArgs> {
    let ell = grid.level as usize;
    if grid.k_max < ell {
        return Err(Error::Precondition("grid does not reach k = ℓ".into()));
    }
    let mut args = Vec::with_capacity(grid.rank());
    for i in 1..=grid.rank() {
        let mut row = Vec::with_capacity(ell + 1);
        for k in 0..=ell {
            let q = grid.value(i, k).ok_or(Error::Unresolved(alloc::vec![(i, k)]))?;
            if !q.is_positive() {
                return Err(Error::NonPositive { node: i, k });
            }
            let mut num = Real::one(grid.precision_bits);
            for &j in grid.neighbours(i) {
                let v = grid.value(j, k).ok_or(Error::Unresolved(alloc::vec![(j, k)]))?;
                if !v.is_positive() {
                    return Err(Error::NonPositive { node: j, k });
                }
                num *= v;
            }
            row.push(num / q.square());
        }
        args.push(row);
    }
    Ok(DilogArgs { level: ell, args })
}

/// Rogers dilogarithm `L(x) = Li₂(x) + ½ log x log(1-x)` on `(0, 1)`.
pub fn rogers_dilog(x: &Real, cc: &mut MathConsts) -> Result<Real> {
    let prec = x.precision();
    let one = Real::one(prec);
    if !(x.is_positive() && *x < one) {
        return Err(Error::Precondition("Rogers dilogarithm needs 0 < x < 1".into()));
    }
    let half = Real::from_ratio(1, 2, prec);
    if *x > half {
        // L(x) + L(1-x) = π²/6.
        let pi = cc.pi(prec);
        let y = &one - x;
        return Ok(pi.square() / Real::from_i64(6, prec) - rogers_dilog(&y, cc)?);
    }
    // Li₂(x) = Σ xⁿ/n², geometric with ratio ≤ 1/2.
    let eps = Real::pow2(-(prec as i32) - 4, prec);
    let mut li2 = Real::zero(prec);
    let mut p = x.clone();
    let mut n = 1i64;
    loop {
        let term = &p / &Real::from_i64(n * n, prec);
        li2 += &term;
        if term < eps {
            break;
        }
        p *= x;
        n += 1;
    }
    let logs = x.ln(cc) * (&one - x).ln(cc);
    Ok(li2 + half * logs)
}

/// `(6/π²) Σ_i Σ_{k=1}^{ℓ-1} L(x_k^{(i)})`.
pub fn dilog_sum(args: &DilogArgs) -> Result<Real> {
    let prec = args
        .args
        .first()
        .and_then(|r| r.first())
        .map(|x| x.precision())
        .unwrap_or(crate::real::DEFAULT_PRECISION_BITS);
    if let Some(&(node, k)) = args.out_of_range().first() {
        return Err(Error::DilogRange { node, k });
    }
    let mut cc = MathConsts::new();
    let mut acc = Real::zero(prec);
    for row in &args.args {
        for k in 1..args.level {
            acc += rogers_dilog(&row[k], &mut cc)?;
        }
    }
    let pi = cc.pi(prec);
    Ok(acc * Real::from_i64(6, prec) / pi.square())
}
