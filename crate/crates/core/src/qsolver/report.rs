//! Per-node evaluation of the zero, symmetry, positivity, monotonicity and
//! periodicity properties of the KR grid, each labeled proven or
//! conjectural.
//!
//! Every check compares a measured `max_violation` against a `threshold`
//! and passes iff `max_violation ≤ threshold`. Lower-bound properties are
//! expressed with negated quantities, so positivity with margin `m` has
//! `max_violation = -min Q_k` and `threshold = -m`.

use alloc::vec::Vec;

use crate::error::Result;
use crate::qnum::LevelContext;
use crate::real::{rel_diff, Real};
use crate::rootsys::{RootSystem, TypeLabel};

use super::dilog::{dilog_args, dilog_sum};
use super::grid::{build_qgrid, QGrid};
use super::solve::{solve_restricted, SolveSettings, SolveStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    /// `Q_k = 0` for `ℓ+1 ≤ k ≤ l-1`.
    ZeroWindow,
    /// `Q_{ℓ-k} = Q_k` on `[0, ℓ]`.
    Symmetry,
    /// `Q_k > 0` on `[0, ℓ]`.
    Positivity,
    /// `Q_k < Q_{k+1}` on `[0, ⌊ℓ/2⌋-1]`.
    Increase,
    /// `Q_{k+l} = ±Q_k`.
    Periodicity,
    /// `Q_0 = Q_ℓ = 1`.
    Boundary,
}

/// Whether the property is established at `node` for all levels.
pub fn is_proven(label: TypeLabel, property: Property, node: usize) -> bool {
    use Property::*;
    match label {
        TypeLabel::E6 => true,
        TypeLabel::E7 => match property {
            ZeroWindow | Symmetry | Periodicity | Boundary => true,
            Positivity => matches!(node, 1 | 2 | 3 | 6 | 7),
            Increase => matches!(node, 1 | 2 | 7),
        },
        TypeLabel::E8 => match property {
            ZeroWindow | Periodicity | Boundary => true,
            Symmetry => node != 2,
            Positivity => matches!(node, 1 | 3 | 8),
            Increase => matches!(node, 1 | 8),
        },
        TypeLabel::Custom => false,
    }
}

/// The sign `s` in `Q_{k+l}^{(i)} = s Q_k^{(i)}`.
pub fn periodicity_sign(label: TypeLabel, node: usize) -> i64 {
    match (label, node) {
        (TypeLabel::E7, 2 | 5 | 7) => -1,
        _ => 1,
    }
}

/// Levels `k ∈ [0, ℓ]` where positivity is established at `node`: the whole
/// range for fully proven nodes, otherwise `k ≤ ℓ/a_i` together with its
/// mirror image when symmetry is proven.
fn positivity_proven_at(rs: &RootSystem, node: usize, ell: usize) -> Vec<bool> {
    let label = rs.label();
    if is_proven(label, Property::Positivity, node) {
        return alloc::vec![true; ell + 1];
    }
    if label == TypeLabel::Custom {
        return alloc::vec![false; ell + 1];
    }
    let cut = ell / rs.mark(node) as usize;
    let mirror = is_proven(label, Property::Symmetry, node);
    (0..=ell).map(|k| k <= cut || (mirror && ell - k <= cut)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckEntry {
    pub name: &'static str,
    /// `None` for checks on the whole grid.
    pub node: Option<usize>,
    /// Inclusive `k` range examined.
    pub k_range: Option<(usize, usize)>,
    pub status: CheckStatus,
    pub proven: bool,
    pub max_violation: Real,
    pub threshold: Real,
}

impl CheckEntry {
    fn measured(
        name: &'static str,
        node: Option<usize>,
        k_range: Option<(usize, usize)>,
        proven: bool,
        max_violation: Real,
        threshold: Real,
    ) -> Self {
        let status = if max_violation.is_finite() && max_violation <= threshold {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        CheckEntry {
            name,
            node,
            k_range,
            status,
            proven,
            max_violation,
            threshold,
        }
    }

    fn with_status(mut self, status: CheckStatus) -> Self {
        self.status = status;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// Every proven check passed but some conjectural one did not.
    ConjectureViolated,
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::ConjectureViolated => "conjecture-violated",
            Verdict::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone)]
pub struct DilogSummary {
    pub args_in_range: bool,
    pub margin: Option<Real>,
    pub sum: Option<Real>,
}

/// Thresholds and options for [`theorem_report`].
#[derive(Debug, Clone)]
pub struct ReportOptions {
    /// Grid extent; defaults to `2l` so periodicity is visible over a full period.
    pub k_max: Option<usize>,
    /// Also run the restricted solver and compare the two routes.
    pub solve: Option<SolveSettings>,
    pub zero_tol: f64,
    pub symmetry_tol: f64,
    pub positivity_margin: f64,
    pub boundary_tol: f64,
    pub periodicity_tol: f64,
    pub increase_tol: f64,
    pub residual_tol: f64,
    pub agreement_tol: f64,
    pub dilog_margin: f64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            k_max: None,
            solve: Some(SolveSettings::default()),
            zero_tol: 1e-20,
            symmetry_tol: 1e-22,
            positivity_margin: 1e-12,
            boundary_tol: 1e-22,
            periodicity_tol: 1e-20,
            increase_tol: 1e-22,
            residual_tol: 1e-20,
            agreement_tol: 1e-22,
            dilog_margin: 1e-10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub type_label: TypeLabel,
    pub level: u32,
    pub shifted_level: i64,
    pub precision_bits: usize,
    pub grid: QGrid,
    pub solver: Option<core::result::Result<(QGrid, SolveStats), crate::Error>>,
    pub checks: Vec<CheckEntry>,
    pub dilog: DilogSummary,
}

impl TheoremReport {
    pub fn verdict(&self) -> Verdict {
        if self.checks.iter().any(|c| c.proven && !c.passed()) {
            Verdict::Fail
        } else if self.checks.iter().any(|c| !c.passed()) {
            Verdict::ConjectureViolated
        } else {
            Verdict::Pass
        }
    }

    pub fn check(&self, name: &str, node: Option<usize>) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.name == name && c.node == node)
    }
}

fn real(x: f64, prec: usize) -> Real {
    Real::from_f64(x, prec)
}

fn neg_inf_like(prec: usize) -> Real {
    // Stand-in for an empty maximum: far below every threshold.
    -Real::pow2(1 << 20, prec)
}

/// Evaluates the grid properties at every node.
pub fn theorem_report(ctx: &LevelContext<'_>, opts: &ReportOptions) -> Result<TheoremReport> {
    let rs = ctx.root_system();
    let label = rs.label();
    let prec = ctx.precision_bits();
    let ell = ctx.level() as usize;
    let l = ctx.shifted_level() as usize;
    let k_max = opts.k_max.unwrap_or(2 * l);
    let grid = build_qgrid(ctx, k_max)?;
    let one = Real::one(prec);
    let mut checks = Vec::new();

    checks.push(CheckEntry::measured(
        "resolved",
        None,
        Some((0, k_max)),
        true,
        Real::from_u64(grid.unresolved.len() as u64, prec),
        Real::zero(prec),
    ));
    checks.push(CheckEntry::measured(
        "grid_residual",
        None,
        Some((0, k_max)),
        true,
        grid.residual_max.clone(),
        real(opts.residual_tol, prec),
    ));
    let restricted = restrict(&grid, rs, ell);
    checks.push(CheckEntry::measured(
        "restricted_residual",
        None,
        Some((0, ell)),
        true,
        restricted.as_ref().map(|g| g.residual_max.clone()).unwrap_or_else(|| Real::pow2(1 << 20, prec)),
        real(opts.residual_tol, prec),
    ));

    for i in rs.nodes() {
        let cell = |k: usize| grid.cell(i, k);
        let have_all = |lo: usize, hi: usize| (lo..=hi).all(|k| cell(k).is_some());

        // Q_0 = Q_ℓ = 1.
        let mut v = Real::zero(prec);
        let mut missing = false;
        for k in [0, ell] {
            match cell(k) {
                Some(q) => v = v.max(&(&q.value - &one).abs()),
                None => missing = true,
            }
        }
        let e = CheckEntry::measured(
            "boundary",
            Some(i),
            Some((0, ell)),
            is_proven(label, Property::Boundary, i),
            v,
            real(opts.boundary_tol, prec),
        );
        checks.push(if missing { e.with_status(CheckStatus::Inconclusive) } else { e });

        // Zero window, normalized by each cell's magnitude.
        let (lo, hi) = (ell + 1, l - 1);
        let mut v = Real::zero(prec);
        for k in lo..=hi {
            if let Some(q) = cell(k) {
                v = v.max(&(q.value.abs() / &q.magnitude_scale));
            }
        }
        let e = CheckEntry::measured(
            "zero_window",
            Some(i),
            Some((lo, hi)),
            is_proven(label, Property::ZeroWindow, i),
            v,
            real(opts.zero_tol, prec),
        );
        checks.push(if have_all(lo, hi) { e } else { e.with_status(CheckStatus::Inconclusive) });

        // Symmetry.
        let mut v = Real::zero(prec);
        for k in 0..=ell {
            if let (Some(a), Some(b)) = (cell(k), cell(ell - k)) {
                let s = a.magnitude_scale.max(&b.magnitude_scale);
                v = v.max(&((&a.value - &b.value).abs() / s));
            }
        }
        let e = CheckEntry::measured(
            "symmetry",
            Some(i),
            Some((0, ell)),
            is_proven(label, Property::Symmetry, i),
            v,
            real(opts.symmetry_tol, prec),
        );
        checks.push(if have_all(0, ell) { e } else { e.with_status(CheckStatus::Inconclusive) });

        // Positivity, split into the established part and the rest.
        let proven_at = positivity_proven_at(rs, i, ell);
        for (name, want) in [("positivity", true), ("positivity_conjectural", false)] {
            let ks: Vec<usize> = (0..=ell).filter(|&k| proven_at[k] == want).collect();
            if ks.is_empty() {
                continue;
            }
            let mut v = neg_inf_like(prec);
            let mut missing = false;
            for &k in &ks {
                match cell(k) {
                    Some(q) => v = v.max(&(-&q.value)),
                    None => missing = true,
                }
            }
            let e = CheckEntry::measured(
                name,
                Some(i),
                Some((ks[0], ks[ks.len() - 1])),
                want,
                v,
                -real(opts.positivity_margin, prec),
            );
            checks.push(if missing { e.with_status(CheckStatus::Inconclusive) } else { e });
        }

        // Strict increase on [0, ⌊ℓ/2⌋ - 1].
        let top = ell / 2;
        let proven = is_proven(label, Property::Increase, i);
        if top == 0 {
            checks.push(CheckEntry::measured(
                "increase",
                Some(i),
                None,
                proven,
                neg_inf_like(prec),
                Real::zero(prec),
            ));
        } else {
            let mut v = neg_inf_like(prec);
            for k in 0..top {
                if let (Some(a), Some(b)) = (cell(k), cell(k + 1)) {
                    let s = a.magnitude_scale.max(&b.magnitude_scale);
                    v = v.max(&((&a.value - &b.value) / s));
                }
            }
            let e = CheckEntry::measured(
                "increase",
                Some(i),
                Some((0, top - 1)),
                proven,
                v,
                -real(opts.increase_tol, prec),
            );
            checks.push(if have_all(0, top) { e } else { e.with_status(CheckStatus::Inconclusive) });
        }

        // (Anti)periodicity over the available range.
        if k_max >= l {
            let sign = Real::from_i64(periodicity_sign(label, i), prec);
            let mut v = Real::zero(prec);
            for k in 0..=k_max - l {
                if let (Some(a), Some(b)) = (cell(k), cell(k + l)) {
                    let s = a.magnitude_scale.max(&b.magnitude_scale);
                    v = v.max(&((&b.value - &(&sign * &a.value)).abs() / s));
                }
            }
            let e = CheckEntry::measured(
                "periodicity",
                Some(i),
                Some((0, k_max - l)),
                is_proven(label, Property::Periodicity, i),
                v,
                real(opts.periodicity_tol, prec),
            );
            checks.push(if have_all(0, k_max) { e } else { e.with_status(CheckStatus::Inconclusive) });
        }
    }

    let solver = opts.solve.as_ref().map(|s| solve_restricted(ctx, s));
    if let Some(result) = &solver {
        match result {
            Ok((sg, _)) => {
                let tol = real(opts.solve.as_ref().map(|s| s.tolerance).unwrap_or(0.0), prec);
                checks.push(CheckEntry::measured(
                    "solver_residual",
                    None,
                    Some((0, ell)),
                    true,
                    sg.residual_max.clone(),
                    tol,
                ));
                let mut v = Real::zero(prec);
                let mut missing = false;
                for i in rs.nodes() {
                    for k in 0..=ell {
                        match (sg.value(i, k), grid.value(i, k)) {
                            (Some(a), Some(b)) => v = v.max(&rel_diff(a, b)),
                            _ => missing = true,
                        }
                    }
                }
                let e = CheckEntry::measured(
                    "two_path_agreement",
                    None,
                    Some((0, ell)),
                    true,
                    v,
                    real(opts.agreement_tol, prec),
                );
                checks.push(if missing { e.with_status(CheckStatus::Inconclusive) } else { e });
            }
            Err(err) => {
                let r = match err {
                    crate::Error::NonConvergence { residual, .. } => real(*residual, prec),
                    _ => Real::pow2(1 << 20, prec),
                };
                checks.push(CheckEntry::measured("solve", None, Some((0, ell)), true, r, Real::zero(prec)).with_status(CheckStatus::Fail));
            }
        }
    }

    let all_positive_proven = rs.nodes().all(|i| is_proven(label, Property::Positivity, i));
    let dilog = match restricted.as_ref().map(dilog_args) {
        Some(Ok(args)) => {
            let in_range = args.out_of_range().is_empty();
            let margin = args.margin();
            let sum = if in_range { dilog_sum(&args).ok() } else { None };
            let violation = margin.as_ref().map(|m| -m).unwrap_or_else(|| neg_inf_like(prec));
            let e = CheckEntry::measured(
                "dilog_args_in_range",
                None,
                Some((1, ell.saturating_sub(1))),
                all_positive_proven,
                violation,
                -real(opts.dilog_margin, prec),
            );
            checks.push(if in_range { e } else { e.with_status(CheckStatus::Fail) });
            DilogSummary {
                args_in_range: in_range,
                margin,
                sum,
            }
        }
        _ => {
            checks.push(
                CheckEntry::measured(
                    "dilog_args_in_range",
                    None,
                    Some((1, ell.saturating_sub(1))),
                    all_positive_proven,
                    Real::pow2(1 << 20, prec),
                    Real::zero(prec),
                )
                .with_status(CheckStatus::Fail),
            );
            DilogSummary {
                args_in_range: false,
                margin: None,
                sum: None,
            }
        }
    };

    Ok(TheoremReport {
        type_label: label,
        level: ctx.level(),
        shifted_level: ctx.shifted_level(),
        precision_bits: prec,
        grid,
        solver,
        checks,
        dilog,
    })
}

/// The grid on `[0, ℓ]`, if every cell there is resolved.
fn restrict(grid: &QGrid, rs: &RootSystem, ell: usize) -> Option<QGrid> {
    if ell < 1 || grid.k_max < ell {
        return None;
    }
    let values: Vec<_> = grid.values.iter().map(|r| r[..=ell].to_vec()).collect();
    if values.iter().any(|r| r.iter().any(|c| c.is_none())) {
        return None;
    }
    let provenance = grid.provenance.iter().map(|r| r[..=ell].to_vec()).collect();
    Some(QGrid::from_rows(rs, grid.level, grid.shifted_level, grid.precision_bits, values, provenance))
}
