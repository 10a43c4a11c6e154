//! The `verify` pipeline: runs the selected check groups and assembles a report.

use std::time::{Duration, Instant};

use qslab_core::affweyl::{apply_word, enumerate_alcove, reduce_to_dominant, Generator, ReductionKind};
use qslab_core::qnum::{qdim, qdim_formal, qdim_vanishes, LevelContext};
use qslab_core::qsolver::{
    build_qgrid, dilog_args, dilog_sum, solve_restricted, theorem_report, CheckStatus, QGrid, SolveSettings,
    Verdict,
};
use qslab_core::real::rel_diff;
use qslab_core::seqanalysis::{branden_criterion, is_log_concave, log_concavity_order, Rootedness, RealSequence};
use qslab_core::{Real, RootSystem, TypeLabel, Weight};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Check, RunConfig};
use crate::fixtures::fixture_check;
use crate::output::decimal;
use crate::CliError;

/// One line of a verification report.
#[derive(Debug, Clone)]
pub struct CheckRecord {
    pub group: Check,
    pub name: String,
    pub node: Option<usize>,
    pub status: CheckStatus,
    pub proven: bool,
    pub max_violation: Option<Real>,
    pub threshold: Option<Real>,
    pub detail: Option<String>,
}

impl CheckRecord {
    fn new(group: Check, name: &str, node: Option<usize>, proven: bool, ok: bool) -> Self {
        CheckRecord {
            group,
            name: name.to_string(),
            node,
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            proven,
            max_violation: None,
            threshold: None,
            detail: None,
        }
    }

    /// Passes iff `violation <= threshold`.
    fn measured(group: Check, name: &str, node: Option<usize>, proven: bool, violation: Real, threshold: Real) -> Self {
        let mut r = CheckRecord::new(group, name, node, proven, violation <= threshold);
        r.max_violation = Some(violation);
        r.threshold = Some(threshold);
        r
    }

    fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    fn to_json(&self) -> Value {
        json!({
            "group": self.group.as_str(),
            "name": self.name,
            "node": self.node,
            "status": self.status.as_str(),
            "proven": self.proven,
            "max_violation": self.max_violation.as_ref().map(decimal),
            "threshold": self.threshold.as_ref().map(decimal),
            "detail": self.detail,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CellRecord {
    pub node: usize,
    pub k: usize,
    pub value: Option<String>,
    pub provenance: Option<&'static str>,
}

#[derive(Debug, Clone)]
pub struct DilogRecord {
    pub args_in_range: bool,
    pub margin: Option<Real>,
    pub sum: Option<Real>,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub type_label: TypeLabel,
    pub level: u32,
    pub shifted_level: i64,
    pub precision_bits: usize,
    pub k_max: Option<usize>,
    pub selected: Vec<Check>,
    pub seed: u64,
    pub cells: Vec<CellRecord>,
    pub residual_max: Option<Real>,
    pub checks: Vec<CheckRecord>,
    pub dilog: Option<DilogRecord>,
    /// Wall-clock time; shown in text output only, so JSON stays reproducible.
    pub duration: Duration,
}

impl VerificationReport {
    /// Fail iff a proven check did not pass; conjectural misses only downgrade.
    pub fn verdict(&self) -> Verdict {
        if self.checks.iter().any(|c| c.proven && !c.passed()) {
            Verdict::Fail
        } else if self.checks.iter().any(|c| !c.passed()) {
            Verdict::ConjectureViolated
        } else {
            Verdict::Pass
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.verdict() == Verdict::Fail {
            1
        } else {
            0
        }
    }

    pub fn find(&self, name: &str, node: Option<usize>) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name && c.node == node)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "type": self.type_label.to_string(),
            "level": self.level,
            "l": self.shifted_level,
            "precision_bits": self.precision_bits,
            "config": {
                "k_max": self.k_max,
                "checks": self.selected.iter().map(|c| c.as_str()).collect::<Vec<_>>(),
                "seed": self.seed,
            },
            "cells": self.cells,
            "residual_max": self.residual_max.as_ref().map(decimal),
            "checks": self.checks.iter().map(CheckRecord::to_json).collect::<Vec<_>>(),
            "dilog": self.dilog.as_ref().map(|d| json!({
                "args_in_range": d.args_in_range,
                "margin": d.margin.as_ref().map(decimal),
                "sum": d.sum.as_ref().map(decimal),
            })),
            "verdict": self.verdict().as_str(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} level {} (l = {}), {} bits\n",
            self.type_label, self.level, self.shifted_level, self.precision_bits
        );
        for c in &self.checks {
            let node = c.node.map(|n| format!(" node {n}")).unwrap_or_default();
            let label = if c.proven { "proven" } else { "conjectural" };
            s.push_str(&format!(
                "{:<12} {:<6} {}{} [{label}]",
                c.group.as_str(),
                c.status.as_str(),
                c.name,
                node
            ));
            if let (Some(v), Some(t)) = (&c.max_violation, &c.threshold) {
                s.push_str(&format!(" violation {} <= {}", v.to_decimal(6), t.to_decimal(6)));
            }
            if let Some(d) = &c.detail {
                s.push_str(&format!(" ({d})"));
            }
            s.push('\n');
        }
        if let Some(d) = &self.dilog {
            if let Some(sum) = &d.sum {
                s.push_str(&format!("dilog sum {}\n", decimal(sum)));
            }
        }
        s.push_str(&format!(
            "verdict {} in {:.2}s\n",
            self.verdict().as_str(),
            self.duration.as_secs_f64()
        ));
        s
    }
}

pub fn grid_cells(grid: &QGrid) -> Vec<CellRecord> {
    grid.cells()
        .map(|(node, k, v, p)| CellRecord {
            node,
            k,
            value: v.map(|q| decimal(&q.value)),
            provenance: p.map(|p| p.as_str()),
        })
        .collect()
}

/// Expected number of positive roots.
pub fn expected_root_count(label: TypeLabel) -> Option<usize> {
    match label {
        TypeLabel::E6 => Some(36),
        TypeLabel::E7 => Some(63),
        TypeLabel::E8 => Some(120),
        TypeLabel::Custom => None,
    }
}

/// Nodes with odd `δ_i`.
pub fn expected_odd_deltas(label: TypeLabel) -> &'static [usize] {
    match label {
        TypeLabel::E7 => &[2, 5, 7],
        _ => &[],
    }
}

/// Nodes where the height-symmetry argument and its witnesses are used.
pub fn minuscule_nodes(label: TypeLabel) -> &'static [usize] {
    match label {
        TypeLabel::E6 => &[1, 6],
        TypeLabel::E7 => &[7],
        _ => &[],
    }
}

#[derive(Debug, Clone)]
pub struct SignTrialStats {
    pub trials: usize,
    /// Trials whose image lies on a wall (both sides must vanish).
    pub on_wall: usize,
    /// Largest relative gap in `d(w·λ) = (-1)^{len w} d(λ)`, over the raw
    /// image and over its dominant representative.
    pub max_rel_diff: Real,
    /// Words whose reported sign differs from `(-1)^{len w}`.
    pub sign_mismatches: usize,
    /// Wall verdicts that disagree with the vanishing of `d(λ)`, or dominant
    /// outputs that do not reduce to themselves.
    pub reduction_mismatches: usize,
}

/// Random dominant `λ` (coordinates at most 3) and random words of length at
/// most 12. The image `w·λ` is reduced to its dominant representative `ν`,
/// and both `d(w·λ)` and `d(ν)` are compared with `d(λ)` and the parity.
pub fn sign_identity_trials(ctx: &LevelContext<'_>, trials: usize, seed: u64) -> Result<SignTrialStats, CliError> {
    let rs = ctx.root_system();
    let prec = ctx.precision_bits();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = SignTrialStats {
        trials,
        on_wall: 0,
        max_rel_diff: Real::zero(prec),
        sign_mismatches: 0,
        reduction_mismatches: 0,
    };
    for _ in 0..trials {
        let lambda = Weight::new((0..rs.rank()).map(|_| rng.gen_range(0..=3)).collect());
        let len = rng.gen_range(1..=12usize);
        let word: Vec<Generator> = (0..len)
            .map(|_| match rng.gen_range(0..=rs.rank()) {
                0 => Generator::S0,
                i => Generator::S(i),
            })
            .collect();
        let oracle: i8 = if len % 2 == 0 { 1 } else { -1 };
        let (mu, sign) = apply_word(&word, &lambda, ctx)?;
        if sign != oracle {
            stats.sign_mismatches += 1;
        }
        let d_lambda = qdim(&lambda, ctx)?.value;
        let parity = Real::from_i64(oracle as i64, prec);
        let raw = qdim_formal(&mu, ctx)?.value;
        stats.max_rel_diff = stats.max_rel_diff.max(&rel_diff(&raw, &(&parity * &d_lambda)));
        let red = reduce_to_dominant(&mu, ctx)?;
        match (&red.kind, &red.dominant_weight) {
            (ReductionKind::Dominant, Some(nu)) => {
                let total = Real::from_i64((oracle * red.sign) as i64, prec);
                let d_nu = qdim(nu, ctx)?.value;
                stats.max_rel_diff = stats.max_rel_diff.max(&rel_diff(&(total * d_nu), &d_lambda));
                let again = reduce_to_dominant(nu, ctx)?;
                if again.dominant_weight.as_ref() != Some(nu) || again.sign != 1 {
                    stats.reduction_mismatches += 1;
                }
            }
            _ => {
                stats.on_wall += 1;
                if !qdim_vanishes(&lambda, ctx) {
                    stats.reduction_mismatches += 1;
                }
            }
        }
    }
    Ok(stats)
}

/// Random integral weights: the wall verdict of reduction against the
/// congruence rule for vanishing. Returns the number of disagreements.
pub fn wall_rule_trials(ctx: &LevelContext<'_>, trials: usize, seed: u64) -> Result<usize, CliError> {
    let rs = ctx.root_system();
    let l = ctx.shifted_level();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut bad = 0;
    for _ in 0..trials {
        let w = Weight::new((0..rs.rank()).map(|_| rng.gen_range(-2 * l..=2 * l)).collect());
        let red = reduce_to_dominant(&w, ctx)?;
        if (red.kind == ReductionKind::OnWall) != qdim_vanishes(&w, ctx) {
            bad += 1;
        }
    }
    Ok(bad)
}

/// Smallest ζ-dimension over the fundamental alcove, and its size.
pub fn alcove_min_qdim(ctx: &LevelContext<'_>) -> Result<(Real, usize), CliError> {
    let alcove = enumerate_alcove(ctx.root_system(), ctx.level())?;
    let mut min: Option<Real> = None;
    for w in &alcove {
        let v = qdim(w, ctx)?.value;
        min = Some(match min {
            Some(m) => m.min(&v),
            None => v,
        });
    }
    Ok((min.unwrap_or_else(|| Real::one(ctx.precision_bits())), alcove.len()))
}

/// `(d_ζ(kϖ_i))_{0≤k≤upto}`.
pub fn qdim_sequence(ctx: &LevelContext<'_>, node: usize, upto: usize) -> Result<RealSequence, CliError> {
    let rank = ctx.root_system().rank();
    let xs = (0..=upto as i64)
        .map(|k| qdim(&Weight::fundamental(rank, node, k), ctx).map(|q| q.value))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RealSequence::new(xs)?)
}

fn real(x: f64, prec: usize) -> Real {
    Real::from_f64(x, prec)
}

fn roots_checks(rs: &RootSystem, cfg: &RunConfig, out: &mut Vec<CheckRecord>) -> Result<(), CliError> {
    let g = Check::Roots;
    let label = rs.label();
    let count = rs.num_positive_roots();
    let expected = expected_root_count(label).unwrap_or(count);
    out.push(
        CheckRecord::new(g, "root_count", None, true, count == expected).detail(format!("{count} positive roots, expected {expected}")),
    );
    let marks: i64 = rs.marks().iter().sum();
    let h = rs.coxeter_number();
    out.push(CheckRecord::new(g, "marks_sum", None, true, marks == h - 1).detail(format!("sum of marks {marks}, h = {h}")));
    if matches!(label, TypeLabel::E7 | TypeLabel::E8) {
        let rec = match fixture_check(rs, &cfg.fixtures) {
            Ok(o) => {
                let mut d = format!("{}/{} rows match", o.matched, o.generated);
                if !o.mismatched_rows.is_empty() {
                    d.push_str(&format!(", mismatched rows {:?}", o.mismatched_rows));
                }
                CheckRecord::new(g, "fixture", None, true, o.passed()).detail(d)
            }
            Err(e) => CheckRecord::new(g, "fixture", None, true, false).detail(e.to_string()),
        };
        out.push(rec);
    }
    let odd = expected_odd_deltas(label);
    let mut bad = Vec::new();
    for i in rs.nodes() {
        if (rs.delta(i)? % 2 != 0) != odd.contains(&i) {
            bad.push(i);
        }
    }
    let mut rec = CheckRecord::new(g, "delta_parity", None, true, bad.is_empty());
    if label == TypeLabel::E7 {
        let d7 = rs.delta(7)?;
        rec.detail = Some(format!("delta_7 = {d7}"));
        if d7 != 27 {
            rec.status = CheckStatus::Fail;
        }
    }
    if !bad.is_empty() {
        rec.detail = Some(format!("wrong parity at nodes {bad:?}"));
    }
    out.push(rec);
    for &i in minuscule_nodes(label) {
        let h = rs.coxeter_number();
        let missing: Vec<i64> = (1..h).filter(|&r| rs.lee_witness(i, r).is_err()).collect();
        let mut rec = CheckRecord::new(g, "lee_witness", Some(i), true, missing.is_empty());
        if !missing.is_empty() {
            rec.detail = Some(format!("no witness at heights {missing:?}"));
        }
        out.push(rec);
        out.push(CheckRecord::new(g, "height_symmetry", Some(i), true, rs.height_symmetry_check(i)?));
    }
    Ok(())
}

fn weyl_checks(ctx: &LevelContext<'_>, cfg: &RunConfig, out: &mut Vec<CheckRecord>) -> Result<(), CliError> {
    let g = Check::Weyl;
    let prec = ctx.precision_bits();
    match alcove_min_qdim(ctx) {
        Ok((min, n)) => out.push(
            CheckRecord::measured(g, "alcove_positivity", None, true, -min, -real(1e-10, prec))
                .detail(format!("{n} alcove weights")),
        ),
        Err(CliError::Core(qslab_core::Error::AlcoveTooLarge { .. })) => {
            let mut r = CheckRecord::new(g, "alcove_positivity", None, true, false).detail("level too large to enumerate");
            r.status = CheckStatus::Inconclusive;
            out.push(r);
            return Ok(());
        }
        Err(e) => return Err(e),
    }
    let s = sign_identity_trials(ctx, 100, cfg.seed)?;
    let mut rec = CheckRecord::measured(g, "sign_identity", None, true, s.max_rel_diff, real(1e-25, prec)).detail(format!(
        "{} trials ({} on a wall), {} sign and {} reduction mismatches",
        s.trials, s.on_wall, s.sign_mismatches, s.reduction_mismatches
    ));
    if s.sign_mismatches + s.reduction_mismatches > 0 {
        rec.status = CheckStatus::Fail;
    }
    out.push(rec);
    let bad = wall_rule_trials(ctx, 200, cfg.seed)?;
    out.push(CheckRecord::new(g, "wall_rule", None, true, bad == 0).detail(format!("{bad} of 200 disagree")));
    Ok(())
}

fn solve_settings(cfg: &RunConfig) -> SolveSettings {
    cfg.options.solve.clone().unwrap_or_default()
}

/// Runs the selected checks in the fixed group order.
pub fn run(cfg: &RunConfig) -> Result<VerificationReport, CliError> {
    cfg.validate()?;
    let start = Instant::now();
    let rs = RootSystem::exceptional(cfg.type_label)?;
    let ctx = LevelContext::new(&rs, cfg.level, cfg.precision_bits)?;
    let prec = cfg.precision_bits;
    let l = ctx.shifted_level() as usize;
    let ell = cfg.level as usize;
    let mut checks = Vec::new();
    let mut grid: Option<QGrid> = None;
    let mut solved: Option<QGrid> = None;
    let mut dilog = None;
    let selected = |c: Check| cfg.checks.contains(&c);

    if selected(Check::Roots) {
        roots_checks(&rs, cfg, &mut checks)?;
    }
    if selected(Check::Weyl) {
        weyl_checks(&ctx, cfg, &mut checks)?;
    }
    if selected(Check::Grid) {
        let g = build_qgrid(&ctx, cfg.options.k_max.unwrap_or(l))?;
        checks.push(
            CheckRecord::measured(
                Check::Grid,
                "resolved",
                None,
                true,
                Real::from_u64(g.unresolved.len() as u64, prec),
                Real::zero(prec),
            )
            .detail(format!("k_max = {}", g.k_max)),
        );
        checks.push(CheckRecord::measured(
            Check::Grid,
            "grid_residual",
            None,
            true,
            g.residual_max.clone(),
            real(cfg.options.residual_tol, prec),
        ));
        grid = Some(g);
    }
    if selected(Check::Solve) {
        let settings = solve_settings(cfg);
        match solve_restricted(&ctx, &settings) {
            Ok((g, stats)) => {
                checks.push(
                    CheckRecord::new(Check::Solve, "solve", None, true, true)
                        .detail(format!("{} sweeps, final damping {}", stats.sweeps, stats.final_damping)),
                );
                checks.push(CheckRecord::measured(
                    Check::Solve,
                    "solver_residual",
                    None,
                    true,
                    g.residual_max.clone(),
                    real(settings.tolerance, prec),
                ));
                solved = Some(g);
            }
            Err(e) => checks.push(CheckRecord::new(Check::Solve, "solve", None, true, false).detail(e.to_string())),
        }
    }
    if selected(Check::Theorem) {
        let rep = theorem_report(&ctx, &cfg.options)?;
        for c in &rep.checks {
            checks.push(CheckRecord {
                group: Check::Theorem,
                name: c.name.to_string(),
                node: c.node,
                status: c.status,
                proven: c.proven,
                max_violation: Some(c.max_violation.clone()),
                threshold: Some(c.threshold.clone()),
                detail: c.k_range.map(|(a, b)| format!("k in [{a}, {b}]")),
            });
        }
        dilog = Some(DilogRecord {
            args_in_range: rep.dilog.args_in_range,
            margin: rep.dilog.margin.clone(),
            sum: rep.dilog.sum.clone(),
        });
        if grid.is_none() {
            grid = Some(rep.grid);
        }
    }
    if selected(Check::Logconcave) {
        let g = Check::Logconcave;
        for i in rs.nodes() {
            let upto = ell / rs.mark(i) as usize;
            let seq = qdim_sequence(&ctx, i, upto)?;
            let positive = seq.entries().iter().all(|x| x.is_positive());
            let lc = is_log_concave(&seq, true)?;
            checks.push(
                CheckRecord::new(g, "qdim_log_concave", Some(i), true, positive && lc)
                    .detail(format!("k in [0, {upto}]")),
            );
        }
        if cfg.type_label == TypeLabel::E6 {
            let row = match &grid {
                Some(gr) if gr.k_max >= ell => gr.row(2, ell),
                _ => build_qgrid(&ctx, l)?.row(2, ell),
            };
            let rec = match row {
                Some(xs) => {
                    let seq = RealSequence::new(xs)?;
                    CheckRecord::new(g, "q_log_concave", Some(2), true, is_log_concave(&seq, true)?)
                }
                None => CheckRecord::new(g, "q_log_concave", Some(2), true, false).detail("unresolved cells"),
            };
            checks.push(rec.detail(format!("k in [0, {ell}]")));
        }
        if cfg.type_label == TypeLabel::E7 {
            let seq = qdim_sequence(&ctx, 7, ell)?;
            let order = log_concavity_order(&seq, 6, false);
            checks.push(
                CheckRecord::new(g, "log_concavity_order", Some(7), false, order.is_some_and(|o| o >= 3))
                    .detail(format!("order {} of 6 probed", order.map_or("none".into(), |o| o.to_string()))),
            );
            let v = branden_criterion(&seq)?;
            let mut rec = CheckRecord::new(g, "branden", Some(7), false, v.status == Rootedness::RealNegative);
            if v.status == Rootedness::Inconclusive {
                rec.status = CheckStatus::Inconclusive;
            }
            let mut d = v.status.as_str().to_string();
            if let Some(w) = &v.witness {
                d.push_str(&format!(
                    ", witness {} + {}i",
                    w.root.re.to_decimal(12),
                    w.root.im.to_decimal(12)
                ));
            }
            checks.push(rec.detail(d));
        }
    }
    if selected(Check::Dilog) {
        let source = match solved.take() {
            Some(s) => s,
            None => build_qgrid(&ctx, l.max(2))?,
        };
        let g = Check::Dilog;
        match dilog_args(&source) {
            Ok(args) => {
                let margin = args.margin();
                let in_range = args.out_of_range().is_empty();
                let m = margin.clone().unwrap_or_else(|| Real::one(prec));
                checks.push(CheckRecord::measured(
                    g,
                    "dilog_args_in_range",
                    None,
                    true,
                    -m,
                    -real(cfg.options.dilog_margin, prec),
                ));
                let sum = if in_range { Some(dilog_sum(&args)?) } else { None };
                dilog = Some(DilogRecord {
                    args_in_range: in_range,
                    margin,
                    sum,
                });
            }
            Err(e) => checks.push(CheckRecord::new(g, "dilog_args_in_range", None, true, false).detail(e.to_string())),
        }
    }

    Ok(VerificationReport {
        type_label: cfg.type_label,
        level: cfg.level,
        shifted_level: ctx.shifted_level(),
        precision_bits: prec,
        k_max: cfg.options.k_max,
        selected: cfg.checks.clone(),
        seed: cfg.seed,
        residual_max: grid.as_ref().map(|g| g.residual_max.clone()),
        cells: grid.as_ref().map(grid_cells).unwrap_or_default(),
        checks,
        dilog,
        duration: start.elapsed(),
    })
}
