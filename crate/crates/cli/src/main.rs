use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qslab::config::{parse_checks, parse_type, Format, Layer, RunConfig, DEFAULT_PRECISION_BITS};
use qslab::fixtures::render_roots;
use qslab::output::{decimal, emit};
use qslab::verify::{grid_cells, qdim_sequence, run};
use qslab::CliError;
use qslab_core::affweyl::{reduce_to_dominant, ReductionKind};
use qslab_core::krchar::{chari_decomposition, has_chari_formula, kleber_q1, qdim_kr};
use qslab_core::qnum::{qdim, qdim_classical, LevelContext};
use qslab_core::qsolver::{build_qgrid, solve_restricted, QGrid, SolveSettings};
use qslab_core::real::MathConsts;
use qslab_core::seqanalysis::{branden_criterion, is_log_concave, log_concavity_order, RealSequence};
use qslab_core::{Real, RootSystem, TypeLabel, Weight};
use serde_json::json;

#[derive(Parser)]
#[command(name = "qslab", version, about = "Quantum dimensions and restricted Q-systems for E6, E7, E8")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Root system: E6, E7 or E8.
    #[arg(long = "type", global = true, value_parser = parse_type)]
    type_label: Option<TypeLabel>,
    #[arg(long, global = true)]
    level: Option<u32>,
    #[arg(long, global = true)]
    precision_bits: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here (atomically) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// `key=value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// List positive roots in canonical order.
    Roots,
    /// ζ-dimension of a dominant weight.
    Qdim {
        /// Fundamental-weight coordinates, comma separated.
        #[arg(long)]
        weight: String,
        /// Also print the classical dimension.
        #[arg(long)]
        classical: bool,
        #[arg(long, default_value_t = 30)]
        digits: usize,
    },
    /// Reduce a weight to the fundamental alcove under the dot action.
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
    /// Dominant-weight decomposition of a KR module.
    Krdec {
        #[arg(long)]
        node: usize,
        #[arg(long)]
        k: usize,
        /// Also evaluate its ζ-dimension (needs --level).
        #[arg(long)]
        qdim: bool,
    },
    /// Q-system grid from KR quantum dimensions.
    Grid {
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Solve the restricted Q-system directly.
    Solve {
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_sweeps: Option<usize>,
        #[arg(long)]
        damping: Option<f64>,
    },
    /// Run the verification suite.
    Verify {
        /// Comma-separated subset of roots,weyl,grid,solve,theorem,logconcave,dilog.
        #[arg(long)]
        checks: Option<String>,
        /// Report path (same as --out).
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Log-concavity order and real-rootedness of a sequence.
    Logconcave {
        /// Use (d(kϖ_node))_{0≤k≤level}.
        #[arg(long)]
        node: Option<usize>,
        /// Raw decimal sequence instead of a node.
        #[arg(long, allow_hyphen_values = true)]
        seq: Option<String>,
        #[arg(long, default_value_t = 6)]
        max_order: usize,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        branden: bool,
    },
}

struct Resolved {
    layer: Layer,
    format: Format,
    out: Option<PathBuf>,
}

impl Resolved {
    fn type_label(&self) -> Result<TypeLabel, CliError> {
        self.layer.type_label.ok_or_else(|| CliError::Usage("--type is required".into()))
    }

    fn root_system(&self) -> Result<RootSystem, CliError> {
        Ok(RootSystem::exceptional(self.type_label()?)?)
    }

    fn level(&self) -> Result<u32, CliError> {
        self.layer.level.ok_or_else(|| CliError::Usage("--level is required".into()))
    }

    fn precision(&self) -> usize {
        self.layer.precision_bits.unwrap_or(DEFAULT_PRECISION_BITS)
    }

    fn emit(&self, text: String) -> Result<(), CliError> {
        emit(self.out.as_deref(), &text)
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| CliError::Usage(format!("bad integer `{t}`"))))
        .collect()
}

fn to_json(v: &serde_json::Value) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn cells_csv(grid: &QGrid) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["node", "k", "value", "provenance"])?;
    for c in grid_cells(grid) {
        w.write_record([
            c.node.to_string(),
            c.k.to_string(),
            c.value.unwrap_or_default(),
            c.provenance.unwrap_or("unresolved").to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn grid_json(grid: &QGrid) -> serde_json::Value {
    json!({
        "type": grid.type_label.to_string(),
        "level": grid.level,
        "l": grid.shifted_level,
        "precision_bits": grid.precision_bits,
        "k_max": grid.k_max,
        "cells": grid_cells(grid),
        "residual_max": decimal(&grid.residual_max),
        "unresolved": grid.unresolved,
    })
}

fn grid_text(grid: &QGrid) -> String {
    let mut s = format!(
        "{} level {} (l = {}), k_max {}, residual {}\n",
        grid.type_label,
        grid.level,
        grid.shifted_level,
        grid.k_max,
        grid.residual_max.to_decimal(6)
    );
    for c in grid_cells(grid) {
        s.push_str(&format!(
            "Q_{}^({}) = {} [{}]\n",
            c.k,
            c.node,
            c.value.unwrap_or_else(|| "?".into()),
            c.provenance.unwrap_or("unresolved")
        ));
    }
    s
}

fn render_grid(r: &Resolved, grid: &QGrid, extra: Option<serde_json::Value>) -> Result<String, CliError> {
    Ok(match r.format {
        Format::Json => {
            let mut v = grid_json(grid);
            if let (Some(obj), Some(serde_json::Value::Object(e))) = (v.as_object_mut(), extra) {
                obj.extend(e);
            }
            to_json(&v)?
        }
        Format::Csv => cells_csv(grid)?,
        Format::Text | Format::Fixture => grid_text(grid),
    })
}

fn cmd_roots(r: &Resolved) -> Result<i32, CliError> {
    let rs = r.root_system()?;
    let text = match r.format {
        Format::Fixture => render_roots(&rs),
        Format::Json => {
            let roots: Vec<_> = rs
                .positive_roots()
                .iter()
                .enumerate()
                .map(|(i, b)| json!({"index": i + 1, "height": rs.height(i), "coefficients": b}))
                .collect();
            to_json(&json!({"type": rs.label().to_string(), "count": roots.len(), "roots": roots}))?
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["index".to_string(), "height".to_string()];
            header.extend(rs.nodes().map(|i| format!("b{i}")));
            w.write_record(&header)?;
            for (i, b) in rs.positive_roots().iter().enumerate() {
                let mut row = vec![(i + 1).to_string(), rs.height(i).to_string()];
                row.extend(b.iter().map(|x| x.to_string()));
                w.write_record(&row)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?).expect("utf-8")
        }
        Format::Text => {
            let mut s = format!("{} has {} positive roots\n", rs.label(), rs.num_positive_roots());
            for (i, b) in rs.positive_roots().iter().enumerate() {
                s.push_str(&format!("{:>4} {:>3} {:?}\n", i + 1, rs.height(i), b));
            }
            s
        }
    };
    r.emit(text)?;
    Ok(0)
}

fn cmd_qdim(r: &Resolved, weight: &str, classical: bool, digits: usize) -> Result<i32, CliError> {
    let rs = r.root_system()?;
    let ctx = LevelContext::new(&rs, r.level()?, r.precision())?;
    let w = Weight::new(parse_ints(weight)?);
    let v = qdim(&w, &ctx)?;
    let dim = if classical { Some(qdim_classical(&rs, &w)?.to_string()) } else { None };
    let text = match r.format {
        Format::Json => to_json(&json!({
            "type": rs.label().to_string(),
            "level": ctx.level(),
            "weight": w.coeffs(),
            "value": v.value.to_decimal(digits),
            "classical": dim,
        }))?,
        _ => {
            let mut s = format!("{}\n", v.value.to_decimal(digits));
            if let Some(d) = dim {
                s.push_str(&format!("classical {d}\n"));
            }
            s
        }
    };
    r.emit(text)?;
    Ok(0)
}

fn cmd_reduce(r: &Resolved, weight: &str) -> Result<i32, CliError> {
    let rs = r.root_system()?;
    let ctx = LevelContext::new(&rs, r.level()?, r.precision())?;
    let w = Weight::new(parse_ints(weight)?);
    let red = reduce_to_dominant(&w, &ctx)?;
    let kind = match red.kind {
        ReductionKind::Dominant => "dominant",
        ReductionKind::OnWall => "on_wall",
    };
    let text = match r.format {
        Format::Json => to_json(&json!({
            "weight": w.coeffs(),
            "kind": kind,
            "dominant_weight": red.dominant_weight.as_ref().map(|d| d.coeffs().to_vec()),
            "sign": red.sign,
            "word_length": red.word_length,
        }))?,
        _ => match &red.dominant_weight {
            Some(d) => format!("{kind} {d} sign {} after {} reflections\n", red.sign, red.word_length),
            None => format!("{kind} after {} reflections\n", red.word_length),
        },
    };
    r.emit(text)?;
    Ok(0)
}

fn cmd_krdec(r: &Resolved, node: usize, k: usize, with_qdim: bool) -> Result<i32, CliError> {
    let rs = r.root_system()?;
    let dec = if has_chari_formula(rs.label(), node) {
        chari_decomposition(&rs, node, k)?
    } else if k == 1 {
        kleber_q1(&rs, node)?
    } else {
        return Err(qslab_core::Error::UnsupportedKr {
            label: rs.label().to_string(),
            node,
        }
        .into());
    };
    let value = if with_qdim {
        let ctx = LevelContext::new(&rs, r.level()?, r.precision())?;
        Some(qdim_kr(&dec, &ctx)?.value)
    } else {
        None
    };
    let text = match r.format {
        Format::Json => to_json(&json!({
            "type": rs.label().to_string(),
            "node": node,
            "k": k,
            "terms": dec.terms.iter().map(|(m, w)| json!({"multiplicity": m, "weight": w.coeffs()})).collect::<Vec<_>>(),
            "qdim": value.as_ref().map(decimal),
        }))?,
        _ => {
            let mut s = format!("W_{k}^({node}): {} terms\n", dec.terms.len());
            for (m, w) in &dec.terms {
                s.push_str(&format!("{m} x {w}\n"));
            }
            if let Some(v) = value {
                s.push_str(&format!("qdim {}\n", decimal(&v)));
            }
            s
        }
    };
    r.emit(text)?;
    Ok(0)
}

fn cmd_grid(r: &Resolved, kmax: Option<usize>) -> Result<i32, CliError> {
    let rs = r.root_system()?;
    let ctx = LevelContext::new(&rs, r.level()?, r.precision())?;
    let kmax = kmax.or(r.layer.k_max).unwrap_or(ctx.shifted_level() as usize);
    let grid = build_qgrid(&ctx, kmax)?;
    r.emit(render_grid(r, &grid, None)?)?;
    Ok(if grid.is_resolved() { 0 } else { 1 })
}

fn cmd_solve(r: &Resolved, tol: Option<f64>, max_sweeps: Option<usize>, damping: Option<f64>) -> Result<i32, CliError> {
    let rs = r.root_system()?;
    let ctx = LevelContext::new(&rs, r.level()?, r.precision())?;
    let mut s = SolveSettings::default();
    if let Some(t) = tol.or_else(|| r.layer.tolerances.iter().find(|(k, _)| k == "solver_tol").map(|p| p.1)) {
        s.tolerance = t;
    }
    if let Some(m) = max_sweeps {
        s.max_sweeps = m;
    }
    if let Some(d) = damping {
        s.damping = d;
    }
    let (grid, stats) = solve_restricted(&ctx, &s)?;
    let extra = json!({"sweeps": stats.sweeps, "final_damping": stats.final_damping});
    let mut text = render_grid(r, &grid, Some(extra))?;
    if r.format == Format::Text {
        text.push_str(&format!("{} sweeps, final damping {}\n", stats.sweeps, stats.final_damping));
    }
    r.emit(text)?;
    Ok(0)
}

fn cmd_verify(r: Resolved, checks: Option<String>, report: Option<PathBuf>, kmax: Option<usize>, fixtures: Option<PathBuf>, seed: Option<u64>) -> Result<i32, CliError> {
    let cli = Layer {
        checks: checks.as_deref().map(parse_checks).transpose()?,
        k_max: kmax,
        out: report,
        fixtures,
        seed,
        ..Layer::default()
    };
    let mut layer = cli.over(r.layer);
    if r.out.is_some() && layer.out.is_none() {
        layer.out = r.out.clone();
    }
    let explicit_format = layer.format;
    let mut cfg = RunConfig::from_layer(layer)?;
    if explicit_format.is_none() && cfg.out.is_none() {
        cfg.format = Format::Text;
    }
    let rep = run(&cfg)?;
    let text = match cfg.format {
        Format::Json => to_json(&rep.to_json())?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["group", "name", "node", "status", "proven", "max_violation", "threshold"])?;
            for c in &rep.checks {
                w.write_record([
                    c.group.as_str().to_string(),
                    c.name.clone(),
                    c.node.map(|n| n.to_string()).unwrap_or_default(),
                    c.status.as_str().to_string(),
                    c.proven.to_string(),
                    c.max_violation.as_ref().map(decimal).unwrap_or_default(),
                    c.threshold.as_ref().map(decimal).unwrap_or_default(),
                ])?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?).expect("utf-8")
        }
        Format::Text | Format::Fixture => rep.to_text(),
    };
    emit(cfg.out.as_deref(), &text)?;
    if cfg.out.is_some() {
        eprintln!("verdict {}", rep.verdict().as_str());
    }
    Ok(rep.exit_code())
}

fn cmd_logconcave(r: &Resolved, node: Option<usize>, seq: Option<String>, max_order: usize, strict: bool, branden: bool) -> Result<i32, CliError> {
    let prec = r.precision();
    let s = match (&seq, node) {
        (Some(text), _) => {
            let mut cc = MathConsts::new();
            let xs = text
                .split(',')
                .map(|t| Real::parse_decimal(t.trim(), prec, &mut cc).ok_or_else(|| CliError::Usage(format!("bad decimal `{t}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            RealSequence::new(xs)?
        }
        (None, Some(i)) => {
            let rs = r.root_system()?;
            let level = r.level()?;
            let ctx = LevelContext::new(&rs, level, prec)?;
            rs.check_node(i)?;
            qdim_sequence(&ctx, i, level as usize)?
        }
        (None, None) => return Err(CliError::Usage("give --node or --seq".into())),
    };
    let order = log_concavity_order(&s, max_order, strict);
    let lc = is_log_concave(&s, strict)?;
    let verdict = if branden { Some(branden_criterion(&s)?) } else { None };
    let text = match r.format {
        Format::Json => to_json(&json!({
            "length": s.len(),
            "strict": strict,
            "log_concave": lc,
            "order": order,
            "max_order": max_order,
            "branden": verdict.as_ref().map(|v| json!({
                "status": v.status.as_str(),
                "witness": v.witness.as_ref().map(|w| json!({
                    "re": decimal(&w.root.re),
                    "im": decimal(&w.root.im),
                    "radius": decimal(&w.radius),
                    "multiplicity": w.multiplicity,
                })),
            })),
        }))?,
        _ => {
            let mut out = format!(
                "length {}, {}log-concave: {lc}\norder {} (max {max_order})\n",
                s.len(),
                if strict { "strictly " } else { "" },
                order.map_or("none".to_string(), |o| o.to_string())
            );
            if let Some(v) = &verdict {
                out.push_str(&format!("branden {}", v.status.as_str()));
                if let Some(w) = &v.witness {
                    out.push_str(&format!(" witness {} + {}i", w.root.re.to_decimal(12), w.root.im.to_decimal(12)));
                }
                out.push('\n');
            }
            out
        }
    };
    r.emit(text)?;
    Ok(0)
}

fn resolve(global: &Global) -> Result<Resolved, CliError> {
    let file = match &global.config {
        Some(p) => Layer::from_file(p)?,
        None => Layer::default(),
    };
    let cli = Layer {
        type_label: global.type_label,
        level: global.level,
        precision_bits: global.precision_bits,
        format: global.format,
        out: global.out.clone(),
        ..Layer::default()
    };
    let layer = cli.over(Layer::from_env()?.over(file));
    let out = layer.out.clone();
    let format = layer
        .format
        .or_else(|| out.as_deref().and_then(Format::from_path))
        .unwrap_or(Format::Text);
    Ok(Resolved { layer, format, out })
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    let r = resolve(&cli.global)?;
    match cli.cmd {
        Cmd::Roots => cmd_roots(&r),
        Cmd::Qdim { weight, classical, digits } => cmd_qdim(&r, &weight, classical, digits),
        Cmd::Reduce { weight } => cmd_reduce(&r, &weight),
        Cmd::Krdec { node, k, qdim } => cmd_krdec(&r, node, k, qdim),
        Cmd::Grid { kmax } => cmd_grid(&r, kmax),
        Cmd::Solve { tol, max_sweeps, damping } => cmd_solve(&r, tol, max_sweeps, damping),
        Cmd::Verify { checks, report, kmax, fixtures, seed } => cmd_verify(r, checks, report, kmax, fixtures, seed),
        Cmd::Logconcave { node, seq, max_order, strict, branden } => cmd_logconcave(&r, node, seq, max_order, strict, branden),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
