//! Run configuration and its layered sources.
//!
//! Precedence, highest first: command-line flags, `QSLAB_PRECISION_BITS`,
//! a `key=value` config file, built-in defaults.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use qslab_core::qsolver::{ReportOptions, SolveSettings};
use qslab_core::TypeLabel;
use serde::Serialize;

use crate::CliError;

pub const PRECISION_ENV: &str = "QSLAB_PRECISION_BITS";
pub const DEFAULT_PRECISION_BITS: usize = 128;
pub const MIN_PRECISION_BITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
    /// Positive-root table in fixture layout, only meaningful for `roots`.
    Fixture,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        <Format as ValueEnum>::from_str(s.trim(), true).map_err(|_| CliError::Usage(format!("unknown format `{s}`")))
    }
}

impl Format {
    /// Guess from an output path's extension.
    pub fn from_path(path: &Path) -> Option<Format> {
        match path.extension()?.to_str()? {
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            "txt" => Some(Format::Text),
            _ => None,
        }
    }
}

/// Check groups of `verify`, in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Roots,
    Weyl,
    Grid,
    Solve,
    Theorem,
    Logconcave,
    Dilog,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::Roots,
        Check::Weyl,
        Check::Grid,
        Check::Solve,
        Check::Theorem,
        Check::Logconcave,
        Check::Dilog,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Check::Roots => "roots",
            Check::Weyl => "weyl",
            Check::Grid => "grid",
            Check::Solve => "solve",
            Check::Theorem => "theorem",
            Check::Logconcave => "logconcave",
            Check::Dilog => "dilog",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn parse_checks(s: &str) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part == "all" {
            out.extend(Check::ALL);
            continue;
        }
        let c = <Check as ValueEnum>::from_str(part, true).map_err(|_| CliError::Usage(format!("unknown check `{part}`")))?;
        out.push(c);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn parse_type(s: &str) -> Result<TypeLabel, CliError> {
    s.parse::<TypeLabel>().map_err(|e| CliError::Usage(e.to_string()))
}

/// One configuration source; unset fields defer to lower layers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Layer {
    pub type_label: Option<TypeLabel>,
    pub level: Option<u32>,
    pub precision_bits: Option<usize>,
    pub k_max: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub checks: Option<Vec<Check>>,
    pub fixtures: Option<PathBuf>,
    pub seed: Option<u64>,
    /// `(key, value)` overrides for report thresholds and solver settings.
    pub tolerances: Vec<(String, f64)>,
}

const TOLERANCE_KEYS: [&str; 11] = [
    "zero_tol",
    "symmetry_tol",
    "positivity_margin",
    "boundary_tol",
    "periodicity_tol",
    "increase_tol",
    "residual_tol",
    "agreement_tol",
    "dilog_margin",
    "solver_tol",
    "max_sweeps",
];

impl Layer {
    /// `self` wins over `lower`.
    pub fn over(self, lower: Layer) -> Layer {
        let mut tolerances = lower.tolerances;
        for (k, v) in self.tolerances {
            tolerances.retain(|(k2, _)| *k2 != k);
            tolerances.push((k, v));
        }
        Layer {
            type_label: self.type_label.or(lower.type_label),
            level: self.level.or(lower.level),
            precision_bits: self.precision_bits.or(lower.precision_bits),
            k_max: self.k_max.or(lower.k_max),
            format: self.format.or(lower.format),
            out: self.out.or(lower.out),
            checks: self.checks.or(lower.checks),
            fixtures: self.fixtures.or(lower.fixtures),
            seed: self.seed.or(lower.seed),
            tolerances,
        }
    }

    pub fn from_env_value(value: Option<&str>) -> Result<Layer, CliError> {
        let mut layer = Layer::default();
        if let Some(v) = value {
            layer.precision_bits = Some(
                v.trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("{PRECISION_ENV}: `{v}` is not an integer")))?,
            );
        }
        Ok(layer)
    }

    pub fn from_env() -> Result<Layer, CliError> {
        Layer::from_env_value(std::env::var(PRECISION_ENV).ok().as_deref())
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse_file_text(text: &str) -> Result<Layer, CliError> {
        let mut layer = Layer::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| CliError::Usage(format!("config line {}: {msg}", n + 1));
            let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            let (key, value) = (key.trim(), value.trim());
            let int = || value.parse::<u64>().map_err(|_| bad("expected an integer"));
            match key {
                "type" => layer.type_label = Some(parse_type(value)?),
                "level" => layer.level = Some(int()? as u32),
                "precision_bits" => layer.precision_bits = Some(int()? as usize),
                "k_max" => layer.k_max = Some(int()? as usize),
                "format" => layer.format = Some(value.parse()?),
                "out" => layer.out = Some(PathBuf::from(value)),
                "checks" => layer.checks = Some(parse_checks(value)?),
                "fixtures" => layer.fixtures = Some(PathBuf::from(value)),
                "seed" => layer.seed = Some(int()?),
                k if TOLERANCE_KEYS.contains(&k) => {
                    let v = value.parse::<f64>().map_err(|_| bad("expected a number"))?;
                    layer.tolerances.push((k.to_string(), v));
                }
                other => return Err(bad(&format!("unknown key `{other}`"))),
            }
        }
        Ok(layer)
    }

    pub fn from_file(path: &Path) -> Result<Layer, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Layer::parse_file_text(&text)
    }
}

/// A validated configuration for `verify`.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub type_label: TypeLabel,
    pub level: u32,
    pub precision_bits: usize,
    pub options: ReportOptions,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub checks: Vec<Check>,
    pub fixtures: PathBuf,
    pub seed: u64,
}

/// Fixture directory: `./fixtures` if present, else the one in the source tree.
pub fn default_fixtures_dir() -> PathBuf {
    let local = PathBuf::from("fixtures");
    if local.is_dir() {
        return local;
    }
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

impl RunConfig {
    pub fn new(type_label: TypeLabel, level: u32) -> RunConfig {
        RunConfig {
            type_label,
            level,
            precision_bits: DEFAULT_PRECISION_BITS,
            options: ReportOptions::default(),
            out: None,
            format: Format::Json,
            checks: Check::ALL.to_vec(),
            fixtures: default_fixtures_dir(),
            seed: 0,
        }
    }

    pub fn from_layer(layer: Layer) -> Result<RunConfig, CliError> {
        let type_label = layer.type_label.ok_or_else(|| CliError::Usage("--type is required".into()))?;
        let level = layer.level.ok_or_else(|| CliError::Usage("--level is required".into()))?;
        let mut cfg = RunConfig::new(type_label, level);
        if let Some(p) = layer.precision_bits {
            cfg.precision_bits = p;
        }
        cfg.options.k_max = layer.k_max;
        cfg.out = layer.out;
        cfg.format = layer.format.or_else(|| cfg.out.as_deref().and_then(Format::from_path)).unwrap_or(Format::Json);
        if let Some(c) = layer.checks {
            cfg.checks = c;
        }
        if let Some(f) = layer.fixtures {
            cfg.fixtures = f;
        }
        if let Some(s) = layer.seed {
            cfg.seed = s;
        }
        for (k, v) in &layer.tolerances {
            cfg.apply_tolerance(k, *v);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_tolerance(&mut self, key: &str, v: f64) {
        let o = &mut self.options;
        match key {
            "zero_tol" => o.zero_tol = v,
            "symmetry_tol" => o.symmetry_tol = v,
            "positivity_margin" => o.positivity_margin = v,
            "boundary_tol" => o.boundary_tol = v,
            "periodicity_tol" => o.periodicity_tol = v,
            "increase_tol" => o.increase_tol = v,
            "residual_tol" => o.residual_tol = v,
            "agreement_tol" => o.agreement_tol = v,
            "dilog_margin" => o.dilog_margin = v,
            "solver_tol" => o.solve.get_or_insert_with(SolveSettings::default).tolerance = v,
            "max_sweeps" => o.solve.get_or_insert_with(SolveSettings::default).max_sweeps = v as usize,
            _ => {}
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.level < 1 {
            return Err(CliError::Usage("level must be at least 1".into()));
        }
        if self.precision_bits < MIN_PRECISION_BITS {
            return Err(CliError::Usage(format!(
                "precision_bits must be at least {MIN_PRECISION_BITS}"
            )));
        }
        if self.checks.is_empty() {
            return Err(CliError::Usage("no checks selected".into()));
        }
        if matches!(self.type_label, TypeLabel::Custom) {
            return Err(CliError::Usage("verify needs an exceptional type".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let file = Layer::parse_file_text("type = E7\nlevel=3\nprecision_bits = 96 # comment\nzero_tol=1e-18\n").unwrap();
        let env = Layer::from_env_value(Some("160")).unwrap();
        let cli = Layer {
            level: Some(5),
            ..Layer::default()
        };
        let merged = cli.clone().over(env.clone().over(file.clone()));
        let cfg = RunConfig::from_layer(merged).unwrap();
        assert_eq!(cfg.type_label, TypeLabel::E7);
        assert_eq!(cfg.level, 5);
        assert_eq!(cfg.precision_bits, 160);
        assert_eq!(cfg.options.zero_tol, 1e-18);
        let cfg = RunConfig::from_layer(cli.over(file)).unwrap();
        assert_eq!(cfg.precision_bits, 96);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(Layer::parse_file_text("nonsense").is_err());
        assert!(Layer::parse_file_text("colour = red").is_err());
        assert!(Layer::parse_file_text("type = F4").is_err());
        assert!(Layer::from_env_value(Some("lots")).is_err());
        let low = Layer {
            type_label: Some(TypeLabel::E6),
            level: Some(2),
            precision_bits: Some(32),
            ..Layer::default()
        };
        assert!(RunConfig::from_layer(low).is_err());
        let none = Layer {
            type_label: Some(TypeLabel::E6),
            level: Some(2),
            checks: Some(Vec::new()),
            ..Layer::default()
        };
        assert!(RunConfig::from_layer(none).is_err());
    }

    #[test]
    fn check_lists() {
        assert_eq!(parse_checks("dilog, roots").unwrap(), vec![Check::Roots, Check::Dilog]);
        assert_eq!(parse_checks("all").unwrap().len(), 7);
        assert!(parse_checks("weyl,bogus").is_err());
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(Format::from_path(Path::new("r.json")), Some(Format::Json));
        assert_eq!(Format::from_path(Path::new("r.csv")), Some(Format::Csv));
        assert_eq!(Format::from_path(Path::new("r")), None);
    }
}
