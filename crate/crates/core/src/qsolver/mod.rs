//! Q-systems: the KR grid, the level-restricted solver, the per-node
//! property report and the dilogarithm diagnostics.
//!
//! The Q-system at a simply-laced node `i` reads
//! `(Q_k^{(i)})² = Q_{k-1}^{(i)} Q_{k+1}^{(i)} + Π_{j∼i} Q_k^{(j)}`.

mod dilog;
mod grid;
mod report;
mod solve;

pub use dilog::{dilog_args, dilog_sum, rogers_dilog, DilogArgs};
pub use grid::{build_qgrid, direct_nodes, residual, Provenance, QGrid};
pub use report::{
    is_proven, periodicity_sign, theorem_report, CheckEntry, CheckStatus, DilogSummary, Property,
    ReportOptions, TheoremReport, Verdict,
};
pub use solve::{solve_restricted, SolveSettings, SolveStats};
