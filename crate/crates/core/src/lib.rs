//! Quantum dimensions of Kirillov-Reshetikhin modules at roots of unity and
//! the level-restricted Q-systems they solve, for the exceptional types
//! E6, E7 and E8.
//!
//! The crate is `no_std` (it needs `alloc`). Modules, bottom up:
//!
//! - [`rootsys`]: simply-laced root systems, weights and integer pairings.
//! - [`qnum`]: ζ-integers and ζ-dimensions at `ζ = exp(iπ/l)`.
//! - [`affweyl`]: level-`l` dot action of the affine Weyl group.
//! - [`krchar`]: explicit KR decompositions and their ζ-dimensions.
//! - [`qsolver`]: Q-grids from KR data, the restricted-system solver and the
//!   per-node property report.
//! - [`seqanalysis`]: log-concavity, the `L` operator and real-rootedness.

#![no_std]

extern crate alloc;

pub mod affweyl;
pub mod error;
pub mod krchar;
pub mod qnum;
pub mod qsolver;
pub mod real;
pub mod rootsys;
pub mod seqanalysis;

pub use error::{Error, Result};
pub use real::Real;
pub use rootsys::{RootSystem, TypeLabel, Weight};
