use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

/// Errors raised by the algorithmic core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("root closure exceeded {bound} positive roots; not of finite type")]
    InfiniteType { bound: usize },
    #[error("unknown root system type `{0}`")]
    UnknownType(String),
    #[error("node {node} out of range for rank {rank}")]
    NodeOutOfRange { node: usize, rank: usize },
    #[error("root index {index} out of range ({count} positive roots)")]
    RootOutOfRange { index: usize, count: usize },
    #[error("weight has {got} coordinates, expected {expected}")]
    WeightRank { got: usize, expected: usize },
    #[error("weight is not dominant")]
    NotDominant,
    #[error("no root with pairing 1 against node {node} at height {height}")]
    NoWitness { node: usize, height: i64 },
    #[error("precision {0} bits is below the 64-bit minimum")]
    Precision(usize),
    #[error("level must be positive")]
    Level,
    #[error("alcove enumeration is limited to level {max}, got {level}")]
    AlcoveTooLarge { level: u32, max: u32 },
    #[error("no explicit KR decomposition for {label} node {node}")]
    UnsupportedKr { label: String, node: usize },
    #[error("grid construction needs 2 <= k_max <= 4l, got k_max={k_max} with l={l}")]
    GridRange { k_max: usize, l: i64 },
    #[error("grid construction is only defined for E6, E7 and E8")]
    GridType,
    #[error("solver did not converge after {sweeps} sweeps (residual {residual:e})")]
    NonConvergence { sweeps: usize, residual: f64 },
    #[error("invalid solver settings: {0}")]
    Settings(String),
    #[error("grid cell Q_{k}^({node}) is not strictly positive")]
    NonPositive { node: usize, k: usize },
    #[error("dilogarithm argument outside (0,1) at node {node}, k={k}")]
    DilogRange { node: usize, k: usize },
    #[error("zero polynomial has no roots")]
    ZeroPolynomial,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("grid has unresolved cells {0:?}")]
    Unresolved(Vec<(usize, usize)>),
}

pub type Result<T> = core::result::Result<T, Error>;
