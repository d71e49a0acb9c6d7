use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subsystem index {p} out of range for {n} subsystems")]
    SubsystemOutOfRange { p: usize, n: usize },
    #[error("K = {k} outside the valid range [2, {n}]")]
    KOutOfRange { k: usize, n: usize },
    #[error("subsystem dimension {d} at position {m} is below 2")]
    DimensionTooSmall { m: usize, d: usize },
    #[error("composite dimension {total} exceeds the cap {cap}")]
    DimensionCapExceeded { total: usize, cap: usize },
    #[error("at least one subsystem is required")]
    NoSubsystems,
    #[error("keep set is empty")]
    EmptyKeepSet,
    #[error("transpose subsystem {p} not contained in the subset")]
    SubsystemNotInSubset { p: usize },
    #[error("transpose subset needs at least 2 subsystems, got {0}")]
    SubsetTooSmall(usize),
    #[error("state norm {norm} deviates from 1 beyond tolerance")]
    NotNormalized { norm: f64 },
    #[error("matrix not Hermitian: max |M - M^dag| element = {max_dev:e}")]
    NotHermitian { max_dev: f64 },
    #[error("trace {trace} deviates from 1 beyond tolerance")]
    TraceNotOne { trace: f64 },
    #[error("matrix not unitary: max |U^dag U - I| element = {max_dev:e}")]
    NotUnitary { max_dev: f64 },
    #[error("basis outcome {outcome} out of range for subsystem of dimension {d}")]
    OutcomeOutOfRange { outcome: usize, d: usize },
    #[error("empty matrix")]
    EmptyMatrix,
    #[error("two computation routes disagree: {route_a} vs {route_b}")]
    RouteMismatch { route_a: f64, route_b: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
