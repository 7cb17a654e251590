use thiserror::Error;

/// Errors raised by the geometry, determinant and sampling routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },

    #[error("configuration needs at least {min} points, got {got}")]
    TooFewPoints { min: usize, got: usize },

    #[error("points {j} and {k} coincide (separation {separation:e})")]
    DegenerateConfiguration { j: usize, k: usize, separation: f64 },

    #[error("pair ({j}, {k}) has zero separation")]
    DegeneratePair { j: usize, k: usize },

    #[error("chart {chart} is singular for this pair")]
    SingularChart { chart: &'static str },

    #[error("index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("pair indices must differ (both {0})")]
    SamePoint(usize),

    #[error("determinant supports 2..=8 points, got {0}")]
    UnsupportedSize(usize),

    #[error("points are not in strictly convex position (vertex {vertex})")]
    NotConvex { vertex: usize },

    #[error("quadrilateral angle at vertex {vertex} is degenerate ({angle:e} rad)")]
    DegenerateQuad { vertex: usize, angle: f64 },

    #[error("scale factor must be positive, got {0}")]
    InvalidScale(f64),

    #[error("invalid motion: {0}")]
    InvalidMotion(String),

    #[error("rejection budget of {budget} tries exhausted for sample {index}")]
    SamplingBudget { index: u64, budget: usize },

    #[error("invalid sample spec: {0}")]
    InvalidSpec(String),

    #[error("minimizer start point is infeasible: {0}")]
    InfeasibleStart(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
