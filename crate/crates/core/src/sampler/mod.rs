//! Seeded configuration generators, Monte Carlo verification sweeps and a
//! simplex search for small normalized determinants.

pub mod minimize;
pub mod rng;
pub mod sample;
pub mod verify;

pub use minimize::{
    minimize_d, MinimizeOutcome, MinimizeSpec, Objective, SimplexCoefficients, StartPoint, TraceRow,
};
pub use rng::substream;
pub use sample::{sample, sample_one, Sample, SampleKind, SampleSpec};
pub use verify::{
    run_verification, Check, CheckResult, Extremes, Failure, RunReport, SampleOutcome, Tolerances,
    TrendRow, VerifyOptions,
};
