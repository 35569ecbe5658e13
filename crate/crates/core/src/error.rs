use thiserror::Error;

/// Errors produced by parameter validation and the kinematic solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar input lies outside its admissible interval.
    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    /// A sample or grid count is too small.
    #[error("{name} = {value}, must be at least {min}")]
    BadCount {
        name: &'static str,
        value: usize,
        min: usize,
    },

    /// A type invariant failed at construction.
    #[error("invalid {name}: {reason}")]
    InvalidParams { name: &'static str, reason: String },

    /// The linkage closure condition m + b = n + a does not hold.
    #[error("closure condition violated: m + b = {lhs} but n + a = {rhs}")]
    ClosureViolation { lhs: f64, rhs: f64 },

    /// The sliders demand a pose the swing arms cannot reach.
    #[error("unreachable configuration: arcsin argument {value} lies outside [-1, 1]")]
    Unreachable { value: f64 },

    /// An operation restricted to symmetric mechanisms received asymmetric parameters.
    #[error("requires a symmetric mechanism: {detail}")]
    Asymmetric { detail: String },

    /// The swing-angle rate is unbounded at the requested instant.
    #[error("singular derivative: arcsin argument magnitude reaches 1 (value {value})")]
    SingularDerivative { value: f64 },

    /// No mechanism dimensions satisfy the requested motion limits.
    #[error("infeasible design: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
