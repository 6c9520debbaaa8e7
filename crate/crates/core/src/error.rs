//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by operator construction, simulation, and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Reference operators are only constructed for degrees 1 through 6.
    #[error("unsupported operator degree p={0} (supported range: 1..=6)")]
    UnsupportedDegree(usize),
    /// Periodic assembly needs at least two elements; with a single element the
    /// shared-node bookkeeping degenerates (both endpoints map to one node).
    #[error("mesh too small: n_e={0} (periodic assembly requires n_e >= 2)")]
    MeshTooSmall(usize),
    /// Power iteration failed to converge; carries the last singular-value iterate.
    #[error("power iteration did not converge within {iterations} iterations (last iterate {last:.6e})")]
    IterationLimit { iterations: usize, last: f64 },
    /// A slope-fitting study was given too few mesh levels.
    #[error("insufficient data: got {got} mesh levels, need at least {needed}")]
    InsufficientData { needed: usize, got: usize },
    /// Homogeneity check with a zero scale factor.
    #[error("invalid scale factor eta=0 (homogeneity is defined for eta != 0)")]
    InvalidScale,
    /// Vector or matrix shapes do not conform.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// Exact characteristic solutions are only smooth before the breaking time.
    #[error("time t={t} is at or past the breaking time T_b={breaking_time}; the smooth solution does not exist")]
    PostBreaking { t: f64, breaking_time: f64 },
    /// NaN or Inf detected in the numerical state during time integration.
    #[error("simulation diverged at step {step} (t={t}): non-finite state detected")]
    Diverged { step: usize, t: f64 },
    /// Supremum sampling requires at least one time sample.
    #[error("empty time-sample set")]
    EmptySamples,
    /// Riccati coefficients must be nonnegative.
    #[error("invalid Riccati coefficient {name}={value} (coefficients must be nonnegative)")]
    InvalidCoefficient { name: &'static str, value: f64 },
    /// Closed-form Riccati evaluation requested at or beyond the blow-up time.
    #[error("time t={t} is outside the Riccati solution domain [0, t*), t*={t_star}")]
    BlowUpDomain { t: f64, t_star: f64 },
    /// The numeric Riccati oracle was pushed too close to the blow-up time.
    #[error("numeric oracle out of range at t={t}: step budget exhausted near blow-up")]
    OracleRange { t: f64 },
    /// Envelope comparison requested at sample times where the envelope has blown up.
    #[error("envelope not applicable: a sample time reaches t*={t_star} (a finer mesh is required)")]
    EnvelopeNotApplicable { t_star: f64 },
    /// Log-log fitting needs strictly positive values.
    #[error("nonpositive value {0} in log-log fit input")]
    NonPositiveValue(f64),
    /// Study configuration failed validation.
    #[error("invalid study configuration: {0}")]
    InvalidConfig(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
