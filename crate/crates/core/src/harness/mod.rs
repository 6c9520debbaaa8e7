//! Study orchestration: configuration, convergence and scaling studies,
//! slope fitting, and CSV/JSON emission.

pub mod convergence;
pub mod fit;
pub mod scaling;
pub mod simulate;

pub use convergence::{run_convergence_study, ConvergenceReport, ConvergenceRow, EnvelopeStatus};
pub use fit::{fit_order, FitResult};
pub use scaling::{run_scaling_study, ScalingReport};
pub use simulate::{run_simulate, SimulateOutcome};

use crate::error::{Error, Result};
use crate::flux::{ExactSolution, FluxModel};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

fn default_sigma() -> f64 {
    1.0
}
fn default_t_frac() -> f64 {
    0.5
}
fn default_cfl() -> f64 {
    0.2
}
fn default_time_samples() -> usize {
    21
}
fn default_envelope_samples() -> usize {
    50
}
fn default_true() -> bool {
    true
}

/// Configuration of a convergence/scaling/simulation study. Mirrors the JSON
/// config schema (snake_case keys); every CLI flag has a field here.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StudyConfig {
    /// "burgers" or "symmetric2".
    pub problem: String,
    /// Operator degree.
    pub p: usize,
    /// Mesh family, strictly increasing element counts.
    pub ne_list: Vec<usize>,
    /// Initial-profile amplitude.
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    /// Final time as a fraction of the breaking time, in (0, 1).
    #[serde(default = "default_t_frac")]
    pub t_frac: f64,
    /// Fixed time step; when absent the step is chosen from `cfl`.
    #[serde(default)]
    pub dt: Option<f64>,
    /// CFL number for the automatic step size.
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    /// Time samples for the coefficient suprema.
    #[serde(default = "default_time_samples")]
    pub time_samples: usize,
    /// Error-sample count for the envelope comparison.
    #[serde(default = "default_envelope_samples")]
    pub envelope_samples: usize,
    /// Rerun the finest mesh at half the step to confirm spatial dominance.
    #[serde(default = "default_true")]
    pub dt_guard: bool,
    /// Nodal snapshot count for `simulate` trajectory export.
    #[serde(default)]
    pub snapshots: Option<usize>,
    /// Output directory for report.csv / summary.json.
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

impl StudyConfig {
    pub fn model(&self) -> Result<FluxModel> {
        FluxModel::by_name(&self.problem)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown problem '{}'", self.problem)))
    }

    pub fn exact_solution(&self) -> Result<ExactSolution> {
        Ok(match self.model()? {
            FluxModel::Burgers => ExactSolution::burgers_sine(self.sigma, 1),
            FluxModel::Symmetric2 => ExactSolution::symmetric2_trig(self.sigma, 1),
        })
    }

    pub fn validate(&self, min_meshes: usize) -> Result<()> {
        self.model()?;
        if self.p < 1 || self.p > crate::sbp::MAX_DEGREE {
            return Err(Error::InvalidConfig(format!("degree p={} out of range", self.p)));
        }
        if self.ne_list.len() < min_meshes {
            return Err(Error::InsufficientData { needed: min_meshes, got: self.ne_list.len() });
        }
        if !self.ne_list.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidConfig("ne_list must be strictly increasing".into()));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::InvalidConfig(format!("sigma={} must be positive", self.sigma)));
        }
        if !(self.t_frac > 0.0 && self.t_frac < 1.0) {
            return Err(Error::InvalidConfig(format!("t_frac={} must lie in (0,1)", self.t_frac)));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) {
                return Err(Error::InvalidConfig(format!("dt={dt} must be positive")));
            }
        }
        if !(self.cfl > 0.0) {
            return Err(Error::InvalidConfig(format!("cfl={} must be positive", self.cfl)));
        }
        if self.time_samples < 2 || self.envelope_samples < 1 {
            return Err(Error::InvalidConfig("sample counts too small".into()));
        }
        Ok(())
    }

    pub fn from_json_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Deterministic float formatting for the CSV emitters (shortest
/// round-trippable form).
pub(crate) fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}
