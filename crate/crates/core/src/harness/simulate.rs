//! Single-mesh simulation with trajectory export.

use crate::disc::{h_norm, rk4_integrate, sample_exact, stable_dt, StateVector};
use crate::error::{Error, Result};
use crate::harness::{fmt_f64, StudyConfig};
use serde::Serialize;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
pub struct SimulateOutcome {
    pub n_e: usize,
    pub p: usize,
    pub t_final: f64,
    pub dt: f64,
    pub steps: usize,
    pub initial_energy: f64,
    pub final_energy: f64,
    pub relative_energy_drift: f64,
    /// `||e(T)||_H` against the exact solution.
    pub final_error_h: f64,
    /// Trajectory record (t, energy) at every accepted step.
    #[serde(skip)]
    pub energy_history: Vec<(f64, f64)>,
    /// Nodal snapshots (time, coordinates, state), when requested.
    #[serde(skip)]
    pub snapshots: Vec<(f64, Vec<f64>, StateVector)>,
}

/// Integrate the configured problem on the first mesh of `ne_list` and
/// report energies and the final error norm.
pub fn run_simulate(config: &StudyConfig) -> Result<SimulateOutcome> {
    config.validate(1)?;
    let model = config.model()?;
    let exact = config.exact_solution()?;
    let n_e = config.ne_list[0];
    let reference = crate::sbp::ReferenceElement::new(config.p)?;
    let mesh = crate::sbp::PeriodicMesh::new(0.0, 1.0, n_e, reference.n_nodes())?;
    let gop = crate::sbp::assemble_global(&mesh, &reference)?;
    let t_final = config.t_frac * exact.breaking_time();
    let u0 = sample_exact(&gop, &exact, 0.0)?;
    let dt = config.dt.unwrap_or_else(|| stable_dt(&gop, model, &u0, config.cfl));

    let n_snapshots = config.snapshots.unwrap_or(0);
    let sample_times: Vec<f64> = if n_snapshots > 0 {
        (1..=n_snapshots)
            .map(|i| {
                if i == n_snapshots {
                    t_final
                } else {
                    t_final * i as f64 / n_snapshots as f64
                }
            })
            .collect()
    } else {
        vec![t_final]
    };
    let traj = rk4_integrate(&gop, model, &u0, t_final, dt, &sample_times)?;

    let reference_state = sample_exact(&gop, &exact, t_final)?;
    let final_error_h = h_norm(&gop, &reference_state.sub(traj.final_state())?);
    let coords = gop.node_coordinates();
    let snapshots = if n_snapshots > 0 {
        traj.sample_times
            .iter()
            .zip(&traj.states)
            .map(|(t, s)| (*t, coords.clone(), s.clone()))
            .collect()
    } else {
        Vec::new()
    };
    let outcome = SimulateOutcome {
        n_e,
        p: config.p,
        t_final,
        dt,
        steps: traj.energy_times.len() - 1,
        initial_energy: traj.energies[0],
        final_energy: *traj.energies.last().expect("nonempty energy record"),
        relative_energy_drift: traj.relative_energy_drift(),
        final_error_h,
        energy_history: traj.energy_times.iter().cloned().zip(traj.energies.iter().cloned()).collect(),
        snapshots,
    };
    if let Some(dir) = &config.out_dir {
        outcome.emit(dir)?;
    }
    Ok(outcome)
}

impl SimulateOutcome {
    fn snapshot_name(index: usize) -> String {
        format!("snapshot_{index:03}.csv")
    }

    /// Trajectory CSV (t, energy, snapshot); the third column names the
    /// snapshot file written at that step, empty elsewhere.
    pub fn trajectory_csv(&self) -> String {
        let mut out = String::from("t,energy,snapshot\n");
        for (t, e) in &self.energy_history {
            let name = self
                .snapshots
                .iter()
                .position(|(ts, _, _)| ts == t)
                .map(Self::snapshot_name)
                .unwrap_or_default();
            out.push_str(&format!("{},{},{}\n", fmt_f64(*t), fmt_f64(*e), name));
        }
        out
    }

    pub fn emit(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut csv = std::fs::File::create(dir.join("trajectory.csv"))?;
        csv.write_all(self.trajectory_csv().as_bytes())?;
        for (index, (_, coords, state)) in self.snapshots.iter().enumerate() {
            let mut snap = String::from("x");
            for c in 0..state.n_components() {
                snap.push_str(&format!(",u{c}"));
            }
            snap.push('\n');
            for (g, x) in coords.iter().enumerate() {
                snap.push_str(&fmt_f64(*x));
                for c in 0..state.n_components() {
                    snap.push_str(&format!(",{}", fmt_f64(state.get(g, c))));
                }
                snap.push('\n');
            }
            std::fs::write(dir.join(Self::snapshot_name(index)), snap)?;
        }
        let mut json = std::fs::File::create(dir.join("summary.json"))?;
        json.write_all(serde_json::to_string_pretty(self)?.as_bytes())?;
        json.write_all(b"\n")?;
        Ok(())
    }
}

/// Relative energy drift for an explicit time step, used by the Richardson
/// check on the RK4 drift.
pub fn drift_for_dt(config: &StudyConfig, dt: f64) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(Error::InvalidConfig(format!("dt={dt} must be positive")));
    }
    let mut cfg = config.clone();
    cfg.dt = Some(dt);
    Ok(run_simulate(&cfg)?.relative_energy_drift)
}
