//! Command-line interface: operator checks and dumps, simulations,
//! convergence/scaling studies, and Riccati envelope queries.
//!
//! Exit code 0 iff all checks enabled by the subcommand pass.

use clap::{Args, Parser, Subcommand};
use csbp::harness::{self, StudyConfig};
use csbp::riccati;
use csbp::sbp;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "csbp", version, about = "Entropy-stable split-form C-SBP discretizations with Riccati error envelopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reference and global SBP operator utilities.
    Operators {
        #[command(subcommand)]
        action: OperatorsCommand,
    },
    /// Integrate one mesh and export the energy trajectory.
    Simulate(StudyArgs),
    /// Mesh-refinement convergence study with envelope comparison.
    Converge(StudyArgs),
    /// Coefficient and operator mesh-scaling study.
    Scaling(StudyArgs),
    /// Constant-coefficient Riccati envelope queries.
    Riccati {
        #[command(subcommand)]
        action: RiccatiCommand,
    },
}

#[derive(Subcommand)]
enum OperatorsCommand {
    /// Verify the SBP identities for a range of degrees and mesh sizes.
    Check {
        /// Largest degree to verify.
        #[arg(long, default_value_t = 4)]
        p_max: usize,
        /// Element counts for the global skew-symmetry check.
        #[arg(long, value_delimiter = ',', default_values_t = vec![2usize, 4, 8, 16, 32, 64, 128])]
        ne: Vec<usize>,
    },
    /// Dump reference operators as JSON (row-major dense matrices).
    Dump {
        #[arg(long)]
        p: usize,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RiccatiCommand {
    /// Evaluate the closed-form solution y(t).
    Solve {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        t: f64,
    },
    /// Report the blow-up time t*.
    Blowup {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        c: f64,
    },
}

/// Study parameters; either a JSON config file or inline flags.
#[derive(Args)]
struct StudyArgs {
    /// JSON config file (schema: StudyConfig snake_case fields).
    #[arg(long, conflicts_with_all = ["problem", "ne_list"])]
    config: Option<PathBuf>,
    #[arg(long, default_value = "burgers")]
    problem: String,
    #[arg(long, default_value_t = 3)]
    p: usize,
    /// Comma-separated element counts.
    #[arg(long = "ne-list", value_delimiter = ',', default_values_t = vec![16usize, 32, 64])]
    ne_list: Vec<usize>,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Final time as a fraction of the breaking time.
    #[arg(long, default_value_t = 0.5)]
    t_frac: f64,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long, default_value_t = 0.2)]
    cfl: f64,
    #[arg(long, default_value_t = 21)]
    time_samples: usize,
    #[arg(long, default_value_t = 50)]
    envelope_samples: usize,
    /// Skip the dt-halving spatial-dominance guard.
    #[arg(long)]
    no_dt_guard: bool,
    /// Nodal snapshot count for `simulate`.
    #[arg(long)]
    snapshots: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

impl StudyArgs {
    fn into_config(self) -> csbp::Result<StudyConfig> {
        if let Some(path) = &self.config {
            let mut cfg = StudyConfig::from_json_file(path)?;
            if cfg.out_dir.is_none() {
                cfg.out_dir = self.out_dir;
            }
            return Ok(cfg);
        }
        Ok(StudyConfig {
            problem: self.problem,
            p: self.p,
            ne_list: self.ne_list,
            sigma: self.sigma,
            t_frac: self.t_frac,
            dt: self.dt,
            cfl: self.cfl,
            time_samples: self.time_samples,
            envelope_samples: self.envelope_samples,
            dt_guard: !self.no_dt_guard,
            snapshots: self.snapshots,
            out_dir: self.out_dir,
        })
    }
}

fn operators_check(p_max: usize, ne: &[usize]) -> csbp::Result<bool> {
    let mut all_ok = true;
    for p in 1..=p_max {
        let r = sbp::ReferenceElement::new(p)?;
        let qmax = (0..r.n_nodes())
            .flat_map(|i| (0..r.n_nodes()).map(move |j| (i, j)))
            .fold(0.0f64, |m, (i, j)| m.max(r.q()[(i, j)].abs()));
        let sbp_ok = r.sbp_residual() <= 1e-13 * qmax;
        let mut skew_ok = true;
        let mut hsum_ok = true;
        for &n_e in ne {
            let mesh = sbp::PeriodicMesh::new(0.0, 1.0, n_e, r.n_nodes())?;
            let gop = sbp::assemble_global(&mesh, &r)?;
            skew_ok &= gop.q().skew_residual() <= 1e-13 * gop.q().max_abs();
            hsum_ok &= (gop.h_sum() - 1.0).abs() <= 1e-12;
        }
        let ok = sbp_ok && skew_ok && hsum_ok;
        all_ok &= ok;
        println!(
            "p={p}: sbp_identity={} global_skew={} h_sum={} -> {}",
            if sbp_ok { "ok" } else { "FAIL" },
            if skew_ok { "ok" } else { "FAIL" },
            if hsum_ok { "ok" } else { "FAIL" },
            if ok { "PASS" } else { "FAIL" },
        );
    }
    Ok(all_ok)
}

fn operators_dump(p: usize, out: Option<&PathBuf>) -> csbp::Result<()> {
    let r = sbp::ReferenceElement::new(p)?;
    let n = r.n_nodes();
    let row_major = |m: &nalgebra::DMatrix<f64>| -> Vec<f64> {
        (0..n).flat_map(|i| (0..n).map(move |j| m[(i, j)])).collect()
    };
    let doc = serde_json::json!({
        "p": p,
        "n_nodes": n,
        "nodes": r.nodes(),
        "h": r.h_diag(),
        "q_row_major": row_major(r.q()),
        "d_row_major": row_major(r.d()),
        "e": r.e_diag(),
    });
    let text = serde_json::to_string_pretty(&doc)?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn riccati_solve(a: f64, b: f64, c: f64, t: f64) -> csbp::Result<()> {
    let case = riccati::classify(a, b, c)?;
    let y = riccati::evaluate(a, b, c, t)?;
    println!("{}", serde_json::json!({ "case": case, "y": y }));
    Ok(())
}

fn riccati_blowup(a: f64, b: f64, c: f64) -> csbp::Result<()> {
    let case = riccati::classify(a, b, c)?;
    let t_star = riccati::blow_up_time(a, b, c)?;
    let value = match t_star {
        riccati::BlowUpTime::Finite(t) => serde_json::json!(t),
        riccati::BlowUpTime::Infinite => serde_json::json!("infinite"),
    };
    println!("{}", serde_json::json!({ "case": case, "t_star": value }));
    Ok(())
}

fn converge(config: &StudyConfig) -> csbp::Result<bool> {
    let report = harness::run_convergence_study(config)?;
    println!("{:<8} {:>6} {:>13} {:>13} {:>13} {:>13} {:>14}", "n_e", "h", "e_H", "tau_inf", "t_star", "envelope", "order");
    for row in &report.rows {
        let t_star = row.t_star.map(|t| format!("{t:.6e}")).unwrap_or_else(|| "inf".into());
        let env = match row.envelope {
            harness::EnvelopeStatus::Pass => "pass",
            harness::EnvelopeStatus::Fail => "FAIL",
            harness::EnvelopeStatus::NotApplicable => match row.common_interval_pass {
                Some(true) => "n/a (common ok)",
                Some(false) => "n/a (common FAIL)",
                None => "n/a",
            },
        };
        println!(
            "{:<8} {:>6.4} {:>13.6e} {:>13.6e} {:>13} {:>16}",
            row.n_e, row.h, row.e_h, row.tau_inf, t_star, env
        );
    }
    if let Some(fit) = &report.fitted_order {
        println!("fitted order: {:.3} (+/- {:.3})", fit.slope, fit.half_width);
    }
    if let Some(fit) = &report.tau_order {
        println!("truncation order: {:.3} (+/- {:.3})", fit.slope, fit.half_width);
    }
    if let Some(guard) = &report.dt_guard {
        println!(
            "dt guard: e_H changed {:.3e} under dt halving -> {}",
            guard.relative_change,
            if guard.pass { "spatial error dominates" } else { "TEMPORAL CONTAMINATION" }
        );
    }
    println!("errors strictly decreasing: {}", report.errors_strictly_decreasing);
    println!("t* nondecreasing under refinement: {}", report.t_star_nondecreasing);
    println!("all checks pass: {}", report.all_checks_pass);
    Ok(report.all_checks_pass)
}

fn scaling(config: &StudyConfig) -> csbp::Result<bool> {
    let report = harness::run_scaling_study(config)?;
    let s = &report.slopes;
    println!("slope(a)       = {:+.3}  (expect -1.5 +/- 0.2)", s.a.slope);
    println!("slope(b_local) = {:+.3}  (expect  0.0 +/- 0.2)", s.b_local.slope);
    println!("slope(c)       = {:+.3}  (expect  p within [-0.3, +0.7])", s.c.slope);
    println!("slope(ac)      = {:+.3}  (expect  p-1.5 within [-0.5, +0.7])", s.ac.slope);
    println!("slope(|A*|)    = {:+.3}  (expect  1.0 +/- 0.1)", s.a_star.slope);
    println!("slope(||H_k||) = {:+.3}  (expect  1.0 +/- 0.05)", s.h_elem.slope);
    println!("slope(||Q_k||) = {:+.3}  (expect  0.0 +/- 0.05)", s.q_elem.slope);
    println!("slope(||D_k||) = {:+.3}  (expect -1.0 +/- 0.05)", s.d_elem.slope);
    println!("t* nondecreasing under refinement: {}", report.t_star_nondecreasing);
    println!("all checks pass: {}", report.all_checks_pass);
    Ok(report.all_checks_pass)
}

fn simulate(config: &StudyConfig) -> csbp::Result<bool> {
    let outcome = harness::run_simulate(config)?;
    println!(
        "n_e={} p={} T={:.6e} dt={:.3e} steps={}",
        outcome.n_e, outcome.p, outcome.t_final, outcome.dt, outcome.steps
    );
    println!(
        "energy: initial={:.12e} final={:.12e} relative drift={:.3e}",
        outcome.initial_energy, outcome.final_energy, outcome.relative_energy_drift
    );
    println!("final error ||e(T)||_H = {:.6e}", outcome.final_error_h);
    Ok(true)
}

fn run() -> csbp::Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Operators { action } => match action {
            OperatorsCommand::Check { p_max, ne } => operators_check(p_max, &ne),
            OperatorsCommand::Dump { p, out } => operators_dump(p, out.as_ref()).map(|()| true),
        },
        Command::Simulate(args) => {
            let config = args.into_config()?;
            simulate(&config)
        }
        Command::Converge(args) => {
            let config = args.into_config()?;
            converge(&config)
        }
        Command::Scaling(args) => {
            let config = args.into_config()?;
            scaling(&config)
        }
        Command::Riccati { action } => match action {
            RiccatiCommand::Solve { a, b, c, t } => riccati_solve(a, b, c, t).map(|()| true),
            RiccatiCommand::Blowup { a, b, c } => riccati_blowup(a, b, c).map(|()| true),
        },
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
