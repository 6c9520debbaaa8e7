//! Mesh-refinement convergence study with Riccati-envelope comparison.

use crate::bounds::{bound_constants, riccati_coefficients, uniform_samples, BoundConstants};
use crate::disc::{h_norm, rk4_integrate, sample_exact, stable_dt};
use crate::error::Result;
use crate::harness::{fit_order, fmt_f64, FitResult, StudyConfig};
use crate::riccati::{envelope_check, BlowUpTime};
use crate::sbp::{assemble_global, GlobalOperator, PeriodicMesh, ReferenceElement};
use serde::Serialize;
use std::io::Write;
use std::path::Path;

/// Envelope comparison outcome for one mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EnvelopeStatus {
    /// `t* > T` and the measured error stayed below the envelope everywhere.
    Pass,
    /// `t* > T` but a sample exceeded the envelope.
    Fail,
    /// `t* <= T` on this mesh; the envelope regime requires a finer mesh.
    NotApplicable,
}

/// Per-mesh study results.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub h: f64,
    pub n_e: usize,
    /// `||e(T)||_H`.
    pub e_h: f64,
    /// `sup_t ||tau_*||_inf`.
    pub tau_inf: f64,
    pub a: f64,
    /// Family-shared linear coefficient.
    pub b: f64,
    /// This mesh's own supremum for the linear coefficient.
    pub b_local: f64,
    pub c: f64,
    pub delta: f64,
    /// Finite blow-up time; `None` when the envelope exists globally.
    pub t_star: Option<f64>,
    pub envelope: EnvelopeStatus,
    /// Largest `y(t_i) - z_i` over the compared samples.
    pub max_margin: Option<f64>,
    /// Smallest margin (the binding one).
    pub min_margin: Option<f64>,
    /// Domination verified on the common existence interval when `t* <= T`.
    pub common_interval_pass: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DtGuard {
    pub dt: f64,
    pub e_h: f64,
    pub e_h_half_dt: f64,
    pub relative_change: f64,
    pub pass: bool,
}

/// Full convergence report; `all_checks_pass` is the CLI exit criterion.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub config: StudyConfig,
    pub t_final: f64,
    pub rows: Vec<ConvergenceRow>,
    pub bound_constants: Vec<BoundConstants>,
    pub coefficients: Vec<crate::bounds::RiccatiCoefficients>,
    pub fitted_order: Option<FitResult>,
    pub tau_order: Option<FitResult>,
    pub errors_strictly_decreasing: bool,
    pub t_star_nondecreasing: bool,
    pub dt_guard: Option<DtGuard>,
    pub all_checks_pass: bool,
}

fn build_operator(config: &StudyConfig, n_e: usize) -> Result<GlobalOperator> {
    let reference = ReferenceElement::new(config.p)?;
    let mesh = PeriodicMesh::new(0.0, 1.0, n_e, reference.n_nodes())?;
    assemble_global(&mesh, &reference)
}

/// Integrate one mesh and return the measured error series at the requested
/// sample times plus the final-time error norm.
fn measure_errors(
    config: &StudyConfig,
    gop: &GlobalOperator,
    t_final: f64,
    samples: &[f64],
    dt_override: Option<f64>,
) -> Result<(Vec<(f64, f64)>, f64)> {
    let model = config.model()?;
    let exact = config.exact_solution()?;
    let u0 = sample_exact(gop, &exact, 0.0)?;
    let dt = dt_override
        .or(config.dt)
        .unwrap_or_else(|| stable_dt(gop, model, &u0, config.cfl));
    let traj = rk4_integrate(gop, model, &u0, t_final, dt, samples)?;
    let mut series = Vec::with_capacity(traj.sample_times.len());
    for (t, state) in traj.sample_times.iter().zip(&traj.states) {
        let reference = sample_exact(gop, &exact, *t)?;
        series.push((*t, h_norm(gop, &reference.sub(state)?)));
    }
    let e_final = series
        .iter()
        .find(|(t, _)| *t == t_final)
        .map(|(_, z)| *z)
        .expect("integrator always lands on t_final");
    Ok((series, e_final))
}

/// Run the convergence study: operators, bound constants, and Riccati
/// coefficients per mesh, then time integration, measured error norms, and
/// envelope comparison; finally the fitted order and the dt-halving guard.
pub fn run_convergence_study(config: &StudyConfig) -> Result<ConvergenceReport> {
    config.validate(2)?;
    let model = config.model()?;
    let exact = config.exact_solution()?;
    let t_final = config.t_frac * exact.breaking_time();

    // coefficients first: the family-shared b needs every mesh's constants
    let mut gops = Vec::new();
    let mut constants: Vec<BoundConstants> = Vec::new();
    for &n_e in &config.ne_list {
        let gop = build_operator(config, n_e)?;
        constants.push(bound_constants(
            &gop,
            model,
            &exact,
            &uniform_samples(t_final, config.time_samples),
        )?);
        gops.push(gop);
    }
    let omega = gops[0].mesh().domain_length();
    let coeffs = riccati_coefficients(model, &constants, omega)?;

    let mut rows = Vec::new();
    for ((gop, bc), rc) in gops.iter().zip(&constants).zip(&coeffs) {
        let t_star = rc.blow_up_time()?;

        // 50 uniform samples in (0, T]; when the envelope dies before T, add
        // samples inside the common existence interval so domination is still
        // exercised there.
        let ns = config.envelope_samples;
        // the i = ns sample is pinned to t_final so rounding cannot push it
        // past the integration horizon
        let mut sample_times: Vec<f64> = (1..=ns)
            .map(|i| if i == ns { t_final } else { t_final * i as f64 / ns as f64 })
            .collect();
        let mut common_cap = None;
        if let BlowUpTime::Finite(ts) = t_star {
            if ts <= t_final {
                let cap = 0.85 * ts;
                common_cap = Some(cap);
                for i in 1..=12 {
                    sample_times.push(cap * i as f64 / 12.0);
                }
                sample_times.sort_by(f64::total_cmp);
                sample_times.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * t_final);
            }
        }

        let (series, e_final) = measure_errors(config, gop, t_final, &sample_times, None)?;

        let applicable = t_star.contains(t_final);
        let (envelope, max_margin, min_margin, common_pass) = if applicable {
            let report = envelope_check(&series, rc.a, rc.b, rc.c)?;
            let max_m = report.margins.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let min_m = report.margins.iter().cloned().fold(f64::INFINITY, f64::min);
            let status = if report.pass { EnvelopeStatus::Pass } else { EnvelopeStatus::Fail };
            (status, Some(max_m), Some(min_m), None)
        } else {
            let cap = common_cap.expect("finite t* below T sets the cap");
            let subset: Vec<(f64, f64)> =
                series.iter().cloned().filter(|(t, _)| *t <= cap).collect();
            let common = if subset.is_empty() {
                None
            } else {
                let report = envelope_check(&subset, rc.a, rc.b, rc.c)?;
                Some(report.pass)
            };
            (EnvelopeStatus::NotApplicable, None, None, common)
        };

        rows.push(ConvergenceRow {
            h: rc.h,
            n_e: rc.n_e,
            e_h: e_final,
            tau_inf: bc.tau_sup,
            a: rc.a,
            b: rc.b,
            b_local: rc.b_local,
            c: rc.c,
            delta: rc.delta,
            t_star: t_star.finite(),
            envelope,
            max_margin,
            min_margin,
            common_interval_pass: common_pass,
        });
    }

    let hs: Vec<f64> = rows.iter().map(|r| r.h).collect();
    let es: Vec<f64> = rows.iter().map(|r| r.e_h).collect();
    let taus: Vec<f64> = rows.iter().map(|r| r.tau_inf).collect();
    let fitted_order = if rows.len() >= 3 { Some(fit_order(&hs, &es)?) } else { None };
    let tau_order = if rows.len() >= 3 { Some(fit_order(&hs, &taus)?) } else { None };
    // h decreases along ne_list, so errors must decrease along the rows
    let errors_strictly_decreasing = es.windows(2).all(|w| w[1] < w[0]);
    let t_star_nondecreasing = rows
        .windows(2)
        .all(|w| w[0].t_star.unwrap_or(f64::INFINITY) <= w[1].t_star.unwrap_or(f64::INFINITY));

    let dt_guard = if config.dt_guard {
        let gop = gops.last().expect("at least one mesh");
        let exact0 = sample_exact(gop, &exact, 0.0)?;
        let dt = config
            .dt
            .unwrap_or_else(|| stable_dt(gop, model, &exact0, config.cfl));
        let (_, e_full) = measure_errors(config, gop, t_final, &[t_final], Some(dt))?;
        let (_, e_half) = measure_errors(config, gop, t_final, &[t_final], Some(0.5 * dt))?;
        let relative_change = (e_full - e_half).abs() / e_half;
        Some(DtGuard { dt, e_h: e_full, e_h_half_dt: e_half, relative_change, pass: relative_change < 0.01 })
    } else {
        None
    };

    let all_checks_pass = errors_strictly_decreasing
        && t_star_nondecreasing
        && rows.iter().all(|r| r.envelope != EnvelopeStatus::Fail)
        && rows.iter().all(|r| r.common_interval_pass != Some(false))
        && dt_guard.as_ref().map_or(true, |g| g.pass);

    let report = ConvergenceReport {
        config: config.clone(),
        t_final,
        rows,
        bound_constants: constants,
        coefficients: coeffs,
        fitted_order,
        tau_order,
        errors_strictly_decreasing,
        t_star_nondecreasing,
        dt_guard,
        all_checks_pass,
    };
    if let Some(dir) = &config.out_dir {
        report.emit(dir)?;
    }
    Ok(report)
}

impl ConvergenceReport {
    /// Frozen CSV schema: one row per mesh.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("h,n_e,e_H,tau_inf,a,b,c,Delta,t_star,envelope,max_margin\n");
        for r in &self.rows {
            let envelope = match r.envelope {
                EnvelopeStatus::Pass => "pass",
                EnvelopeStatus::Fail => "fail",
                EnvelopeStatus::NotApplicable => "not-applicable",
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                fmt_f64(r.h),
                r.n_e,
                fmt_f64(r.e_h),
                fmt_f64(r.tau_inf),
                fmt_f64(r.a),
                fmt_f64(r.b),
                fmt_f64(r.c),
                fmt_f64(r.delta),
                r.t_star.map(fmt_f64).unwrap_or_else(|| "inf".into()),
                envelope,
                r.max_margin.map(fmt_f64).unwrap_or_default(),
            ));
        }
        out
    }

    pub fn emit(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut csv = std::fs::File::create(dir.join("report.csv"))?;
        csv.write_all(self.to_csv().as_bytes())?;
        let table = crate::bounds::bounds_table_csv(&self.bound_constants, &self.coefficients);
        std::fs::write(dir.join("bounds.csv"), table)?;
        let mut json = std::fs::File::create(dir.join("summary.json"))?;
        json.write_all(serde_json::to_string_pretty(self)?.as_bytes())?;
        json.write_all(b"\n")?;
        Ok(())
    }
}
