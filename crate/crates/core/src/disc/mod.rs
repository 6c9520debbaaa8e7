//! Split-form semi-discretization, discrete energy, truncation error, and
//! classical RK4 time integration.
//!
//! The semi-discrete right-hand side is
//! `-alpha_1 D f(u_h) - alpha_2 A(u_h) D u_h`, which conserves the discrete
//! energy `u^T H u` exactly in the semi-discrete sense on periodic meshes.

use crate::error::{Error, Result};
use crate::flux::{ExactSolution, FluxModel, MAX_COMPONENTS};
use crate::sbp::GlobalOperator;

/// Global nodal state, stored component-fastest: entry `(g, c)` lives at
/// `g * n_c + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_nodes: usize,
    n_c: usize,
    data: Vec<f64>,
}

impl StateVector {
    pub fn zeros(n_nodes: usize, n_c: usize) -> Self {
        Self { n_nodes, n_c, data: vec![0.0; n_nodes * n_c] }
    }

    pub fn from_vec(n_nodes: usize, n_c: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n_nodes * n_c {
            return Err(Error::DimensionMismatch { expected: n_nodes * n_c, got: data.len() });
        }
        Ok(Self { n_nodes, n_c, data })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_components(&self) -> usize {
        self.n_c
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, g: usize, c: usize) -> f64 {
        self.data[g * self.n_c + c]
    }

    pub fn set(&mut self, g: usize, c: usize, v: f64) {
        self.data[g * self.n_c + c] = v;
    }

    pub fn node(&self, g: usize) -> &[f64] {
        &self.data[g * self.n_c..(g + 1) * self.n_c]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `self - other`, elementwise.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: other.len() });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self { n_nodes: self.n_nodes, n_c: self.n_c, data })
    }

    fn conforms(&self, gop: &GlobalOperator, model: FluxModel) -> Result<()> {
        if self.n_nodes != gop.n_nodes() {
            return Err(Error::DimensionMismatch { expected: gop.n_nodes(), got: self.n_nodes });
        }
        if self.n_c != model.n_components() {
            return Err(Error::DimensionMismatch {
                expected: model.n_components(),
                got: self.n_c,
            });
        }
        Ok(())
    }
}

/// Restrict an exact solution to the collocation nodes at time `t`.
pub fn sample_exact(gop: &GlobalOperator, exact: &ExactSolution, t: f64) -> Result<StateVector> {
    let n_c = exact.n_components();
    let coords = gop.node_coordinates();
    let mut state = StateVector::zeros(gop.n_nodes(), n_c);
    let mut buf = [0.0; MAX_COMPONENTS];
    for (g, &x) in coords.iter().enumerate() {
        exact.eval_into(x, t, &mut buf[..n_c])?;
        for c in 0..n_c {
            state.set(g, c, buf[c]);
        }
    }
    Ok(state)
}

/// Split-form right-hand side `-alpha_1 D f(u_h) - alpha_2 A(u_h) D u_h`.
pub fn split_rhs(gop: &GlobalOperator, model: FluxModel, u_h: &StateVector) -> Result<StateVector> {
    u_h.conforms(gop, model)?;
    let n_c = model.n_components();
    let n = gop.n_nodes();
    let alpha1 = model.alpha1();
    let alpha2 = model.alpha2();

    let mut f = vec![0.0; n * n_c];
    let mut buf = [0.0; MAX_COMPONENTS];
    for g in 0..n {
        model.flux(u_h.node(g), &mut buf[..n_c]);
        f[g * n_c..(g + 1) * n_c].copy_from_slice(&buf[..n_c]);
    }
    let mut df = vec![0.0; n * n_c];
    gop.apply_d(&f, n_c, &mut df);
    let mut du = vec![0.0; n * n_c];
    gop.apply_d(u_h.as_slice(), n_c, &mut du);

    let mut rhs = StateVector::zeros(n, n_c);
    let mut adu = [0.0; MAX_COMPONENTS];
    for g in 0..n {
        model.jacobian_apply(u_h.node(g), &du[g * n_c..(g + 1) * n_c], &mut adu[..n_c]);
        for c in 0..n_c {
            rhs.set(g, c, -alpha1 * df[g * n_c + c] - alpha2 * adu[c]);
        }
    }
    Ok(rhs)
}

/// Discrete energy `u^T H u` (block-diagonal `H` for systems).
pub fn discrete_energy(gop: &GlobalOperator, u: &StateVector) -> f64 {
    let n_c = u.n_components();
    let mut acc = 0.0;
    for g in 0..u.n_nodes() {
        let w = gop.h_diag()[g];
        for c in 0..n_c {
            let v = u.get(g, c);
            acc += w * v * v;
        }
    }
    acc
}

/// Norm induced by the assembled diagonal norm matrix, `sqrt(u^T H u)`.
pub fn h_norm(gop: &GlobalOperator, u: &StateVector) -> f64 {
    discrete_energy(gop, u).sqrt()
}

/// `H`-weighted inner product `a^T H b`.
pub fn h_inner(gop: &GlobalOperator, a: &StateVector, b: &StateVector) -> f64 {
    let n_c = a.n_components();
    let mut acc = 0.0;
    for g in 0..a.n_nodes() {
        let w = gop.h_diag()[g];
        for c in 0..n_c {
            acc += w * a.get(g, c) * b.get(g, c);
        }
    }
    acc
}

/// Element-sum squared 2-norm `sum_k ||v_k||_2^2`; interface nodes belong to
/// both neighbors and are counted twice, matching the norm the error bounds
/// are stated in.
pub fn elementsum_sq(gop: &GlobalOperator, v: &StateVector) -> f64 {
    let mesh = gop.mesh();
    let n_p = mesh.nodes_per_element();
    let n_c = v.n_components();
    let mut acc = 0.0;
    for k in 0..mesh.n_elements() {
        for j in 0..n_p {
            let g = mesh.global_index(k, j);
            for c in 0..n_c {
                let x = v.get(g, c);
                acc += x * x;
            }
        }
    }
    acc
}

/// Time history of a simulation: states at requested sample times plus the
/// discrete-energy record at every accepted step.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub sample_times: Vec<f64>,
    pub states: Vec<StateVector>,
    pub energy_times: Vec<f64>,
    pub energies: Vec<f64>,
}

impl Trajectory {
    pub fn final_state(&self) -> &StateVector {
        self.states.last().expect("trajectory contains the final state")
    }

    /// Relative drift of the discrete energy over the whole run.
    pub fn relative_energy_drift(&self) -> f64 {
        let e0 = self.energies[0];
        self.energies.iter().fold(0.0f64, |m, e| m.max((e - e0).abs())) / e0
    }
}

fn rk4_step(
    gop: &GlobalOperator,
    model: FluxModel,
    u: &StateVector,
    dt: f64,
) -> Result<StateVector> {
    let k1 = split_rhs(gop, model, u)?;
    let mut stage = u.clone();
    axpy(&mut stage, u, &k1, 0.5 * dt);
    let k2 = split_rhs(gop, model, &stage)?;
    axpy(&mut stage, u, &k2, 0.5 * dt);
    let k3 = split_rhs(gop, model, &stage)?;
    axpy(&mut stage, u, &k3, dt);
    let k4 = split_rhs(gop, model, &stage)?;
    let mut out = u.clone();
    let w = dt / 6.0;
    for i in 0..out.len() {
        out.as_mut_slice()[i] += w
            * (k1.as_slice()[i]
                + 2.0 * k2.as_slice()[i]
                + 2.0 * k3.as_slice()[i]
                + k4.as_slice()[i]);
    }
    Ok(out)
}

fn axpy(dst: &mut StateVector, base: &StateVector, dir: &StateVector, scale: f64) {
    for i in 0..dst.len() {
        dst.as_mut_slice()[i] = base.as_slice()[i] + scale * dir.as_slice()[i];
    }
}

/// Step size for which RK4 stays well inside its stability region:
/// `cfl * h / (||D_ref||_2 * max wave speed)`, so `dt ||A|| ||D||` is about
/// `2 cfl`, far from the imaginary-axis limit at the default `cfl = 0.2`.
pub fn stable_dt(gop: &GlobalOperator, model: FluxModel, u0: &StateVector, cfl: f64) -> f64 {
    let mut speed = 0.0f64;
    for g in 0..u0.n_nodes() {
        speed = speed.max(model.wave_speed(u0.node(g)));
    }
    let h = gop.mesh().spacing();
    cfl * h / (gop.d_ref_norm() * speed.max(1e-12))
}

/// Integrate the split-form semi-discretization with classical RK4.
///
/// Sample times must be strictly increasing within `(0, t_final]`; the
/// integrator lands on each exactly by shortening the last substep of the
/// segment (the same rule lands the final step exactly on `t_final`). The
/// state is scanned for NaN/Inf after every step; divergence reports the
/// offending step rather than clipping.
pub fn rk4_integrate(
    gop: &GlobalOperator,
    model: FluxModel,
    u0: &StateVector,
    t_final: f64,
    dt: f64,
    sample_times: &[f64],
) -> Result<Trajectory> {
    u0.conforms(gop, model)?;
    if !(dt > 0.0) || !(t_final > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "rk4 requires dt > 0 and t_final > 0 (got dt={dt}, t_final={t_final})"
        )));
    }
    let mut targets: Vec<f64> = sample_times.to_vec();
    if targets.last().map_or(true, |&t| t < t_final) {
        targets.push(t_final);
    }
    for pair in targets.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::InvalidConfig("sample times must be strictly increasing".into()));
        }
    }
    if targets[0] <= 0.0 || *targets.last().unwrap() > t_final {
        return Err(Error::InvalidConfig("sample times must lie in (0, t_final]".into()));
    }

    let mut u = u0.clone();
    let mut t = 0.0;
    let mut step = 0usize;
    let mut traj = Trajectory {
        sample_times: Vec::with_capacity(targets.len()),
        states: Vec::with_capacity(targets.len()),
        energy_times: vec![0.0],
        energies: vec![discrete_energy(gop, &u)],
    };
    for &target in &targets {
        while t < target {
            let step_dt = dt.min(target - t);
            u = rk4_step(gop, model, &u, step_dt)?;
            t += step_dt;
            step += 1;
            if !u.is_finite() {
                return Err(Error::Diverged { step, t });
            }
            traj.energy_times.push(t);
            traj.energies.push(discrete_energy(gop, &u));
        }
        traj.sample_times.push(target);
        traj.states.push(u.clone());
    }
    Ok(traj)
}

/// Exact-solution data restricted to the mesh at one time: nodal values,
/// analytic spatial derivative, analytic time derivative, and the truncation
/// error of the split-form discretization.
#[derive(Debug, Clone)]
pub struct ExactFrame {
    pub t: f64,
    pub u: StateVector,
    pub u_x: StateVector,
    pub du_dt: StateVector,
    pub tau: StateVector,
}

/// Build the exact-solution frame at time `t`; errors past the breaking time
/// propagate from the characteristic solver.
pub fn exact_frame(
    gop: &GlobalOperator,
    model: FluxModel,
    exact: &ExactSolution,
    t: f64,
) -> Result<ExactFrame> {
    let n_c = model.n_components();
    if exact.n_components() != n_c {
        return Err(Error::DimensionMismatch { expected: n_c, got: exact.n_components() });
    }
    let n = gop.n_nodes();
    let coords = gop.node_coordinates();
    let mut u = StateVector::zeros(n, n_c);
    let mut u_x = StateVector::zeros(n, n_c);
    let mut du_dt = StateVector::zeros(n, n_c);
    let mut buf = [0.0; MAX_COMPONENTS];
    for (g, &x) in coords.iter().enumerate() {
        exact.eval_into(x, t, &mut buf[..n_c])?;
        for c in 0..n_c {
            u.set(g, c, buf[c]);
        }
        exact.eval_x_into(x, t, &mut buf[..n_c])?;
        for c in 0..n_c {
            u_x.set(g, c, buf[c]);
        }
        exact.du_dt_into(x, t, &mut buf[..n_c])?;
        for c in 0..n_c {
            du_dt.set(g, c, buf[c]);
        }
    }

    // tau = du/dt + alpha_1 D f(u) + alpha_2 A(u) D u
    let mut f = vec![0.0; n * n_c];
    for g in 0..n {
        model.flux(u.node(g), &mut buf[..n_c]);
        f[g * n_c..(g + 1) * n_c].copy_from_slice(&buf[..n_c]);
    }
    let mut df = vec![0.0; n * n_c];
    gop.apply_d(&f, n_c, &mut df);
    let mut du = vec![0.0; n * n_c];
    gop.apply_d(u.as_slice(), n_c, &mut du);
    let mut tau = StateVector::zeros(n, n_c);
    let mut adu = [0.0; MAX_COMPONENTS];
    for g in 0..n {
        model.jacobian_apply(u.node(g), &du[g * n_c..(g + 1) * n_c], &mut adu[..n_c]);
        for c in 0..n_c {
            tau.set(
                g,
                c,
                du_dt.get(g, c) + model.alpha1() * df[g * n_c + c] + model.alpha2() * adu[c],
            );
        }
    }
    Ok(ExactFrame { t, u, u_x, du_dt, tau })
}

/// Truncation-error norms of the exact solution inserted into the scheme.
#[derive(Debug, Clone, Copy)]
pub struct TruncationNorms {
    /// `||tau||_H`
    pub h_norm: f64,
    /// `||tau_*||_inf`, the max-abs nodal entry
    pub max_norm: f64,
}

/// Truncation error `tau` at time `t` together with its norms; the relation
/// `||tau||_H <= sqrt(|Omega|) ||tau_*||_inf` holds by quadrature-weight
/// summation.
pub fn truncation_error(
    gop: &GlobalOperator,
    model: FluxModel,
    exact: &ExactSolution,
    t: f64,
) -> Result<(StateVector, TruncationNorms)> {
    let frame = exact_frame(gop, model, exact, t)?;
    let norms = truncation_norms(gop, &frame.tau);
    debug_assert!(
        norms.h_norm <= gop.mesh().domain_length().sqrt() * norms.max_norm * (1.0 + 1e-12)
    );
    Ok((frame.tau, norms))
}

pub fn truncation_norms(gop: &GlobalOperator, tau: &StateVector) -> TruncationNorms {
    let max_norm = tau.as_slice().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    TruncationNorms { h_norm: h_norm(gop, tau), max_norm }
}
