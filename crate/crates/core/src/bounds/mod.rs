//! Bound constants of the energy error equation, Riccati coefficients, and
//! per-term inequality verification on concrete states.
//!
//! All error norms in this module are the element-sum norms the estimates are
//! stated in: `||e||_2^2 = sum_k ||e_k||_2^2` counts interface nodes once per
//! adjacent element, and `w_min`, `w_max` are extreme *element* quadrature
//! weights.

use crate::disc::{elementsum_sq, exact_frame, h_inner, h_norm, ExactFrame, StateVector};
use crate::error::{Error, Result};
use crate::flux::{ExactSolution, FluxModel, MAX_COMPONENTS};
use crate::riccati;
use crate::sbp::GlobalOperator;

/// Entrywise supremum of the flux Jacobian differences,
/// `max_k max_{i,j in k} max_{rc} |[A(u_j) - A(u_i)]_{rc}|`.
pub fn flux_jacobian_difference_sup(
    gop: &GlobalOperator,
    model: FluxModel,
    u: &StateVector,
) -> f64 {
    let mesh = gop.mesh();
    let n_p = mesh.nodes_per_element();
    let n_c = model.n_components();
    let mut jac = [0.0; MAX_COMPONENTS * MAX_COMPONENTS];
    let mut sup = 0.0f64;
    for k in 0..mesh.n_elements() {
        // per Jacobian entry, the max pairwise difference is the value span
        for rc in 0..n_c * n_c {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for j in 0..n_p {
                let g = mesh.global_index(k, j);
                model.jacobian(u.node(g), &mut jac[..n_c * n_c]);
                lo = lo.min(jac[rc]);
                hi = hi.max(jac[rc]);
            }
            sup = sup.max(hi - lo);
        }
    }
    sup
}

/// Induced infinity norm (max absolute row sum) of the block Jacobian
/// difference matrix, maximized over elements. For scalar models each block
/// is 1x1 and the row sum runs over the element's nodes.
pub fn flux_jacobian_block_norm_sup(
    gop: &GlobalOperator,
    model: FluxModel,
    u: &StateVector,
) -> f64 {
    let mesh = gop.mesh();
    let n_p = mesh.nodes_per_element();
    let n_c = model.n_components();
    let mut jacs = vec![0.0; n_p * n_c * n_c];
    let mut sup = 0.0f64;
    for k in 0..mesh.n_elements() {
        for j in 0..n_p {
            let g = mesh.global_index(k, j);
            model.jacobian(u.node(g), &mut jacs[j * n_c * n_c..(j + 1) * n_c * n_c]);
        }
        for i in 0..n_p {
            for a in 0..n_c {
                let mut row_sum = 0.0;
                for j in 0..n_p {
                    for b in 0..n_c {
                        row_sum += (jacs[j * n_c * n_c + a * n_c + b]
                            - jacs[i * n_c * n_c + a * n_c + b])
                            .abs();
                    }
                }
                sup = sup.max(row_sum);
            }
        }
    }
    sup
}

/// The three bound constants of the energy error equation together with the
/// ingredients they were assembled from (suprema over the time samples).
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct BoundConstants {
    /// Hadamard (Term I) constant `c_F`.
    pub c_f: f64,
    /// Remainder (Term II) constant `c_R = (c_r / 2) ||Q_*||_2`.
    pub c_r: f64,
    /// Split-term (Term III) constant `c_S`.
    pub c_s: f64,
    /// `sup_t (alpha_1 c_F(t) + alpha_2 c_S(t))`, the kernel of the linear
    /// Riccati coefficient before division by `w_min`.
    pub b_kernel: f64,
    /// Entrywise Jacobian-difference supremum `|A*|_inf`.
    pub a_star_inf: f64,
    /// Block infinity-norm Jacobian-difference supremum (systems analysis).
    pub a_star_block_inf: f64,
    /// `||Q_*||_2 = max_k ||Q_k||_2`.
    pub q_star_norm: f64,
    /// Nodal supremum of the analytic spatial derivative.
    pub u_x_sup: f64,
    /// Supremum of the derivative truncation `|D u - u_x|`.
    pub tau_u_sup: f64,
    /// Supremum of the scheme truncation `||tau_*||_inf`.
    pub tau_sup: f64,
    /// Flux Hessian bound `c_r`.
    pub hessian_bound: f64,
    pub w_min: f64,
    pub w_max: f64,
    pub n_p: usize,
    pub n_c: usize,
    pub h: f64,
    pub n_e: usize,
    pub n_time_samples: usize,
}

struct InstantConstants {
    c_f: f64,
    c_s: f64,
    a_star_inf: f64,
    a_star_block_inf: f64,
    u_x_sup: f64,
    tau_u_sup: f64,
    tau_sup: f64,
}

/// `c_F` from the Jacobian-difference magnitudes: the scalar form uses the
/// entrywise supremum with `n_p^{3/2}/2`; the system form uses the block
/// infinity norm with `sqrt(n_p n_c)/2` and `||Q ox 1||_2 = n_c ||Q||_2`.
fn c_f_from(model: FluxModel, n_p: usize, q_norm: f64, entry: f64, block: f64) -> f64 {
    let n_c = model.n_components();
    if n_c == 1 {
        (n_p as f64).powf(1.5) / 2.0 * entry * q_norm
    } else {
        ((n_p * n_c) as f64).sqrt() / 2.0 * block * (n_c as f64 * q_norm)
    }
}

fn c_s_from(model: FluxModel, gop: &GlobalOperator, c_f: f64, u_x_sup: f64, tau_u_sup: f64) -> f64 {
    let n_pc = (gop.reference().n_nodes() * model.n_components()) as f64;
    c_f + model.hessian_bound() * gop.w_max().powf(1.5) / gop.w_min().sqrt()
        * n_pc.sqrt()
        * (u_x_sup + tau_u_sup)
}

fn instantaneous(gop: &GlobalOperator, model: FluxModel, frame: &ExactFrame) -> InstantConstants {
    let n_c = model.n_components();
    let entry = flux_jacobian_difference_sup(gop, model, &frame.u);
    let block = flux_jacobian_block_norm_sup(gop, model, &frame.u);
    let u_x_sup = frame.u_x.as_slice().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    // derivative truncation tau_u = D u - u_x
    let mut du = vec![0.0; frame.u.len()];
    gop.apply_d(frame.u.as_slice(), n_c, &mut du);
    let tau_u_sup = du
        .iter()
        .zip(frame.u_x.as_slice())
        .fold(0.0f64, |m, (d, ux)| m.max((d - ux).abs()));
    let tau_sup = frame.tau.as_slice().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let c_f = c_f_from(model, gop.reference().n_nodes(), gop.q_elem_norm(), entry, block);
    let c_s = c_s_from(model, gop, c_f, u_x_sup, tau_u_sup);
    InstantConstants {
        c_f,
        c_s,
        a_star_inf: entry,
        a_star_block_inf: block,
        u_x_sup,
        tau_u_sup,
        tau_sup,
    }
}

/// Assemble the bound constants, taking suprema of the time-dependent
/// ingredients over the given samples (errors past the breaking time
/// propagate from the exact solution).
pub fn bound_constants(
    gop: &GlobalOperator,
    model: FluxModel,
    exact: &ExactSolution,
    t_samples: &[f64],
) -> Result<BoundConstants> {
    if t_samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut out = BoundConstants {
        c_f: 0.0,
        c_r: 0.5 * model.hessian_bound() * gop.q_elem_norm(),
        c_s: 0.0,
        b_kernel: 0.0,
        a_star_inf: 0.0,
        a_star_block_inf: 0.0,
        q_star_norm: gop.q_elem_norm(),
        u_x_sup: 0.0,
        tau_u_sup: 0.0,
        tau_sup: 0.0,
        hessian_bound: model.hessian_bound(),
        w_min: gop.w_min(),
        w_max: gop.w_max(),
        n_p: gop.reference().n_nodes(),
        n_c: model.n_components(),
        h: gop.mesh().spacing(),
        n_e: gop.mesh().n_elements(),
        n_time_samples: t_samples.len(),
    };
    for &t in t_samples {
        let frame = exact_frame(gop, model, exact, t)?;
        let inst = instantaneous(gop, model, &frame);
        out.c_f = out.c_f.max(inst.c_f);
        out.c_s = out.c_s.max(inst.c_s);
        out.b_kernel = out
            .b_kernel
            .max(model.alpha1() * inst.c_f + model.alpha2() * inst.c_s);
        out.a_star_inf = out.a_star_inf.max(inst.a_star_inf);
        out.a_star_block_inf = out.a_star_block_inf.max(inst.a_star_block_inf);
        out.u_x_sup = out.u_x_sup.max(inst.u_x_sup);
        out.tau_u_sup = out.tau_u_sup.max(inst.tau_u_sup);
        out.tau_sup = out.tau_sup.max(inst.tau_sup);
    }
    Ok(out)
}

/// `count` uniform samples spanning `[0, t_end]`, endpoints included.
pub fn uniform_samples(t_end: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2);
    (0..count).map(|i| t_end * i as f64 / (count - 1) as f64).collect()
}

/// Riccati coefficients of one mesh of a refinement family. `b` is shared
/// across the family (supremum over the study meshes); `b_local` is this
/// mesh's own supremum and is the quantity whose mesh-independence the
/// scaling studies verify.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct RiccatiCoefficients {
    pub a: f64,
    pub b: f64,
    pub b_local: f64,
    pub c: f64,
    /// `b^2 - 4 a c` with the family-shared `b`.
    pub delta: f64,
    pub h: f64,
    pub n_e: usize,
}

impl RiccatiCoefficients {
    pub fn blow_up_time(&self) -> Result<riccati::BlowUpTime> {
        riccati::blow_up_time(self.a, self.b, self.c)
    }
}

/// Map per-mesh bound constants to Riccati coefficients:
/// `a = (alpha_1 + 2 alpha_2) c_R w_min^{-3/2}`,
/// `b = sup over the family of w_min^{-1}(alpha_1 c_F + alpha_2 c_S)`,
/// `c = sqrt(|Omega|) sup_t ||tau_*||_inf`.
pub fn riccati_coefficients(
    model: FluxModel,
    family: &[BoundConstants],
    omega: f64,
) -> Result<Vec<RiccatiCoefficients>> {
    if family.is_empty() {
        return Err(Error::EmptySamples);
    }
    let quad_weight = model.alpha1() + 2.0 * model.alpha2();
    let b_family = family
        .iter()
        .map(|bc| bc.b_kernel / bc.w_min)
        .fold(0.0f64, f64::max);
    Ok(family
        .iter()
        .map(|bc| {
            let a = quad_weight * bc.c_r * bc.w_min.powf(-1.5);
            let c = omega.sqrt() * bc.tau_sup;
            RiccatiCoefficients {
                a,
                b: b_family,
                b_local: bc.b_kernel / bc.w_min,
                c,
                delta: b_family * b_family - 4.0 * a * c,
                h: bc.h,
                n_e: bc.n_e,
            }
        })
        .collect())
}

/// Frozen-schema CSV of the bound constants and Riccati coefficients, one
/// row per mesh.
pub fn bounds_table_csv(family: &[BoundConstants], coeffs: &[RiccatiCoefficients]) -> String {
    let mut out = String::from("h,n_e,p,c_F,c_R,c_S,a,b,c,Delta\n");
    for (bc, rc) in family.iter().zip(coeffs) {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            bc.h,
            bc.n_e,
            bc.n_p - 1,
            bc.c_f,
            bc.c_r,
            bc.c_s,
            rc.a,
            rc.b,
            rc.c,
            rc.delta,
        ));
    }
    out
}

/// One side-by-side inequality evaluation.
#[derive(Debug, Clone, Copy)]
pub struct TermLine {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

fn term_line(lhs: f64, rhs: f64) -> TermLine {
    TermLine { lhs, rhs, pass: lhs <= rhs * (1.0 + 1e-12) }
}

/// Term I-IV inequalities and the Hadamard rewriting identity evaluated on a
/// concrete exact state and error vector.
#[derive(Debug, Clone, Copy)]
pub struct TermReport {
    pub term1: TermLine,
    pub term2: TermLine,
    pub term3: TermLine,
    pub term4: TermLine,
    /// Signed `e^T Q A(u) e` evaluated through the global operators.
    pub hadamard_global: f64,
    /// The same quantity through the per-element Hadamard form.
    pub hadamard_elementwise: f64,
    pub hadamard_pass: bool,
}

impl TermReport {
    pub fn all_pass(&self) -> bool {
        self.term1.pass && self.term2.pass && self.term3.pass && self.term4.pass && self.hadamard_pass
    }
}

/// Evaluate the four term inequalities for the state `frame.u` and error `e`
/// (so `u_h = u - e`), with all constants computed at the same instant.
pub fn term_inequality_report(
    gop: &GlobalOperator,
    model: FluxModel,
    frame: &ExactFrame,
    e: &StateVector,
) -> Result<TermReport> {
    let n_c = model.n_components();
    if e.len() != frame.u.len() {
        return Err(Error::DimensionMismatch { expected: frame.u.len(), got: e.len() });
    }
    let n = gop.n_nodes();
    let inst = instantaneous(gop, model, frame);
    let c_r = 0.5 * model.hessian_bound() * gop.q_elem_norm();
    let es2 = elementsum_sq(gop, e);
    let es3 = es2.powf(1.5);

    let u_h = frame.u.sub(e)?;

    // Term I: |e^T Q A(u) e|
    let mut ae = vec![0.0; n * n_c];
    let mut buf = [0.0; MAX_COMPONENTS];
    for g in 0..n {
        model.jacobian_apply(frame.u.node(g), e.node(g), &mut buf[..n_c]);
        ae[g * n_c..(g + 1) * n_c].copy_from_slice(&buf[..n_c]);
    }
    let mut qae = vec![0.0; n * n_c];
    gop.apply_q(&ae, n_c, &mut qae);
    let eqae: f64 = e.as_slice().iter().zip(&qae).map(|(a, b)| a * b).sum();
    let term1 = term_line(eqae.abs(), inst.c_f * es2);

    // Term II: |e^T Q R1(e)|
    let (r1, _) = crate::flux::taylor_remainder(model, frame.u.as_slice(), u_h.as_slice())?;
    let mut qr1 = vec![0.0; n * n_c];
    gop.apply_q(&r1, n_c, &mut qr1);
    let eqr1: f64 = e.as_slice().iter().zip(&qr1).map(|(a, b)| a * b).sum();
    let term2 = term_line(eqr1.abs(), c_r * es3);

    // Term III: |e^T A(u) Q u - e^T A(u_h) Q u_h|
    let mut qu = vec![0.0; n * n_c];
    gop.apply_q(frame.u.as_slice(), n_c, &mut qu);
    let mut quh = vec![0.0; n * n_c];
    gop.apply_q(u_h.as_slice(), n_c, &mut quh);
    let mut lhs3 = 0.0;
    for g in 0..n {
        model.jacobian_apply(frame.u.node(g), &qu[g * n_c..(g + 1) * n_c], &mut buf[..n_c]);
        for c in 0..n_c {
            lhs3 += e.get(g, c) * buf[c];
        }
        model.jacobian_apply(u_h.node(g), &quh[g * n_c..(g + 1) * n_c], &mut buf[..n_c]);
        for c in 0..n_c {
            lhs3 -= e.get(g, c) * buf[c];
        }
    }
    let term3 = term_line(lhs3.abs(), inst.c_s * es2 + 2.0 * c_r * es3);

    // Term IV: |e^T H tau| <= ||tau||_H ||e||_H
    let term4 = term_line(
        h_inner(gop, e, &frame.tau).abs(),
        h_norm(gop, &frame.tau) * h_norm(gop, e),
    );

    // Hadamard rewriting of Term I through the element views
    let mesh = gop.mesh();
    let n_p = mesh.nodes_per_element();
    let mut jacs = vec![0.0; n * n_c * n_c];
    for g in 0..n {
        model.jacobian(frame.u.node(g), &mut jacs[g * n_c * n_c..(g + 1) * n_c * n_c]);
    }
    let q_ref = gop.element_q();
    let mut elementwise = 0.0;
    let mut abs_scale = 0.0;
    for k in 0..mesh.n_elements() {
        for i in 0..n_p {
            let gi = mesh.global_index(k, i);
            for j in 0..n_p {
                let gj = mesh.global_index(k, j);
                let q = q_ref[(i, j)];
                if q == 0.0 {
                    continue;
                }
                let mut quad = 0.0;
                for a in 0..n_c {
                    for b in 0..n_c {
                        quad += e.get(gi, a)
                            * (jacs[gj * n_c * n_c + a * n_c + b] - jacs[gi * n_c * n_c + a * n_c + b])
                            * e.get(gj, b);
                    }
                }
                elementwise += 0.5 * q * quad;
                abs_scale += 0.5 * (q * quad).abs();
            }
        }
    }
    let hadamard_pass = (eqae - elementwise).abs() <= 1e-12 * (1.0 + eqae.abs() + abs_scale);

    Ok(TermReport {
        term1,
        term2,
        term3,
        term4,
        hadamard_global: eqae,
        hadamard_elementwise: elementwise,
        hadamard_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sbp::{assemble_global, PeriodicMesh, ReferenceElement};

    fn setup(
        model: FluxModel,
        p: usize,
        n_e: usize,
        sigma: f64,
    ) -> (GlobalOperator, ExactSolution) {
        let r = ReferenceElement::new(p).unwrap();
        let mesh = PeriodicMesh::new(0.0, 1.0, n_e, r.n_nodes()).unwrap();
        let gop = assemble_global(&mesh, &r).unwrap();
        let exact = match model {
            FluxModel::Burgers => ExactSolution::burgers_sine(sigma, 1),
            FluxModel::Symmetric2 => ExactSolution::symmetric2_trig(sigma, 1),
        };
        (gop, exact)
    }

    #[test]
    fn constant_state_has_zero_jacobian_spread() {
        let (gop, _) = setup(FluxModel::Burgers, 2, 8, 1.0);
        let mut u = StateVector::zeros(gop.n_nodes(), 1);
        u.as_mut_slice().fill(1.7);
        assert_eq!(flux_jacobian_difference_sup(&gop, FluxModel::Burgers, &u), 0.0);
        assert_eq!(flux_jacobian_block_norm_sup(&gop, FluxModel::Burgers, &u), 0.0);
    }

    #[test]
    fn linear_profile_spread_is_element_width() {
        // f' = u and u = x: the within-element span of f' is exactly h.
        let (gop, _) = setup(FluxModel::Burgers, 1, 8, 1.0);
        let coords = gop.node_coordinates();
        let mut u = StateVector::zeros(gop.n_nodes(), 1);
        for (g, &x) in coords.iter().enumerate() {
            u.set(g, 0, x);
        }
        let sup = flux_jacobian_difference_sup(&gop, FluxModel::Burgers, &u);
        let h = gop.mesh().spacing();
        // the seam element wraps around and sees the full domain span
        assert!((sup - (1.0 - h)).abs() < 1e-12 || (sup - h).abs() < 1e-12, "sup {sup}");
    }

    #[test]
    fn a_star_scales_linearly_with_h() {
        let exact = ExactSolution::burgers_sine(1.0, 1);
        let t = 0.3 * exact.breaking_time();
        let mut hs = Vec::new();
        let mut sups = Vec::new();
        for n_e in [16usize, 32, 64, 128] {
            let (gop, _) = setup(FluxModel::Burgers, 2, n_e, 1.0);
            let frame = exact_frame(&gop, FluxModel::Burgers, &exact, t).unwrap();
            hs.push(gop.mesh().spacing());
            sups.push(flux_jacobian_difference_sup(&gop, FluxModel::Burgers, &frame.u));
        }
        let fit = crate::harness::fit::fit_order(&hs, &sups).unwrap();
        assert!((fit.slope - 1.0).abs() <= 0.1, "slope {}", fit.slope);
    }

    #[test]
    fn burgers_c_r_is_half_q_norm() {
        let (gop, exact) = setup(FluxModel::Burgers, 2, 16, 1.0);
        let t_end = 0.5 * exact.breaking_time();
        let bc =
            bound_constants(&gop, FluxModel::Burgers, &exact, &uniform_samples(t_end, 5)).unwrap();
        assert!((bc.c_r - 0.5 * gop.q_elem_norm()).abs() < 1e-15);
    }

    #[test]
    fn supremum_sampling_is_converged() {
        let (gop, exact) = setup(FluxModel::Burgers, 2, 32, 1.0);
        let t_end = 0.5 * exact.breaking_time();
        let coarse =
            bound_constants(&gop, FluxModel::Burgers, &exact, &uniform_samples(t_end, 21)).unwrap();
        let fine =
            bound_constants(&gop, FluxModel::Burgers, &exact, &uniform_samples(t_end, 41)).unwrap();
        for (a, b) in [
            (coarse.c_f, fine.c_f),
            (coarse.c_r, fine.c_r),
            (coarse.c_s, fine.c_s),
            (coarse.tau_sup, fine.tau_sup),
        ] {
            assert!(a > 0.0 && a.is_finite());
            assert!((a - b).abs() <= 0.01 * b, "sup not converged: {a} vs {b}");
        }
    }

    #[test]
    fn linear_flux_standin_gives_zero_quadratic_coefficient() {
        let (gop, exact) = setup(FluxModel::Burgers, 2, 16, 1.0);
        let t_end = 0.5 * exact.breaking_time();
        let mut bc =
            bound_constants(&gop, FluxModel::Burgers, &exact, &uniform_samples(t_end, 5)).unwrap();
        bc.c_r = 0.0; // c_r = 0 as for a linear PDE
        let coeffs = riccati_coefficients(FluxModel::Burgers, &[bc], 1.0).unwrap();
        assert_eq!(coeffs[0].a, 0.0);
    }

    #[test]
    fn empty_samples_are_rejected() {
        let (gop, exact) = setup(FluxModel::Burgers, 2, 16, 1.0);
        assert!(matches!(
            bound_constants(&gop, FluxModel::Burgers, &exact, &[]),
            Err(Error::EmptySamples)
        ));
    }

    #[test]
    fn zero_error_vector_passes_all_terms() {
        let (gop, exact) = setup(FluxModel::Burgers, 2, 16, 1.0);
        let frame =
            exact_frame(&gop, FluxModel::Burgers, &exact, 0.2 * exact.breaking_time()).unwrap();
        let e = StateVector::zeros(gop.n_nodes(), 1);
        let report = term_inequality_report(&gop, FluxModel::Burgers, &frame, &e).unwrap();
        assert!(report.all_pass());
        assert_eq!(report.term1.lhs, 0.0);
        assert_eq!(report.term4.rhs, 0.0);
    }

    #[test]
    fn random_errors_satisfy_all_terms() {
        let mut seed = 314159u64;
        let mut next = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        for model in [FluxModel::Burgers, FluxModel::Symmetric2] {
            let (gop, exact) = setup(model, 2, 16, 1.0);
            let frame = exact_frame(&gop, model, &exact, 0.25 * exact.breaking_time()).unwrap();
            for _ in 0..200 {
                let mut e = StateVector::zeros(gop.n_nodes(), model.n_components());
                e.as_mut_slice().iter_mut().for_each(|v| *v = next());
                let report = term_inequality_report(&gop, model, &frame, &e).unwrap();
                assert!(report.term1.pass, "{model:?} term1: {:?}", report.term1);
                assert!(report.term2.pass, "{model:?} term2: {:?}", report.term2);
                assert!(report.term3.pass, "{model:?} term3: {:?}", report.term3);
                assert!(report.term4.pass, "{model:?} term4: {:?}", report.term4);
                assert!(report.hadamard_pass, "{model:?} hadamard");
            }
        }
    }
}
