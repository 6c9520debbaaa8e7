//! Homogeneous flux models: scalar Burgers and a symmetric two-component
//! system, with Jacobians, homogeneity metadata, and Taylor remainders.
//!
//! Both fluxes are degree-2 homogeneous, so Euler's identity `A(U) U = 2 F(U)`
//! holds and the split coefficients are `alpha_1 = 2/3`, `alpha_2 = 1/3`.

pub mod exact;

pub use exact::{burgers_exact, CharacteristicSolution, ExactSolution, SineProfile};

use crate::error::{Error, Result};

/// Maximum number of solution components across the supported models.
pub const MAX_COMPONENTS: usize = 2;

/// The supported flux models.
///
/// `Symmetric2` is the system `F(u1, u2) = ((u1^2 + u2^2)/2, u1 u2)` with the
/// symmetric Jacobian `[[u1, u2], [u2, u1]]`; in the characteristic variables
/// `s = u1 + u2`, `w = u1 - u2` it decouples into two independent Burgers
/// equations, which supplies its exact solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxModel {
    Burgers,
    Symmetric2,
}

impl FluxModel {
    /// Model selection by CLI/config name.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "burgers" => Some(Self::Burgers),
            "symmetric2" => Some(Self::Symmetric2),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Burgers => "burgers",
            Self::Symmetric2 => "symmetric2",
        }
    }

    pub fn n_components(self) -> usize {
        match self {
            Self::Burgers => 1,
            Self::Symmetric2 => 2,
        }
    }

    /// Homogeneity degree of the flux.
    pub fn beta(self) -> f64 {
        2.0
    }

    /// Split coefficient on the conservative term, `beta / (beta + 1)`.
    pub fn alpha1(self) -> f64 {
        self.beta() / (self.beta() + 1.0)
    }

    /// Split coefficient on the quasi-linear term, `1 / (beta + 1)`.
    pub fn alpha2(self) -> f64 {
        1.0 / (self.beta() + 1.0)
    }

    /// Supremum bound `c_r` on the flux Hessians: `f'' = 1` for Burgers; the
    /// system's component Hessians are constant 0/1 matrices and `c_r = 2`
    /// bounds both the vector remainder and the Jacobian difference.
    pub fn hessian_bound(self) -> f64 {
        match self {
            Self::Burgers => 1.0,
            Self::Symmetric2 => 2.0,
        }
    }

    /// Evaluate the flux at one nodal state.
    pub fn flux(self, u: &[f64], out: &mut [f64]) {
        match self {
            Self::Burgers => out[0] = 0.5 * u[0] * u[0],
            Self::Symmetric2 => {
                out[0] = 0.5 * (u[0] * u[0] + u[1] * u[1]);
                out[1] = u[0] * u[1];
            }
        }
    }

    /// Flux Jacobian at one nodal state, row-major `n_c x n_c`.
    pub fn jacobian(self, u: &[f64], out: &mut [f64]) {
        match self {
            Self::Burgers => out[0] = u[0],
            Self::Symmetric2 => {
                out[0] = u[0];
                out[1] = u[1];
                out[2] = u[1];
                out[3] = u[0];
            }
        }
    }

    /// `out = A(u) v` at one nodal state.
    pub fn jacobian_apply(self, u: &[f64], v: &[f64], out: &mut [f64]) {
        match self {
            Self::Burgers => out[0] = u[0] * v[0],
            Self::Symmetric2 => {
                out[0] = u[0] * v[0] + u[1] * v[1];
                out[1] = u[1] * v[0] + u[0] * v[1];
            }
        }
    }

    /// Spectral-radius bound of the Jacobian at one nodal state (CFL use).
    pub fn wave_speed(self, u: &[f64]) -> f64 {
        match self {
            Self::Burgers => u[0].abs(),
            // eigenvalues u1 +- u2
            Self::Symmetric2 => u[0].abs() + u[1].abs(),
        }
    }
}

/// Residuals of the homogeneity properties at a single state.
#[derive(Debug, Clone, Copy)]
pub struct HomogeneityReport {
    /// `max |F(eta U) - eta^beta F(U)|`
    pub scaling_residual: f64,
    /// `max |A(U) U - beta F(U)|` (Euler identity)
    pub euler_residual: f64,
    pub pass: bool,
}

/// Check `F(eta U) = eta^beta F(U)` and the Euler identity at a state.
pub fn check_homogeneity(model: FluxModel, u: &[f64], eta: f64) -> Result<HomogeneityReport> {
    if eta == 0.0 {
        return Err(Error::InvalidScale);
    }
    let n_c = model.n_components();
    if u.len() != n_c {
        return Err(Error::DimensionMismatch { expected: n_c, got: u.len() });
    }
    let mut f = [0.0; MAX_COMPONENTS];
    let mut f_scaled = [0.0; MAX_COMPONENTS];
    let mut au = [0.0; MAX_COMPONENTS];
    let scaled: Vec<f64> = u.iter().map(|x| eta * x).collect();
    model.flux(u, &mut f);
    model.flux(&scaled, &mut f_scaled);
    model.jacobian_apply(u, u, &mut au);
    let eta_pow = eta.powf(model.beta());
    let mut scaling_residual = 0.0f64;
    let mut euler_residual = 0.0f64;
    let mut f_mag = 0.0f64;
    for c in 0..n_c {
        scaling_residual = scaling_residual.max((f_scaled[c] - eta_pow * f[c]).abs());
        euler_residual = euler_residual.max((au[c] - model.beta() * f[c]).abs());
        f_mag = f_mag.max(f[c].abs());
    }
    let tol = 1e-13 * (1.0 + f_mag);
    Ok(HomogeneityReport {
        scaling_residual,
        euler_residual,
        pass: scaling_residual <= tol && euler_residual <= tol,
    })
}

/// First-order Taylor remainder of the flux between two nodal state vectors,
/// `R1 = f(u_h) - f(u) + A(u)(u - u_h)`, together with the quadratic bound
/// check `||R1||_2 <= (c_r / 2) ||e||_2^2`.
pub fn taylor_remainder(model: FluxModel, u: &[f64], u_h: &[f64]) -> Result<(Vec<f64>, bool)> {
    if u.len() != u_h.len() {
        return Err(Error::DimensionMismatch { expected: u.len(), got: u_h.len() });
    }
    let n_c = model.n_components();
    if u.len() % n_c != 0 {
        return Err(Error::DimensionMismatch { expected: n_c, got: u.len() % n_c });
    }
    let n_nodes = u.len() / n_c;
    let mut r1 = vec![0.0; u.len()];
    let mut e_sq = 0.0f64;
    let mut r_sq = 0.0f64;
    let mut f_u = [0.0; MAX_COMPONENTS];
    let mut f_uh = [0.0; MAX_COMPONENTS];
    let mut ae = [0.0; MAX_COMPONENTS];
    let mut e_node = [0.0; MAX_COMPONENTS];
    for g in 0..n_nodes {
        let s = g * n_c;
        let un = &u[s..s + n_c];
        let uhn = &u_h[s..s + n_c];
        for c in 0..n_c {
            e_node[c] = un[c] - uhn[c];
        }
        model.flux(un, &mut f_u);
        model.flux(uhn, &mut f_uh);
        model.jacobian_apply(un, &e_node, &mut ae);
        for c in 0..n_c {
            let v = f_uh[c] - f_u[c] + ae[c];
            r1[s + c] = v;
            r_sq += v * v;
            e_sq += e_node[c] * e_node[c];
        }
    }
    let lhs = r_sq.sqrt();
    let rhs = 0.5 * model.hessian_bound() * e_sq;
    let ok = lhs <= rhs * (1.0 + 1e-12) + 1e-14;
    Ok((r1, ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn burgers_point_values() {
        let m = FluxModel::Burgers;
        let mut f = [0.0];
        m.flux(&[3.0], &mut f);
        assert_eq!(f[0], 4.5);
        let mut au = [0.0];
        m.jacobian_apply(&[3.0], &[3.0], &mut au);
        assert_eq!(au[0], 9.0); // = beta * F
        m.flux(&[0.0], &mut f);
        assert_eq!(f[0], 0.0);
        assert_eq!(m.alpha1(), 2.0 / 3.0);
        assert_eq!(m.alpha2(), 1.0 / 3.0);
        // the 1/3-1/3 split of the expanded divergence form
        assert_eq!(m.alpha1() / 2.0, 1.0 / 3.0);
    }

    #[test]
    fn symmetric2_point_values() {
        let m = FluxModel::Symmetric2;
        let mut f = [0.0; 2];
        m.flux(&[1.0, 1.0], &mut f);
        assert_eq!(f, [1.0, 1.0]);
        let mut au = [0.0; 2];
        m.jacobian_apply(&[1.0, 1.0], &[1.0, 1.0], &mut au);
        assert_eq!(au, [2.0, 2.0]);
        m.flux(&[0.0, 0.0], &mut f);
        assert_eq!(f, [0.0, 0.0]);
        // Jacobian symmetry is structural
        let mut a = [0.0; 4];
        m.jacobian(&[0.3, -1.7], &mut a);
        assert_eq!(a[1], a[2]);
    }

    #[test]
    fn characteristic_variables_satisfy_burgers() {
        // s = u1 + u2 and w = u1 - u2 carry the scalar flux s^2/2, w^2/2.
        let m = FluxModel::Symmetric2;
        let states = [[0.7, -0.2], [1.3, 2.1], [-0.4, 0.9]];
        for u in states {
            let mut f = [0.0; 2];
            m.flux(&u, &mut f);
            let s = u[0] + u[1];
            let w = u[0] - u[1];
            assert!(((f[0] + f[1]) - 0.5 * s * s).abs() < 1e-15);
            assert!(((f[0] - f[1]) - 0.5 * w * w).abs() < 1e-15);
        }
    }

    #[test]
    fn homogeneity_checks() {
        let r = check_homogeneity(FluxModel::Burgers, &[2.0], 3.0).unwrap();
        assert!(r.pass, "F(6)=18 should equal 9 F(2)");
        let r = check_homogeneity(FluxModel::Symmetric2, &[1.0, 2.0], -1.0).unwrap();
        assert!(r.pass, "even degree: F(-U) = F(U)");
        let r = check_homogeneity(FluxModel::Burgers, &[1.5], 2.0).unwrap();
        assert!(r.pass);
        assert!(matches!(
            check_homogeneity(FluxModel::Burgers, &[1.0], 0.0),
            Err(Error::InvalidScale)
        ));
    }

    #[test]
    fn taylor_remainder_zero_and_saturated() {
        let (r1, ok) = taylor_remainder(FluxModel::Burgers, &[1.0, -2.0], &[1.0, -2.0]).unwrap();
        assert!(r1.iter().all(|v| *v == 0.0));
        assert!(ok);
        // quadratic flux saturates the bound: R1 = e^2 / 2 exactly
        let (r1, ok) = taylor_remainder(FluxModel::Burgers, &[1.0], &[0.0]).unwrap();
        assert_eq!(r1[0], 0.5);
        assert!(ok);
    }

    #[test]
    fn taylor_bound_on_random_pairs() {
        let mut seed = 7u64;
        let mut next = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) * 10.0 - 5.0
        };
        for model in [FluxModel::Burgers, FluxModel::Symmetric2] {
            for _ in 0..1000 {
                let len = 6 * model.n_components();
                let u: Vec<f64> = (0..len).map(|_| next()).collect();
                let u_h: Vec<f64> = (0..len).map(|_| next()).collect();
                let (_, ok) = taylor_remainder(model, &u, &u_h).unwrap();
                assert!(ok, "remainder bound violated for {:?}", model);
            }
        }
    }

    #[test]
    fn euler_identity_on_random_states() {
        let mut seed = 99u64;
        let mut next = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) * 8.0 - 4.0
        };
        for model in [FluxModel::Burgers, FluxModel::Symmetric2] {
            for _ in 0..1000 {
                let u: Vec<f64> = (0..model.n_components()).map(|_| next()).collect();
                let r = check_homogeneity(model, &u, 0.5).unwrap();
                assert!(r.pass);
                let r = check_homogeneity(model, &u, -2.0).unwrap();
                assert!(r.pass);
            }
        }
    }
}
