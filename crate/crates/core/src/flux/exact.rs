//! Exact pre-breaking solutions by the method of characteristics.
//!
//! A sinusoidal initial profile transported by the inviscid Burgers equation
//! stays smooth until its characteristics first cross at
//! `T_b = 1 / (2 pi m A)`; before that the solution is recovered by solving
//! the implicit characteristic equation `xi = x - u0(xi) t` with a guarded
//! Newton iteration. The symmetric two-component system diagonalizes into two
//! Burgers problems in `s = u1 + u2`, `w = u1 - u2`, so its exact solution is
//! assembled from two characteristic solves.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Sinusoidal initial profile `u0(x) = A sin(2 pi m x + phase)`.
#[derive(Debug, Clone, Copy)]
pub struct SineProfile {
    pub amplitude: f64,
    pub wavenumber: u32,
    pub phase: f64,
}

impl SineProfile {
    pub fn new(amplitude: f64, wavenumber: u32, phase: f64) -> Self {
        assert!(amplitude > 0.0, "profile amplitude must be positive");
        assert!(wavenumber >= 1, "wavenumber must be at least 1");
        Self { amplitude, wavenumber, phase }
    }

    pub fn value(&self, x: f64) -> f64 {
        self.amplitude * (2.0 * PI * self.wavenumber as f64 * x + self.phase).sin()
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let k = 2.0 * PI * self.wavenumber as f64;
        self.amplitude * k * (k * x + self.phase).cos()
    }

    /// `sup |u0'| = 2 pi m A`.
    pub fn max_slope(&self) -> f64 {
        2.0 * PI * self.wavenumber as f64 * self.amplitude
    }
}

/// Smooth Burgers solution transported from a sine profile.
#[derive(Debug, Clone, Copy)]
pub struct CharacteristicSolution {
    profile: SineProfile,
}

impl CharacteristicSolution {
    pub fn new(profile: SineProfile) -> Self {
        Self { profile }
    }

    pub fn profile(&self) -> &SineProfile {
        &self.profile
    }

    /// First characteristic crossing, `T_b = 1 / sup|u0'|`.
    pub fn breaking_time(&self) -> f64 {
        1.0 / self.profile.max_slope()
    }

    fn check_time(&self, t: f64) -> Result<()> {
        let tb = self.breaking_time();
        if !(0.0..tb).contains(&t) {
            return Err(Error::PostBreaking { t, breaking_time: tb });
        }
        Ok(())
    }

    /// Foot of the characteristic through `(x, t)`: the root of
    /// `g(xi) = xi + t u0(xi) - x`, which is strictly increasing for
    /// `t < T_b`. Newton from `xi = x` with a bisection fallback on the
    /// bracket `[x - A t, x + A t]`.
    fn characteristic_foot(&self, x: f64, t: f64) -> f64 {
        if t == 0.0 {
            return x;
        }
        let a = self.profile.amplitude;
        let mut lo = x - a * t;
        let mut hi = x + a * t;
        let scale = 1.0 + x.abs() + a * t;
        let g = |xi: f64| xi + t * self.profile.value(xi) - x;
        let mut xi = x;
        let mut converged = false;
        for _ in 0..50 {
            let gv = g(xi);
            // drive the residual to machine level; the no-progress exit below
            // stops the iteration once evaluation noise dominates
            if gv.abs() <= 2.0 * f64::EPSILON * scale {
                converged = true;
                break;
            }
            if gv > 0.0 {
                hi = xi;
            } else {
                lo = xi;
            }
            let slope = 1.0 + t * self.profile.derivative(xi);
            let mut next = xi - gv / slope;
            if !(lo..=hi).contains(&next) {
                next = 0.5 * (lo + hi);
            }
            if (next - xi).abs() <= f64::EPSILON * (1.0 + xi.abs()) {
                xi = next;
                converged = true;
                break;
            }
            xi = next;
        }
        if !converged {
            // bisection cleanup; the bracket always holds the root
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if g(mid) > 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= f64::EPSILON * scale {
                    break;
                }
            }
            xi = 0.5 * (lo + hi);
        }
        xi
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok(self.profile.value(self.characteristic_foot(x, t)))
    }

    /// Value and spatial derivative: `u_x = u0'(xi) / (1 + t u0'(xi))`.
    pub fn eval_with_derivative(&self, x: f64, t: f64) -> Result<(f64, f64)> {
        self.check_time(t)?;
        let xi = self.characteristic_foot(x, t);
        let u = self.profile.value(xi);
        let slope0 = self.profile.derivative(xi);
        Ok((u, slope0 / (1.0 + t * slope0)))
    }

    /// `sup_x |u_x(., t)| = G / (1 - G t)` with `G = sup |u0'|`.
    pub fn max_dudx(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        let g = self.profile.max_slope();
        Ok(g / (1.0 - g * t))
    }
}

/// Smooth reference solution for the Burgers equation with
/// `u0(x) = sigma sin(2 pi x)`, defined for `0 <= t < T_b = 1/(2 pi sigma)`.
pub fn burgers_exact(sigma: f64, x: f64, t: f64) -> Result<f64> {
    CharacteristicSolution::new(SineProfile::new(sigma, 1, 0.0)).eval(x, t)
}

/// Exact pre-breaking solutions for the supported models.
#[derive(Debug, Clone)]
pub enum ExactSolution {
    Burgers(CharacteristicSolution),
    /// Characteristic pair for the symmetric system: `u1 = (s + w)/2`,
    /// `u2 = (s - w)/2`.
    Symmetric2 { s: CharacteristicSolution, w: CharacteristicSolution },
}

impl ExactSolution {
    /// Scalar Burgers with `u0 = sigma sin(2 pi m x)`.
    pub fn burgers_sine(sigma: f64, wavenumber: u32) -> Self {
        Self::Burgers(CharacteristicSolution::new(SineProfile::new(sigma, wavenumber, 0.0)))
    }

    /// Symmetric system with `u1(., 0) = sigma sin(2 pi m x)` and
    /// `u2(., 0) = sigma cos(2 pi m x)`; the characteristic variables are
    /// shifted sines of amplitude `sigma sqrt(2)`.
    pub fn symmetric2_trig(sigma: f64, wavenumber: u32) -> Self {
        let amp = sigma * std::f64::consts::SQRT_2;
        Self::Symmetric2 {
            s: CharacteristicSolution::new(SineProfile::new(amp, wavenumber, PI / 4.0)),
            w: CharacteristicSolution::new(SineProfile::new(amp, wavenumber, -PI / 4.0)),
        }
    }

    pub fn n_components(&self) -> usize {
        match self {
            Self::Burgers(_) => 1,
            Self::Symmetric2 { .. } => 2,
        }
    }

    pub fn breaking_time(&self) -> f64 {
        match self {
            Self::Burgers(sol) => sol.breaking_time(),
            Self::Symmetric2 { s, w } => s.breaking_time().min(w.breaking_time()),
        }
    }

    /// Solution components at `(x, t)` written into `out[..n_c]`.
    pub fn eval_into(&self, x: f64, t: f64, out: &mut [f64]) -> Result<()> {
        match self {
            Self::Burgers(sol) => {
                out[0] = sol.eval(x, t)?;
            }
            Self::Symmetric2 { s, w } => {
                let sv = s.eval(x, t)?;
                let wv = w.eval(x, t)?;
                out[0] = 0.5 * (sv + wv);
                out[1] = 0.5 * (sv - wv);
            }
        }
        Ok(())
    }

    /// Spatial derivatives of the components at `(x, t)`.
    pub fn eval_x_into(&self, x: f64, t: f64, out: &mut [f64]) -> Result<()> {
        match self {
            Self::Burgers(sol) => {
                out[0] = sol.eval_with_derivative(x, t)?.1;
            }
            Self::Symmetric2 { s, w } => {
                let (_, sx) = s.eval_with_derivative(x, t)?;
                let (_, wx) = w.eval_with_derivative(x, t)?;
                out[0] = 0.5 * (sx + wx);
                out[1] = 0.5 * (sx - wx);
            }
        }
        Ok(())
    }

    /// Time derivatives `dU/dt = -d F(U)/dx`, evaluated through the
    /// characteristic form so no finite differencing enters.
    pub fn du_dt_into(&self, x: f64, t: f64, out: &mut [f64]) -> Result<()> {
        match self {
            Self::Burgers(sol) => {
                let (u, ux) = sol.eval_with_derivative(x, t)?;
                out[0] = -u * ux;
            }
            Self::Symmetric2 { s, w } => {
                let (sv, sx) = s.eval_with_derivative(x, t)?;
                let (wv, wx) = w.eval_with_derivative(x, t)?;
                out[0] = 0.5 * (-sv * sx - wv * wx);
                out[1] = 0.5 * (-sv * sx + wv * wx);
            }
        }
        Ok(())
    }

    /// Continuum bound on `sup_x |d u_i / dx|` at time `t`.
    pub fn max_dudx(&self, t: f64) -> Result<f64> {
        match self {
            Self::Burgers(sol) => sol.max_dudx(t),
            Self::Symmetric2 { s, w } => Ok(s.max_dudx(t)?.max(w.max_dudx(t)?)),
        }
    }
}
