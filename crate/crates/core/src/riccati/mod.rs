//! Closed-form solutions of the constant-coefficient Riccati initial-value
//! problem `y' = a y^2 + b y + c`, `y(0) = 0`, for nonnegative coefficients:
//! case classification, explicit solutions, blow-up times, a numeric ODE
//! oracle, and envelope comparison against a measured error series.

use crate::error::{Error, Result};

/// Relative threshold deciding the double-root case `Delta = 0`.
pub const DELTA_EPS: f64 = 1e-10;

/// Coefficient regimes of `y' = a y^2 + b y + c` with `a, b, c >= 0`.
///
/// `Trivial` is the `c = 0` regime with `a > 0`, whose unique solution is
/// `y = 0`; the discriminant cases split the genuinely quadratic regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum RiccatiCase {
    /// `a = 0, b = 0`: `y = c t`.
    LinearConstant,
    /// `a = 0, b > 0`: `y = (c/b)(e^{bt} - 1)`.
    LinearExponential,
    /// `a > 0, c = 0`: `y = 0` by uniqueness.
    Trivial,
    /// `a > 0, b = 0, c > 0`: `y = sqrt(c/a) tan(sqrt(ac) t)`.
    TangentPure,
    /// `a > 0, b > 0, Delta > 0`: two negative real roots.
    RealRoots,
    /// `a > 0, b > 0, Delta = 0` within the relative threshold.
    DoubleRoot,
    /// `a > 0, b > 0, Delta < 0`: complex conjugate roots.
    ComplexRoots,
}

/// Finite or infinite blow-up time; infinity is an explicit variant, never a
/// sentinel float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlowUpTime {
    Finite(f64),
    Infinite,
}

impl BlowUpTime {
    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            Self::Finite(t) => Some(*t),
            Self::Infinite => None,
        }
    }

    /// True when `t` lies strictly inside the existence interval `[0, t*)`.
    pub fn contains(&self, t: f64) -> bool {
        match self {
            Self::Finite(ts) => t < *ts,
            Self::Infinite => true,
        }
    }
}

fn validate(a: f64, b: f64, c: f64) -> Result<()> {
    for (name, v) in [("a", a), ("b", b), ("c", c)] {
        if !(v >= 0.0) {
            return Err(Error::InvalidCoefficient { name, value: v });
        }
    }
    Ok(())
}

/// Discriminant `b^2 - 4ac`.
pub fn discriminant(a: f64, b: f64, c: f64) -> f64 {
    b * b - 4.0 * a * c
}

/// Classify the coefficient regime. The double root is decided by
/// `|Delta| <= DELTA_EPS * max(b^2, 4ac)`.
pub fn classify(a: f64, b: f64, c: f64) -> Result<RiccatiCase> {
    validate(a, b, c)?;
    if a == 0.0 {
        return Ok(if b == 0.0 { RiccatiCase::LinearConstant } else { RiccatiCase::LinearExponential });
    }
    if c == 0.0 {
        return Ok(RiccatiCase::Trivial);
    }
    if b == 0.0 {
        return Ok(RiccatiCase::TangentPure);
    }
    let delta = discriminant(a, b, c);
    let scale = (b * b).max(4.0 * a * c);
    if delta.abs() <= DELTA_EPS * scale {
        Ok(RiccatiCase::DoubleRoot)
    } else if delta > 0.0 {
        Ok(RiccatiCase::RealRoots)
    } else {
        Ok(RiccatiCase::ComplexRoots)
    }
}

/// Earliest blow-up time of the maximal solution.
pub fn blow_up_time(a: f64, b: f64, c: f64) -> Result<BlowUpTime> {
    let case = classify(a, b, c)?;
    Ok(match case {
        RiccatiCase::LinearConstant | RiccatiCase::LinearExponential | RiccatiCase::Trivial => {
            BlowUpTime::Infinite
        }
        RiccatiCase::TangentPure => {
            BlowUpTime::Finite(std::f64::consts::FRAC_PI_2 / (a * c).sqrt())
        }
        RiccatiCase::RealRoots => {
            // (-b - sd)/(-b + sd) rewritten as (b + sd)^2 / (4ac) to avoid
            // cancellation when Delta is close to b^2
            let sd = discriminant(a, b, c).sqrt();
            let ratio = (b + sd) * (b + sd) / (4.0 * a * c);
            BlowUpTime::Finite(ratio.ln() / sd)
        }
        RiccatiCase::DoubleRoot => BlowUpTime::Finite(2.0 / b),
        RiccatiCase::ComplexRoots => {
            let omega = (-discriminant(a, b, c)).sqrt();
            BlowUpTime::Finite((std::f64::consts::PI - 2.0 * (b / omega).atan()) / omega)
        }
    })
}

/// Closed-form value `y(t)` for `0 <= t < t*`.
pub fn evaluate(a: f64, b: f64, c: f64, t: f64) -> Result<f64> {
    let case = classify(a, b, c)?;
    let t_star = blow_up_time(a, b, c)?;
    if t < 0.0 || !t_star.contains(t) {
        return Err(Error::BlowUpDomain { t, t_star: t_star.finite().unwrap_or(f64::INFINITY) });
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(match case {
        RiccatiCase::LinearConstant => c * t,
        RiccatiCase::LinearExponential => c * (b * t).exp_m1() / b,
        RiccatiCase::Trivial => 0.0,
        RiccatiCase::TangentPure => (c / a).sqrt() * ((a * c).sqrt() * t).tan(),
        RiccatiCase::RealRoots => {
            let sd = discriminant(a, b, c).sqrt();
            // stable root form r1 = -2c / (b + sqrt(Delta))
            let r1 = -2.0 * c / (b + sd);
            let ratio = 4.0 * a * c / ((b + sd) * (b + sd)); // r1 / r2
            let growth = (sd * t).exp();
            r1 * (1.0 - growth) / (1.0 - ratio * growth)
        }
        RiccatiCase::DoubleRoot => (b / (2.0 * a)) * (2.0 / (2.0 - b * t) - 1.0),
        RiccatiCase::ComplexRoots => {
            let omega = (-discriminant(a, b, c)).sqrt();
            (omega * (0.5 * omega * t + (b / omega).atan()).tan() - b) / (2.0 * a)
        }
    })
}

/// Adaptive step-doubling RK4 integration of `y' = a y^2 + b y + c` up to
/// `t`, local tolerance `1e-10`; an independent check of the closed forms.
pub fn numeric_oracle(a: f64, b: f64, c: f64, t: f64) -> Result<f64> {
    validate(a, b, c)?;
    if t < 0.0 {
        return Err(Error::BlowUpDomain { t, t_star: 0.0 });
    }
    if let BlowUpTime::Finite(ts) = blow_up_time(a, b, c)? {
        if t >= 0.95 * ts {
            return Err(Error::OracleRange { t });
        }
    }
    let f = |y: f64| a * y * y + b * y + c;
    let rk4 = |y: f64, h: f64| {
        let k1 = f(y);
        let k2 = f(y + 0.5 * h * k1);
        let k3 = f(y + 0.5 * h * k2);
        let k4 = f(y + h * k3);
        y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    };

    let mut y = 0.0f64;
    let mut s = 0.0f64;
    let mut h = (t / 16.0).min(1e-2 / (1.0 + b + (a * c).sqrt()));
    let mut steps = 0usize;
    const MAX_STEPS: usize = 20_000_000;
    while s < t {
        h = h.min(t - s);
        let full = rk4(y, h);
        let half = rk4(rk4(y, 0.5 * h), 0.5 * h);
        let err = (half - full).abs() / 15.0;
        let tol = 1e-10 * (1.0 + half.abs());
        if err <= tol {
            y = half + (half - full) / 15.0;
            s += h;
            if !y.is_finite() {
                return Err(Error::OracleRange { t });
            }
        }
        let factor = if err > 0.0 { 0.9 * (tol / err).powf(0.2) } else { 4.0 };
        h *= factor.clamp(0.25, 4.0);
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::OracleRange { t });
        }
    }
    Ok(y)
}

/// Result of comparing a measured error series against the envelope.
#[derive(Debug, Clone)]
pub struct EnvelopeReport {
    pub pass: bool,
    /// `y(t_i) - z_i` for each sample.
    pub margins: Vec<f64>,
    /// Index of the first sample exceeding the envelope, if any.
    pub first_violation: Option<usize>,
}

/// Check `z_i <= y(t_i)` with slack `1e-9` relative plus `1e-14` absolute at
/// every sample `(t_i, z_i)`. Samples at or past the blow-up time make the
/// envelope inapplicable (a finer mesh is required).
pub fn envelope_check(samples: &[(f64, f64)], a: f64, b: f64, c: f64) -> Result<EnvelopeReport> {
    let t_star = blow_up_time(a, b, c)?;
    if let Some(&(t_last, _)) = samples.iter().max_by(|x, y| x.0.total_cmp(&y.0)) {
        if !t_star.contains(t_last) {
            return Err(Error::EnvelopeNotApplicable {
                t_star: t_star.finite().unwrap_or(f64::INFINITY),
            });
        }
    }
    let mut margins = Vec::with_capacity(samples.len());
    let mut first_violation = None;
    for (i, &(t, z)) in samples.iter().enumerate() {
        let y = evaluate(a, b, c, t)?;
        margins.push(y - z);
        if z > y * (1.0 + 1e-9) + 1e-14 && first_violation.is_none() {
            first_violation = Some(i);
        }
    }
    Ok(EnvelopeReport { pass: first_violation.is_none(), margins, first_violation })
}
