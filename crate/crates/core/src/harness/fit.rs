//! Least-squares order fitting on log-log data.

use crate::error::{Error, Result};

/// Fitted log-log slope with its standard-error half-width.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub half_width: f64,
}

/// Least-squares slope of `log(value)` against `log(h)`.
///
/// Requires at least three strictly positive samples so the residual degrees
/// of freedom are nonzero.
pub fn fit_order(h: &[f64], values: &[f64]) -> Result<FitResult> {
    if h.len() != values.len() {
        return Err(Error::DimensionMismatch { expected: h.len(), got: values.len() });
    }
    if h.len() < 3 {
        return Err(Error::InsufficientData { needed: 3, got: h.len() });
    }
    for &v in h.iter().chain(values) {
        if v <= 0.0 {
            return Err(Error::NonPositiveValue(v));
        }
    }
    let n = h.len() as f64;
    let xs: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let half_width = (ss_res / (n - 2.0) / sxx).sqrt();
    Ok(FitResult { slope, half_width })
}
