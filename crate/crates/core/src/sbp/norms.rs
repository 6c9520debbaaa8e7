//! Spectral norm of small dense element matrices via power iteration.

use crate::error::{Error, Result};
use nalgebra::DMatrix;

const REL_TOL: f64 = 1e-10;
const MAX_ITERATIONS: usize = 10_000;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Spectral (induced 2-) norm of a square matrix.
///
/// Power iteration on `M^T M` with a deterministic pseudo-random start
/// vector; converged when the eigen-residual drops below `1e-10` relative,
/// capped at 10 000 iterations.
pub fn two_norm(m: &DMatrix<f64>) -> Result<f64> {
    assert_eq!(m.nrows(), m.ncols(), "two_norm expects a square matrix");
    let n = m.nrows();
    if n == 0 {
        return Ok(0.0);
    }

    // Deterministic start with components in every direction; a naive ones
    // vector can sit in the null space (e.g. any differentiation matrix).
    let mut seed = 0x5eed_0f_c5b9u64;
    let mut v: Vec<f64> = (0..n)
        .map(|_| (splitmix64(&mut seed) >> 11) as f64 / (1u64 << 53) as f64 - 0.5)
        .collect();
    let norm0 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm0);

    let apply = |v: &[f64], tmp: &mut [f64], out: &mut [f64]| {
        for i in 0..n {
            tmp[i] = (0..n).map(|j| m[(i, j)] * v[j]).sum();
        }
        for i in 0..n {
            out[i] = (0..n).map(|j| m[(j, i)] * tmp[j]).sum();
        }
    };

    let mut tmp = vec![0.0; n];
    let mut bv = vec![0.0; n];
    let mut lambda = 0.0;
    for it in 0..MAX_ITERATIONS {
        apply(&v, &mut tmp, &mut bv);
        lambda = v.iter().zip(&bv).map(|(a, b)| a * b).sum::<f64>();
        let bnorm = bv.iter().map(|x| x * x).sum::<f64>().sqrt();
        if bnorm == 0.0 {
            return Ok(0.0);
        }
        // residual ||B v - lambda v||
        let res = v
            .iter()
            .zip(&bv)
            .map(|(a, b)| (b - lambda * a) * (b - lambda * a))
            .sum::<f64>()
            .sqrt();
        if res <= REL_TOL * lambda.max(f64::MIN_POSITIVE) {
            return Ok(lambda.max(0.0).sqrt());
        }
        v.iter_mut().zip(&bv).for_each(|(a, b)| *a = b / bnorm);
        if it + 1 == MAX_ITERATIONS {
            return Err(Error::IterationLimit {
                iterations: MAX_ITERATIONS,
                last: lambda.max(0.0).sqrt(),
            });
        }
    }
    Ok(lambda.max(0.0).sqrt())
}
