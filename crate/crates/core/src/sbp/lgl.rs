//! Legendre–Gauss–Lobatto nodes, quadrature weights, and the nodal
//! differentiation matrix on the reference interval [-1, 1].

use nalgebra::DMatrix;

/// Evaluate the Legendre polynomial `P_n` and its derivative at `x` by the
/// three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = p_next;
    }
    // (1 - x^2) P_n' = n (P_{n-1} - x P_n)
    let dp = if (1.0 - x * x).abs() > f64::EPSILON {
        (n as f64) * (p_prev - x * p) / (1.0 - x * x)
    } else {
        // endpoint values: P_n'(±1) = ±^{n+1} n(n+1)/2
        let sign = if x > 0.0 { 1.0 } else { (-1.0f64).powi(n as i32 + 1) };
        sign * (n as f64) * (n as f64 + 1.0) / 2.0
    };
    (p, dp)
}

/// LGL nodes and quadrature weights for polynomial degree `p` (`p + 1` nodes).
///
/// Interior nodes are the roots of `P_p'`, found by Newton iteration on the
/// derivative (second derivative from the Legendre ODE identity), initialized
/// from Chebyshev–Lobatto estimates. Node symmetry about the origin is
/// enforced exactly; weights are `2 / (p (p+1) P_p(x_j)^2)`.
pub fn lgl_nodes_and_weights(p: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(p >= 1, "degree must be at least 1");
    let n = p + 1;
    let mut nodes = vec![0.0; n];
    nodes[0] = -1.0;
    nodes[n - 1] = 1.0;

    // Newton on P_p'(x) = 0 for the lower-half interior nodes, mirrored.
    for j in 1..=(n - 1) / 2 {
        let mut x = -(std::f64::consts::PI * j as f64 / p as f64).cos();
        for _ in 0..100 {
            let (pp, dpp) = legendre_with_derivative(p, x);
            // (1 - x^2) P_p'' = 2 x P_p' - p (p+1) P_p
            let d2 = (2.0 * x * dpp - (p as f64) * (p as f64 + 1.0) * pp) / (1.0 - x * x);
            let step = dpp / d2;
            x -= step;
            if step.abs() <= 1e-14 * (1.0 + x.abs()) {
                break;
            }
        }
        nodes[j] = x;
        nodes[n - 1 - j] = -x;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }

    let mut weights = vec![0.0; n];
    let scale = 2.0 / ((p as f64) * (p as f64 + 1.0));
    for j in 0..=(n - 1) / 2 {
        let (pp, _) = legendre_with_derivative(p, nodes[j]);
        let w = scale / (pp * pp);
        weights[j] = w;
        weights[n - 1 - j] = w;
    }
    (nodes, weights)
}

/// Nodal (Lagrange) differentiation matrix in barycentric form:
/// `D[i][j] = (lam_j / lam_i) / (x_i - x_j)` off-diagonal, with the diagonal
/// fixed by the negative row-sum so constants differentiate to zero exactly.
pub fn differentiation_matrix(nodes: &[f64]) -> DMatrix<f64> {
    let n = nodes.len();
    let mut lam = vec![1.0; n];
    for i in 0..n {
        for j in 0..n {
            if j != i {
                lam[i] *= nodes[i] - nodes[j];
            }
        }
        lam[i] = 1.0 / lam[i];
    }
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut row_sum = 0.0;
        for j in 0..n {
            if j != i {
                let v = (lam[j] / lam[i]) / (nodes[i] - nodes[j]);
                d[(i, j)] = v;
                row_sum += v;
            }
        }
        d[(i, i)] = -row_sum;
    }
    d
}
