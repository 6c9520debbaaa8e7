//! Degree-p diagonal-norm, diagonal-E SBP operators on a reference element,
//! and their assembly into global periodic-mesh operators.
//!
//! The reference operators are Legendre–Gauss–Lobatto collocation operators:
//! `D = H^{-1} Q` with diagonal quadrature norm `H`, `Q = H D`, and
//! `Q + Q^T = E = diag(-1, 0, ..., 0, +1)`. On a periodic mesh the boundary
//! contributions cancel pairwise at shared nodes, so the assembled global `Q`
//! is skew-symmetric.

mod lgl;
mod norms;
pub mod scaling;

pub use lgl::{differentiation_matrix, lgl_nodes_and_weights};
pub use norms::two_norm;
pub use scaling::{operator_scaling_study, OperatorScaling};

use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Highest supported operator degree.
pub const MAX_DEGREE: usize = 6;

/// Reference-element SBP operator of degree `p` on [-1, 1].
#[derive(Debug, Clone)]
pub struct ReferenceElement {
    p: usize,
    nodes: Vec<f64>,
    h_ref: Vec<f64>,
    q_ref: DMatrix<f64>,
    d_ref: DMatrix<f64>,
    e_ref: Vec<f64>,
}

impl ReferenceElement {
    /// Build the degree-`p` LGL collocation operator (`1 <= p <= 6`).
    pub fn new(p: usize) -> Result<Self> {
        if p < 1 || p > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(p));
        }
        let (nodes, h_ref) = lgl_nodes_and_weights(p);
        let d_ref = differentiation_matrix(&nodes);
        let n = nodes.len();
        let mut q_ref = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                q_ref[(i, j)] = h_ref[i] * d_ref[(i, j)];
            }
        }
        let mut e_ref = vec![0.0; n];
        e_ref[0] = -1.0;
        e_ref[n - 1] = 1.0;
        Ok(Self { p, nodes, h_ref, q_ref, d_ref, e_ref })
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    /// Number of nodes, `n_p = p + 1`.
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Diagonal of the quadrature norm matrix `H`.
    pub fn h_diag(&self) -> &[f64] {
        &self.h_ref
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q_ref
    }

    pub fn d(&self) -> &DMatrix<f64> {
        &self.d_ref
    }

    /// Diagonal of the boundary operator `E` (collocated diagonal-E form).
    pub fn e_diag(&self) -> &[f64] {
        &self.e_ref
    }

    /// Max-abs entry of `Q + Q^T - E`; zero up to roundoff by construction.
    pub fn sbp_residual(&self) -> f64 {
        let n = self.n_nodes();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let e = if i == j { self.e_ref[i] } else { 0.0 };
                worst = worst.max((self.q_ref[(i, j)] + self.q_ref[(j, i)] - e).abs());
            }
        }
        worst
    }
}

/// Uniform periodic mesh of `n_e` elements on `[x_left, x_right]`, with the
/// element-to-global index map for `n_p` nodes per element. The last node of
/// an element coincides with the first node of the next; element `n_e - 1`
/// wraps around to element 0.
#[derive(Debug, Clone)]
pub struct PeriodicMesh {
    x_left: f64,
    x_right: f64,
    n_e: usize,
    n_p: usize,
}

impl PeriodicMesh {
    pub fn new(x_left: f64, x_right: f64, n_e: usize, n_p: usize) -> Result<Self> {
        if n_e < 2 {
            return Err(Error::MeshTooSmall(n_e));
        }
        assert!(x_left < x_right, "domain endpoints must satisfy x_left < x_right");
        assert!(n_p >= 2, "elements need at least two nodes");
        Ok(Self { x_left, x_right, n_e, n_p })
    }

    pub fn n_elements(&self) -> usize {
        self.n_e
    }

    pub fn nodes_per_element(&self) -> usize {
        self.n_p
    }

    /// Nominal element spacing `h = (x_right - x_left) / n_e`.
    pub fn spacing(&self) -> f64 {
        (self.x_right - self.x_left) / self.n_e as f64
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x_left, self.x_right)
    }

    pub fn domain_length(&self) -> f64 {
        self.x_right - self.x_left
    }

    /// Total number of distinct global nodes, `n_e (n_p - 1)`.
    pub fn n_global_nodes(&self) -> usize {
        self.n_e * (self.n_p - 1)
    }

    /// Global index of local node `j` of element `k` (shared nodes unified,
    /// periodic wrap at the right end).
    pub fn global_index(&self, k: usize, j: usize) -> usize {
        debug_assert!(k < self.n_e && j < self.n_p);
        (k * (self.n_p - 1) + j) % self.n_global_nodes()
    }

    /// Physical coordinate of local node `j` of element `k` given reference
    /// node coordinates `xi`.
    pub fn node_coordinate(&self, k: usize, j: usize, xi: &[f64]) -> f64 {
        let h = self.spacing();
        self.x_left + k as f64 * h + (xi[j] + 1.0) * 0.5 * h
    }

    /// Coordinates of all global nodes, each taken once from the element that
    /// owns it as a non-terminal node.
    pub fn global_coordinates(&self, xi: &[f64]) -> Vec<f64> {
        let mut coords = vec![0.0; self.n_global_nodes()];
        for k in 0..self.n_e {
            for j in 0..self.n_p - 1 {
                coords[self.global_index(k, j)] = self.node_coordinate(k, j, xi);
            }
        }
        coords
    }
}

/// Compressed sparse rows; enough structure for the global `Q` matvecs.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    fn from_sorted_triplets(n: usize, triplets: &[((usize, usize), f64)]) -> Self {
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals = Vec::with_capacity(triplets.len());
        for &((r, c), v) in triplets {
            row_ptr[r + 1] += 1;
            cols.push(c);
            vals.push(v);
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self { n, row_ptr, cols, vals }
    }

    pub fn n_rows(&self) -> usize {
        self.n
    }

    pub fn entry(&self, r: usize, c: usize) -> f64 {
        let lo = self.row_ptr[r];
        let hi = self.row_ptr[r + 1];
        match self.cols[lo..hi].binary_search(&c) {
            Ok(k) => self.vals[lo + k],
            Err(_) => 0.0,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Max-abs entry of `M + M^T`.
    pub fn skew_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.cols[k];
                worst = worst.max((self.vals[k] + self.entry(c, r)).abs());
            }
        }
        worst
    }

    /// `out[i*n_c + c] = sum_j M[i,j] v[j*n_c + c]` for every component `c`.
    pub fn apply_blocked(&self, v: &[f64], n_c: usize, out: &mut [f64]) {
        debug_assert_eq!(v.len(), self.n * n_c);
        debug_assert_eq!(out.len(), self.n * n_c);
        out.fill(0.0);
        for r in 0..self.n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.cols[k];
                let w = self.vals[k];
                for comp in 0..n_c {
                    out[r * n_c + comp] += w * v[c * n_c + comp];
                }
            }
        }
    }
}

/// Assembled global periodic C-SBP operator: diagonal norm `H`, sparse
/// skew-symmetric `Q`, and per-element views through the index map.
///
/// `w_min`/`w_max` are the extreme *element* quadrature weights
/// `(h/2) h_ref`, the quantities the quasi-uniformity bounds refer to; the
/// assembled global diagonal accumulates two element weights at shared nodes.
#[derive(Debug, Clone)]
pub struct GlobalOperator {
    reference: ReferenceElement,
    mesh: PeriodicMesh,
    h_global: Vec<f64>,
    q: CsrMatrix,
    h_elem: Vec<f64>,
    q_elem_norm: f64,
    d_ref_norm: f64,
    w_min: f64,
    w_max: f64,
}

/// Assemble global periodic operators from a reference element and mesh.
///
/// Element contributions accumulate in element-ascending, index-ascending
/// order so the assembly is bit-reproducible.
pub fn assemble_global(mesh: &PeriodicMesh, reference: &ReferenceElement) -> Result<GlobalOperator> {
    if mesh.n_elements() < 2 {
        return Err(Error::MeshTooSmall(mesh.n_elements()));
    }
    if mesh.nodes_per_element() != reference.n_nodes() {
        return Err(Error::DimensionMismatch {
            expected: reference.n_nodes(),
            got: mesh.nodes_per_element(),
        });
    }
    let n_p = reference.n_nodes();
    let n = mesh.n_global_nodes();
    let jac = mesh.spacing() * 0.5;

    let mut h_global = vec![0.0; n];
    let mut entries: std::collections::BTreeMap<(usize, usize), f64> = std::collections::BTreeMap::new();
    for k in 0..mesh.n_elements() {
        for i in 0..n_p {
            let gi = mesh.global_index(k, i);
            h_global[gi] += jac * reference.h_diag()[i];
            for j in 0..n_p {
                let gj = mesh.global_index(k, j);
                let v = reference.q()[(i, j)];
                // Q is Jacobian-free in one dimension: the metric factor from
                // the affine map cancels the inverse from the derivative.
                *entries.entry((gi, gj)).or_insert(0.0) += v;
            }
        }
    }
    let triplets: Vec<((usize, usize), f64)> = entries.into_iter().collect();
    let q = CsrMatrix::from_sorted_triplets(n, &triplets);

    let h_elem: Vec<f64> = reference.h_diag().iter().map(|w| jac * w).collect();
    let w_min = h_elem.iter().cloned().fold(f64::INFINITY, f64::min);
    let w_max = h_elem.iter().cloned().fold(0.0f64, f64::max);
    let q_elem_norm = two_norm(reference.q())?;
    let d_ref_norm = two_norm(reference.d())?;

    Ok(GlobalOperator {
        reference: reference.clone(),
        mesh: mesh.clone(),
        h_global,
        q,
        h_elem,
        q_elem_norm,
        d_ref_norm,
        w_min,
        w_max,
    })
}

impl GlobalOperator {
    pub fn reference(&self) -> &ReferenceElement {
        &self.reference
    }

    pub fn mesh(&self) -> &PeriodicMesh {
        &self.mesh
    }

    pub fn n_nodes(&self) -> usize {
        self.mesh.n_global_nodes()
    }

    /// Assembled global diagonal norm.
    pub fn h_diag(&self) -> &[f64] {
        &self.h_global
    }

    pub fn q(&self) -> &CsrMatrix {
        &self.q
    }

    /// Element norm diagonal `(h/2) h_ref`, identical for every element of the
    /// uniform mesh.
    pub fn element_h_diag(&self) -> &[f64] {
        &self.h_elem
    }

    /// Element `Q_k`; on an affine 1D mesh this is the reference `Q` itself.
    pub fn element_q(&self) -> &DMatrix<f64> {
        self.reference.q()
    }

    /// Cached `max_k ||Q_k||_2`.
    pub fn q_elem_norm(&self) -> f64 {
        self.q_elem_norm
    }

    /// Spectral norm of the reference differentiation matrix (CFL estimates).
    pub fn d_ref_norm(&self) -> f64 {
        self.d_ref_norm
    }

    /// Smallest element quadrature weight.
    pub fn w_min(&self) -> f64 {
        self.w_min
    }

    /// Largest element quadrature weight.
    pub fn w_max(&self) -> f64 {
        self.w_max
    }

    /// Physical coordinates of all global nodes.
    pub fn node_coordinates(&self) -> Vec<f64> {
        self.mesh.global_coordinates(self.reference.nodes())
    }

    /// `out = Q v`, applied per component with `n_c`-strided storage.
    pub fn apply_q(&self, v: &[f64], n_c: usize, out: &mut [f64]) {
        self.q.apply_blocked(v, n_c, out);
    }

    /// `out = D v = H^{-1} Q v`, applied per component.
    pub fn apply_d(&self, v: &[f64], n_c: usize, out: &mut [f64]) {
        self.q.apply_blocked(v, n_c, out);
        for g in 0..self.n_nodes() {
            let h = self.h_global[g];
            for comp in 0..n_c {
                out[g * n_c + comp] /= h;
            }
        }
    }

    /// Sum of the assembled diagonal norm; equals the domain length.
    pub fn h_sum(&self) -> f64 {
        self.h_global.iter().sum()
    }
}
