//! Mesh-scaling study of the element operator norms.
//!
//! On a refining uniform mesh the element operators scale as
//! `||H_k|| ~ h`, `||Q_k|| ~ h^0`, `||D_k|| ~ h^{-1}` (1D), which this study
//! verifies by fitting log-log slopes.

use crate::error::{Error, Result};
use crate::harness::fit::{fit_order, FitResult};
use crate::sbp::{assemble_global, two_norm, PeriodicMesh, ReferenceElement};

/// Per-mesh element-operator norms and their fitted slopes.
#[derive(Debug, Clone)]
pub struct OperatorScaling {
    pub h: Vec<f64>,
    pub h_norm: Vec<f64>,
    pub q_norm: Vec<f64>,
    pub d_norm: Vec<f64>,
    pub h_slope: FitResult,
    pub q_slope: FitResult,
    pub d_slope: FitResult,
}

/// Fit the element-operator norm slopes over a family of meshes on [0, 1].
pub fn operator_scaling_study(p: usize, n_e_list: &[usize]) -> Result<OperatorScaling> {
    if n_e_list.len() < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n_e_list.len() });
    }
    let reference = ReferenceElement::new(p)?;
    let mut h = Vec::with_capacity(n_e_list.len());
    let mut h_norm = Vec::new();
    let mut q_norm = Vec::new();
    let mut d_norm = Vec::new();
    for &n_e in n_e_list {
        let mesh = PeriodicMesh::new(0.0, 1.0, n_e, reference.n_nodes())?;
        let gop = assemble_global(&mesh, &reference)?;
        h.push(mesh.spacing());
        // diagonal H: induced 2-norm is the max weight
        h_norm.push(gop.element_h_diag().iter().fold(0.0f64, |m, w| m.max(*w)));
        q_norm.push(gop.q_elem_norm());
        // physical D_k = (2/h) D_ref
        d_norm.push(2.0 / mesh.spacing() * two_norm(reference.d())?);
    }
    Ok(OperatorScaling {
        h_slope: fit_order(&h, &h_norm)?,
        q_slope: fit_order(&h, &q_norm)?,
        d_slope: fit_order(&h, &d_norm)?,
        h,
        h_norm,
        q_norm,
        d_norm,
    })
}
