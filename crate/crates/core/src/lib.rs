//! Entropy-stable split-form continuous summation-by-parts (C-SBP)
//! discretizations of scalar and symmetric hyperbolic conservation laws with
//! homogeneous fluxes on periodic 1D meshes, together with the machinery to
//! compute and validate Riccati-type a-priori error envelopes: bound
//! constants, mesh-scaling laws, closed-form envelope solutions, blow-up
//! times, and convergence under refinement.
//!
//! Module map:
//! - [`sbp`]: reference LGL operators and global periodic assembly
//! - [`flux`]: Burgers and a symmetric two-component homogeneous flux, with
//!   exact characteristic solutions
//! - [`disc`]: split-form semi-discretization, discrete energy, truncation
//!   error, RK4 integration
//! - [`bounds`]: bound constants, Riccati coefficients, term-by-term
//!   inequality verification
//! - [`riccati`]: closed-form envelope solutions and blow-up times
//! - [`harness`]: convergence/scaling studies, slope fitting, CSV/JSON output

pub mod bounds;
pub mod disc;
pub mod error;
pub mod flux;
pub mod harness;
pub mod riccati;
pub mod sbp;

pub use error::{Error, Result};
