//! Geometry and geodesics of the homogeneous nearly Kähler S³×S³.
//!
//! - [`quat`]: quaternion algebra and the frame-to-rotation solver.
//! - [`manifold`]: points, tangents, the metrics `g` and `⟨·,·⟩`, the
//!   structures `J`, `P`, `Q`, the tensor `G = ∇J` and the frame tables.
//! - [`geodesics`]: classification of initial data and closed-form geodesics.
//! - [`oracle`]: RK4 integration of the reduced system and residual checks.
//! - [`checks`]: verification suites driven by the `nkgeo verify` command.

pub mod checks;
pub mod cli;
pub mod error;
pub mod geodesics;
pub mod manifold;
pub mod oracle;
pub mod quat;
pub mod rational;
pub mod sampling;
pub mod tol;

pub use error::{Error, Result};
