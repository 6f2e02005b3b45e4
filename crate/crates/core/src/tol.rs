//! Numerical tolerances shared by constructors, classifiers and checks.

/// Allowed deviation of |q| from 1 for a unit quaternion.
pub const UNIT: f64 = 1e-12;

/// Gram-matrix deviation accepted by [`crate::quat::rotation_from_frame`].
pub const FRAME: f64 = 1e-9;

/// Tangency defects below this are projected away; above it inputs are rejected.
pub const TANGENT_PROJECT: f64 = 1e-8;

/// Componentwise agreement required for two base points to be "the same".
pub const BASE_MATCH: f64 = 1e-12;

/// Relative threshold under which the conserved sum or the transverse
/// difference counts as zero during classification.
pub const CLASSIFY_ZERO: f64 = 1e-10;

/// Relative tolerance for deciding that a frequency ratio is rational.
pub const RATIONAL: f64 = 1e-9;

/// Default denominator cap for the rationality test.
///
/// Keep `DEFAULT_MAX_DENOMINATOR^2 < 1 / RATIONAL`, otherwise Dirichlet's
/// approximation theorem makes every real number look rational.
pub const DEFAULT_MAX_DENOMINATOR: u64 = 10_000;

/// Default RK4 step.
pub const RK4_STEP: f64 = 1e-3;

/// Default central-difference step for the geodesic residual.
pub const FD_STEP: f64 = 1e-4;
