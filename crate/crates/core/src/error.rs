//! Error type shared by every module.

/// Errors reported by the library.
///
/// Validation errors say which invariant failed and by how much, so a
/// caller can distinguish "slightly out of tolerance" from "garbage input".
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A vector or matrix had the wrong length/size for the ambient space.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The zero vector has no point class and no projective image.
    #[error("the zero vector has no point class")]
    ZeroVector,

    /// Coordinates do not describe a point strictly inside the unit ball.
    #[error("point is not strictly inside the unit ball: |z|^2 = {norm_sq:.17} >= 1 - 1e-12")]
    NotInBall { norm_sq: f64 },

    /// Projection to the ball is undefined (non-negative self-pairing or a
    /// vanishing last coordinate).
    #[error(
        "projection to the ball undefined: self-pairing {pairing:.3e} (must be negative), \
         last coordinate modulus {last_abs:.3e} (must be nonzero)"
    )]
    ProjectionUndefined { pairing: f64, last_abs: f64 },

    /// The matrix does not preserve the Hermitian form to tolerance.
    #[error(
        "form preservation violated: relative residual |A* J A - J| / |J| = {residual:.3e} \
         exceeds tolerance {tol:.3e}"
    )]
    FormViolation { residual: f64, tol: f64 },

    /// The matrix determinant is not 1 to tolerance.
    #[error("determinant violates the special normalization: |det - 1| = {residual:.3e} exceeds {tol:.3e}")]
    DeterminantViolation { residual: f64, tol: f64 },

    /// A matrix argument had an invalid shape.
    #[error("matrix must be square of size n+1 >= 2, got {rows}x{cols}")]
    MatrixShape { rows: usize, cols: usize },

    /// The matrix is not unitary to the required tolerance.
    #[error("matrix is not unitary: residual |A* A - I| = {residual:.3e} exceeds {tol:.3e}")]
    NotUnitary { residual: f64, tol: f64 },

    /// A parameter is outside its documented domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A search-space guard tripped before the computation started.
    #[error("resource guard: {0}")]
    ResourceLimit(String),

    /// An eigenvalue / singular-value routine failed to converge, or a
    /// computed quantity failed an internal consistency check.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The unitary witness produced for a distance certificate failed the
    /// origin-stabilization check.
    #[error("witness failed the origin-stabilization check: residual {residual:.3e} exceeds 1e-8")]
    OriginStabilization { residual: f64 },

    /// No approximation quality in the requested range yields a feasible
    /// displacement bound.
    #[error(
        "no feasible approximation quality in [{q_min}, {q_max}]: the small-displacement limit \
         2*pi/Q must drop below omega = {omega:.10}; widen the range upward"
    )]
    NoFeasibleQ { q_min: f64, q_max: f64, omega: f64 },

    /// A matrix file or inline matrix string failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// Unknown verification suite name.
    #[error("unknown verification suite '{0}' (expected one of: hermitian, isometry, norms, approx, bounds, volume)")]
    UnknownSuite(String),

    /// Unknown verification check name in a replay request.
    #[error("unknown verification check '{0}'")]
    UnknownCheck(String),
}

/// Convenience alias used by every fallible operation in the crate.
pub type Result<T> = std::result::Result<T, Error>;
