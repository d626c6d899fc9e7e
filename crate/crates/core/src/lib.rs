//! Numerical toolkit for the ball model of complex hyperbolic space.
//!
//! The crate is organized around a constructive chain:
//!
//! 1. [`hermitian`] — the signature-(n,1) Hermitian form, the unit ball
//!    model, and the Bergman distance;
//! 2. [`isometry`] — matrices preserving the form (holomorphic isometries),
//!    boosts, rotations, classification, and random sampling;
//! 3. [`norms`] — operator norms and the certificate expressing how far an
//!    isometry is from a unitary stabilizing the origin;
//! 4. [`approx`] — simultaneous rational approximation by pigeonhole and
//!    finite-order approximation of unitary matrices;
//! 5. [`bounds`] — the explicit constants and the quantitative bound that
//!    combine the previous steps into a uniform displacement estimate;
//! 6. [`volume`] — odd-sphere and hyperbolic-ball volumes, in double and
//!    extended precision, and the resulting manifold volume lower bounds;
//! 7. [`verify`] — seeded, replayable property suites covering the
//!    invariants of every module.
//!
//! Matrices are dense, complex, double precision (`nalgebra`); the bounds
//! and volume modules additionally use 192-bit floating point internally
//! where double precision would underflow or lose the leading digits.

pub mod approx;
pub mod bounds;
pub mod error;
mod ext;
pub mod hermitian;
pub mod isometry;
mod linalg;
pub mod matfile;
pub mod norms;
pub mod verify;
pub mod volume;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dynamically sized complex matrix.
pub type CMat = nalgebra::DMatrix<C64>;
/// Dynamically sized complex column vector.
pub type CVec = nalgebra::DVector<C64>;
