//! Signature-(n,1) Hermitian form, the unit-ball model, and the Bergman
//! distance.
//!
//! Points of the geometry live in the open unit ball of `C^n`. They are
//! handled through *lifts*: vectors in `C^{n+1}` on which the indefinite
//! Hermitian form
//!
//! ```text
//! <z, w> = z_1 conj(w_1) + ... + z_n conj(w_n) - z_{n+1} conj(w_{n+1})
//! ```
//!
//! is evaluated. Lifts with negative self-pairing project to ball points;
//! null lifts correspond to boundary directions. All distance formulas are
//! ratios of pairings, hence independent of the choice of lift.

use crate::error::{Error, Result};
use crate::{CMat, CVec, C64};

/// Points whose squared Euclidean norm exceeds `1 - BALL_BOUNDARY_MARGIN`
/// are rejected as numerically indistinguishable from boundary points.
pub const BALL_BOUNDARY_MARGIN: f64 = 1e-12;

/// The Hermitian form of signature (n, 1) on `C^{n+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignatureForm {
    n: usize,
}

impl SignatureForm {
    /// Form for the ball in `C^n`; requires `n >= 1`.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput(
                "the form needs at least one positive direction (n >= 1)".into(),
            ));
        }
        Ok(Self { n })
    }

    /// Complex dimension of the ball.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of the space of lifts, `n + 1`.
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    /// The diagonal matrix `J = diag(1, ..., 1, -1)` representing the form.
    pub fn j_matrix(&self) -> CMat {
        let d = self.dim();
        CMat::from_fn(d, d, |i, j| {
            if i != j {
                C64::new(0.0, 0.0)
            } else if i == d - 1 {
                C64::new(-1.0, 0.0)
            } else {
                C64::new(1.0, 0.0)
            }
        })
    }
}

/// A vector in `C^{n+1}` tagged with the form it is paired under.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianVector {
    form: SignatureForm,
    coords: CVec,
}

impl HermitianVector {
    /// Wraps coordinates of length `n + 1`.
    pub fn new(form: SignatureForm, coords: Vec<C64>) -> Result<Self> {
        if coords.len() != form.dim() {
            return Err(Error::DimensionMismatch {
                expected: form.dim(),
                got: coords.len(),
            });
        }
        Ok(Self {
            form,
            coords: CVec::from_vec(coords),
        })
    }

    /// Wraps an existing column vector of length `n + 1`.
    pub fn from_column(form: SignatureForm, coords: CVec) -> Result<Self> {
        if coords.len() != form.dim() {
            return Err(Error::DimensionMismatch {
                expected: form.dim(),
                got: coords.len(),
            });
        }
        Ok(Self { form, coords })
    }

    /// The form this vector is paired under.
    pub fn form(&self) -> SignatureForm {
        self.form
    }

    /// Coordinates as a column vector.
    pub fn coords(&self) -> &CVec {
        &self.coords
    }

    /// Rescales the vector by a scalar (lifts are projective objects).
    pub fn scaled(&self, c: C64) -> Self {
        Self {
            form: self.form,
            coords: &self.coords * c,
        }
    }
}

/// Sign class of a vector under the indefinite form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointClass {
    /// Negative self-pairing: projects to an interior ball point.
    Negative,
    /// Self-pairing zero to tolerance: a boundary direction.
    Null,
    /// Positive self-pairing: a polar (outside) direction.
    Positive,
}

/// The indefinite pairing `<z, w>`.
///
/// Linear in the first argument, conjugate-linear in the second:
/// `<w, z> = conj(<z, w>)`.
pub fn herm_product(z: &HermitianVector, w: &HermitianVector) -> Result<C64> {
    if z.form != w.form {
        return Err(Error::DimensionMismatch {
            expected: z.form.dim(),
            got: w.form.dim(),
        });
    }
    let n = z.form.n();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        acc += z.coords[i] * w.coords[i].conj();
    }
    acc -= z.coords[n] * w.coords[n].conj();
    Ok(acc)
}

/// A point strictly inside the unit ball of `C^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct BallPoint {
    coords: CVec,
}

impl BallPoint {
    /// Validates that the squared Euclidean norm is `< 1 - 1e-12`.
    pub fn new(coords: Vec<C64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput(
                "a ball point needs n >= 1 coordinates".into(),
            ));
        }
        let v = CVec::from_vec(coords);
        let norm_sq = v.norm_squared();
        if norm_sq.is_nan() || norm_sq >= 1.0 - BALL_BOUNDARY_MARGIN {
            return Err(Error::NotInBall { norm_sq });
        }
        Ok(Self { coords: v })
    }

    /// The center of the ball in `C^n`.
    pub fn origin(n: usize) -> Self {
        Self {
            coords: CVec::zeros(n.max(1)),
        }
    }

    /// Complex dimension of the ambient ball.
    pub fn n(&self) -> usize {
        self.coords.len()
    }

    /// Coordinates in `C^n`.
    pub fn coords(&self) -> &CVec {
        &self.coords
    }

    /// Squared Euclidean norm of the coordinates.
    pub fn norm_squared(&self) -> f64 {
        self.coords.norm_squared()
    }
}

/// The standard lift `(z, 1)` of a ball point.
pub fn standard_lift(p: &BallPoint) -> HermitianVector {
    let form = SignatureForm { n: p.n() };
    let mut coords = CVec::zeros(p.n() + 1);
    coords.rows_mut(0, p.n()).copy_from(&p.coords);
    coords[p.n()] = C64::new(1.0, 0.0);
    HermitianVector { form, coords }
}

/// Projects a negative vector with nonzero last coordinate back to the ball.
///
/// Inverse of [`standard_lift`] up to scaling: `project(lift(p)) == p`.
pub fn project_to_ball(v: &HermitianVector) -> Result<BallPoint> {
    let pairing = herm_product(v, v)?.re;
    let n = v.form.n();
    let last = v.coords[n];
    let last_abs = last.norm();
    if pairing >= 0.0 || last_abs == 0.0 {
        return Err(Error::ProjectionUndefined { pairing, last_abs });
    }
    let coords: Vec<C64> = (0..n).map(|i| v.coords[i] / last).collect();
    BallPoint::new(coords)
}

/// Classifies a nonzero vector as negative, null, or positive.
///
/// The self-pairing is compared against `tol * |v|^2` where `|v|^2` is the
/// Euclidean norm squared, so the verdict is scale invariant. Pass
/// `tol = 1e-10` for the default calibration.
pub fn point_class(v: &HermitianVector, tol: f64) -> Result<PointClass> {
    let euclid = v.coords.norm_squared();
    if euclid == 0.0 {
        return Err(Error::ZeroVector);
    }
    let pairing = herm_product(v, v)?.re;
    if pairing.abs() <= tol * euclid {
        Ok(PointClass::Null)
    } else if pairing < 0.0 {
        Ok(PointClass::Negative)
    } else {
        Ok(PointClass::Positive)
    }
}

/// Bergman distance between two ball points (holomorphic sectional
/// curvature -1 normalization):
///
/// ```text
/// cosh^2(rho / 2) = <x, y> <y, x> / (<x, x> <y, y>)
/// ```
///
/// The distance from the origin to `(t, 0, ..., 0)` is `2 artanh t`.
pub fn bergman_distance(x: &BallPoint, y: &BallPoint) -> Result<f64> {
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch {
            expected: x.n(),
            got: y.n(),
        });
    }
    bergman_distance_lifts(&standard_lift(x), &standard_lift(y))
}

/// Bergman distance evaluated directly on two negative lifts.
///
/// The cross-ratio `<x,y><y,x> / (<x,x><y,y>)` is invariant under rescaling
/// either lift, so any representatives work. Rounding can push the ratio
/// slightly below its mathematical minimum 1; it is clamped, making the
/// distance of a point to itself exactly 0.
pub fn bergman_distance_lifts(x: &HermitianVector, y: &HermitianVector) -> Result<f64> {
    let xy = herm_product(x, y)?;
    let xx = herm_product(x, x)?.re;
    let yy = herm_product(y, y)?.re;
    if xx >= 0.0 || yy >= 0.0 {
        return Err(Error::ProjectionUndefined {
            pairing: xx.max(yy),
            last_abs: f64::NAN,
        });
    }
    let q = xy.norm_sqr() / (xx * yy);
    let q = q.max(1.0);
    Ok(2.0 * q.sqrt().acosh())
}
