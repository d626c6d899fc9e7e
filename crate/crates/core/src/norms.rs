//! Operator norms and unitary-distance certificates.
//!
//! The key quantitative facts wrapped here:
//!
//! * an isometry moving the origin Bergman distance `2 ln r` factors as a
//!   boost times a unitary stabilizer, giving `|A - O| <= r (r - 1)` for an
//!   explicit origin-stabilizing witness `O`, and `|A| <= r`;
//! * powers amplify a perturbation at a controlled geometric rate:
//!   `|A^q - B^q| <= (r^q - 1) / (r - 1) * |A - B|` when `B` is unitary and
//!   `|A| <= r`.

use crate::error::{Error, Result};
use crate::hermitian::{bergman_distance, BallPoint};
use crate::isometry::{apply, boost, BoostParams, ComplexIsometry};
use crate::linalg;
use crate::{CMat, C64};

/// Largest eigenvalue modulus.
pub fn spectral_radius(m: &CMat) -> Result<f64> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::MatrixShape {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(linalg::eigenvalues(m)?
        .iter()
        .map(|e| e.norm())
        .fold(0.0f64, f64::max))
}

/// Eigenvalue moduli in descending order.
pub fn eigenvalue_moduli(m: &CMat) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::MatrixShape {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let mut moduli: Vec<f64> = linalg::eigenvalues(m)?.iter().map(|e| e.norm()).collect();
    moduli.sort_by(|a, b| b.total_cmp(a));
    Ok(moduli)
}

/// Spectral operator norm (largest singular value).
pub fn operator_norm(m: &CMat) -> Result<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::MatrixShape {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(linalg::singular_values(m)?[0])
}

/// `m^q` by repeated multiplication.
pub fn matrix_power(m: &CMat, q: u64) -> CMat {
    linalg::matrix_power(m, q)
}

/// Certificate for the distance from an isometry to the unitary subgroup
/// stabilizing the origin.
#[derive(Clone, Debug)]
pub struct UnitaryDistanceCertificate {
    /// Origin-stabilizing witness: block-diagonal with a unitary `n x n`
    /// block and a unit-modulus last diagonal entry.
    pub witness: CMat,
    /// The achieved distance `|A - witness|`.
    pub actual: f64,
    /// The guaranteed bound `r (r - 1) >= actual`.
    pub bound: f64,
    /// `exp(rho(0, A 0) / 2)`, also an upper bound for `|A|`.
    pub r: f64,
}

/// Produces an origin-stabilizing unitary witness for `A` along with the
/// distance `|A - witness|` and its closed-form bound `r (r - 1)`.
///
/// When `A` barely moves the origin (`r < 1 + 1e-12`) the witness is `A`
/// itself and the distance is reported as 0: at that scale the factor
/// `B^{-1}` is the identity to working precision. Otherwise the witness is
/// `B^{-1} A` where `B` boosts the origin to `A 0`; it is checked to
/// stabilize the origin within `1e-8` before being returned.
pub fn dist_to_unitary(a: &ComplexIsometry) -> Result<UnitaryDistanceCertificate> {
    let n = a.n();
    let origin = BallPoint::origin(n);
    let image = apply(a, &origin)?;
    let rho = bergman_distance(&origin, &image)?;
    let r = (rho / 2.0).exp();

    let (witness, actual) = if r - 1.0 < 1e-12 {
        (a.matrix().clone(), 0.0)
    } else {
        let norm = image.coords().norm();
        let direction: Vec<C64> = image
            .coords()
            .iter()
            .map(|z| z / C64::new(norm, 0.0))
            .collect();
        let b = boost(&BoostParams { r, direction })?;
        let witness = b.inverse().matrix() * a.matrix();
        let actual = operator_norm(&(a.matrix() - &witness))?;
        (witness, actual)
    };

    // The witness must stabilize the origin: its last column must be
    // proportional to the last basis vector.
    let mut off = 0.0f64;
    for i in 0..n {
        off += witness[(i, n)].norm_sqr();
    }
    let last = witness[(n, n)].norm();
    let residual = if last == 0.0 {
        f64::INFINITY
    } else {
        off.sqrt() / last
    };
    if residual > 1e-8 {
        return Err(Error::OriginStabilization { residual });
    }

    Ok(UnitaryDistanceCertificate {
        witness,
        actual,
        bound: r * (r - 1.0),
        r,
    })
}

/// Result of checking the geometric-series power bound.
#[derive(Clone, Copy, Debug)]
pub struct PowerBoundCheck {
    /// `|A^q - B^q|`.
    pub lhs: f64,
    /// `(r^q - 1) / (r - 1) * |A - B|`, with the algebraic limit `q |A - B|`
    /// used when `|r - 1| < 1e-12`.
    pub rhs: f64,
    /// Whether `lhs <= rhs + 1e-9`.
    pub holds: bool,
}

/// Evaluates both sides of `|A^q - B^q| <= (r^q - 1)/(r - 1) |A - B|`
/// where `r = exp(rho(0, A 0) / 2) >= |A|` and `B` must be unitary
/// (within `1e-8`).
///
/// Powers are computed by repeated multiplication; `q >= 1` is required.
pub fn power_difference_bound_check(
    a: &ComplexIsometry,
    b: &CMat,
    q: u64,
) -> Result<PowerBoundCheck> {
    if q == 0 {
        return Err(Error::InvalidInput("power bound needs q >= 1".into()));
    }
    let k = a.matrix().nrows();
    if b.nrows() != k || b.ncols() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: b.nrows(),
        });
    }
    let unit_dev = operator_norm(&(b.adjoint() * b - CMat::identity(k, k)))?;
    if unit_dev > 1e-8 {
        return Err(Error::NotUnitary {
            residual: unit_dev,
            tol: 1e-8,
        });
    }

    let origin = BallPoint::origin(a.n());
    let rho = bergman_distance(&origin, &apply(a, &origin)?)?;
    let r = (rho / 2.0).exp();

    let factor = if (r - 1.0).abs() < 1e-12 {
        q as f64
    } else {
        (r.powf(q as f64) - 1.0) / (r - 1.0)
    };
    let diff = operator_norm(&(a.matrix() - b))?;
    let lhs = operator_norm(&(matrix_power(a.matrix(), q) - matrix_power(b, q)))?;
    let rhs = factor * diff;
    Ok(PowerBoundCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-9,
    })
}

/// The displacement-commutation quantity `|A| * |A - Id|`.
///
/// Values below the explicit threshold constant (see the bounds module)
/// certify that `A` generates indiscretely or fixes a point — the quantity
/// the main estimate pushes below threshold for powers of approximable
/// isometries.
pub fn jorgensen_quantity(a: &ComplexIsometry) -> Result<f64> {
    let k = a.matrix().nrows();
    let norm = operator_norm(a.matrix())?;
    let dev = operator_norm(&(a.matrix() - CMat::identity(k, k)))?;
    Ok(norm * dev)
}
