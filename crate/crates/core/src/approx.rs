//! Simultaneous rational approximation and finite-order approximation of
//! unitary matrices.
//!
//! [`dirichlet_approx`] finds, for angles `theta_1..theta_m` and a quality
//! `Q > 1`, a single denominator `1 <= q <= Q^m` with
//! `|theta_i - p_i / q| <= 1 / (q Q)` for every coordinate — the classical
//! pigeonhole argument, run constructively.
//!
//! [`finite_order_approx`] applies this to the eigenvalue angles of a
//! unitary matrix `A`, producing `B` with `B^q = Id` and
//! `|A / phase - B| <= 2 pi / (q Q)`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg;
use crate::norms::{matrix_power, operator_norm};
use crate::{CMat, C64};

const TAU: f64 = std::f64::consts::TAU;

/// Hard cap on `Q^m` (the denominator search space).
pub const MAX_QM: f64 = 1e7;
/// Hard cap on the number of pigeonhole boxes `ceil(Q)^m`.
pub const MAX_BOXES: u64 = 100_000_000;

/// A simultaneous rational approximation with one denominator.
#[derive(Clone, Debug)]
pub struct RationalApprox {
    /// Common denominator, `1 <= q <= Q^m`.
    pub q: u64,
    /// Numerators, one per angle, each in `[0, q]`.
    pub p: Vec<i64>,
    /// `max_i |theta_i - p_i / q|`, certified `<= 1 / (q Q) + 1e-15`.
    pub max_err: f64,
    /// The quality parameter `Q` the certificate refers to.
    pub quality: f64,
}

impl RationalApprox {
    /// Number of simultaneously approximated angles.
    pub fn m(&self) -> usize {
        self.p.len()
    }
}

fn check_certificate(thetas: &[f64], q: u64, quality: f64) -> Option<RationalApprox> {
    let m = thetas.len() as i32;
    if q == 0 || (q as f64) > quality.powi(m) {
        return None;
    }
    let qf = q as f64;
    let mut p = Vec::with_capacity(thetas.len());
    let mut max_err = 0.0f64;
    for &th in thetas {
        let pi = (qf * th).round();
        let err = (qf * th - pi).abs() / qf;
        max_err = max_err.max(err);
        p.push(pi as i64);
    }
    if max_err <= 1.0 / (qf * quality) + 1e-15 {
        Some(RationalApprox {
            q,
            p,
            max_err,
            quality,
        })
    } else {
        None
    }
}

/// Simultaneous rational approximation by pigeonhole.
///
/// Walks the fractional-part vectors of `q' theta` for
/// `q' = 0, 1, ..., ceil(Q)^m` through a grid with `ceil(Q)` cells per
/// axis; the first box collision yields the denominator. If the collision
/// denominator fails the certificate (possible only for non-integer `Q`,
/// where the grid is slightly coarser than requested), an exhaustive scan
/// over `q <= Q^m` — guaranteed to succeed by the convex-body theorem —
/// finds a certified one.
///
/// Requires `theta_i` in `[0, 1]`, `Q > 1`, and guards the search space:
/// `Q^m <= 1e7` and `ceil(Q)^m <= 1e8`.
pub fn dirichlet_approx(thetas: &[f64], quality: f64) -> Result<RationalApprox> {
    if thetas.is_empty() {
        return Err(Error::InvalidInput(
            "simultaneous approximation needs at least one angle".into(),
        ));
    }
    for (i, &th) in thetas.iter().enumerate() {
        if !th.is_finite() || !(0.0..=1.0).contains(&th) {
            return Err(Error::InvalidInput(format!(
                "angle {i} out of range: theta = {th} (need 0 <= theta <= 1)"
            )));
        }
    }
    if quality.is_nan() || quality <= 1.0 || !quality.is_finite() {
        return Err(Error::InvalidInput(format!(
            "approximation quality must satisfy Q > 1, got {quality}"
        )));
    }
    let m = thetas.len();
    let qm = quality.powi(m as i32);
    if qm > MAX_QM {
        return Err(Error::ResourceLimit(format!(
            "denominator space Q^m = {qm:.3e} exceeds {MAX_QM:.0e}"
        )));
    }
    let cells = quality.ceil() as u64;
    let boxes = (0..m).try_fold(1u64, |acc, _| {
        acc.checked_mul(cells).filter(|b| *b <= MAX_BOXES)
    });
    let Some(boxes) = boxes else {
        return Err(Error::ResourceLimit(format!(
            "pigeonhole grid ceil(Q)^m = {cells}^{m} exceeds {MAX_BOXES:.0e}"
        )));
    };

    // Pigeonhole walk: `boxes + 1` vectors must produce a collision.
    let mut seen: HashMap<u64, u64> = HashMap::with_capacity(boxes.min(1 << 20) as usize + 1);
    let mut collision: Option<u64> = None;
    'walk: for qp in 0..=boxes {
        let mut index = 0u64;
        for &th in thetas {
            let frac = (qp as f64 * th).fract();
            let cell = ((frac * cells as f64).floor() as u64).min(cells - 1);
            index = index * cells + cell;
        }
        if let Some(first) = seen.insert(index, qp) {
            collision = Some(qp - first);
            break 'walk;
        }
    }
    if let Some(q) = collision {
        if let Some(found) = check_certificate(thetas, q, quality) {
            return Ok(found);
        }
    }

    // Certificate fallback (non-integer Q): exhaustive scan. Existence of
    // a certified denominator q <= Q^m is guaranteed, so this terminates.
    let q_cap = qm.floor() as u64;
    for q in 1..=q_cap {
        if let Some(found) = check_certificate(thetas, q, quality) {
            return Ok(found);
        }
    }
    Err(Error::Numerical(
        "exhaustive denominator scan found no certified approximation".into(),
    ))
}

/// Which eigenvalue angles a finite-order approximation must match.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApproxMode {
    /// Approximate all `n` angles (`m = n`).
    FullSpectrum,
    /// Divide out the eigenvalue closest to 1 first and approximate the
    /// remaining `m = n - 1` relative angles. This is the projectively
    /// natural mode: the normalized input has a fixed eigenvalue exactly 1,
    /// so the approximant never wastes denominator on a global phase.
    Projective,
}

/// A finite-order unitary approximation of a unitary matrix.
#[derive(Clone, Debug)]
pub struct FiniteOrderApprox {
    /// The approximant; satisfies `B^q = Id`.
    pub b: CMat,
    /// The order (the common denominator of the approximated angles).
    pub q: u64,
    /// `|A / phase - B|` in the operator norm, `<= 2 pi / (q Q)`.
    pub err: f64,
    /// The mode the approximation ran in.
    pub mode: ApproxMode,
    /// Unit scalar divided out of `A` before approximating (1 in
    /// full-spectrum mode).
    pub phase: C64,
    /// Signed angle mismatches `theta_j - p_j / q` (wrapped to
    /// `[-1/2, 1/2)`), one per eigenvalue, in ascending-angle order.
    pub angle_errors: Vec<f64>,
    /// The underlying rational approximation of the deduplicated angles.
    pub rational: RationalApprox,
}

/// Order cap below which `B^q = Id` is verified by repeated
/// multiplication at construction (about `17^4`).
const ORDER_CHECK_CAP: u64 = 90_000;

/// Approximates a unitary matrix by one of finite order.
///
/// The eigenvalue angles are sorted ascending in `[0, 1)`; angles closer
/// than `1e-12` (circularly) are approximated jointly, so conjugation
/// covariance survives repeated eigenvalues. Certifies before returning:
/// the rational approximation certificate, `|A / phase - B| <= 2 pi / (qQ)`
/// (plus numerical slack), and `|B^q - Id| <= 1e-9` for orders up to
/// `~17^4`.
pub fn finite_order_approx(a: &CMat, quality: f64, mode: ApproxMode) -> Result<FiniteOrderApprox> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(Error::MatrixShape {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let unit_dev = operator_norm(&(a.adjoint() * a - CMat::identity(n, n)))?;
    if unit_dev > 1e-10 {
        return Err(Error::NotUnitary {
            residual: unit_dev,
            tol: 1e-10,
        });
    }

    let (v, angles) = linalg::unitary_eigendecomposition(a)?;

    // Projective mode: rotate the spectrum so the eigenvalue closest to 1
    // lands exactly at angle 0 and is excluded from approximation.
    let slot = match mode {
        ApproxMode::FullSpectrum => None,
        ApproxMode::Projective => {
            let idx = (0..n)
                .min_by(|&i, &j| {
                    let di = angles[i].min(1.0 - angles[i]);
                    let dj = angles[j].min(1.0 - angles[j]);
                    di.total_cmp(&dj)
                })
                .expect("nonempty spectrum");
            Some(idx)
        }
    };
    let phase = match slot {
        Some(idx) => C64::from_polar(1.0, TAU * angles[idx]),
        None => C64::new(1.0, 0.0),
    };
    let shifted: Vec<f64> = match slot {
        Some(idx) => angles
            .iter()
            .map(|&th| (th - angles[idx]).rem_euclid(1.0))
            .collect(),
        None => angles.clone(),
    };

    // Deduplicate the target angles (circularly) so repeated eigenvalues
    // share one numerator.
    let mut reps: Vec<f64> = Vec::new();
    let mut assignment: Vec<Option<usize>> = vec![None; n];
    for j in 0..n {
        if Some(j) == slot {
            continue;
        }
        let th = shifted[j];
        let found = reps.iter().position(|&r| {
            let d = (th - r).abs();
            d.min(1.0 - d) <= 1e-12
        });
        let ri = match found {
            Some(ri) => ri,
            None => {
                reps.push(th);
                reps.len() - 1
            }
        };
        assignment[j] = Some(ri);
    }

    let rational = if reps.is_empty() {
        RationalApprox {
            q: 1,
            p: Vec::new(),
            max_err: 0.0,
            quality,
        }
    } else {
        dirichlet_approx(&reps, quality)?
    };
    let q = rational.q;
    let qf = q as f64;

    // Assemble B = V diag(exp(2 pi i p_j / q)) V* and the angle errors.
    let mut diag = CMat::zeros(n, n);
    let mut angle_errors = vec![0.0f64; n];
    for j in 0..n {
        let mu = match assignment[j] {
            None => C64::new(1.0, 0.0),
            Some(ri) => {
                let p = rational.p[ri] as f64;
                let mut delta = shifted[j] - p / qf;
                if delta >= 0.5 {
                    delta -= 1.0;
                } else if delta < -0.5 {
                    delta += 1.0;
                }
                angle_errors[j] = delta;
                C64::from_polar(1.0, TAU * p / qf)
            }
        };
        diag[(j, j)] = mu;
    }
    let b = &v * diag * v.adjoint();

    let a_normalized = a.map(|z| z / phase);
    let err = operator_norm(&(&a_normalized - &b))?;
    let budget = TAU / (qf * quality) + 1e-12;
    if err > budget {
        return Err(Error::Numerical(format!(
            "finite-order certificate failed: err = {err:.3e} exceeds 2 pi / (q Q) = {budget:.3e}"
        )));
    }
    if q <= ORDER_CHECK_CAP {
        let drift = operator_norm(&(matrix_power(&b, q) - CMat::identity(n, n)))?;
        if drift > 1e-9 {
            return Err(Error::Numerical(format!(
                "approximant failed the finite-order check: |B^q - Id| = {drift:.3e}"
            )));
        }
    }

    Ok(FiniteOrderApprox {
        b,
        q,
        err,
        mode,
        phase,
        angle_errors,
        rational,
    })
}
