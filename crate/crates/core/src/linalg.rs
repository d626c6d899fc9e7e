//! Internal dense linear-algebra helpers shared across modules.
//!
//! Everything here wraps `nalgebra` factorizations with explicit failure
//! paths (no panics) and with the post-processing the rest of the crate
//! needs: sorted eigen-angles for unitary matrices, nullspace extraction at
//! a tolerance, and integer matrix powers by repeated multiplication.

use crate::error::{Error, Result};
use crate::{CMat, CVec, C64};

const MAX_EIG_ITERS: usize = 10_000;

/// Deflation thresholds tried in order: the QR iteration occasionally
/// stalls at machine epsilon (the subdiagonal plateaus just above it), while
/// a slightly coarser threshold converges with the same backward-stable
/// accuracy.
const SCHUR_EPS_LADDER: [f64; 4] = [f64::EPSILON, 1e-15, 1e-14, 1e-13];

fn schur_of(m: &CMat) -> Result<nalgebra::Schur<C64, nalgebra::Dyn>> {
    for eps in SCHUR_EPS_LADDER {
        if let Some(s) = m.clone().try_schur(eps, MAX_EIG_ITERS) {
            return Ok(s);
        }
    }
    Err(Error::Numerical("Schur iteration did not converge".into()))
}

/// Eigenvalues of a general complex square matrix via the Schur form.
pub(crate) fn eigenvalues(m: &CMat) -> Result<Vec<C64>> {
    let vals = schur_of(m)?
        .eigenvalues()
        .ok_or_else(|| Error::Numerical("Schur form did not expose eigenvalues".into()))?;
    Ok(vals.iter().copied().collect())
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// The input is symmetrized as `(H + H*) / 2` first, so callers may pass a
/// product like `M* M` without worrying about rounding asymmetry.
pub(crate) fn hermitian_eigenvalues(h: &CMat) -> Result<Vec<f64>> {
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = SCHUR_EPS_LADDER
        .iter()
        .find_map(|&eps| sym.clone().try_symmetric_eigen(eps, MAX_EIG_ITERS))
        .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    Ok(vals)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub(crate) fn hermitian_min_eigenvalue(h: &CMat) -> Result<f64> {
    Ok(hermitian_eigenvalues(h)?[0])
}

/// Singular values, descending.
pub(crate) fn singular_values(m: &CMat) -> Result<Vec<f64>> {
    let svd = SCHUR_EPS_LADDER
        .iter()
        .find_map(|&eps| m.clone().try_svd(false, false, eps, MAX_EIG_ITERS))
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let mut vals: Vec<f64> = svd.singular_values.iter().copied().collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok(vals)
}

/// 2-norm condition number (largest over smallest singular value).
pub(crate) fn condition_number(m: &CMat) -> Result<f64> {
    let sv = singular_values(m)?;
    let (max, min) = (sv[0], sv[sv.len() - 1]);
    if min == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(max / min)
}

/// Orthonormal basis of the right nullspace of `m` at tolerance `tol`,
/// together with the full list of singular values (descending).
pub(crate) fn nullspace_basis(m: &CMat, tol: f64) -> Result<(Vec<CVec>, Vec<f64>)> {
    let svd = SCHUR_EPS_LADDER
        .iter()
        .find_map(|&eps| m.clone().try_svd(false, true, eps, MAX_EIG_ITERS))
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::Numerical("SVD did not return right singular vectors".into()))?;
    let mut pairs: Vec<(f64, usize)> = svd
        .singular_values
        .iter()
        .copied()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let basis = pairs
        .iter()
        .filter(|(s, _)| *s <= tol)
        .map(|(_, i)| v_t.row(*i).adjoint())
        .collect();
    Ok((basis, pairs.into_iter().map(|(s, _)| s).collect()))
}

/// Eigendecomposition `A = V diag(exp(2 pi i theta_j)) V*` of a unitary
/// matrix.
///
/// Returns the angles `theta_j` in `[0, 1)` sorted ascending with the
/// columns of `V` permuted to match, and verifies the reconstruction
/// residual so a silently wrong factorization cannot propagate.
pub(crate) fn unitary_eigendecomposition(a: &CMat) -> Result<(CMat, Vec<f64>)> {
    let k = a.nrows();
    let (v, t) = schur_of(a)?.unpack();

    // For a unitary (hence normal) matrix the Schur factor is diagonal up
    // to rounding; a visible off-diagonal part means the input was not
    // unitary enough to trust.
    let mut diag = CMat::zeros(k, k);
    for i in 0..k {
        diag[(i, i)] = t[(i, i)];
    }
    let off = (&t - &diag).norm();
    if off > 1e-8 * (1.0 + t.norm()) {
        return Err(Error::Numerical(format!(
            "eigenvector basis is not orthogonal: Schur off-diagonal residual {off:.3e}"
        )));
    }

    let mut order: Vec<usize> = (0..k).collect();
    let angles_raw: Vec<f64> = (0..k)
        .map(|i| {
            let a = t[(i, i)].arg() / (2.0 * std::f64::consts::PI);
            a.rem_euclid(1.0)
        })
        .collect();
    order.sort_by(|&i, &j| angles_raw[i].total_cmp(&angles_raw[j]));

    let mut v_sorted = CMat::zeros(k, k);
    let mut angles = Vec::with_capacity(k);
    for (dst, &src) in order.iter().enumerate() {
        v_sorted.set_column(dst, &v.column(src));
        angles.push(angles_raw[src]);
    }

    // Reconstruction check with unit-modulus eigenvalues.
    let d = CMat::from_fn(k, k, |i, j| {
        if i == j {
            C64::from_polar(1.0, 2.0 * std::f64::consts::PI * angles[i])
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let recon = &v_sorted * d * v_sorted.adjoint();
    let resid = (a - &recon).norm();
    if resid > 1e-8 * (k as f64) {
        return Err(Error::Numerical(format!(
            "unitary eigendecomposition residual {resid:.3e} too large"
        )));
    }
    Ok((v_sorted, angles))
}

/// `m^q` by repeated multiplication (the exponent stays small enough in
/// this crate that the O(q) cost is irrelevant and the rounding behavior
/// is the one the certificates are stated for).
pub(crate) fn matrix_power(m: &CMat, q: u64) -> CMat {
    let k = m.nrows();
    let mut acc = CMat::identity(k, k);
    for _ in 0..q {
        acc = &acc * m;
    }
    acc
}
