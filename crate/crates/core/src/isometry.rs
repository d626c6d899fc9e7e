//! Holomorphic isometries of the ball: matrices preserving the
//! signature-(n,1) form, with determinant 1.
//!
//! The module provides validated construction ([`verify_su`]), the action
//! on ball points ([`apply`]), explicit boosts and axis rotations,
//! dynamical classification, and seeded random sampling.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::hermitian::{project_to_ball, standard_lift, BallPoint, HermitianVector, SignatureForm};
use crate::linalg;
use crate::{CMat, CVec, C64};

/// Default relative tolerance for form preservation in [`verify_su`].
pub const DEFAULT_FORM_TOL: f64 = 1e-10;

/// Default tolerance for [`classify`] (eigenvalue modulus and identity
/// deviation).
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-8;

/// The determinant check in [`verify_su`] runs at `DET_TOL_FACTOR * tol`.
pub const DET_TOL_FACTOR: f64 = 100.0;

/// A validated matrix preserving the Hermitian form with determinant 1.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexIsometry {
    form: SignatureForm,
    mat: CMat,
}

impl ComplexIsometry {
    /// The underlying `(n+1) x (n+1)` matrix.
    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    /// The form the matrix preserves.
    pub fn form(&self) -> SignatureForm {
        self.form
    }

    /// Complex dimension of the ball acted on.
    pub fn n(&self) -> usize {
        self.form.n()
    }

    /// The inverse isometry, computed as `J A* J`.
    ///
    /// Because `A* J A = J`, this is the exact matrix inverse up to the
    /// validation residual of `A` — no factorization required.
    pub fn inverse(&self) -> ComplexIsometry {
        let j = self.form.j_matrix();
        ComplexIsometry {
            form: self.form,
            mat: &j * self.mat.adjoint() * &j,
        }
    }

    /// Validated product `self * other` (the residual of a product can
    /// exceed each factor's, so it is re-checked at `tol`).
    pub fn compose(&self, other: &ComplexIsometry, tol: f64) -> Result<ComplexIsometry> {
        if self.form != other.form {
            return Err(Error::DimensionMismatch {
                expected: self.form.dim(),
                got: other.form.dim(),
            });
        }
        verify_su(&(&self.mat * &other.mat), tol)
    }
}

/// Residuals of the defining conditions for a candidate matrix:
/// `(|A* J A - J| / |J|, |det A - 1|)`, both in the spectral norm.
pub fn su_residuals(mat: &CMat) -> Result<(f64, f64)> {
    let (rows, cols) = mat.shape();
    if rows != cols || rows < 2 {
        return Err(Error::MatrixShape { rows, cols });
    }
    let form = SignatureForm::new(rows - 1)?;
    let j = form.j_matrix();
    let dev = mat.adjoint() * &j * mat - &j;
    // |J| = 1 in the spectral norm, so the residual is already relative.
    let ju = linalg::singular_values(&dev)?[0];
    let det = mat.determinant();
    let det_dev = (det - C64::new(1.0, 0.0)).norm();
    Ok((ju, det_dev))
}

/// Validates that `mat` preserves the form within `tol` (relative, spectral
/// norm) and has determinant 1 within `100 * tol`.
///
/// With the default `tol = 1e-10` the determinant is checked at `1e-8`.
pub fn verify_su(mat: &CMat, tol: f64) -> Result<ComplexIsometry> {
    let (ju, det_dev) = su_residuals(mat)?;
    if ju > tol {
        return Err(Error::FormViolation { residual: ju, tol });
    }
    let det_tol = DET_TOL_FACTOR * tol;
    if det_dev > det_tol {
        return Err(Error::DeterminantViolation {
            residual: det_dev,
            tol: det_tol,
        });
    }
    Ok(ComplexIsometry {
        form: SignatureForm::new(mat.nrows() - 1)?,
        mat: mat.clone(),
    })
}

/// Applies an isometry to a ball point: lift, multiply, project.
///
/// Isometries map the ball to itself, so the projection only fails when
/// rounding pushes an almost-boundary image past the `1 - 1e-12` safety
/// margin; that outcome surfaces as [`Error::NotInBall`].
pub fn apply(a: &ComplexIsometry, p: &BallPoint) -> Result<BallPoint> {
    if a.n() != p.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            got: p.n(),
        });
    }
    let lift = standard_lift(p);
    let image = &a.mat * lift.coords();
    project_to_ball(&HermitianVector::from_column(a.form, image)?)
}

/// Parameters of a boost: translation amount `r > 1` along a unit
/// `direction` in `C^n`.
#[derive(Clone, Debug)]
pub struct BoostParams {
    /// Translation parameter; the origin moves Bergman distance `2 ln r`.
    pub r: f64,
    /// Unit vector in `C^n` the origin is pushed towards.
    pub direction: Vec<C64>,
}

/// The standard boost matrix acting on the coordinate pair `(1, n+1)`,
/// identity elsewhere. Valid for every `r >= 1` (identity at `r = 1`);
/// public constructors enforce `r > 1`.
pub(crate) fn axis_boost(n: usize, r: f64) -> CMat {
    let d = n + 1;
    let mut m = CMat::identity(d, d);
    let cosh = C64::new((r * r + 1.0) / (2.0 * r), 0.0);
    let sinh = C64::new((r * r - 1.0) / (2.0 * r), 0.0);
    m[(0, 0)] = cosh;
    m[(0, d - 1)] = sinh;
    m[(d - 1, 0)] = sinh;
    m[(d - 1, d - 1)] = cosh;
    m
}

/// Embeds an `n x n` block and a final diagonal entry into an
/// `(n+1) x (n+1)` matrix fixing the origin.
pub(crate) fn embed_block_unitary(u: &CMat, last: C64) -> CMat {
    let n = u.nrows();
    let mut m = CMat::zeros(n + 1, n + 1);
    m.view_mut((0, 0), (n, n)).copy_from(u);
    m[(n, n)] = last;
    m
}

/// Unitary `n x n` matrix mapping the first basis vector to `w`.
///
/// Built as a rank-one modification `I + u u* / conj(u_1)` with
/// `u = w - e_1`, which is exactly unitary and sends `e_1` to `w`.
pub fn rotation_to_axis(w: &CVec) -> Result<CMat> {
    let n = w.len();
    if n == 0 {
        return Err(Error::InvalidInput(
            "rotation target must be nonempty".into(),
        ));
    }
    let norm = w.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "rotation target must be a unit vector: |w| = {norm:.17}"
        )));
    }
    let mut u = w.clone();
    u[0] -= C64::new(1.0, 0.0);
    if u.norm() <= 1e-12 {
        return Ok(CMat::identity(n, n));
    }
    let c = u[0].conj();
    // |u|^2 = -2 Re(u_1) > 0 here, so u_1 (and thus c) cannot vanish.
    let mut m = CMat::identity(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] += u[i] * u[j].conj() / c;
        }
    }
    Ok(m)
}

/// Boost moving the origin Bergman distance `2 ln r` towards `direction`:
/// the image of the origin is `((r^2 - 1) / (r^2 + 1)) * direction`.
///
/// Rejects `r <= 1 + 1e-12` (a numerically trivial boost has no
/// well-defined direction) and non-unit directions.
pub fn boost(params: &BoostParams) -> Result<ComplexIsometry> {
    let n = params.direction.len();
    if n == 0 {
        return Err(Error::InvalidInput(
            "boost direction must be nonempty".into(),
        ));
    }
    if params.r.is_nan() || params.r - 1.0 <= 1e-12 {
        return Err(Error::InvalidInput(format!(
            "boost parameter must exceed 1 by more than 1e-12, got r = {:.17}",
            params.r
        )));
    }
    let dir = CVec::from_vec(params.direction.clone());
    let rot = rotation_to_axis(&dir)?;
    let rot_emb = embed_block_unitary(&rot, C64::new(1.0, 0.0));
    let mat = &rot_emb * axis_boost(n, params.r) * rot_emb.adjoint();
    verify_su(&mat, DEFAULT_FORM_TOL)
}

/// Dynamical type of an isometry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsometryClass {
    /// An eigenvalue of modulus > 1: translation along a geodesic axis.
    Loxodromic,
    /// Unit spectrum but not diagonalizable: fixes only boundary points.
    Parabolic,
    /// Diagonalizable with a fixed point inside the ball.
    Elliptic,
    /// Within tolerance of the identity matrix.
    Identity,
    /// The numerical tests were inconclusive at the given tolerance.
    NumericallyAmbiguous,
}

/// Groups complex values into clusters of diameter ~`tol`.
fn cluster_indices(vals: &[C64], tol: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<(C64, Vec<usize>)> = Vec::new();
    for (i, v) in vals.iter().enumerate() {
        if let Some((center, members)) = clusters
            .iter_mut()
            .find(|(center, _)| (*v - *center).norm() <= tol)
        {
            members.push(i);
            let k = members.len() as f64;
            *center = *center + (*v - *center) / C64::new(k, 0.0);
        } else {
            clusters.push((*v, vec![i]));
        }
    }
    clusters.into_iter().map(|(_, m)| m).collect()
}

/// Classifies an isometry as loxodromic, parabolic, elliptic, or identity,
/// reporting [`IsometryClass::NumericallyAmbiguous`] whenever the verdict
/// would hinge on quantities inside the numerical gray zone.
///
/// The decision chain: identity deviation, then spectral radius (modulus
/// `> 1 + tol` means loxodromic), then a diagonalizability test comparing
/// geometric and algebraic multiplicities per eigenvalue cluster (nullspace
/// dimension at an adaptive tolerance). Diagonalizable maps are elliptic
/// exactly when some eigenspace contains a vector of negative self-pairing,
/// which is read off the smallest eigenvalue of `V_c* J V_c` per cluster.
///
/// Pass [`DEFAULT_CLASSIFY_TOL`] (`1e-8`) unless there is a reason not to.
pub fn classify(a: &ComplexIsometry, tol: f64) -> IsometryClass {
    use IsometryClass::*;
    let m = &a.mat;
    let k = m.nrows();
    let id = CMat::identity(k, k);

    let Ok(dev) = linalg::singular_values(&(m - &id)) else {
        return NumericallyAmbiguous;
    };
    if dev[0] <= tol {
        return Identity;
    }

    let Ok(eigs) = linalg::eigenvalues(m) else {
        return NumericallyAmbiguous;
    };
    let max_mod = eigs.iter().map(|e| e.norm()).fold(0.0f64, f64::max);

    // Computed eigenvalues of a defective matrix scatter on the order of
    // sqrt(eps * |m|) in every direction — including off the unit circle —
    // so the loxodromic verdict needs a threshold above that scale, and
    // the clustering tolerance must sit above it too or Jordan blocks
    // shatter into spurious singletons.
    let norm_bound = 1.0 + dev[0];
    let defect_scale = 50.0 * (f64::EPSILON * norm_bound).sqrt();
    if max_mod > 1.0 + tol.max(defect_scale) {
        return Loxodromic;
    }
    // Inside (1 + tol, 1 + defect_scale] the modulus alone cannot separate
    // a marginal translation from defect noise; fall through to the
    // (well-conditioned) singular-value analysis and remember the doubt.
    let modulus_marginal = max_mod > 1.0 + tol;

    let cluster_tol = (10.0 * tol * max_mod.max(1.0)).max(defect_scale);
    let clusters = cluster_indices(&eigs, cluster_tol);

    let centers: Vec<C64> = clusters
        .iter()
        .map(|members| {
            let sum: C64 = members.iter().map(|&i| eigs[i]).sum();
            sum / C64::new(members.len() as f64, 0.0)
        })
        .collect();

    let mut total_geometric = 0usize;
    let mut gray_zone = false;
    let mut cluster_bases: Vec<Vec<CVec>> = Vec::with_capacity(clusters.len());

    for (ci, members) in clusters.iter().enumerate() {
        let center = centers[ci];
        let radius = members
            .iter()
            .map(|&i| (eigs[i] - center).norm())
            .fold(0.0f64, f64::max);
        let gap = centers
            .iter()
            .enumerate()
            .filter(|(cj, _)| *cj != ci)
            .map(|(_, c)| (*c - center).norm())
            .fold(f64::INFINITY, f64::min);

        let mut null_tol = (2.0 * radius).max(cluster_tol);
        if gap.is_finite() {
            null_tol = null_tol.min(0.45 * gap);
        }
        if null_tol.is_nan() || null_tol <= 0.0 {
            return NumericallyAmbiguous;
        }

        let shifted = m - &id * center;
        let Ok((basis, svals)) = linalg::nullspace_basis(&shifted, null_tol) else {
            return NumericallyAmbiguous;
        };
        if basis.is_empty() {
            // An eigenvalue cluster with no numerical eigenvector at all:
            // the factorizations disagree with each other.
            return NumericallyAmbiguous;
        }
        gray_zone |= svals.iter().any(|s| *s > null_tol && *s <= 1e4 * null_tol);
        total_geometric += basis.len();
        cluster_bases.push(basis);
    }

    if total_geometric > k {
        return NumericallyAmbiguous;
    }

    if total_geometric == k {
        // Diagonalizable; make sure the eigenbasis is trustworthy.
        let mut v = CMat::zeros(k, k);
        let mut col = 0usize;
        for basis in &cluster_bases {
            for b in basis {
                v.set_column(col, b);
                col += 1;
            }
        }
        let Ok(cond) = linalg::condition_number(&v) else {
            return NumericallyAmbiguous;
        };
        if cond > 1e8 {
            return NumericallyAmbiguous;
        }
        let j = a.form.j_matrix();
        let mut negative = false;
        for basis in &cluster_bases {
            let g = basis.len();
            let mut vc = CMat::zeros(k, g);
            for (ci, b) in basis.iter().enumerate() {
                vc.set_column(ci, b);
            }
            let f = vc.adjoint() * &j * vc;
            let Ok(min_eig) = linalg::hermitian_min_eigenvalue(&f) else {
                return NumericallyAmbiguous;
            };
            if min_eig < -1e-10 {
                // A fixed direction of negative self-pairing: an interior
                // fixed point. This settles the verdict.
                negative = true;
            }
        }
        if negative {
            // With an off-circle modulus inside the noise band the
            // elliptic/loxodromic distinction is below resolution.
            if modulus_marginal {
                NumericallyAmbiguous
            } else {
                Elliptic
            }
        } else {
            // A form of signature (n,1) cannot be positive on every
            // eigenspace, so reaching this point means the pairing test
            // was numerically borderline everywhere.
            NumericallyAmbiguous
        }
    } else if gray_zone {
        NumericallyAmbiguous
    } else {
        Parabolic
    }
}

/// Haar-distributed unitary from an explicit RNG.
pub(crate) fn haar_unitary<R: Rng>(n: usize, rng: &mut R) -> CMat {
    // QR of a complex Ginibre matrix, with the phases of the diagonal of R
    // folded into Q so the distribution is exactly Haar.
    let g = CMat::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) / C64::new(std::f64::consts::SQRT_2, 0.0)
    });
    let (q, r) = g.qr().unpack();
    let mut u = q;
    for jc in 0..n {
        let d = r[(jc, jc)];
        let phase = if d.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            d / C64::new(d.norm(), 0.0)
        };
        for ir in 0..n {
            u[(ir, jc)] *= phase;
        }
    }
    u
}

/// Haar-distributed random unitary `n x n` matrix (seeded, reproducible).
pub fn random_unitary(n: usize, seed: u64) -> CMat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_unitary(n, &mut rng)
}

/// Embeds an `n x n` unitary as an origin-fixing isometry with
/// determinant 1: `diag(U, conj(det U))`.
pub(crate) fn embed_unitary_det1(u: &CMat) -> CMat {
    embed_block_unitary(u, u.determinant().conj())
}

/// Random isometry sampler with an explicit RNG; returns the isometry and
/// the boost exponent `s` actually drawn.
pub(crate) fn random_isometry_with<R: Rng>(
    n: usize,
    s_max: f64,
    rng: &mut R,
) -> (ComplexIsometry, f64) {
    let s: f64 = rng.random::<f64>() * s_max;
    let u1 = embed_unitary_det1(&haar_unitary(n, rng));
    let u2 = embed_unitary_det1(&haar_unitary(n, rng));
    let mat = &u1 * axis_boost(n, s.exp()) * &u2;
    let iso = verify_su(&mat, DEFAULT_FORM_TOL)
        .expect("product of form-preserving factors stays within tolerance");
    (iso, s)
}

/// Parabolic element: identity plus the nilpotent `i a K` acting on the
/// coordinate pair `(1, n+1)`, which preserves the form exactly (the
/// classical Heisenberg translation in matrix form).
pub(crate) fn parabolic_embed(n: usize, a: f64) -> CMat {
    let d = n + 1;
    let mut m = CMat::identity(d, d);
    let ia = C64::new(0.0, a);
    m[(0, 0)] += ia;
    m[(0, d - 1)] -= ia;
    m[(d - 1, 0)] += ia;
    m[(d - 1, d - 1)] -= ia;
    m
}

/// Random isometry `U_1 B(e^s) U_2` with Haar unitary parts and
/// `s` uniform in `[0, s_max]` (seeded, reproducible).
///
/// Its operator norm is exactly `e^s <= e^{s_max}`.
pub fn random_isometry(n: usize, s_max: f64, seed: u64) -> ComplexIsometry {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_isometry_with(n, s_max, &mut rng).0
}
