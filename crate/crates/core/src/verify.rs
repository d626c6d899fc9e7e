//! Randomized, seeded self-verification suites.
//!
//! Every invariant the crate relies on is expressed as a *check*: a
//! function from a case seed to a signed margin, where a nonnegative
//! margin means the invariant held with that much room to spare and a
//! negative margin (or an internal error, reported as `-inf`) means it
//! failed. Checks are grouped into suites mirroring the module layout.
//!
//! Runs are deterministic: the per-case seed is derived from the run seed,
//! the check name, and the case index, so the worst case of any check can
//! be replayed in isolation with [`replay`].

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::approx::{dirichlet_approx, finite_order_approx, ApproxMode};
use crate::bounds::{max_delta, reference_point, theorem_bound};
use crate::error::{Error, Result};
use crate::hermitian::{
    bergman_distance, bergman_distance_lifts, herm_product, project_to_ball, standard_lift,
    BallPoint, HermitianVector,
};
use crate::isometry::{
    apply, boost, classify, embed_block_unitary, embed_unitary_det1, haar_unitary, parabolic_embed,
    random_isometry_with, su_residuals, verify_su, BoostParams, IsometryClass,
    DEFAULT_CLASSIFY_TOL,
};
use crate::linalg;
use crate::norms::{dist_to_unitary, matrix_power, operator_norm, power_difference_bound_check};
use crate::volume::{
    ball_volume, manifold_volume_bound, reference_volume_bound, sphere_volume, SinhConvention,
};
use crate::{CMat, CVec, C64};

const TAU: f64 = std::f64::consts::TAU;

/// Number of samples at which scaled checks run their listed base case
/// counts.
pub const DEFAULT_SAMPLES: usize = 1000;

type CheckFn = fn(u64) -> Result<f64>;

struct CheckDef {
    name: &'static str,
    suite: &'static str,
    base: usize,
    scaled: bool,
    run: CheckFn,
}

/// Outcome of one check across its cases.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    /// Check name (usable with [`replay`]).
    pub name: &'static str,
    /// Number of cases executed.
    pub cases: usize,
    /// Number of cases with a negative margin.
    pub failures: usize,
    /// Smallest margin across cases.
    pub worst_margin: f64,
    /// Case seed of the smallest margin, for [`replay`].
    pub worst_seed: u64,
}

/// Outcome of a full suite run.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    /// Suite name.
    pub suite: &'static str,
    /// Run seed the case seeds were derived from.
    pub seed: u64,
    /// Sample scale requested (scaled checks run `base * samples / 1000`
    /// cases).
    pub samples: usize,
    /// Per-check outcomes.
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    /// Whether every check passed every case.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }

    /// Total cases across checks.
    pub fn total_cases(&self) -> usize {
        self.checks.iter().map(|c| c.cases).sum()
    }

    /// Total failing cases across checks.
    pub fn total_failures(&self) -> usize {
        self.checks.iter().map(|c| c.failures).sum()
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn fnv1a(s: &str) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn case_seed(seed: u64, name: &str, idx: u64) -> u64 {
    splitmix(seed ^ fnv1a(name).rotate_left(1) ^ splitmix(idx))
}

// ---------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Point with direction uniform on the sphere and radius up to 0.92.
fn sample_ball_point<R: Rng>(rng: &mut R, n: usize) -> BallPoint {
    let mut v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let t = 0.92 * rng.random::<f64>();
    if norm > 0.0 {
        for z in &mut v {
            *z *= t / norm;
        }
    } else {
        v = vec![C64::new(0.0, 0.0); n];
    }
    BallPoint::new(v).expect("sampled point is strictly inside the ball")
}

fn sample_unit_direction<R: Rng>(rng: &mut R, n: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

fn gaussian_matrix<R: Rng>(rng: &mut R, d: usize) -> CMat {
    CMat::from_fn(d, d, |_, _| gaussian(rng))
}

fn lift(p: &BallPoint) -> HermitianVector {
    standard_lift(p)
}

// ---------------------------------------------------------------------
// Hermitian-geometry checks
// ---------------------------------------------------------------------

fn chk_pairing_conjugate_symmetry(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(1..=4usize);
    let x = lift(&sample_ball_point(&mut rng, n));
    let y = lift(&sample_ball_point(&mut rng, n));
    let h1 = herm_product(&x, &y)?;
    let h2 = herm_product(&y, &x)?;
    Ok(1e-12 - (h1 - h2.conj()).norm())
}

fn chk_lift_projection_roundtrip(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(1..=4usize);
    let p = sample_ball_point(&mut rng, n);
    let c = C64::from_polar(0.2 + 4.8 * rng.random::<f64>(), TAU * rng.random::<f64>());
    let q = project_to_ball(&lift(&p).scaled(c))?;
    Ok(1e-10 - (q.coords() - p.coords()).norm())
}

fn chk_distance_nonnegative(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(1..=4usize);
    let x = sample_ball_point(&mut rng, n);
    let y = sample_ball_point(&mut rng, n);
    let rho = bergman_distance(&x, &y)?;
    Ok(if rho.is_nan() { -1.0 } else { rho })
}

fn chk_distance_symmetric(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(1..=4usize);
    let x = sample_ball_point(&mut rng, n);
    let y = sample_ball_point(&mut rng, n);
    let a = bergman_distance(&x, &y)?;
    let b = bergman_distance(&y, &x)?;
    Ok(1e-10 * (1.0 + a) - (a - b).abs())
}

fn chk_distance_triangle(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(1..=4usize);
    let x = sample_ball_point(&mut rng, n);
    let y = sample_ball_point(&mut rng, n);
    let z = sample_ball_point(&mut rng, n);
    let xz = bergman_distance(&x, &z)?;
    let xy = bergman_distance(&x, &y)?;
    let yz = bergman_distance(&y, &z)?;
    Ok(xy + yz + 1e-9 - xz)
}

fn chk_distance_lift_invariance(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(1..=4usize);
    let x = sample_ball_point(&mut rng, n);
    let y = sample_ball_point(&mut rng, n);
    let rho = bergman_distance(&x, &y)?;
    let cx = C64::from_polar(0.2 + 4.8 * rng.random::<f64>(), TAU * rng.random::<f64>());
    let cy = C64::from_polar(0.2 + 4.8 * rng.random::<f64>(), TAU * rng.random::<f64>());
    let rho2 = bergman_distance_lifts(&lift(&x).scaled(cx), &lift(&y).scaled(cy))?;
    Ok(1e-9 * (1.0 + rho) - (rho - rho2).abs())
}

// ---------------------------------------------------------------------
// Isometry checks
// ---------------------------------------------------------------------

fn chk_isometry_preserves_distance(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(1..=4usize);
    let (g, _) = random_isometry_with(n, 1.5, &mut rng);
    let x = sample_ball_point(&mut rng, n);
    let y = sample_ball_point(&mut rng, n);
    let rho = bergman_distance(&x, &y)?;
    let rho_g = bergman_distance(&apply(&g, &x)?, &apply(&g, &y)?)?;
    Ok(1e-8 * (1.0 + rho) - (rho - rho_g).abs())
}

fn chk_group_closure(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(1..=4usize);
    let (g, _) = random_isometry_with(n, 1.0, &mut rng);
    let (h, _) = random_isometry_with(n, 1.0, &mut rng);
    let prod = g.compose(&h, 1e-8)?;
    let (form_res, det_res) = su_residuals(prod.matrix())?;
    Ok(1e-8 - form_res.max(det_res / 100.0))
}

fn chk_boost_eigenvalue_moduli(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(1..=4usize);
    let r = 1.00001 + 3.0 * rng.random::<f64>();
    let b = boost(&BoostParams {
        r,
        direction: sample_unit_direction(&mut rng, n),
    })?;
    let mut moduli: Vec<f64> = linalg::eigenvalues(b.matrix())?
        .iter()
        .map(|z| z.norm())
        .collect();
    moduli.sort_by(f64::total_cmp);
    let mut expected = vec![1.0; n + 1];
    expected[0] = 1.0 / r;
    expected[n] = r;
    let dev = moduli
        .iter()
        .zip(&expected)
        .map(|(m, e)| (m - e).abs())
        .fold(0.0f64, f64::max);
    Ok(1e-8 * r - dev)
}

fn chk_classification_conjugation_invariant(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(1..=3usize);
    let kind = rng.random_range(0..3u32);
    let base_mat: CMat = match kind {
        0 => {
            let s = 0.1 + 0.9 * rng.random::<f64>();
            boost(&BoostParams {
                r: s.exp(),
                direction: sample_unit_direction(&mut rng, n),
            })?
            .matrix()
            .clone()
        }
        1 => embed_unitary_det1(&haar_unitary(n, &mut rng)),
        _ => parabolic_embed(n, 0.5 + 1.5 * rng.random::<f64>()),
    };
    let base = verify_su(&base_mat, 1e-8)?;
    let (w, _) = random_isometry_with(n, 0.5, &mut rng);
    let conj_mat = w.matrix() * base.matrix() * w.inverse().matrix();
    let conj = verify_su(&conj_mat, 1e-8)?;
    let a = classify(&base, DEFAULT_CLASSIFY_TOL);
    let b = classify(&conj, DEFAULT_CLASSIFY_TOL);
    Ok(
        if a == IsometryClass::NumericallyAmbiguous || b == IsometryClass::NumericallyAmbiguous {
            0.0
        } else if a == b {
            1.0
        } else {
            -1.0
        },
    )
}

// ---------------------------------------------------------------------
// Norm checks
// ---------------------------------------------------------------------

fn chk_norm_unitary_invariance(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let d = rng.random_range(2..=5usize);
    let a = gaussian_matrix(&mut rng, d);
    let u = haar_unitary(d, &mut rng);
    let v = haar_unitary(d, &mut rng);
    let na = operator_norm(&a)?;
    let nuav = operator_norm(&(&u * &a * &v))?;
    Ok(1e-10 * (1.0 + na) - (na - nuav).abs())
}

fn chk_isometry_norm_at_least_one(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(1..=4usize);
    let (g, _) = random_isometry_with(n, 2.0, &mut rng);
    Ok(operator_norm(g.matrix())? - 1.0 + 1e-12)
}

fn chk_norm_submultiplicative(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let d = rng.random_range(2..=5usize);
    let a = gaussian_matrix(&mut rng, d);
    let b = gaussian_matrix(&mut rng, d);
    let bound = operator_norm(&a)? * operator_norm(&b)? * (1.0 + 1e-12);
    Ok(bound - operator_norm(&(&a * &b))?)
}

fn chk_norm_adjoint_equal(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let d = rng.random_range(2..=5usize);
    let a = gaussian_matrix(&mut rng, d);
    let na = operator_norm(&a)?;
    let nadj = operator_norm(&a.adjoint())?;
    Ok(1e-10 * (1.0 + na) - (na - nadj).abs())
}

fn chk_norm_dominates_action(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let d = rng.random_range(2..=5usize);
    let a = gaussian_matrix(&mut rng, d);
    let na = operator_norm(&a)?;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let v = CVec::from_vec(sample_unit_direction(&mut rng, d));
        worst = worst.max((&a * &v).norm());
    }
    Ok(na * (1.0 + 1e-10) - worst)
}

fn chk_unitary_distance_certificate(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(1..=4usize);
    let (g, _) = random_isometry_with(n, 1.0, &mut rng);
    let cert = dist_to_unitary(&g)?;
    let d = n + 1;
    let m1 = cert.bound + 1e-9 - cert.actual;
    let m2 = cert.r + 1e-9 - operator_norm(g.matrix())?;
    let unit_res = operator_norm(&(cert.witness.adjoint() * &cert.witness - CMat::identity(d, d)))?;
    let m3 = 1e-7 - unit_res;
    Ok(m1.min(m2).min(m3))
}

fn chk_power_difference_bound(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(1..=4usize);
    let (g, _) = random_isometry_with(n, 0.8, &mut rng);
    let cert = dist_to_unitary(&g)?;
    let q = rng.random_range(1..=20u64);
    let chk = power_difference_bound_check(&g, &cert.witness, q)?;
    Ok(chk.rhs + 1e-9 - chk.lhs)
}

// ---------------------------------------------------------------------
// Approximation checks
// ---------------------------------------------------------------------

fn chk_pigeonhole_certificate(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let m = rng.random_range(1..=3usize);
    let quality = 1.5 + 28.5 * rng.random::<f64>();
    let thetas: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
    let r = dirichlet_approx(&thetas, quality)?;
    if r.q == 0 || (r.q as f64) > quality.powi(m as i32) {
        return Ok(-1.0);
    }
    Ok(1.0 / (r.q as f64 * quality) + 1e-15 - r.max_err)
}

fn chk_pigeonhole_reconstruction(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let m = rng.random_range(1..=3usize);
    let quality = 1.5 + 28.5 * rng.random::<f64>();
    let thetas: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
    let r = dirichlet_approx(&thetas, quality)?;
    let mut recomputed = 0.0f64;
    for (&th, &p) in thetas.iter().zip(&r.p) {
        if !(0..=r.q as i64).contains(&p) {
            return Ok(-1.0);
        }
        recomputed = recomputed.max((th - p as f64 / r.q as f64).abs());
    }
    Ok(1e-15 - (recomputed - r.max_err).abs())
}

fn chk_finite_order_certificate(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(1..=4usize);
    let quality = 3.0 + 37.0 * rng.random::<f64>();
    let mode = if rng.random::<bool>() {
        ApproxMode::Projective
    } else {
        ApproxMode::FullSpectrum
    };
    let a = haar_unitary(n, &mut rng);
    let fo = finite_order_approx(&a, quality, mode)?;
    let m1 = TAU / (fo.q as f64 * quality) + 1e-12 - fo.err;
    if fo.q <= 5000 {
        let d = a.nrows();
        let order_res = operator_norm(&(matrix_power(&fo.b, fo.q) - CMat::identity(d, d)))?;
        Ok(m1.min(1e-9 - order_res))
    } else {
        Ok(m1)
    }
}

fn chk_finite_order_angle_identity(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(1..=4usize);
    let quality = 3.0 + 37.0 * rng.random::<f64>();
    let a = haar_unitary(n, &mut rng);
    let fo = finite_order_approx(&a, quality, ApproxMode::FullSpectrum)?;
    // For a normal matrix the distance to the approximant is exactly the
    // largest chordal eigenvalue gap 2 |sin(pi delta)|.
    let pred = fo
        .angle_errors
        .iter()
        .map(|d| 2.0 * (std::f64::consts::PI * d).sin().abs())
        .fold(0.0f64, f64::max);
    Ok(1e-10 - (fo.err - pred).abs())
}

fn chk_finite_order_conjugation_stable(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(1..=4usize);
    let quality = 3.0 + 17.0 * rng.random::<f64>();
    let a = haar_unitary(n, &mut rng);
    let w = haar_unitary(n, &mut rng);
    let b = &w * &a * w.adjoint();
    let fo_a = finite_order_approx(&a, quality, ApproxMode::FullSpectrum)?;
    let fo_b = finite_order_approx(&b, quality, ApproxMode::FullSpectrum)?;
    if fo_a.q != fo_b.q {
        return Ok(-1.0);
    }
    Ok(1e-8 - (fo_a.err - fo_b.err).abs())
}

// ---------------------------------------------------------------------
// Bound checks
// ---------------------------------------------------------------------

fn chk_bound_strictly_monotone(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(2..=6u32);
    let quality = 2.0 + 38.0 * rng.random::<f64>();
    let qn = quality.powi(n as i32 - 1);
    // Keep 2 * delta inside the range where the bound value itself stays
    // finite in doubles ((x+1)(x+2pi/Q) ~ e^{2t} overflows near t = 350).
    let delta_max = (150.0 / qn).min(0.4);
    let ln_lo = (1e-12f64).ln();
    let ln_hi = delta_max.ln();
    let delta = (ln_lo + (ln_hi - ln_lo) * rng.random::<f64>()).exp();
    let b1 = theorem_bound(delta, quality, n);
    let b2 = theorem_bound(2.0 * delta, quality, n);
    if !b1.is_finite() || !b2.is_finite() {
        return Ok(-1.0);
    }
    let mono = if b2 > b1 { (b2 - b1).min(1.0) } else { -1.0 };
    Ok(mono.min(b1 - TAU / quality))
}

fn chk_reference_point_feasible(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(2..=10u32);
    let r = reference_point(n)?;
    if r.ball_radius != r.delta / 2.0 {
        return Ok(-1.0);
    }
    Ok(r.omega - r.bound_value)
}

/// End-to-end displacement certificate: build an isometry with origin
/// displacement strictly below `delta = 0.02 / 17^{n-1}`, approximate its
/// unitary witness by a finite-order element, and certify each step of
/// the resulting power bound chain.
fn chk_displacement_proof_chain(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(2..=3usize);
    let quality = 17.0f64;
    let delta = 0.02 / quality.powi(n as i32 - 1);

    // Origin-stabilizing part with controlled spectrum: one rotation angle
    // theta, its inverse tracked so the determinant is exactly 1.
    let theta = rng.random::<f64>();
    let phase = C64::from_polar(1.0, TAU * theta);
    let w = haar_unitary(n, &mut rng);
    let (block, last): (CMat, C64) = if n == 2 {
        let d = CMat::from_diagonal(&CVec::from_vec(vec![phase, C64::new(1.0, 0.0)]));
        (&w * d * w.adjoint(), phase.conj())
    } else {
        let d = CMat::from_diagonal(&CVec::from_vec(vec![
            phase,
            phase.conj(),
            C64::new(1.0, 0.0),
        ]));
        (&w * d * w.adjoint(), C64::new(1.0, 0.0))
    };
    let stab = embed_block_unitary(&block, last);

    // Strictly sub-budget boost: displacement 2s < delta.
    let s = (0.1 + 0.89 * rng.random::<f64>()) * (delta / 2.0);
    let b = boost(&BoostParams {
        r: s.exp(),
        direction: sample_unit_direction(&mut rng, n),
    })?;
    let a = verify_su(&(b.matrix() * &stab), 1e-10)?;

    // Step 1: split off the unitary witness.
    let cert = dist_to_unitary(&a)?;
    let d = n + 1;
    let u_block = cert.witness.view((0, 0), (n, n)).into_owned();
    let lambda_last = cert.witness[(d - 1, d - 1)];

    // Step 2: finite-order approximation of the witness block.
    let fo = finite_order_approx(&u_block, quality, ApproxMode::Projective)?;
    if fo.q as f64 > quality.powi(n as i32 - 1) {
        return Ok(-1.0);
    }
    let m2 = TAU / (fo.q as f64 * quality) + 1e-12 - fo.err;

    // Extend by the nearest q-th root of unity in the last slot; its
    // distance to lambda_last is bounded by the same angle certificate.
    let angle = lambda_last.arg() / TAU;
    let k = (fo.q as f64 * angle).round();
    let mu = C64::from_polar(1.0, TAU * k / fo.q as f64);
    let b_emb = embed_block_unitary(&fo.b, mu);
    if (lambda_last - mu).norm() > TAU / (fo.q as f64 * quality) + 1e-9 {
        return Ok(-1.0);
    }

    // Step 3: geometric-series power bound for A^q vs B^q = Id.
    let chk = power_difference_bound_check(&a, &b_emb, fo.q)?;
    let m3 = chk.rhs + 1e-9 - chk.lhs;

    // Step 4: the final displacement bound.
    let aq = matrix_power(a.matrix(), fo.q);
    let val = operator_norm(&aq)? * operator_norm(&(&aq - CMat::identity(d, d)))?;
    let m4 = theorem_bound(delta, quality, n as u32) + 1e-6 - val;

    Ok(m2.min(m3).min(m4))
}

fn chk_optimizer_dominates_reference(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(2..=6u32);
    let opt = max_delta(n, 2.0, 64.0, 1e-9)?;
    let reference = reference_point(n)?;
    if !opt.feasible {
        return Ok(-1.0);
    }
    Ok((opt.delta - reference.delta) / reference.delta)
}

// ---------------------------------------------------------------------
// Volume checks
// ---------------------------------------------------------------------

fn chk_volume_small_radius_asymptotic(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(2..=5u32);
    let r0 = 10f64.powf(-4.0 - 2.0 * rng.random::<f64>());
    let vol = ball_volume(n, r0, SinhConvention::HalfRadius)?;
    let sigma = sphere_volume(n)?;
    let lead = 4f64.powi(n as i32) * sigma / (2.0 * n as f64) * (r0 / 2.0).powi(2 * n as i32);
    let correction = n as f64 * r0 * r0 / 12.0;
    let tol = (100.0 * (2 * n) as f64 * (2 * n) as f64 * (r0 / 2.0).powi(4)).max(1e-13);
    Ok(tol - (vol / lead - 1.0 - correction).abs())
}

fn chk_volume_matches_quadrature(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(2..=4u32);
    let r0 = 0.1 + 1.9 * rng.random::<f64>();
    let vol = ball_volume(n, r0, SinhConvention::HalfRadius)?;
    let sigma = sphere_volume(n)?;
    let coeff = 4f64.powi(n as i32) * sigma / 2.0;
    let shell = |r: f64| coeff * (r / 2.0).sinh().powi(2 * n as i32 - 1) * (r / 2.0).cosh();
    let quad = simpson(shell, 0.0, r0, 2000);
    Ok(1e-8 * vol - (vol - quad).abs())
}

fn chk_sphere_volume_known_values(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    // sigma_1 = 2 pi, sigma_3 = 2 pi^2, sigma_9 = 2 pi^5 / 24.
    let table = [
        (1u32, TAU),
        (2, 19.739208802178716),
        (5, 25.501640398773455),
    ];
    let (n, expected) = table[rng.random_range(0..table.len())];
    let got = sphere_volume(n)?;
    let ulps = got.to_bits().abs_diff(expected.to_bits());
    Ok(1.5 - ulps as f64)
}

fn chk_sphere_volume_recurrence(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(1..=30u32);
    let a = sphere_volume(n)?;
    let b = sphere_volume(n + 1)?;
    Ok(1e-13 - (b / a * n as f64 / std::f64::consts::PI - 1.0).abs())
}

fn chk_volume_decreases_with_dimension(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(2..=7u32);
    let v1 = reference_volume_bound(n, SinhConvention::HalfRadius)?.ball_volume;
    let v2 = reference_volume_bound(n + 1, SinhConvention::HalfRadius)?.ball_volume;
    if v1 <= 0.0 {
        return Ok(-1.0);
    }
    Ok(1.0 - v2 / v1 * 1e3)
}

fn chk_optimizer_improves_volume(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(2..=6u32);
    let opt = max_delta(n, 2.0, 64.0, 1e-9)?;
    let vol_opt = manifold_volume_bound(n, opt.ball_radius, SinhConvention::HalfRadius)?;
    let vol_ref = reference_volume_bound(n, SinhConvention::HalfRadius)?;
    if vol_ref.ball_volume <= 0.0 {
        return Ok(-1.0);
    }
    Ok(vol_opt.ball_volume / vol_ref.ball_volume - 1.0)
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels * 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

// ---------------------------------------------------------------------
// Registry and runners
// ---------------------------------------------------------------------

const CHECKS: &[CheckDef] = &[
    // hermitian
    CheckDef {
        name: "pairing-conjugate-symmetry",
        suite: "hermitian",
        base: 1000,
        scaled: true,
        run: chk_pairing_conjugate_symmetry,
    },
    CheckDef {
        name: "lift-projection-roundtrip",
        suite: "hermitian",
        base: 1000,
        scaled: true,
        run: chk_lift_projection_roundtrip,
    },
    CheckDef {
        name: "distance-nonnegative",
        suite: "hermitian",
        base: 1000,
        scaled: true,
        run: chk_distance_nonnegative,
    },
    CheckDef {
        name: "distance-symmetric",
        suite: "hermitian",
        base: 1000,
        scaled: true,
        run: chk_distance_symmetric,
    },
    CheckDef {
        name: "distance-triangle",
        suite: "hermitian",
        base: 600,
        scaled: true,
        run: chk_distance_triangle,
    },
    CheckDef {
        name: "distance-lift-invariance",
        suite: "hermitian",
        base: 800,
        scaled: true,
        run: chk_distance_lift_invariance,
    },
    // isometry
    CheckDef {
        name: "isometry-preserves-distance",
        suite: "isometry",
        base: 400,
        scaled: true,
        run: chk_isometry_preserves_distance,
    },
    CheckDef {
        name: "group-closure",
        suite: "isometry",
        base: 400,
        scaled: true,
        run: chk_group_closure,
    },
    CheckDef {
        name: "boost-eigenvalue-moduli",
        suite: "isometry",
        base: 600,
        scaled: true,
        run: chk_boost_eigenvalue_moduli,
    },
    CheckDef {
        name: "classification-conjugation-invariant",
        suite: "isometry",
        base: 300,
        scaled: true,
        run: chk_classification_conjugation_invariant,
    },
    // norms
    CheckDef {
        name: "norm-unitary-invariance",
        suite: "norms",
        base: 500,
        scaled: true,
        run: chk_norm_unitary_invariance,
    },
    CheckDef {
        name: "isometry-norm-at-least-one",
        suite: "norms",
        base: 500,
        scaled: true,
        run: chk_isometry_norm_at_least_one,
    },
    CheckDef {
        name: "norm-submultiplicative",
        suite: "norms",
        base: 500,
        scaled: true,
        run: chk_norm_submultiplicative,
    },
    CheckDef {
        name: "norm-adjoint-equal",
        suite: "norms",
        base: 500,
        scaled: true,
        run: chk_norm_adjoint_equal,
    },
    CheckDef {
        name: "norm-dominates-action",
        suite: "norms",
        base: 300,
        scaled: true,
        run: chk_norm_dominates_action,
    },
    CheckDef {
        name: "unitary-distance-certificate",
        suite: "norms",
        base: 300,
        scaled: true,
        run: chk_unitary_distance_certificate,
    },
    CheckDef {
        name: "power-difference-bound",
        suite: "norms",
        base: 250,
        scaled: true,
        run: chk_power_difference_bound,
    },
    // approx
    CheckDef {
        name: "pigeonhole-certificate",
        suite: "approx",
        base: 800,
        scaled: true,
        run: chk_pigeonhole_certificate,
    },
    CheckDef {
        name: "pigeonhole-reconstruction",
        suite: "approx",
        base: 800,
        scaled: true,
        run: chk_pigeonhole_reconstruction,
    },
    CheckDef {
        name: "finite-order-certificate",
        suite: "approx",
        base: 250,
        scaled: true,
        run: chk_finite_order_certificate,
    },
    CheckDef {
        name: "finite-order-angle-identity",
        suite: "approx",
        base: 300,
        scaled: true,
        run: chk_finite_order_angle_identity,
    },
    CheckDef {
        name: "finite-order-conjugation-stable",
        suite: "approx",
        base: 200,
        scaled: true,
        run: chk_finite_order_conjugation_stable,
    },
    // bounds
    CheckDef {
        name: "bound-strictly-monotone",
        suite: "bounds",
        base: 800,
        scaled: true,
        run: chk_bound_strictly_monotone,
    },
    CheckDef {
        name: "reference-point-feasible",
        suite: "bounds",
        base: 200,
        scaled: true,
        run: chk_reference_point_feasible,
    },
    CheckDef {
        name: "displacement-proof-chain",
        suite: "bounds",
        base: 120,
        scaled: true,
        run: chk_displacement_proof_chain,
    },
    CheckDef {
        name: "optimizer-dominates-reference",
        suite: "bounds",
        base: 5,
        scaled: false,
        run: chk_optimizer_dominates_reference,
    },
    // volume
    CheckDef {
        name: "volume-small-radius-asymptotic",
        suite: "volume",
        base: 600,
        scaled: true,
        run: chk_volume_small_radius_asymptotic,
    },
    CheckDef {
        name: "volume-matches-quadrature",
        suite: "volume",
        base: 250,
        scaled: true,
        run: chk_volume_matches_quadrature,
    },
    CheckDef {
        name: "sphere-volume-known-values",
        suite: "volume",
        base: 300,
        scaled: true,
        run: chk_sphere_volume_known_values,
    },
    CheckDef {
        name: "sphere-volume-recurrence",
        suite: "volume",
        base: 400,
        scaled: true,
        run: chk_sphere_volume_recurrence,
    },
    CheckDef {
        name: "volume-decreases-with-dimension",
        suite: "volume",
        base: 200,
        scaled: true,
        run: chk_volume_decreases_with_dimension,
    },
    CheckDef {
        name: "optimizer-improves-volume",
        suite: "volume",
        base: 5,
        scaled: false,
        run: chk_optimizer_improves_volume,
    },
];

/// Suite names in canonical order.
pub fn suites() -> &'static [&'static str] {
    &[
        "hermitian",
        "isometry",
        "norms",
        "approx",
        "bounds",
        "volume",
    ]
}

/// All check names in registry order.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.name).collect()
}

fn run_check(def: &CheckDef, samples: usize, seed: u64) -> CheckReport {
    let cases = if def.scaled {
        ((def.base as u128 * samples as u128 / DEFAULT_SAMPLES as u128) as usize).max(1)
    } else {
        def.base
    };
    let margins: Vec<(f64, u64)> = (0..cases as u64)
        .into_par_iter()
        .map(|idx| {
            let cs = case_seed(seed, def.name, idx);
            let margin = match (def.run)(cs) {
                Ok(m) if m.is_nan() => f64::NEG_INFINITY,
                Ok(m) => m,
                Err(_) => f64::NEG_INFINITY,
            };
            (margin, cs)
        })
        .collect();
    let mut failures = 0usize;
    let mut worst_margin = f64::INFINITY;
    let mut worst_seed = case_seed(seed, def.name, 0);
    for &(m, cs) in &margins {
        if m < 0.0 {
            failures += 1;
        }
        if m < worst_margin {
            worst_margin = m;
            worst_seed = cs;
        }
    }
    CheckReport {
        name: def.name,
        cases,
        failures,
        worst_margin,
        worst_seed,
    }
}

/// Runs one suite at the given sample scale and seed.
pub fn run_suite(suite: &str, samples: usize, seed: u64) -> Result<SuiteReport> {
    if !suites().contains(&suite) {
        return Err(Error::UnknownSuite(suite.to_string()));
    }
    let checks: Vec<CheckReport> = CHECKS
        .iter()
        .filter(|c| c.suite == suite)
        .map(|c| run_check(c, samples, seed))
        .collect();
    let suite_name = suites()
        .iter()
        .copied()
        .find(|s| *s == suite)
        .expect("validated above");
    Ok(SuiteReport {
        suite: suite_name,
        seed,
        samples,
        checks,
    })
}

/// Runs every suite in canonical order.
pub fn run_all(samples: usize, seed: u64) -> Result<Vec<SuiteReport>> {
    suites()
        .iter()
        .map(|s| run_suite(s, samples, seed))
        .collect()
}

/// Re-executes a single case of a named check from its case seed and
/// returns the margin.
pub fn replay(check: &str, case_seed: u64) -> Result<f64> {
    let def = CHECKS
        .iter()
        .find(|c| c.name == check)
        .ok_or_else(|| Error::UnknownCheck(check.to_string()))?;
    Ok(match (def.run)(case_seed) {
        Ok(m) if m.is_nan() => f64::NEG_INFINITY,
        Ok(m) => m,
        Err(_) => f64::NEG_INFINITY,
    })
}
