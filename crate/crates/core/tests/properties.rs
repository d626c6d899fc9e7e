//! Property tests: randomized invariants of the geometry, the approximation
//! machinery, and the serialization layer.

use chball::approx::dirichlet_approx;
use chball::bounds::theorem_bound;
use chball::hermitian::{
    bergman_distance, herm_product, project_to_ball, standard_lift, BallPoint, HermitianVector,
    SignatureForm,
};
use chball::isometry::{apply, boost, random_isometry, su_residuals, BoostParams};
use chball::matfile::{matrix_to_string, parse_matrix_str};
use chball::norms::operator_norm;
use chball::{CMat, C64};
use proptest::prelude::*;

// ---------------------------------------------------------------------------
// Strategies
// ---------------------------------------------------------------------------

fn complex_in(lo: f64, hi: f64) -> impl Strategy<Value = C64> {
    (lo..hi, lo..hi).prop_map(|(re, im)| C64::new(re, im))
}

fn square_matrix(d: usize) -> impl Strategy<Value = CMat> {
    prop::collection::vec(complex_in(-1.0, 1.0), d * d)
        .prop_map(move |entries| CMat::from_row_slice(d, d, &entries))
}

/// Finite `f64` across the full range, including zero, subnormals, and huge
/// magnitudes.
fn finite_f64() -> impl Strategy<Value = f64> {
    any::<f64>().prop_filter("finite", |x| x.is_finite())
}

// ---------------------------------------------------------------------------
// Properties
// ---------------------------------------------------------------------------

proptest! {
    /// The indefinite pairing is conjugate-symmetric: `<z, w> = conj(<w, z>)`.
    #[test]
    fn pairing_is_conjugate_symmetric(
        n in 1usize..=4,
        raw_z in prop::collection::vec(complex_in(-2.0, 2.0), 5),
        raw_w in prop::collection::vec(complex_in(-2.0, 2.0), 5),
    ) {
        let form = SignatureForm::new(n).unwrap();
        let z = HermitianVector::new(form, raw_z[..=n].to_vec()).unwrap();
        let w = HermitianVector::new(form, raw_w[..=n].to_vec()).unwrap();
        let zw = herm_product(&z, &w).unwrap();
        let wz = herm_product(&w, &z).unwrap();
        prop_assert!((zw - wz.conj()).norm() <= 1e-12 * (1.0 + zw.norm()));
    }

    /// The distance is symmetric, nonnegative, and (numerically) zero on the
    /// diagonal.
    #[test]
    fn distance_is_symmetric_and_nonnegative(
        n in 1usize..=4,
        seeds in (prop::collection::vec(complex_in(-1.0, 1.0), 4), prop::collection::vec(complex_in(-1.0, 1.0), 4)),
        ts in (0.0..0.999f64, 0.0..0.999f64),
    ) {
        let mk = |raw: &[C64], t: f64| {
            let norm: f64 = raw[..n].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let scale = if norm > 0.0 { 0.95 * t / norm } else { 0.0 };
            BallPoint::new(raw[..n].iter().map(|z| z * scale).collect()).unwrap()
        };
        let x = mk(&seeds.0, ts.0);
        let y = mk(&seeds.1, ts.1);
        let dxy = bergman_distance(&x, &y).unwrap();
        let dyx = bergman_distance(&y, &x).unwrap();
        prop_assert!(dxy >= 0.0);
        prop_assert!((dxy - dyx).abs() <= 1e-12 * (1.0 + dxy));
        prop_assert!(bergman_distance(&x, &x).unwrap() <= 1e-6);
    }

    /// The distance satisfies the triangle inequality (up to arcosh rounding
    /// noise near coincident points).
    #[test]
    fn distance_satisfies_triangle_inequality(
        n in 1usize..=3,
        raws in prop::collection::vec(complex_in(-1.0, 1.0), 9),
        ts in prop::collection::vec(0.0..0.999f64, 3),
    ) {
        let mk = |k: usize| {
            let raw = &raws[3 * k..3 * k + n];
            let norm: f64 = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let scale = if norm > 0.0 { 0.95 * ts[k] / norm } else { 0.0 };
            BallPoint::new(raw.iter().map(|z| z * scale).collect()).unwrap()
        };
        let (x, y, z) = (mk(0), mk(1), mk(2));
        let dxz = bergman_distance(&x, &z).unwrap();
        let dxy = bergman_distance(&x, &y).unwrap();
        let dyz = bergman_distance(&y, &z).unwrap();
        prop_assert!(dxz <= dxy + dyz + 1e-6);
    }

    /// Projecting a lift back to the ball is the identity, even after the
    /// lift is rescaled by an arbitrary nonzero complex number (projective
    /// invariance).
    #[test]
    fn lift_project_roundtrip_is_scale_invariant(
        n in 1usize..=4,
        raw in prop::collection::vec(complex_in(-1.0, 1.0), 4),
        t in 0.0..0.999f64,
        rho in 0.05..20.0f64,
        phi in 0.0..std::f64::consts::TAU,
    ) {
        let norm: f64 = raw[..n].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let scale = if norm > 0.0 { 0.95 * t / norm } else { 0.0 };
        let p = BallPoint::new(raw[..n].iter().map(|z| z * scale).collect()).unwrap();
        let c = C64::from_polar(rho, phi);
        let back = project_to_ball(&standard_lift(&p).scaled(c)).unwrap();
        for (a, b) in p.coords().iter().zip(back.coords().iter()) {
            prop_assert!((a - b).norm() <= 1e-12);
        }
    }

    /// A boost with parameter `r` moves the origin by distance exactly
    /// `2 ln r`.
    #[test]
    fn boost_displaces_origin_by_two_log_r(
        n in 1usize..=4,
        raw_dir in prop::collection::vec(complex_in(-1.0, 1.0), 4),
        r in 1.000001..20.0f64,
    ) {
        let norm: f64 = raw_dir[..n].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-2);
        let direction: Vec<C64> = raw_dir[..n].iter().map(|z| z / norm).collect();
        let b = boost(&BoostParams { r, direction }).unwrap();
        let image = apply(&b, &BallPoint::origin(n)).unwrap();
        let d = bergman_distance(&BallPoint::origin(n), &image).unwrap();
        let expected = 2.0 * r.ln();
        prop_assert!(
            (d - expected).abs() <= 1e-9 * (1.0 + expected),
            "distance {} vs 2 ln r = {}", d, expected,
        );
    }

    /// Isometries preserve the distance.
    #[test]
    fn isometries_preserve_distance(
        n in 1usize..=4,
        seed in any::<u64>(),
        raws in prop::collection::vec(complex_in(-1.0, 1.0), 8),
        ts in (0.0..0.999f64, 0.0..0.999f64),
    ) {
        let mk = |raw: &[C64], t: f64| {
            let norm: f64 = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let scale = if norm > 0.0 { 0.9 * t / norm } else { 0.0 };
            BallPoint::new(raw.iter().map(|z| z * scale).collect()).unwrap()
        };
        let x = mk(&raws[..n], ts.0);
        let y = mk(&raws[4..4 + n], ts.1);
        let g = random_isometry(n, 0.8, seed);
        let gx = apply(&g, &x).unwrap();
        let gy = apply(&g, &y).unwrap();
        let before = bergman_distance(&x, &y).unwrap();
        let after = bergman_distance(&gx, &gy).unwrap();
        prop_assert!(
            (before - after).abs() <= 1e-7 * (1.0 + before),
            "distance changed: {} -> {}", before, after,
        );
    }

    /// Random isometries actually satisfy the defining relations of the
    /// matrix group (form preservation and unit determinant).
    #[test]
    fn random_isometries_satisfy_group_relations(
        n in 1usize..=5,
        s_max in 0.0..2.0f64,
        seed in any::<u64>(),
    ) {
        let g = random_isometry(n, s_max, seed);
        let (form_residual, det_residual) = su_residuals(g.matrix()).unwrap();
        prop_assert!(form_residual <= 1e-10, "form residual {}", form_residual);
        prop_assert!(det_residual <= 1e-8, "det residual {}", det_residual);
    }

    /// The simultaneous-approximation certificate holds for arbitrary angle
    /// tuples: `1 <= q <= Q^m` and `|theta_i - p_i/q| <= 1/(qQ)` for all `i`,
    /// recomputed here from scratch.
    #[test]
    fn dirichlet_certificate_holds(
        thetas in prop::collection::vec(0.0..1.0f64, 1..=3),
        quality in 1.2..8.0f64,
    ) {
        let approx = dirichlet_approx(&thetas, quality).unwrap();
        let m = thetas.len() as i32;
        prop_assert!(approx.q >= 1);
        prop_assert!((approx.q as f64) <= quality.powi(m) * (1.0 + 1e-12));
        prop_assert_eq!(approx.p.len(), thetas.len());
        let qf = approx.q as f64;
        let mut worst = 0.0f64;
        for (&th, &p) in thetas.iter().zip(approx.p.iter()) {
            let err = (th - p as f64 / qf).abs();
            prop_assert!(
                err <= 1.0 / (qf * quality) + 1e-15,
                "q={} err={} budget={}", approx.q, err, 1.0 / (qf * quality),
            );
            worst = worst.max(err);
        }
        prop_assert!((worst - approx.max_err).abs() <= 1e-15);
    }

    /// The displacement bound is nonnegative and monotone in the
    /// displacement parameter.
    #[test]
    fn theorem_bound_is_monotone_in_delta(
        n in 2u32..=5,
        quality in 2.0..64.0f64,
        a in 1e-9..1.0f64,
        b in 1e-9..1.0f64,
    ) {
        let cap = 100.0 / quality.powi(n as i32 - 1);
        let (lo, hi) = if a <= b { (a * cap, b * cap) } else { (b * cap, a * cap) };
        let f_lo = theorem_bound(lo, quality, n);
        let f_hi = theorem_bound(hi, quality, n);
        prop_assert!(f_lo > 0.0);
        prop_assert!(f_lo <= f_hi, "bound not monotone: f({})={} > f({})={}", lo, f_lo, hi, f_hi);
    }

    /// The operator norm is submultiplicative.
    #[test]
    fn operator_norm_is_submultiplicative(
        d in 1usize..=5,
        pair in (square_matrix(5), square_matrix(5)),
    ) {
        let a = pair.0.view((0, 0), (d, d)).into_owned();
        let b = pair.1.view((0, 0), (d, d)).into_owned();
        let na = operator_norm(&a).unwrap();
        let nb = operator_norm(&b).unwrap();
        let nab = operator_norm(&(&a * &b)).unwrap();
        prop_assert!(nab <= na * nb * (1.0 + 1e-10) + 1e-12);
    }

    /// Matrix serialization round-trips bitwise for arbitrary finite entries.
    #[test]
    fn matrix_serialization_roundtrips_bitwise(
        n in 1usize..=3,
        entries in prop::collection::vec((finite_f64(), finite_f64()), 16),
    ) {
        let d = n + 1;
        let m = CMat::from_fn(d, d, |i, j| {
            let (re, im) = entries[i * d + j];
            C64::new(re, im)
        });
        let s = matrix_to_string(&m).unwrap();
        let (parsed_n, back) = parse_matrix_str(&s).unwrap();
        prop_assert_eq!(parsed_n, n);
        for (x, y) in m.iter().zip(back.iter()) {
            prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
            prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }
}
