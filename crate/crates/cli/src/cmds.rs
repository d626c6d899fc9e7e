//! The six subcommand implementations. Each returns the process exit code:
//! 0 success, 1 verification/validation failure, 2 usage or parse error.

use std::io::Read;

use chball::approx::{dirichlet_approx, finite_order_approx};
use chball::bounds::{max_delta_with_omega, reference_point};
use chball::hermitian::{bergman_distance, BallPoint};
use chball::isometry::{
    apply, classify, random_unitary, su_residuals, verify_su, ComplexIsometry, DEFAULT_CLASSIFY_TOL,
};
use chball::matfile::parse_matrix_str;
use chball::norms::{dist_to_unitary, eigenvalue_moduli, jorgensen_quantity, operator_norm};
use chball::volume::{manifold_volume_bound, reference_volume_bound, SinhConvention};
use chball::{verify, CMat};

use crate::output::{fmt_float, print_header, Cell, Format, Rows};
use crate::{ApproxArgs, BoundsArgs, FileArgs, OptimizeArgs, PrecisionArg, VerifyArgs};

const CONSTANT_TOL: f64 = 1e-15;

fn usage_error(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    2
}

fn internal_error(e: impl std::fmt::Display) -> i32 {
    eprintln!("error: {e}");
    1
}

/// `bounds`: one row per complex dimension with the certified radius, the
/// displacement budget, the bound value against the threshold, and the
/// manifold volume lower bound in both sinh-argument conventions.
pub fn bounds(args: &BoundsArgs, format: Format, no_header: bool) -> i32 {
    if args.n < 2 || args.n_max > 12 || args.n > args.n_max {
        return usage_error(&format!(
            "need 2 <= n <= n-max <= 12, got n={} n-max={}",
            args.n, args.n_max
        ));
    }
    let convention = args.omega.convention();
    let omega = convention.value(CONSTANT_TOL);
    print_header(
        "bounds",
        &[
            ("n", args.n.to_string()),
            ("n-max", args.n_max.to_string()),
            ("precision", args.precision.label().to_string()),
            ("omega", convention.label().to_string()),
            ("format", format.label().to_string()),
        ],
        no_header,
    );

    let extended = args.precision == PrecisionArg::Extended;
    let mut rows = Rows::new(vec![
        "n",
        "quality",
        "delta",
        "ball_radius",
        "bound",
        "omega",
        "feasible",
        if extended {
            "vol_half_ext50"
        } else {
            "vol_half"
        },
        if extended {
            "vol_full_ext50"
        } else {
            "vol_full"
        },
    ]);
    for dim in args.n..=args.n_max {
        let point = match reference_point(dim) {
            Ok(p) => p,
            Err(e) => return internal_error(e),
        };
        // The reference radius is an exact rational; the dedicated entry
        // point keeps all printed digits exact instead of inheriting the
        // double rounding of `point.ball_radius`.
        let half = match reference_volume_bound(dim, SinhConvention::HalfRadius) {
            Ok(v) => v,
            Err(e) => return internal_error(e),
        };
        let full = match reference_volume_bound(dim, SinhConvention::FullRadius) {
            Ok(v) => v,
            Err(e) => return internal_error(e),
        };
        let (vol_half, vol_full): (Cell, Cell) = if extended {
            (half.ball_volume_ext.into(), full.ball_volume_ext.into())
        } else {
            (half.ball_volume.into(), full.ball_volume.into())
        };
        rows.push(vec![
            u64::from(dim).into(),
            point.quality.into(),
            point.delta.into(),
            point.ball_radius.into(),
            point.bound_value.into(),
            omega.into(),
            (point.bound_value <= omega).into(),
            vol_half,
            vol_full,
        ]);
    }
    print!("{}", rows.render(format));
    0
}

/// `verify`: runs the named invariant suite (or all of them) and reports
/// per-check pass/fail counts and worst-case margins. Failing checks are
/// serialized to stderr as replay instances.
pub fn verify_cmd(args: &VerifyArgs, format: Format, no_header: bool) -> i32 {
    let known = verify::suites();
    if args.suite != "all" && !known.contains(&args.suite.as_str()) {
        return usage_error(&format!(
            "unknown suite '{}'; expected one of {} or 'all'",
            args.suite,
            known.join(", ")
        ));
    }
    print_header(
        "verify",
        &[
            ("suite", args.suite.clone()),
            ("samples", args.samples.to_string()),
            ("seed", args.seed.to_string()),
            ("format", format.label().to_string()),
        ],
        no_header,
    );

    let reports = if args.suite == "all" {
        match verify::run_all(args.samples, args.seed) {
            Ok(r) => r,
            Err(e) => return internal_error(e),
        }
    } else {
        match verify::run_suite(&args.suite, args.samples, args.seed) {
            Ok(r) => vec![r],
            Err(e) => return internal_error(e),
        }
    };

    let mut rows = Rows::new(vec![
        "suite",
        "check",
        "cases",
        "failures",
        "worst_margin",
        "worst_seed",
    ]);
    let mut failing: Vec<serde_json::Value> = Vec::new();
    let (mut checks, mut cases, mut failures) = (0usize, 0usize, 0usize);
    for report in &reports {
        for check in &report.checks {
            rows.push(vec![
                report.suite.into(),
                check.name.into(),
                (check.cases as u64).into(),
                (check.failures as u64).into(),
                check.worst_margin.into(),
                check.worst_seed.into(),
            ]);
            checks += 1;
            cases += check.cases;
            failures += check.failures;
            if check.failures > 0 {
                failing.push(serde_json::json!({
                    "check": check.name,
                    "case_seed": check.worst_seed,
                    "worst_margin": check.worst_margin,
                }));
            }
        }
    }
    print!("{}", rows.render(format));
    eprintln!(
        "{} suite(s), {} check(s), {} case(s), {} failure(s)",
        reports.len(),
        checks,
        cases,
        failures
    );
    if failing.is_empty() {
        0
    } else {
        for inst in &failing {
            eprintln!("replay: {inst}");
        }
        1
    }
}

/// `approx`: either simultaneously approximates an explicit list of angles
/// by rationals with one denominator, or draws a random unitary and
/// approximates it by a finite-order one.
pub fn approx(args: &ApproxArgs, format: Format, no_header: bool) -> i32 {
    if args.quality.is_nan() || args.quality <= 1.0 || !args.quality.is_finite() {
        return usage_error(&format!("need finite Q > 1, got {}", args.quality));
    }
    if let Some(raw) = &args.thetas {
        let mut thetas = Vec::new();
        for part in raw.split(',') {
            match part.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => thetas.push(v),
                _ => {
                    return usage_error(&format!("--thetas entry '{part}' is not a finite number"))
                }
            }
        }
        if thetas.is_empty() {
            return usage_error("--thetas must contain at least one angle");
        }
        print_header(
            "approx",
            &[
                ("thetas", raw.clone()),
                ("Q", fmt_float(args.quality)),
                ("format", format.label().to_string()),
            ],
            no_header,
        );
        let approx = match dirichlet_approx(&thetas, args.quality) {
            Ok(a) => a,
            Err(e) => return internal_error(e),
        };
        let budget = 1.0 / (approx.q as f64 * approx.quality);
        let mut rows = Rows::new(vec![
            "kind",
            "m",
            "quality",
            "q",
            "max_err",
            "budget",
            "certified",
            "numerators",
        ]);
        let numerators = approx
            .p
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(";");
        rows.push(vec![
            "angles".into(),
            (approx.m() as u64).into(),
            approx.quality.into(),
            approx.q.into(),
            approx.max_err.into(),
            budget.into(),
            (approx.max_err <= budget + 1e-15).into(),
            numerators.into(),
        ]);
        print!("{}", rows.render(format));
        0
    } else {
        if args.n < 1 || args.n > 8 {
            return usage_error(&format!("need 1 <= n <= 8, got {}", args.n));
        }
        print_header(
            "approx",
            &[
                ("n", args.n.to_string()),
                ("seed", args.seed.to_string()),
                ("Q", fmt_float(args.quality)),
                ("mode", args.mode.label().to_string()),
                ("format", format.label().to_string()),
            ],
            no_header,
        );
        let a = random_unitary(args.n as usize + 1, args.seed);
        let fo = match finite_order_approx(&a, args.quality, args.mode.mode()) {
            Ok(f) => f,
            Err(e) => return internal_error(e),
        };
        let budget = std::f64::consts::TAU / (fo.q as f64 * args.quality);
        let max_angle_err = fo.angle_errors.iter().fold(0.0f64, |m, e| m.max(e.abs()));
        let mut rows = Rows::new(vec![
            "kind",
            "size",
            "mode",
            "quality",
            "q",
            "err",
            "budget",
            "certified",
            "max_angle_err",
            "phase_arg",
        ]);
        rows.push(vec![
            "unitary".into(),
            (args.n as u64 + 1).into(),
            args.mode.label().into(),
            args.quality.into(),
            fo.q.into(),
            fo.err.into(),
            budget.into(),
            (fo.err <= budget + 1e-12).into(),
            max_angle_err.into(),
            fo.phase.arg().into(),
        ]);
        print!("{}", rows.render(format));
        0
    }
}

/// Reads a matrix file (`-` = stdin) and validates it as a form-preserving
/// matrix of unit determinant. Returns the exit code on failure.
fn read_isometry(path: &str, tol: f64) -> Result<(usize, CMat, ComplexIsometry), i32> {
    let text = if path == "-" {
        let mut buf = String::new();
        match std::io::stdin().read_to_string(&mut buf) {
            Ok(_) => buf,
            Err(e) => {
                eprintln!("error: reading stdin: {e}");
                return Err(2);
            }
        }
    } else {
        match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: reading {path}: {e}");
                return Err(2);
            }
        }
    };
    let (n, mat) = match parse_matrix_str(&text) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return Err(2);
        }
    };
    match verify_su(&mat, tol) {
        Ok(iso) => Ok((n, mat, iso)),
        Err(e) => {
            if let Ok((form_residual, det_residual)) = su_residuals(&mat) {
                eprintln!(
                    "validation failed: {e} (form residual {}, determinant residual {})",
                    fmt_float(form_residual),
                    fmt_float(det_residual)
                );
            } else {
                eprintln!("validation failed: {e}");
            }
            Err(1)
        }
    }
}

/// `classify`: full diagnostic row for one matrix — residuals, class,
/// eigenvalue moduli, norms, displacement, and the distance-to-unitary
/// certificate.
pub fn classify_cmd(args: &FileArgs, format: Format, no_header: bool) -> i32 {
    print_header(
        "classify",
        &[
            ("file", args.file.clone()),
            ("tol", fmt_float(args.tol)),
            ("format", format.label().to_string()),
        ],
        no_header,
    );
    let (n, mat, iso) = match read_isometry(&args.file, args.tol) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let (form_residual, det_residual) = match su_residuals(&mat) {
        Ok(v) => v,
        Err(e) => return internal_error(e),
    };
    let class = classify(&iso, DEFAULT_CLASSIFY_TOL);
    let moduli = match eigenvalue_moduli(&mat) {
        Ok(m) => m,
        Err(e) => return internal_error(e),
    };
    let norm = match operator_norm(&mat) {
        Ok(v) => v,
        Err(e) => return internal_error(e),
    };
    let jorgensen = match jorgensen_quantity(&iso) {
        Ok(v) => v,
        Err(e) => return internal_error(e),
    };
    let origin = BallPoint::origin(n);
    let rho = match apply(&iso, &origin).and_then(|img| bergman_distance(&origin, &img)) {
        Ok(v) => v,
        Err(e) => return internal_error(e),
    };
    let cert = match dist_to_unitary(&iso) {
        Ok(c) => c,
        Err(e) => return internal_error(e),
    };

    let mut rows = Rows::new(vec![
        "n",
        "form_residual",
        "det_residual",
        "class",
        "norm",
        "jorgensen",
        "rho_origin",
        "r",
        "dist_actual",
        "dist_bound",
        "moduli",
    ]);
    let moduli_str = moduli
        .iter()
        .map(|m| fmt_float(*m))
        .collect::<Vec<_>>()
        .join(";");
    rows.push(vec![
        (n as u64).into(),
        form_residual.into(),
        det_residual.into(),
        format!("{class:?}").into(),
        norm.into(),
        jorgensen.into(),
        rho.into(),
        cert.r.into(),
        cert.actual.into(),
        cert.bound.into(),
        moduli_str.into(),
    ]);
    print!("{}", rows.render(format));
    0
}

/// `distance`: the distance-to-unitary certificate for one matrix — the
/// achieved distance, its closed-form bound `r (r - 1)`, the norm bound
/// `r`, and the witness quality.
pub fn distance_cmd(args: &FileArgs, format: Format, no_header: bool) -> i32 {
    print_header(
        "distance",
        &[
            ("file", args.file.clone()),
            ("tol", fmt_float(args.tol)),
            ("format", format.label().to_string()),
        ],
        no_header,
    );
    let (n, mat, iso) = match read_isometry(&args.file, args.tol) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let cert = match dist_to_unitary(&iso) {
        Ok(c) => c,
        Err(e) => return internal_error(e),
    };
    let norm = match operator_norm(&mat) {
        Ok(v) => v,
        Err(e) => return internal_error(e),
    };
    let origin = BallPoint::origin(n);
    let rho = match apply(&iso, &origin).and_then(|img| bergman_distance(&origin, &img)) {
        Ok(v) => v,
        Err(e) => return internal_error(e),
    };
    let witness_residual = match su_residuals(&cert.witness) {
        Ok((f, _)) => f,
        Err(e) => return internal_error(e),
    };

    let mut rows = Rows::new(vec![
        "n",
        "rho_origin",
        "r",
        "norm",
        "norm_bound",
        "dist_actual",
        "dist_bound",
        "witness_form_residual",
    ]);
    rows.push(vec![
        (n as u64).into(),
        rho.into(),
        cert.r.into(),
        norm.into(),
        cert.r.into(),
        cert.actual.into(),
        cert.bound.into(),
        witness_residual.into(),
    ]);
    print!("{}", rows.render(format));
    0
}

/// `optimize`: maximizes the displacement budget over a quality range and
/// prints the winner next to the built-in reference point, with the
/// implied ball radius and volume bounds.
pub fn optimize(args: &OptimizeArgs, format: Format, no_header: bool) -> i32 {
    if args.n < 2 || args.n > 12 {
        return usage_error(&format!("need 2 <= n <= 12, got {}", args.n));
    }
    if args.q_min.is_nan()
        || args.q_min <= 1.0
        || args.q_max.is_nan()
        || args.q_max < args.q_min
        || !args.q_max.is_finite()
    {
        return usage_error(&format!(
            "need 1 < Q-min <= Q-max (finite), got [{}, {}]",
            args.q_min, args.q_max
        ));
    }
    if args.tol.is_nan() || args.tol <= 0.0 || !args.tol.is_finite() {
        return usage_error(&format!("need finite tol > 0, got {}", args.tol));
    }
    let convention = args.omega.convention();
    let omega = convention.value(CONSTANT_TOL);
    print_header(
        "optimize",
        &[
            ("n", args.n.to_string()),
            ("Q-min", fmt_float(args.q_min)),
            ("Q-max", fmt_float(args.q_max)),
            ("tol", fmt_float(args.tol)),
            ("omega", convention.label().to_string()),
            ("precision", args.precision.label().to_string()),
            ("format", format.label().to_string()),
        ],
        no_header,
    );

    let optimum = match max_delta_with_omega(args.n, args.q_min, args.q_max, args.tol, omega) {
        Ok(r) => r,
        Err(e) => return internal_error(e),
    };
    let reference = match reference_point(args.n) {
        Ok(r) => r,
        Err(e) => return internal_error(e),
    };

    let extended = args.precision == PrecisionArg::Extended;
    let mut rows = Rows::new(vec![
        "which",
        "n",
        "quality",
        "delta",
        "bound",
        "omega",
        "feasible",
        "ball_radius",
        "tol",
        if extended {
            "vol_half_ext50"
        } else {
            "vol_half"
        },
        if extended {
            "vol_full_ext50"
        } else {
            "vol_full"
        },
    ]);
    for (which, point) in [("optimized", &optimum), ("reference", &reference)] {
        // The reference radius is an exact rational with a dedicated
        // full-precision entry point; the optimized radius exists only as a
        // double.
        let vols = if which == "reference" {
            reference_volume_bound(args.n, SinhConvention::HalfRadius).and_then(|h| {
                reference_volume_bound(args.n, SinhConvention::FullRadius).map(|f| (h, f))
            })
        } else {
            manifold_volume_bound(args.n, point.ball_radius, SinhConvention::HalfRadius).and_then(
                |h| {
                    manifold_volume_bound(args.n, point.ball_radius, SinhConvention::FullRadius)
                        .map(|f| (h, f))
                },
            )
        };
        let (half, full) = match vols {
            Ok(v) => v,
            Err(e) => return internal_error(e),
        };
        let (vol_half, vol_full): (Cell, Cell) = if extended {
            (half.ball_volume_ext.into(), full.ball_volume_ext.into())
        } else {
            (half.ball_volume.into(), full.ball_volume.into())
        };
        rows.push(vec![
            which.into(),
            u64::from(point.n).into(),
            point.quality.into(),
            point.delta.into(),
            point.bound_value.into(),
            point.omega.into(),
            point.feasible.into(),
            point.ball_radius.into(),
            args.tol.into(),
            vol_half,
            vol_full,
        ]);
    }
    print!("{}", rows.render(format));
    0
}
