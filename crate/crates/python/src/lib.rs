//! Python bindings for the complex hyperbolic ball toolkit.
//!
//! Matrices cross the boundary as nested lists of Python complex numbers
//! (row-major); points as flat lists of complex coordinates. Structured
//! results come back as dicts. All functions raise `ValueError` with the
//! library's error message on invalid input.

use num_complex::Complex;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use chball::approx::ApproxMode;
use chball::bounds::MargulisResult;
use chball::hermitian::BallPoint;
use chball::isometry::{self, BoostParams, ComplexIsometry, DEFAULT_FORM_TOL};
use chball::volume::{SinhConvention, VolumeResult};
use chball::{bounds, hermitian, norms, verify, volume, CMat};

fn to_py_err(e: chball::error::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn mat_from_rows(rows: Vec<Vec<Complex<f64>>>) -> PyResult<CMat> {
    let d = rows.len();
    if d == 0 {
        return Err(PyValueError::new_err("matrix must be nonempty"));
    }
    if rows.iter().any(|r| r.len() != d) {
        return Err(PyValueError::new_err(format!(
            "matrix must be square with {d} columns per row"
        )));
    }
    Ok(CMat::from_fn(d, d, |i, j| rows[i][j]))
}

fn mat_to_rows(m: &CMat) -> Vec<Vec<Complex<f64>>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn ball_point(coords: Vec<Complex<f64>>) -> PyResult<BallPoint> {
    BallPoint::new(coords).map_err(to_py_err)
}

fn isometry_from_rows(rows: Vec<Vec<Complex<f64>>>, tol: f64) -> PyResult<ComplexIsometry> {
    let mat = mat_from_rows(rows)?;
    isometry::verify_su(&mat, tol).map_err(to_py_err)
}

fn margulis_dict<'py>(py: Python<'py>, r: &MargulisResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("n", r.n)?;
    d.set_item("quality", r.quality)?;
    d.set_item("delta", r.delta)?;
    d.set_item("bound_value", r.bound_value)?;
    d.set_item("omega", r.omega)?;
    d.set_item("feasible", r.feasible)?;
    d.set_item("ball_radius", r.ball_radius)?;
    Ok(d)
}

fn volume_dict<'py>(py: Python<'py>, v: &VolumeResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("n", v.n)?;
    d.set_item("r0", v.r0)?;
    d.set_item("convention", v.convention.label())?;
    d.set_item("sphere_volume", v.sphere_volume)?;
    d.set_item("ball_volume", v.ball_volume)?;
    d.set_item("ball_volume_ext", &v.ball_volume_ext)?;
    Ok(d)
}

fn parse_convention(name: &str) -> PyResult<SinhConvention> {
    match name {
        "half" => Ok(SinhConvention::HalfRadius),
        "full" => Ok(SinhConvention::FullRadius),
        other => Err(PyValueError::new_err(format!(
            "convention must be 'half' or 'full', got '{other}'"
        ))),
    }
}

fn parse_mode(name: &str) -> PyResult<ApproxMode> {
    match name {
        "projective" => Ok(ApproxMode::Projective),
        "full-spectrum" => Ok(ApproxMode::FullSpectrum),
        other => Err(PyValueError::new_err(format!(
            "mode must be 'projective' or 'full-spectrum', got '{other}'"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Constants and bounds
// ---------------------------------------------------------------------------

/// Root of 2t(t+1)^2 = 1 on [0, 1/2] (~0.29716), bisected to `tol`.
#[pyfunction]
#[pyo3(signature = (tol = 1e-15))]
fn tau_constant(tol: f64) -> f64 {
    bounds::tau_constant(tol)
}

/// Root of 2w(2w^2+1) = 1 on [0, 1/2] (~0.38546), bisected to `tol`.
#[pyfunction]
#[pyo3(signature = (tol = 1e-15))]
fn omega_constant(tol: f64) -> f64 {
    bounds::omega_constant(tol)
}

/// The displacement bound `(x+1)(x + 2 pi / quality)` with
/// `x = (e^t - 1) e^{delta/2}`, `t = delta/2 * quality^{n-1}`.
#[pyfunction]
fn theorem_bound(delta: f64, quality: f64, n: u32) -> f64 {
    bounds::theorem_bound(delta, quality, n)
}

/// The built-in reference point: quality 17, displacement 0.02 / 17^{n-1}.
#[pyfunction]
fn reference_point(py: Python<'_>, n: u32) -> PyResult<Bound<'_, PyDict>> {
    let r = bounds::reference_point(n).map_err(to_py_err)?;
    margulis_dict(py, &r)
}

/// Maximizes the displacement budget over qualities in `[q_min, q_max]`.
#[pyfunction]
#[pyo3(signature = (n, q_min = 2.0, q_max = 64.0, tol = 1e-9))]
fn max_delta(
    py: Python<'_>,
    n: u32,
    q_min: f64,
    q_max: f64,
    tol: f64,
) -> PyResult<Bound<'_, PyDict>> {
    let r = bounds::max_delta(n, q_min, q_max, tol).map_err(to_py_err)?;
    margulis_dict(py, &r)
}

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

/// Distance between two points of the unit ball, given as coordinate lists.
#[pyfunction]
fn bergman_distance(x: Vec<Complex<f64>>, y: Vec<Complex<f64>>) -> PyResult<f64> {
    hermitian::bergman_distance(&ball_point(x)?, &ball_point(y)?).map_err(to_py_err)
}

/// The boost with parameter `r > 1` towards a unit direction; moves the
/// origin by distance `2 ln r`.
#[pyfunction]
fn boost(r: f64, direction: Vec<Complex<f64>>) -> PyResult<Vec<Vec<Complex<f64>>>> {
    let b = isometry::boost(&BoostParams { r, direction }).map_err(to_py_err)?;
    Ok(mat_to_rows(b.matrix()))
}

/// Applies a form-preserving matrix to a ball point.
#[pyfunction]
#[pyo3(signature = (mat, point, tol = DEFAULT_FORM_TOL))]
fn apply_isometry(
    mat: Vec<Vec<Complex<f64>>>,
    point: Vec<Complex<f64>>,
    tol: f64,
) -> PyResult<Vec<Complex<f64>>> {
    let iso = isometry_from_rows(mat, tol)?;
    let image = isometry::apply(&iso, &ball_point(point)?).map_err(to_py_err)?;
    Ok(image.coords().iter().copied().collect())
}

/// Validates a matrix and classifies it as 'Loxodromic', 'Parabolic',
/// 'Elliptic', 'Identity', or 'NumericallyAmbiguous'.
#[pyfunction]
#[pyo3(signature = (mat, tol = isometry::DEFAULT_CLASSIFY_TOL))]
fn classify(mat: Vec<Vec<Complex<f64>>>, tol: f64) -> PyResult<String> {
    let iso = isometry_from_rows(mat, DEFAULT_FORM_TOL)?;
    Ok(format!("{:?}", isometry::classify(&iso, tol)))
}

/// A random form-preserving matrix: unitary * boost(e^s) * unitary with
/// `s` uniform in `[0, s_max]`.
#[pyfunction]
fn random_isometry(n: u32, s_max: f64, seed: u64) -> PyResult<Vec<Vec<Complex<f64>>>> {
    if n == 0 || n > 16 {
        return Err(PyValueError::new_err("need 1 <= n <= 16"));
    }
    Ok(mat_to_rows(
        isometry::random_isometry(n as usize, s_max, seed).matrix(),
    ))
}

/// A Haar-ish random unitary of the given size.
#[pyfunction]
fn random_unitary(size: u32, seed: u64) -> PyResult<Vec<Vec<Complex<f64>>>> {
    if size == 0 || size > 16 {
        return Err(PyValueError::new_err("need 1 <= size <= 16"));
    }
    Ok(mat_to_rows(&isometry::random_unitary(size as usize, seed)))
}

// ---------------------------------------------------------------------------
// Norms and certificates
// ---------------------------------------------------------------------------

/// Largest singular value.
#[pyfunction]
fn operator_norm(mat: Vec<Vec<Complex<f64>>>) -> PyResult<f64> {
    norms::operator_norm(&mat_from_rows(mat)?).map_err(to_py_err)
}

/// Largest eigenvalue modulus.
#[pyfunction]
fn spectral_radius(mat: Vec<Vec<Complex<f64>>>) -> PyResult<f64> {
    norms::spectral_radius(&mat_from_rows(mat)?).map_err(to_py_err)
}

/// Eigenvalue moduli in descending order.
#[pyfunction]
fn eigenvalue_moduli(mat: Vec<Vec<Complex<f64>>>) -> PyResult<Vec<f64>> {
    norms::eigenvalue_moduli(&mat_from_rows(mat)?).map_err(to_py_err)
}

/// `|A| * |A - Id|` for a validated matrix.
#[pyfunction]
fn jorgensen_quantity(mat: Vec<Vec<Complex<f64>>>) -> PyResult<f64> {
    let iso = isometry_from_rows(mat, DEFAULT_FORM_TOL)?;
    norms::jorgensen_quantity(&iso).map_err(to_py_err)
}

/// Distance-to-unitary certificate: an origin-stabilizing unitary witness,
/// the achieved distance, its closed-form bound `r (r - 1)`, and the norm
/// bound `r`.
#[pyfunction]
fn dist_to_unitary(py: Python<'_>, mat: Vec<Vec<Complex<f64>>>) -> PyResult<Bound<'_, PyDict>> {
    let iso = isometry_from_rows(mat, DEFAULT_FORM_TOL)?;
    let cert = norms::dist_to_unitary(&iso).map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("witness", mat_to_rows(&cert.witness))?;
    d.set_item("actual", cert.actual)?;
    d.set_item("bound", cert.bound)?;
    d.set_item("r", cert.r)?;
    Ok(d)
}

// ---------------------------------------------------------------------------
// Approximation
// ---------------------------------------------------------------------------

/// Simultaneous rational approximation: one denominator `q <= quality^m`
/// with every `|theta_i - p_i/q| <= 1/(q * quality)`.
#[pyfunction]
fn dirichlet_approx(py: Python<'_>, thetas: Vec<f64>, quality: f64) -> PyResult<Bound<'_, PyDict>> {
    let a = chball::approx::dirichlet_approx(&thetas, quality).map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("q", a.q)?;
    d.set_item("p", a.p.clone())?;
    d.set_item("max_err", a.max_err)?;
    d.set_item("quality", a.quality)?;
    Ok(d)
}

/// Approximates a unitary matrix by one of finite order `q`, with
/// `|A / phase - B| <= 2 pi / (q * quality)`.
#[pyfunction]
#[pyo3(signature = (mat, quality, mode = "projective"))]
fn finite_order_approx<'py>(
    py: Python<'py>,
    mat: Vec<Vec<Complex<f64>>>,
    quality: f64,
    mode: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let m = mat_from_rows(mat)?;
    let fo =
        chball::approx::finite_order_approx(&m, quality, parse_mode(mode)?).map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("b", mat_to_rows(&fo.b))?;
    d.set_item("q", fo.q)?;
    d.set_item("err", fo.err)?;
    d.set_item("phase", fo.phase)?;
    d.set_item(
        "mode",
        match fo.mode {
            ApproxMode::Projective => "projective",
            ApproxMode::FullSpectrum => "full-spectrum",
        },
    )?;
    d.set_item("angle_errors", fo.angle_errors.clone())?;
    Ok(d)
}

// ---------------------------------------------------------------------------
// Volume
// ---------------------------------------------------------------------------

/// Volume of the unit sphere `S^{2n-1}`.
#[pyfunction]
fn sphere_volume(n: u32) -> PyResult<f64> {
    volume::sphere_volume(n).map_err(to_py_err)
}

/// Volume of a ball of the given radius, with a 50-digit decimal echo.
#[pyfunction]
#[pyo3(signature = (n, r0, convention = "half"))]
fn ball_volume<'py>(
    py: Python<'py>,
    n: u32,
    r0: f64,
    convention: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let v = volume::ball_volume_result(n, r0, parse_convention(convention)?).map_err(to_py_err)?;
    volume_dict(py, &v)
}

/// Volume lower bound for a manifold containing an embedded ball of the
/// given radius.
#[pyfunction]
#[pyo3(signature = (n, ball_radius, convention = "half"))]
fn manifold_volume_bound<'py>(
    py: Python<'py>,
    n: u32,
    ball_radius: f64,
    convention: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let v = volume::manifold_volume_bound(n, ball_radius, parse_convention(convention)?)
        .map_err(to_py_err)?;
    volume_dict(py, &v)
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

/// Runs one named invariant suite and reports per-check outcomes.
#[pyfunction]
#[pyo3(signature = (suite, samples = 1000, seed = 2026))]
fn verify_suite<'py>(
    py: Python<'py>,
    suite: &str,
    samples: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let report = verify::run_suite(suite, samples, seed).map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("suite", report.suite)?;
    d.set_item("seed", report.seed)?;
    d.set_item("samples", report.samples)?;
    d.set_item("passed", report.passed())?;
    d.set_item("cases", report.total_cases())?;
    d.set_item("failures", report.total_failures())?;
    let checks: Vec<Bound<'_, PyDict>> = report
        .checks
        .iter()
        .map(|c| {
            let cd = PyDict::new(py);
            cd.set_item("name", c.name)?;
            cd.set_item("cases", c.cases)?;
            cd.set_item("failures", c.failures)?;
            cd.set_item("worst_margin", c.worst_margin)?;
            cd.set_item("worst_seed", c.worst_seed)?;
            Ok(cd)
        })
        .collect::<PyResult<_>>()?;
    d.set_item("checks", checks)?;
    Ok(d)
}

/// The available suite names.
#[pyfunction]
fn suites() -> Vec<&'static str> {
    verify::suites().to_vec()
}

#[pymodule]
fn chball_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(tau_constant, m)?)?;
    m.add_function(wrap_pyfunction!(omega_constant, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_bound, m)?)?;
    m.add_function(wrap_pyfunction!(reference_point, m)?)?;
    m.add_function(wrap_pyfunction!(max_delta, m)?)?;
    m.add_function(wrap_pyfunction!(bergman_distance, m)?)?;
    m.add_function(wrap_pyfunction!(boost, m)?)?;
    m.add_function(wrap_pyfunction!(apply_isometry, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(random_isometry, m)?)?;
    m.add_function(wrap_pyfunction!(random_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(operator_norm, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_radius, m)?)?;
    m.add_function(wrap_pyfunction!(eigenvalue_moduli, m)?)?;
    m.add_function(wrap_pyfunction!(jorgensen_quantity, m)?)?;
    m.add_function(wrap_pyfunction!(dist_to_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(dirichlet_approx, m)?)?;
    m.add_function(wrap_pyfunction!(finite_order_approx, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_volume, m)?)?;
    m.add_function(wrap_pyfunction!(ball_volume, m)?)?;
    m.add_function(wrap_pyfunction!(manifold_volume_bound, m)?)?;
    m.add_function(wrap_pyfunction!(verify_suite, m)?)?;
    m.add_function(wrap_pyfunction!(suites, m)?)?;
    Ok(())
}
