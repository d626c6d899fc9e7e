//! A small JSON interchange format for complex matrices.
//!
//! ```json
//! {"n": 2, "mat": [[1.25, 0.0], [0.0, -0.5], ...]}
//! ```
//!
//! `n` is the complex dimension of the ball, so the matrix is
//! `(n+1) x (n+1)`; `mat` lists entries row-major as `[re, im]` pairs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{CMat, C64};

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    n: u32,
    mat: Vec<[f64; 2]>,
}

/// Parses a matrix from its JSON form; returns the ball dimension `n` and
/// the `(n+1) x (n+1)` matrix.
pub fn parse_matrix_str(s: &str) -> Result<(usize, CMat)> {
    let file: MatrixFile =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("invalid matrix JSON: {e}")))?;
    if file.n < 1 {
        return Err(Error::Parse("matrix dimension field n must be >= 1".into()));
    }
    let d = file.n as usize + 1;
    if file.mat.len() != d * d {
        return Err(Error::Parse(format!(
            "expected {} entries for n = {}, got {}",
            d * d,
            file.n,
            file.mat.len()
        )));
    }
    for (i, [re, im]) in file.mat.iter().enumerate() {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::Parse(format!(
                "entry {i} is not finite: [{re}, {im}]"
            )));
        }
    }
    let mat = CMat::from_fn(d, d, |r, c| {
        let [re, im] = file.mat[r * d + c];
        C64::new(re, im)
    });
    Ok((file.n as usize, mat))
}

/// Serializes a square `(n+1) x (n+1)` matrix to the JSON form. The
/// output is a single line, suitable for streaming one matrix per line.
pub fn matrix_to_string(m: &CMat) -> Result<String> {
    let d = m.nrows();
    if d != m.ncols() || d < 2 {
        return Err(Error::MatrixShape {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let mut mat = Vec::with_capacity(d * d);
    for r in 0..d {
        for c in 0..d {
            let z = m[(r, c)];
            mat.push([z.re, z.im]);
        }
    }
    let file = MatrixFile {
        n: (d - 1) as u32,
        mat,
    };
    serde_json::to_string(&file).map_err(|e| Error::Parse(format!("serialization failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_is_bitwise_exact() {
        let m = CMat::from_fn(3, 3, |r, c| {
            C64::new(
                (r as f64 + 1.0) / (c as f64 + 3.0),
                -(c as f64) * 0.7 + 1e-17,
            )
        });
        let s = matrix_to_string(&m).unwrap();
        let (n, back) = parse_matrix_str(&s).unwrap();
        assert_eq!(n, 2);
        for r in 0..3 {
            for c in 0..3 {
                assert_eq!(m[(r, c)].re.to_bits(), back[(r, c)].re.to_bits());
                assert_eq!(m[(r, c)].im.to_bits(), back[(r, c)].im.to_bits());
            }
        }
    }

    #[test]
    fn literal_form_parses() {
        let s = r#"{"n": 1, "mat": [[1.25, 0.0], [0.0, 0.75], [0.0, -0.75], [1.25, 0.0]]}"#;
        let (n, m) = parse_matrix_str(s).unwrap();
        assert_eq!(n, 1);
        assert_eq!(m[(0, 0)], C64::new(1.25, 0.0));
        assert_eq!(m[(0, 1)], C64::new(0.0, 0.75));
        assert_eq!(m[(1, 0)], C64::new(0.0, -0.75));
    }

    #[test]
    fn malformed_inputs_are_parse_errors() {
        for bad in [
            "not json",
            r#"{"n": 0, "mat": [[1.0, 0.0]]}"#,
            r#"{"n": 2, "mat": [[1.0, 0.0]]}"#,
            r#"{"n": 1, "mat": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], ["inf", 0.0]]}"#,
        ] {
            assert!(
                matches!(parse_matrix_str(bad), Err(Error::Parse(_))),
                "accepted: {bad}"
            );
        }
        // Non-finite numbers can't appear in JSON numerically, but guard
        // the explicit check too.
        let s = r#"{"n": 1, "mat": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1e400, 0.0]]}"#;
        assert!(parse_matrix_str(s).is_err());
    }

    #[test]
    fn non_square_matrices_are_rejected_on_write() {
        let m = CMat::zeros(2, 3);
        assert!(matrix_to_string(&m).is_err());
        let tiny = CMat::zeros(1, 1);
        assert!(matrix_to_string(&tiny).is_err());
    }
}
