//! Volumes of metric balls and the resulting manifold volume bounds.
//!
//! With the metric normalized so the ball model has constant holomorphic
//! sectional curvature -4, the volume of the unit sphere `S^{2n-1}` is
//! `2 pi^n / (n-1)!` and the volume of a metric ball of radius `r` is
//!
//! ```text
//! Vol B(r) = (4^n / (2n)) * Vol(S^{2n-1}) * sinh^{2n}(r / 2)
//! ```
//!
//! A second convention with `sinh(r)` in place of `sinh(r/2)` is in
//! circulation (it corresponds to curvature pinched in [-4, -1] with the
//! metric scaled the other way); both are computed so results can be
//! compared against either. Since certified radii like `0.01 / 17^{n-1}`
//! make `sinh^{2n}` underflow double precision quickly, every volume is
//! evaluated in 192-bit arithmetic and reported both as a double (which
//! may flush to zero) and as a >= 50-significant-digit decimal string.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext::Ext;

/// Which argument the `sinh` factor takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SinhConvention {
    /// `sinh(r/2)` — the convention matching this crate's distance
    /// normalization (curvature -4, distance `2 artanh t` to radius `t`).
    HalfRadius,
    /// `sinh(r)` — the alternative normalization.
    FullRadius,
}

impl SinhConvention {
    /// Short label for reports.
    pub fn label(&self) -> &'static str {
        match self {
            SinhConvention::HalfRadius => "sinh(r/2)",
            SinhConvention::FullRadius => "sinh(r)",
        }
    }
}

/// Volume of the unit sphere `S^{2n-1}`: `2 pi^n / (n-1)!`, evaluated in
/// extended precision and correctly rounded to double (within 1 ulp).
pub fn sphere_volume(n: u32) -> Result<f64> {
    Ok(sphere_volume_ext(n)?.to_f64())
}

pub(crate) fn sphere_volume_ext(n: u32) -> Result<Ext> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "sphere volume needs complex dimension n >= 1".into(),
        ));
    }
    let two = Ext::from_u64(2);
    Ok(Ext::pi().powi(n).mul(&two).div(&Ext::factorial(n - 1)))
}

/// `(4^n / (2n)) * sphere_volume(n) * sinh(arg)^{2n}` in extended
/// precision.
fn ball_volume_from_arg(n: u32, arg: &Ext) -> Result<Ext> {
    let sigma = sphere_volume_ext(n)?;
    let coeff = Ext::from_u64(4)
        .powi(n)
        .mul(&sigma)
        .div(&Ext::from_u64(2 * n as u64));
    Ok(coeff.mul(&arg.sinh().powi(2 * n)))
}

fn sinh_argument(r0: f64, convention: SinhConvention) -> Ext {
    match convention {
        SinhConvention::HalfRadius => Ext::from_f64(r0).mul(&Ext::from_ratio(1, 2)),
        SinhConvention::FullRadius => Ext::from_f64(r0),
    }
}

fn validate_radius(r0: f64) -> Result<()> {
    if r0.is_nan() || r0 <= 0.0 || !r0.is_finite() {
        return Err(Error::InvalidInput(format!(
            "ball radius must be positive and finite, got {r0}"
        )));
    }
    Ok(())
}

/// Volume of a metric ball of radius `r0`, as a double. Underflows to 0.0
/// for radii far below ~1e-8 at higher `n`; use [`manifold_volume_bound`]
/// when the decimal string matters.
pub fn ball_volume(n: u32, r0: f64, convention: SinhConvention) -> Result<f64> {
    validate_radius(r0)?;
    Ok(ball_volume_from_arg(n, &sinh_argument(r0, convention))?.to_f64())
}

/// A ball volume together with its extended-precision decimal form.
///
/// When `r0` is half the displacement budget certified for dimension `n`,
/// `ball_volume` is a lower bound for the volume of every manifold
/// quotient in that dimension.
#[derive(Clone, Debug, Serialize)]
pub struct VolumeResult {
    /// Complex dimension.
    pub n: u32,
    /// Ball radius (double echo of the exact value used).
    pub r0: f64,
    /// Which `sinh` argument convention was used.
    pub convention: SinhConvention,
    /// Volume of the unit sphere `S^{2n-1}`.
    pub sphere_volume: f64,
    /// Ball volume as a double; may underflow to exactly 0.0.
    pub ball_volume: f64,
    /// Ball volume as a decimal string with 50 significant digits.
    pub ball_volume_ext: String,
}

fn volume_result(n: u32, r0: f64, convention: SinhConvention, arg: &Ext) -> Result<VolumeResult> {
    let vol = ball_volume_from_arg(n, arg)?;
    Ok(VolumeResult {
        n,
        r0,
        convention,
        sphere_volume: sphere_volume(n)?,
        ball_volume: vol.to_f64(),
        ball_volume_ext: vol.to_decimal(crate::ext::DECIMAL_DIGITS),
    })
}

/// Ball volume at an arbitrary radius, with the extended decimal string.
pub fn ball_volume_result(n: u32, r0: f64, convention: SinhConvention) -> Result<VolumeResult> {
    validate_radius(r0)?;
    volume_result(n, r0, convention, &sinh_argument(r0, convention))
}

/// Volume lower bound for any manifold quotient of complex dimension
/// `n >= 2` containing an embedded ball of the given radius: the volume of
/// that ball, with the extended decimal string.
pub fn manifold_volume_bound(
    n: u32,
    ball_radius: f64,
    convention: SinhConvention,
) -> Result<VolumeResult> {
    if n < 2 {
        return Err(Error::InvalidInput(
            "manifold volume bounds need complex dimension n >= 2".into(),
        ));
    }
    ball_volume_result(n, ball_radius, convention)
}

/// Ball volume at the built-in reference radius `0.01 / 17^{n-1}`,
/// represented exactly in extended precision (no double rounding of the
/// radius), so every printed digit reflects the exact rational radius.
pub fn reference_volume_bound(n: u32, convention: SinhConvention) -> Result<VolumeResult> {
    if n < 2 {
        return Err(Error::InvalidInput(
            "manifold volume bounds need complex dimension n >= 2".into(),
        ));
    }
    let seventeen_pow = Ext::from_u64(17).powi(n - 1);
    let arg = match convention {
        SinhConvention::HalfRadius => Ext::from_ratio(1, 200).div(&seventeen_pow),
        SinhConvention::FullRadius => Ext::from_ratio(1, 100).div(&seventeen_pow),
    };
    let r0 = 0.01 / 17.0f64.powi(n as i32 - 1);
    volume_result(n, r0, convention, &arg)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // oracle constants are quoted to full precision
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ulp_distance(a: f64, b: f64) -> u64 {
        assert!(a > 0.0 && b > 0.0);
        a.to_bits().abs_diff(b.to_bits())
    }

    #[test]
    fn sphere_volumes_match_closed_forms() {
        // sigma_1 = 2 pi, sigma_3 = 2 pi^2, sigma_9 = 2 pi^5 / 24.
        assert!(ulp_distance(sphere_volume(1).unwrap(), std::f64::consts::TAU) <= 1);
        assert!(ulp_distance(sphere_volume(2).unwrap(), 19.73920880217871723766898) <= 1);
        assert!(ulp_distance(sphere_volume(5).unwrap(), 25.50164039877345443856178) <= 1);
        assert!(sphere_volume(0).is_err());
    }

    #[test]
    fn sphere_volumes_satisfy_the_ratio_recurrence() {
        // sigma_{2n+1} / sigma_{2n-1} = pi / n.
        for n in 1..=20 {
            let a = sphere_volume(n).unwrap();
            let b = sphere_volume(n + 1).unwrap();
            assert_relative_eq!(b / a, std::f64::consts::PI / n as f64, epsilon = 1e-14);
        }
    }

    #[test]
    fn ball_volume_at_unit_sinh_is_eight_pi_squared() {
        // sinh(r/2) = 1 at r = 2 asinh(1); the n = 2 volume is 8 pi^2.
        let r = 2.0 * 1.0f64.asinh();
        let v = ball_volume(2, r, SinhConvention::HalfRadius).unwrap();
        assert!(
            ulp_distance(v, 78.95683520871486895067593) <= 2,
            "v = {v:.17e}"
        );
        // The full-radius convention reaches the same value at half the
        // radius.
        let w = ball_volume(2, 1.0f64.asinh(), SinhConvention::FullRadius).unwrap();
        assert_relative_eq!(w, v, epsilon = 1e-14);
    }

    #[test]
    fn small_radius_asymptotics() {
        // Vol ~ (4^n sigma / (2n)) (r/2)^{2n} as r -> 0.
        let r0 = 1e-5;
        let v = ball_volume(2, r0, SinhConvention::HalfRadius).unwrap();
        let lead = 8.0 * std::f64::consts::PI.powi(2) * (r0 / 2.0f64).powi(4);
        assert_relative_eq!(v, lead, epsilon = 1e-9);
    }

    #[test]
    fn reference_bound_matches_oracle_in_dimension_two() {
        // Independently computed at the exact radius 1/1700.
        let half = reference_volume_bound(2, SinhConvention::HalfRadius).unwrap();
        assert_relative_eq!(
            half.ball_volume,
            5.908457136690599609525535e-13,
            epsilon = 1e-13
        );
        assert!(
            half.ball_volume_ext.starts_with("5.9084571366"),
            "ext = {}",
            half.ball_volume_ext
        );
        assert!(
            half.ball_volume_ext.ends_with("e-13"),
            "ext = {}",
            half.ball_volume_ext
        );

        let full = reference_volume_bound(2, SinhConvention::FullRadius).unwrap();
        assert_relative_eq!(
            full.ball_volume,
            9.45353305426414625896603e-12,
            epsilon = 1e-13
        );
        // sinh(r) = 2 sinh(r/2) cosh(r/2), so the conventions differ by
        // exactly (2 cosh(r/2))^{2n}.
        let r0 = half.r0;
        assert_relative_eq!(
            full.ball_volume / half.ball_volume,
            16.0 * (r0 / 2.0).cosh().powi(4),
            epsilon = 1e-12
        );
    }

    #[test]
    fn reference_bound_matches_oracles_in_higher_dimension() {
        let v3 = reference_volume_bound(3, SinhConvention::HalfRadius).unwrap();
        assert_relative_eq!(v3.ball_volume, 8.86974861476e-27, epsilon = 1e-11);
        assert!(
            v3.ball_volume_ext.starts_with("8.8697486147"),
            "ext = {}",
            v3.ball_volume_ext
        );

        let v4 = reference_volume_bound(4, SinhConvention::HalfRadius).unwrap();
        assert_relative_eq!(v4.ball_volume, 1.19567771784e-45, epsilon = 1e-11);
        assert!(
            v4.ball_volume_ext.starts_with("1.1956777178"),
            "ext = {}",
            v4.ball_volume_ext
        );
    }

    #[test]
    fn extended_string_carries_fifty_digits_and_survives_underflow() {
        let v = reference_volume_bound(12, SinhConvention::HalfRadius).unwrap();
        // 17^{11} ~ 3.4e13 makes the double underflow ...
        assert_eq!(v.ball_volume, 0.0);
        // ... while the string still carries the value.
        let mantissa: String = v
            .ball_volume_ext
            .chars()
            .take_while(|c| *c != 'e')
            .filter(|c| c.is_ascii_digit())
            .collect();
        assert!(mantissa.len() >= 50, "ext = {}", v.ball_volume_ext);
        assert!(
            v.ball_volume_ext.contains("e-"),
            "ext = {}",
            v.ball_volume_ext
        );
    }

    #[test]
    fn volume_shrinks_with_dimension_at_the_reference_radius() {
        let mut prev = f64::INFINITY;
        for n in 2..=8 {
            let v = reference_volume_bound(n, SinhConvention::HalfRadius).unwrap();
            assert!(v.ball_volume > 0.0);
            assert!(v.ball_volume < prev * 1e-3, "n = {n}");
            prev = v.ball_volume;
        }
    }

    #[test]
    fn full_radius_convention_dominates() {
        for n in 2..=6 {
            for &r0 in &[1e-4, 0.3, 2.0] {
                let h = ball_volume(n, r0, SinhConvention::HalfRadius).unwrap();
                let f = ball_volume(n, r0, SinhConvention::FullRadius).unwrap();
                assert!(f > h);
            }
        }
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(ball_volume(2, 0.0, SinhConvention::HalfRadius).is_err());
        assert!(ball_volume(2, -1.0, SinhConvention::HalfRadius).is_err());
        assert!(ball_volume(2, f64::NAN, SinhConvention::HalfRadius).is_err());
        assert!(manifold_volume_bound(1, 0.5, SinhConvention::HalfRadius).is_err());
        assert!(reference_volume_bound(1, SinhConvention::HalfRadius).is_err());
    }
}
