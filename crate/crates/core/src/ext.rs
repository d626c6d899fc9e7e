//! Thin extended-precision layer over 192-bit binary floating point
//! (about 57 decimal digits), used by the bounds and volume modules where
//! double precision would underflow or lose every significant digit.

use std::cell::RefCell;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

/// Working precision in bits (~57.8 decimal digits).
pub(crate) const PRECISION_BITS: usize = 192;
/// Decimal digits guaranteed meaningful in reported extended values.
pub(crate) const DECIMAL_DIGITS: usize = 50;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("constants cache allocation"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// A 192-bit floating point value with ergonomic arithmetic.
#[derive(Clone, Debug)]
pub(crate) struct Ext(BigFloat);

impl Ext {
    pub fn from_f64(v: f64) -> Self {
        Ext(BigFloat::from_f64(v, PRECISION_BITS))
    }

    pub fn from_u64(v: u64) -> Self {
        Ext(BigFloat::from_u64(v, PRECISION_BITS))
    }

    /// Exact ratio of integers, rounded once at full precision.
    pub fn from_ratio(num: i64, den: u64) -> Self {
        Ext(BigFloat::from_i64(num, PRECISION_BITS).div(
            &BigFloat::from_u64(den, PRECISION_BITS),
            PRECISION_BITS,
            RM,
        ))
    }

    pub fn pi() -> Self {
        Ext(with_consts(|cc| cc.pi(PRECISION_BITS, RM)))
    }

    pub fn add(&self, o: &Ext) -> Ext {
        Ext(self.0.add(&o.0, PRECISION_BITS, RM))
    }

    pub fn sub(&self, o: &Ext) -> Ext {
        Ext(self.0.sub(&o.0, PRECISION_BITS, RM))
    }

    pub fn mul(&self, o: &Ext) -> Ext {
        Ext(self.0.mul(&o.0, PRECISION_BITS, RM))
    }

    pub fn div(&self, o: &Ext) -> Ext {
        Ext(self.0.div(&o.0, PRECISION_BITS, RM))
    }

    pub fn exp(&self) -> Ext {
        Ext(with_consts(|cc| self.0.exp(PRECISION_BITS, RM, cc)))
    }

    /// `exp(self) - 1`, accurate for small arguments thanks to the wide
    /// mantissa (no dedicated expm1 needed below |x| ~ 2^-130).
    pub fn exp_m1(&self) -> Ext {
        self.exp().sub(&Ext::from_u64(1))
    }

    pub fn sinh(&self) -> Ext {
        Ext(with_consts(|cc| self.0.sinh(PRECISION_BITS, RM, cc)))
    }

    pub fn powi(&self, n: u32) -> Ext {
        Ext(self.0.powi(n as usize, PRECISION_BITS, RM))
    }

    /// `n!` as an extended value (exact for every factorial that fits the
    /// mantissa, which covers all uses here).
    pub fn factorial(n: u32) -> Ext {
        let mut acc = Ext::from_u64(1);
        for k in 2..=n as u64 {
            acc = acc.mul(&Ext::from_u64(k));
        }
        acc
    }

    /// Correctly rounded conversion to double via the decimal string
    /// (Rust's float parsing rounds correctly, and 57 digits are more than
    /// enough to determine the nearest double).
    pub fn to_f64(&self) -> f64 {
        if self.0.is_zero() {
            return 0.0;
        }
        if self.0.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.0.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        self.full_string().parse::<f64>().unwrap_or(f64::NAN)
    }

    fn full_string(&self) -> String {
        with_consts(|cc| self.0.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "nan".into())
    }

    /// Scientific-notation decimal string truncated to `digits`
    /// significant digits (at most [`DECIMAL_DIGITS`] are meaningful).
    pub fn to_decimal(&self, digits: usize) -> String {
        let full = self.full_string();
        truncate_sci(&full, digits.max(1))
    }
}

/// Truncates the mantissa of a string like `-1.2345e-67` to `digits`
/// significant digits, preserving sign and exponent.
fn truncate_sci(s: &str, digits: usize) -> String {
    let (mantissa, exponent) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, Some(e)),
        None => (s, None),
    };
    let mut kept = String::with_capacity(digits + 8);
    let mut significant = 0usize;
    for ch in mantissa.chars() {
        if ch.is_ascii_digit() {
            if significant >= digits {
                break;
            }
            significant += 1;
        }
        kept.push(ch);
    }
    // Strip a trailing bare dot for cleanliness.
    if kept.ends_with('.') {
        kept.pop();
    }
    match exponent {
        Some(e) => format!("{kept}e{e}"),
        None => kept,
    }
}
