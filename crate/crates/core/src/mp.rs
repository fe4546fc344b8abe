//! Complex numbers over MPFR floats.
//!
//! `rug` is built without its MPC binding, so complex arithmetic is done here
//! on pairs of [`Float`]s. Binary operations round once per component and
//! produce the larger of the two operand precisions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Round;
use rug::Float;

use crate::error::RpmError;

/// Smallest precision accepted anywhere in the solver.
pub const MIN_PRECISION: u32 = 64;

/// Number of decimal digits carried by `bits` binary digits.
pub fn decimal_digits(bits: u32) -> u32 {
    (f64::from(bits) * std::f64::consts::LOG10_2).floor() as u32
}

/// Parse a decimal literal directly at `prec` bits, never going through `f64`.
pub fn parse_float(text: &str, prec: u32) -> Result<Float, RpmError> {
    let trimmed = text.trim();
    let parsed = Float::parse(trimmed).map_err(|e| RpmError::Config(format!("malformed number {trimmed:?}: {e}")))?;
    let value = Float::with_val(prec, parsed);
    if !value.is_finite() {
        return Err(RpmError::Config(format!("non-finite number {trimmed:?}")));
    }
    Ok(value)
}

/// `a + b` rounded to nothing: the precision grows until MPFR reports an exact result.
pub fn exact_sum(a: &Float, b: &Float) -> Float {
    let mut prec = a.prec().max(b.prec()) + 2;
    loop {
        let (sum, dir) = Float::with_val_round(prec, a + b, Round::Nearest);
        if dir == Ordering::Equal {
            return sum;
        }
        prec *= 2;
    }
}

/// `a * b` without rounding.
pub fn exact_product(a: &Float, b: &Float) -> Float {
    Float::with_val(a.prec() + b.prec(), a * b)
}

/// A real parameter kept as its decimal literal and materialized at whatever precision
/// the solver is running at.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecimalValue(String);

impl DecimalValue {
    pub fn parse(text: &str) -> Result<Self, RpmError> {
        parse_float(text, MIN_PRECISION)?;
        Ok(Self(text.trim().to_string()))
    }

    pub fn at(&self, prec: u32) -> Float {
        parse_float(&self.0, prec).expect("validated on construction")
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for DecimalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MpComplex {
    re: Float,
    im: Float,
}

impl MpComplex {
    pub fn new(re: Float, im: Float) -> Self {
        Self { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(Float::new(prec), Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::new(Float::with_val(prec, 1), Float::new(prec))
    }

    pub fn from_real(re: Float) -> Self {
        let prec = re.prec();
        Self::new(re, Float::new(prec))
    }

    /// Builds a value from decimal strings, each converted at `prec` bits.
    pub fn parse(re: &str, im: &str, prec: u32) -> Result<Self, RpmError> {
        Ok(Self::new(parse_float(re, prec)?, parse_float(im, prec)?))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Self::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn into_parts(self) -> (Float, Float) {
        (self.re, self.im)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// Copy rounded to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        Self::new(Float::with_val(prec, &self.re), Float::with_val(prec, &self.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), Float::with_val(self.im.prec(), -&self.im))
    }

    pub fn norm_sqr(&self) -> Float {
        Float::with_val(self.prec(), &self.re * &self.re + &self.im * &self.im)
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// Natural log of the modulus; `-inf` at zero.
    pub fn ln_abs(&self) -> Float {
        self.abs().ln()
    }

    /// Unit-modulus phase `z / |z|`, or zero at zero.
    pub fn phase(&self) -> Self {
        if self.is_zero() {
            return Self::zero(self.prec());
        }
        let r = self.abs();
        Self::new(
            Float::with_val(self.prec(), &self.re / &r),
            Float::with_val(self.prec(), &self.im / &r),
        )
    }

    pub fn scale(&self, k: &Float) -> Self {
        let prec = self.prec().max(k.prec());
        Self::new(Float::with_val(prec, &self.re * k), Float::with_val(prec, &self.im * k))
    }

    pub fn div_real(&self, k: &Float) -> Self {
        let prec = self.prec().max(k.prec());
        Self::new(Float::with_val(prec, &self.re / k), Float::with_val(prec, &self.im / k))
    }

    pub fn recip(&self) -> Self {
        Self::one(self.prec()).div_ref(self)
    }

    /// `|self - other| / max(1, |self|)`.
    pub fn relative_distance(&self, other: &Self) -> Float {
        let diff = self.sub_ref(other).abs();
        let mut scale = self.abs();
        if scale < 1 {
            scale = Float::with_val(scale.prec(), 1);
        }
        diff / scale
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        let prec = self.prec().max(rhs.prec());
        Self::new(
            Float::with_val(prec, &self.re + &rhs.re),
            Float::with_val(prec, &self.im + &rhs.im),
        )
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        let prec = self.prec().max(rhs.prec());
        Self::new(
            Float::with_val(prec, &self.re - &rhs.re),
            Float::with_val(prec, &self.im - &rhs.im),
        )
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        let prec = self.prec().max(rhs.prec());
        // fused: each component rounds once
        Self::new(
            Float::with_val(prec, &self.re * &rhs.re - &self.im * &rhs.im),
            Float::with_val(prec, &self.re * &rhs.im + &self.im * &rhs.re),
        )
    }

    fn div_ref(&self, rhs: &Self) -> Self {
        let prec = self.prec().max(rhs.prec());
        if rhs.im.is_zero() {
            return Self::new(
                Float::with_val(prec, &self.re / &rhs.re),
                Float::with_val(prec, &self.im / &rhs.re),
            );
        }
        let wide = prec + 32;
        let den = Float::with_val(wide, &rhs.re * &rhs.re + &rhs.im * &rhs.im);
        let re = Float::with_val(wide, &self.re * &rhs.re + &self.im * &rhs.im);
        let im = Float::with_val(wide, &self.im * &rhs.re - &self.re * &rhs.im);
        Self::new(Float::with_val(prec, re / &den), Float::with_val(prec, im / &den))
    }

    /// `self += a * b`, keeping `self`'s precision.
    pub fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        let prod = a.mul_ref(b);
        self.re += &prod.re;
        self.im += &prod.im;
    }

    /// `self -= a * b`, keeping `self`'s precision.
    pub fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        let prod = a.mul_ref(b);
        self.re -= &prod.re;
        self.im -= &prod.im;
    }

    /// Scientific-notation decimal with `digits` significant digits per component.
    pub fn to_decimal_parts(&self, digits: usize) -> (String, String) {
        (to_decimal(&self.re, digits), to_decimal(&self.im, digits))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// Decimal rendering used by every output path: `[-]d.ddd…e±x`, zero as `0`.
pub fn to_decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let raw = x.to_string_radix(10, Some(digits.max(1)));
    // rug prints `1.234e-5`; keep that shape but drop a trailing `e0`
    match raw.strip_suffix("e0") {
        Some(s) => s.to_string(),
        None => raw,
    }
}

impl fmt::Display for MpComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        let (re, im) = self.to_decimal_parts(digits);
        if let Some(mag) = im.strip_prefix('-') {
            write!(f, "{re} - {mag}i")
        } else {
            write!(f, "{re} + {im}i")
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl $trait<&MpComplex> for &MpComplex {
            type Output = MpComplex;
            fn $method(self, rhs: &MpComplex) -> MpComplex {
                self.$inner(rhs)
            }
        }
        impl $trait<MpComplex> for MpComplex {
            type Output = MpComplex;
            fn $method(self, rhs: MpComplex) -> MpComplex {
                self.$inner(&rhs)
            }
        }
        impl $trait<&MpComplex> for MpComplex {
            type Output = MpComplex;
            fn $method(self, rhs: &MpComplex) -> MpComplex {
                self.$inner(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);
forward_binop!(Div, div, div_ref);

impl Neg for &MpComplex {
    type Output = MpComplex;
    fn neg(self) -> MpComplex {
        MpComplex::new(
            Float::with_val(self.re.prec(), -&self.re),
            Float::with_val(self.im.prec(), -&self.im),
        )
    }
}

impl Neg for MpComplex {
    type Output = MpComplex;
    fn neg(self) -> MpComplex {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_is_exact_at_target_precision() {
        let x = parse_float("0.1", 256).unwrap();
        let y = Float::with_val(256, Float::parse("1").unwrap()) / 10u32;
        assert_eq!(x, y);
        assert_ne!(x, Float::with_val(256, 0.1f64));
    }

    #[test]
    fn malformed_number_is_config_error() {
        assert!(matches!(parse_float("1.2.3", 128), Err(RpmError::Config(_))));
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = MpComplex::parse("0.3", "-1.7", 256).unwrap();
        let b = MpComplex::parse("-2.5", "0.125", 256).unwrap();
        let back = &(&a * &b) / &b;
        assert!(back.relative_distance(&a) < Float::with_val(64, 1e-70));
    }

    #[test]
    fn real_arithmetic_stays_real() {
        let a = MpComplex::parse("0.3", "0", 128).unwrap();
        let b = MpComplex::parse("-7", "0", 128).unwrap();
        assert!((&a * &b).is_real());
        assert!((&a / &b).is_real());
        assert!((&a - &b).is_real());
    }

    #[test]
    fn exact_sum_does_not_round() {
        let half = Float::with_val(64, -0.5);
        let tiny = Float::with_val(64, Float::parse("1e-40").unwrap());
        let s = exact_sum(&half, &tiny);
        assert_eq!(Float::with_val(s.prec(), &s - &half), tiny);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&Float::with_val(64, 0), 10), "0");
        assert_eq!(to_decimal(&Float::with_val(64, 2.5), 3), "2.50");
        assert_eq!(to_decimal(&Float::with_val(64, -0.03125), 3), "-3.12e-2");
    }
}
