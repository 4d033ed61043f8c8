//! Scalar abstraction shared by every module.
//!
//! All numeric code is generic over a [`Scalar`]: either exact rational
//! arithmetic ([`Rational`]) or IEEE `f64`. Identities that the theory
//! states exactly are asserted with a zero defect in exact mode; float mode
//! carries explicit tolerances and tail bounds instead. `Complex64` gets the
//! ring part of the abstraction only, which is enough for transforms and
//! geometric resolvent sequences; every order-dependent operation requires
//! a [`RealScalar`].

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::complex::Complex64;
use num::{BigRational, FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact scalar used in rational mode.
pub type Rational = BigRational;

/// Arithmetic backend of a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarMode {
    ExactRational,
    Float64,
}

impl Display for ScalarMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScalarMode::ExactRational => write!(f, "exact"),
            ScalarMode::Float64 => write!(f, "float64"),
        }
    }
}

/// Ring operations plus conversions; the minimum needed for convolution,
/// transforms and matrix arithmetic.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: ScalarMode;

    fn from_int(v: i64) -> Self;

    /// Exact ratio `num/den`. Panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Magnitude as `f64`, used for diagnostics and pivoting.
    fn abs_f64(&self) -> f64;

    /// Parse from text. Rationals accept `p/q`, integers and finite
    /// decimals; floats accept anything `f64::from_str` does.
    fn parse(text: &str) -> Option<Self>;
}

/// Ordered scalars: absolute values, floors and powers. Orders (the alpha
/// and beta of fractional sums) are always of this kind.
pub trait RealScalar: Scalar + PartialOrd {
    fn abs(&self) -> Self;

    fn floor_int(&self) -> i64;

    fn is_integer(&self) -> bool;

    fn to_f64(&self) -> f64;

    /// Exact embedding of a finite `f64`. For rationals this is the dyadic
    /// rational with the same bits, used to compare exact values against
    /// conservatively rounded float constants.
    fn from_f64_exact(v: f64) -> Self;

    /// `self^exponent`. Rationals only support integer exponents and
    /// report [`Error::ExactModeUnsupported`] otherwise; floats fall back
    /// to `powf` for positive bases.
    fn try_pow(&self, exponent: &Self) -> Result<Self>;
}

fn parse_rational(text: &str) -> Option<Rational> {
    let t = text.trim();
    if let Some((num, den)) = t.split_once('/') {
        let n: num::BigInt = num.trim().parse().ok()?;
        let d: num::BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.trim_start().starts_with('-');
        let int_val: num::BigInt = if int_part.is_empty() || int_part == "-" {
            num::BigInt::zero()
        } else {
            int_part.trim().parse().ok()?
        };
        let scale = num::BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac_val: num::BigInt = frac_part.parse().ok()?;
        let signed_frac = if negative { -frac_val } else { frac_val };
        return Some(Rational::new(int_val * &scale + signed_frac, scale));
    }
    let n: num::BigInt = t.parse().ok()?;
    Some(Rational::from(n))
}

impl Scalar for Rational {
    const MODE: ScalarMode = ScalarMode::ExactRational;

    fn from_int(v: i64) -> Self {
        Rational::from_integer(v.into())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational::new(num.into(), den.into())
    }

    fn abs_f64(&self) -> f64 {
        RealScalar::to_f64(&Signed::abs(self)).abs()
    }

    fn parse(text: &str) -> Option<Self> {
        parse_rational(text)
    }
}

impl RealScalar for Rational {
    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn floor_int(&self) -> i64 {
        self.floor()
            .to_integer()
            .to_i64()
            .expect("order exceeds i64 range")
    }

    fn is_integer(&self) -> bool {
        self.is_integer()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // Fall back to a quotient of approximations for huge terms.
            let n = self.numer().to_f64().unwrap_or(f64::INFINITY);
            let d = self.denom().to_f64().unwrap_or(f64::INFINITY);
            n / d
        })
    }

    fn from_f64_exact(v: f64) -> Self {
        Rational::from_float(v).expect("finite float required")
    }

    fn try_pow(&self, exponent: &Self) -> Result<Self> {
        if !exponent.is_integer() {
            return Err(Error::ExactModeUnsupported(format!(
                "({})^({}) with a fractional exponent",
                self, exponent
            )));
        }
        let e = exponent.floor_int();
        if self.is_zero() && e < 0 {
            return Err(Error::UnsupportedPower("0 raised to a negative power".into()));
        }
        let e32 = i32::try_from(e)
            .map_err(|_| Error::UnsupportedPower(format!("exponent {} too large", e)))?;
        Ok(num::pow::Pow::pow(self, e32))
    }
}

impl Scalar for f64 {
    const MODE: ScalarMode = ScalarMode::Float64;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }

    fn abs_f64(&self) -> f64 {
        f64::abs(*self)
    }

    fn parse(text: &str) -> Option<Self> {
        text.trim().parse().ok()
    }
}

impl RealScalar for f64 {
    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn floor_int(&self) -> i64 {
        self.floor() as i64
    }

    fn is_integer(&self) -> bool {
        self.fract() == 0.0
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_f64_exact(v: f64) -> Self {
        v
    }

    fn try_pow(&self, exponent: &Self) -> Result<Self> {
        if RealScalar::is_integer(exponent) && f64::abs(*exponent) < i32::MAX as f64 {
            return Ok(self.powi(*exponent as i32));
        }
        if *self < 0.0 {
            return Err(Error::UnsupportedPower(format!(
                "negative base {} with fractional exponent {}",
                self, exponent
            )));
        }
        Ok(self.powf(*exponent))
    }
}

impl Scalar for Complex64 {
    const MODE: ScalarMode = ScalarMode::Float64;

    fn from_int(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn abs_f64(&self) -> f64 {
        self.norm()
    }

    fn parse(text: &str) -> Option<Self> {
        Complex64::from_f64(text.trim().parse::<f64>().ok()?)
    }
}

/// Rejects negative orders with the offending value in the message.
pub fn ensure_nonnegative_order<S: RealScalar>(alpha: &S) -> Result<()> {
    if *alpha < S::zero() {
        return Err(Error::NegativeOrder(alpha.to_string()));
    }
    Ok(())
}
