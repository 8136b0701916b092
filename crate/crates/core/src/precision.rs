//! Scalar arithmetic used by the coefficient recurrence: exact rationals and
//! fixed-precision decimal floats (round half to even).

use std::fmt::Debug;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::ops::{BitTest, UnsignedAbs};
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

use crate::error::{Error, Result};

/// Decimal floating point number; precision is carried by each value.
pub type Decimal = FBig<HalfEven, 10>;

pub const MIN_DECIMAL_DIGITS: usize = 15;

/// Working precision of the high-precision arithmetic. Rounding is always
/// to nearest, ties to even.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    decimal_digits: usize,
}

impl PrecisionContext {
    pub fn new(decimal_digits: usize) -> Result<Self> {
        if decimal_digits < MIN_DECIMAL_DIGITS {
            return Err(Error::PrecisionTooLow(decimal_digits));
        }
        Ok(PrecisionContext { decimal_digits })
    }

    pub fn decimal_digits(&self) -> usize {
        self.decimal_digits
    }

    pub fn decimal(&self, r: &RBig) -> Decimal {
        r.to_float::<HalfEven, 10>(self.decimal_digits).value()
    }
}

/// Field operations the recurrence needs.
pub trait SeriesScalar: Clone + Debug {
    /// `digits` is ignored by exact types.
    fn from_rational(r: &RBig, digits: usize) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Division by a nonzero exact rational.
    fn div_rational(&self, r: &RBig, digits: usize) -> Self;
    fn is_zero(&self) -> bool;
    fn signum(&self) -> i8;
    /// Natural log of the absolute value, `-inf` for zero. Never underflows.
    fn ln_abs(&self) -> f64;
    /// Exact rational value of this number.
    fn to_rational(&self) -> RBig;
}

impl SeriesScalar for RBig {
    fn from_rational(r: &RBig, _digits: usize) -> Self {
        r.clone()
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn div_rational(&self, r: &RBig, _digits: usize) -> Self {
        self / r
    }

    fn is_zero(&self) -> bool {
        *self == RBig::ZERO
    }

    fn signum(&self) -> i8 {
        sign_of(self.numerator())
    }

    fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        ln_ubig(&self.numerator().unsigned_abs()) - ln_ubig(self.denominator())
    }

    fn to_rational(&self) -> RBig {
        self.clone()
    }
}

impl SeriesScalar for Decimal {
    fn from_rational(r: &RBig, digits: usize) -> Self {
        r.to_float::<HalfEven, 10>(digits).value()
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn div_rational(&self, r: &RBig, digits: usize) -> Self {
        let num = Decimal::from(r.numerator().clone()).with_precision(digits).value();
        let den = Decimal::from(IBig::from(r.denominator().clone())).with_precision(digits).value();
        self * den / num
    }

    fn is_zero(&self) -> bool {
        *self.repr().significand() == IBig::ZERO
    }

    fn signum(&self) -> i8 {
        sign_of(self.repr().significand())
    }

    fn ln_abs(&self) -> f64 {
        ln_abs_decimal(self)
    }

    fn to_rational(&self) -> RBig {
        let repr = self.repr();
        let sig = repr.significand().clone();
        let exp = repr.exponent();
        let ten = IBig::from(10u8);
        if exp >= 0 {
            RBig::from(sig * ten.pow(exp as usize))
        } else {
            RBig::from_parts(sig, ten.pow((-exp) as usize).unsigned_abs())
        }
    }
}

fn sign_of(i: &IBig) -> i8 {
    match i.cmp(&IBig::ZERO) {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    }
}

fn ln_ubig(n: &UBig) -> f64 {
    let bits = n.bit_len();
    if bits <= 62 {
        return (u64::try_from(n).unwrap() as f64).ln();
    }
    let shift = bits - 62;
    let top = u64::try_from(&(n >> shift)).unwrap() as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// ln|x| from a 17-digit rounding of the significand, so it works far outside the
/// `f64` exponent range.
pub fn ln_abs_decimal(x: &Decimal) -> f64 {
    if x.repr().significand() == &IBig::ZERO {
        return f64::NEG_INFINITY;
    }
    let short = x.clone().with_precision(17).value();
    let mut sig = i64::try_from(short.repr().significand())
        .expect("17 digit significand fits in i64")
        .unsigned_abs();
    let mut exp = short.repr().exponent();
    while sig % 10 == 0 {
        sig /= 10;
        exp += 1;
    }
    (sig as f64).ln() + exp as f64 * std::f64::consts::LN_10
}

/// Scientific notation with `sig_digits` significant digits, e.g. `-1.2345e+17`.
pub fn format_decimal(x: &Decimal, sig_digits: usize) -> String {
    if x.repr().significand() == &IBig::ZERO {
        return "0".to_string();
    }
    let sig_digits = sig_digits.max(1);
    let short = x.clone().with_precision(sig_digits).value();
    let sig = short.repr().significand();
    let neg = sig < &IBig::ZERO;
    let digits = sig.unsigned_abs().to_string();
    let exp10 = short.repr().exponent() + digits.len() as isize - 1;
    let (lead, rest) = digits.split_at(1);
    let rest = rest.trim_end_matches('0');
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(lead);
    if !rest.is_empty() {
        out.push('.');
        out.push_str(rest);
    }
    out.push_str(&format!("e{}{}", if exp10 < 0 { '-' } else { '+' }, exp10.abs()));
    out
}
