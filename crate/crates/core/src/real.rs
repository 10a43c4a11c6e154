//! Configurable-precision real numbers.
//!
//! [`Real`] is a thin value type over [`astro_float::BigFloat`] that carries its
//! own working precision, so arithmetic reads like ordinary Rust arithmetic.
//! Binary operations run at the larger of the two operand precisions and round
//! to nearest, ties to even.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign, WORD_BIT_SIZE};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

const RM: RoundingMode = RoundingMode::ToEven;

/// Smallest supported working precision in bits.
pub const MIN_PRECISION_BITS: usize = 64;

/// Default working precision in bits.
pub const DEFAULT_PRECISION_BITS: usize = 128;

/// A binary floating-point number with an explicit precision.
#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    prec: usize,
}

/// Cache of transcendental constants used by `sin`, `ln` and decimal parsing.
pub struct MathConsts(Consts);

impl MathConsts {
    pub fn new() -> Self {
        // Consts::new only fails on allocation failure.
        MathConsts(Consts::new().expect("constant cache allocation"))
    }

    pub fn pi(&mut self, prec: usize) -> Real {
        Real::wrap(self.0.pi(prec, RM), prec)
    }
}

impl Default for MathConsts {
    fn default() -> Self {
        Self::new()
    }
}

impl Real {
    fn wrap(v: BigFloat, prec: usize) -> Self {
        Real { v, prec }
    }

    pub fn zero(prec: usize) -> Self {
        Real::wrap(BigFloat::from_word(0, prec), prec)
    }

    pub fn one(prec: usize) -> Self {
        Real::wrap(BigFloat::from_word(1, prec), prec)
    }

    pub fn from_i64(i: i64, prec: usize) -> Self {
        Real::wrap(BigFloat::from_i64(i, prec), prec)
    }

    pub fn from_u64(u: u64, prec: usize) -> Self {
        Real::wrap(BigFloat::from_u64(u, prec), prec)
    }

    /// Exact conversion of an `f64` (rounded to `prec` if `prec < 53`).
    pub fn from_f64(f: f64, prec: usize) -> Self {
        Real::wrap(BigFloat::from_f64(f, prec), prec)
    }

    /// `num / den` rounded to `prec` bits.
    pub fn from_ratio(num: i64, den: i64, prec: usize) -> Self {
        Real::from_i64(num, prec) / Real::from_i64(den, prec)
    }

    /// `2^e`, exactly.
    pub fn pow2(e: i32, prec: usize) -> Self {
        let mut v = BigFloat::from_word(1, prec);
        v.set_exponent(e + 1);
        Real::wrap(v, prec)
    }

    /// Parses a decimal literal such as `-1.25e-3`.
    pub fn parse_decimal(s: &str, prec: usize, cc: &mut MathConsts) -> Option<Self> {
        let t = s.trim();
        if t.is_empty() {
            return None;
        }
        let ok = t
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E'));
        if !ok {
            return None;
        }
        let v = BigFloat::parse(t, Radix::Dec, prec, RM, &mut cc.0);
        if v.is_nan() || v.is_inf() {
            None
        } else {
            Some(Real::wrap(v, prec))
        }
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    /// Re-rounds to a new precision.
    pub fn with_precision(&self, prec: usize) -> Self {
        let mut v = self.v.clone();
        // set_precision only fails for an invalid (zero or huge) precision.
        v.set_precision(prec, RM).expect("valid precision");
        Real::wrap(v, prec)
    }

    /// Unit roundoff `2^-prec` of this value's precision.
    pub fn epsilon(&self) -> Real {
        Real::pow2(-(self.prec as i32), self.prec)
    }

    pub fn is_finite(&self) -> bool {
        !(self.v.is_nan() || self.v.is_inf())
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    /// Strictly negative.
    pub fn is_negative(&self) -> bool {
        !self.v.is_zero() && self.v.is_negative()
    }

    /// Strictly positive.
    pub fn is_positive(&self) -> bool {
        !self.v.is_zero() && self.v.is_positive()
    }

    pub fn abs(&self) -> Real {
        Real::wrap(self.v.abs(), self.prec)
    }

    pub fn sqrt(&self) -> Real {
        Real::wrap(self.v.sqrt(self.prec, RM), self.prec)
    }

    pub fn square(&self) -> Real {
        self * self
    }

    pub fn sin(&self, cc: &mut MathConsts) -> Real {
        Real::wrap(self.v.sin(self.prec, RM, &mut cc.0), self.prec)
    }

    pub fn cos(&self, cc: &mut MathConsts) -> Real {
        Real::wrap(self.v.cos(self.prec, RM, &mut cc.0), self.prec)
    }

    pub fn ln(&self, cc: &mut MathConsts) -> Real {
        Real::wrap(self.v.ln(self.prec, RM, &mut cc.0), self.prec)
    }

    pub fn max(&self, other: &Real) -> Real {
        if other > self {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn min(&self, other: &Real) -> Real {
        if other < self {
            other.clone()
        } else {
            self.clone()
        }
    }

    /// Binary exponent `e` with `2^(e-1) <= |x| < 2^e`; `None` for zero.
    pub fn binary_exponent(&self) -> Option<i32> {
        if self.v.is_zero() {
            None
        } else {
            self.v.exponent()
        }
    }

    /// Splits a finite nonzero value into `(negative, m, s)` with `|x| = m * 2^s`.
    fn exact_parts(&self) -> Option<(bool, BigUint, i64)> {
        if self.v.is_zero() {
            return None;
        }
        let (words, _bits, sign, exp, _) = self.v.as_raw_parts()?;
        let mut m = BigUint::zero();
        for w in words.iter().rev() {
            m <<= WORD_BIT_SIZE;
            m += BigUint::from(*w as u64);
        }
        let shift = exp as i64 - (words.len() * WORD_BIT_SIZE) as i64;
        Some((sign == Sign::Neg, m, shift))
    }

    /// Nearest `f64` (truncating the mantissa; only used for diagnostics).
    pub fn to_f64(&self) -> f64 {
        if !self.is_finite() {
            return f64::NAN;
        }
        let Some((neg, m, shift)) = self.exact_parts() else {
            return 0.0;
        };
        let bits = m.bits() as i64;
        let keep = bits.min(60);
        let top: BigUint = &m >> ((bits - keep) as usize);
        let top = top.to_u64_digits().first().copied().unwrap_or(0) as f64;
        let mut e = shift + bits - keep;
        let mut out = top;
        while e > 0 && out.is_finite() {
            let step = e.min(60);
            out *= (1u64 << step) as f64;
            e -= step;
        }
        while e < 0 && out != 0.0 {
            let step = (-e).min(60);
            out /= (1u64 << step) as f64;
            e += step;
        }
        if neg {
            -out
        } else {
            out
        }
    }

    /// Decimal scientific rendering with exactly `digits` significant digits,
    /// rounded half to even from the exact binary value.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if !self.is_finite() {
            return String::from("nan");
        }
        let Some((neg, m, shift)) = self.exact_parts() else {
            return String::from("0");
        };
        // |x| = m * 2^shift, estimate the decimal exponent from the binary one.
        let bin_exp = m.bits() as i64 + shift;
        let mut dec = Integer::div_floor(&((bin_exp - 1) * 30103), &100000);
        let ten = BigUint::from(10u32);
        let lower = ten.pow(digits as u32 - 1);
        let upper = ten.pow(digits as u32);
        let q = loop {
            let t = digits as i64 - 1 - dec;
            let mut num = m.clone();
            let mut den = BigUint::one();
            if shift >= 0 {
                num <<= shift as usize;
            } else {
                den <<= (-shift) as usize;
            }
            if t >= 0 {
                num *= ten.pow(t as u32);
            } else {
                den *= ten.pow((-t) as u32);
            }
            let (mut q, r) = num.div_rem(&den);
            let twice = r << 1usize;
            if twice > den || (twice == den && q.is_odd()) {
                q += 1u32;
            }
            if q >= upper {
                dec += 1;
            } else if q < lower {
                dec -= 1;
            } else {
                break q;
            }
        };
        let s = q.to_str_radix(10);
        let mut out = String::with_capacity(digits + 8);
        if neg {
            out.push('-');
        }
        out.push_str(&s[..1]);
        if digits > 1 {
            out.push('.');
            out.push_str(&s[1..]);
        }
        out.push('e');
        out.push_str(&alloc::format!("{dec}"));
        out
    }

    pub fn powi(&self, n: usize) -> Real {
        Real::wrap(self.v.powi(n, self.prec, RM), self.prec)
    }
}

/// Relative distance `|a-b| / max(|a|, |b|, 1)`.
pub fn rel_diff(a: &Real, b: &Real) -> Real {
    let p = a.prec.max(b.prec);
    let scale = a.abs().max(&b.abs()).max(&Real::one(p));
    (a - b).abs() / scale
}

/// Largest absolute value in a slice (zero for an empty slice).
pub fn max_abs<'a>(xs: impl IntoIterator<Item = &'a Real>, prec: usize) -> Real {
    xs.into_iter()
        .fold(Real::zero(prec), |acc, x| acc.max(&x.abs()))
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_decimal(20))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(30);
        f.write_str(&self.to_decimal(digits))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(self.v.neg(), self.prec)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(self.v.clone().neg(), self.prec)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let p = self.prec.max(rhs.prec);
                Real::wrap(self.v.$inner(&rhs.v, p, RM), p)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl AddAssign<&Real> for Real {
    fn add_assign(&mut self, rhs: &Real) {
        *self = &*self + rhs;
    }
}

impl AddAssign<Real> for Real {
    fn add_assign(&mut self, rhs: Real) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&Real> for Real {
    fn sub_assign(&mut self, rhs: &Real) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Real> for Real {
    fn mul_assign(&mut self, rhs: &Real) {
        *self = &*self * rhs;
    }
}

impl MulAssign<Real> for Real {
    fn mul_assign(&mut self, rhs: Real) {
        *self = &*self * &rhs;
    }
}

/// Sum of a sequence of values at precision `prec`.
pub fn sum<'a>(xs: impl IntoIterator<Item = &'a Real>, prec: usize) -> Real {
    xs.into_iter().fold(Real::zero(prec), |acc, x| acc + x)
}

/// Converts a slice of `f64` into reals at `prec`.
pub fn from_f64_slice(xs: &[f64], prec: usize) -> Vec<Real> {
    xs.iter().map(|&x| Real::from_f64(x, prec)).collect()
}
