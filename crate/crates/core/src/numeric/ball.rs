//! Midpoint-radius ("ball") arithmetic on top of MPFR.
//!
//! A [`CertifiedReal`] is a pair `(mid, rad)` with the guarantee that the
//! true value lies in `[mid - rad, mid + rad]`. Midpoints are rounded to
//! nearest at the working precision; every rounding that is not exact adds
//! one ulp of the result to the radius. Radii are kept at 64 bits and are
//! always rounded upward.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

const RADIUS_PREC: u32 = 64;

/// Working precision and series caps shared by all certified evaluations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionContext {
    precision_bits: u32,
    max_terms: u64,
}

impl PrecisionContext {
    pub const DEFAULT_BITS: u32 = 128;

    pub fn new(precision_bits: u32) -> Result<Self> {
        if precision_bits < 53 {
            return Err(Error::InvalidPrecision(precision_bits));
        }
        Ok(Self { precision_bits, max_terms: 1 << 24 })
    }

    pub fn with_max_terms(mut self, max_terms: u64) -> Self {
        self.max_terms = max_terms.max(1);
        self
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn max_terms(&self) -> u64 {
        self.max_terms
    }

    /// Same context at twice the precision.
    pub fn doubled(&self) -> Self {
        Self { precision_bits: self.precision_bits * 2, ..*self }
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::new(Self::DEFAULT_BITS).expect("default precision is valid")
    }
}

/// A real number known to lie within `radius` of `midpoint`.
#[derive(Clone, Debug)]
pub struct CertifiedReal {
    mid: Float,
    rad: Float,
}

fn zero_radius() -> Float {
    Float::new(RADIUS_PREC)
}

/// One unit in the last place of `x` at its own precision (0 for x = 0).
fn ulp(x: &Float) -> Float {
    match x.get_exp() {
        Some(e) => Float::with_val(RADIUS_PREC, 1) << (e - x.prec() as i32),
        None => zero_radius(),
    }
}

fn up<T>(value: T) -> Float
where
    Float: rug::Assign<T> + rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(RADIUS_PREC, value, Round::Up).0
}

fn abs_up(x: &Float) -> Float {
    up(&*x.as_abs())
}

impl CertifiedReal {
    /// Builds a ball from a rounded result and the ordering MPFR reported.
    fn rounded(mid: (Float, Ordering), rad: Float) -> Self {
        let (mid, ord) = mid;
        let rad = if ord == Ordering::Equal { rad } else { up(&rad + &ulp(&mid)) };
        Self { mid, rad }
    }

    pub fn zero(ctx: &PrecisionContext) -> Self {
        Self { mid: Float::new(ctx.precision_bits), rad: zero_radius() }
    }

    pub fn one(ctx: &PrecisionContext) -> Self {
        Self::from_i64(1, ctx)
    }

    pub fn from_i64(value: i64, ctx: &PrecisionContext) -> Self {
        Self::rounded(Float::with_val_round(ctx.precision_bits, value, Round::Nearest), zero_radius())
    }

    pub fn from_integer(value: &Integer, ctx: &PrecisionContext) -> Self {
        Self::rounded(Float::with_val_round(ctx.precision_bits, value, Round::Nearest), zero_radius())
    }

    pub fn from_rational(value: &Rational, ctx: &PrecisionContext) -> Self {
        Self::rounded(Float::with_val_round(ctx.precision_bits, value, Round::Nearest), zero_radius())
    }

    pub fn from_f64(value: f64, ctx: &PrecisionContext) -> Self {
        Self::rounded(Float::with_val_round(ctx.precision_bits, value, Round::Nearest), zero_radius())
    }

    /// Ball from explicit midpoint and radius; the radius is rounded up.
    pub fn from_parts(mid: Float, radius: &Float) -> Self {
        Self { mid, rad: abs_up(radius) }
    }

    pub fn pi(ctx: &PrecisionContext) -> Self {
        Self::rounded(Float::with_val_round(ctx.precision_bits, Constant::Pi, Round::Nearest), zero_radius())
    }

    /// The Euler–Mascheroni constant.
    pub fn euler_gamma(ctx: &PrecisionContext) -> Self {
        Self::rounded(
            Float::with_val_round(ctx.precision_bits, Constant::Euler, Round::Nearest),
            zero_radius(),
        )
    }

    pub fn midpoint(&self) -> &Float {
        &self.mid
    }

    pub fn radius(&self) -> &Float {
        &self.rad
    }

    pub fn precision(&self) -> u32 {
        self.mid.prec()
    }

    pub fn midpoint_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// Radius as an `f64`, rounded up so it stays a valid bound.
    pub fn radius_f64(&self) -> f64 {
        self.rad.to_f64_round(Round::Up)
    }

    /// Lower endpoint, rounded down.
    pub fn lower(&self) -> Float {
        Float::with_val_round(self.mid.prec() + RADIUS_PREC, &self.mid - &self.rad, Round::Down).0
    }

    /// Upper endpoint, rounded up.
    pub fn upper(&self) -> Float {
        Float::with_val_round(self.mid.prec() + RADIUS_PREC, &self.mid + &self.rad, Round::Up).0
    }

    /// Upper bound on `|x|` for every x in the ball.
    pub fn abs_upper(&self) -> Float {
        up(&abs_up(&self.mid) + &self.rad)
    }

    /// Lower bound on `|x|` for every x in the ball (0 when the ball meets 0).
    pub fn abs_lower(&self) -> Float {
        let low = Float::with_val_round(RADIUS_PREC, &*self.mid.as_abs() - &self.rad, Round::Down).0;
        if low.is_sign_negative() {
            zero_radius()
        } else {
            low
        }
    }

    pub fn contains_zero(&self) -> bool {
        *self.mid.as_abs() <= self.rad
    }

    pub fn contains_rational(&self, value: &Rational) -> bool {
        self.lower() <= *value && self.upper() >= *value
    }

    pub fn contains_f64(&self, value: f64) -> bool {
        self.lower() <= value && self.upper() >= value
    }

    pub fn overlaps(&self, other: &CertifiedReal) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// True when the ball lies strictly above `other`.
    pub fn certainly_greater(&self, other: &CertifiedReal) -> bool {
        self.lower() > other.upper()
    }

    /// Ball of |x|: exact on the midpoint, same radius.
    pub fn abs(&self) -> Self {
        Self { mid: Float::with_val(self.mid.prec(), &*self.mid.as_abs()), rad: self.rad.clone() }
    }

    /// Adds `extra` (an error bound) to the radius.
    pub fn widen(&self, extra: &Float) -> Self {
        Self { mid: self.mid.clone(), rad: up(&self.rad + &abs_up(extra)) }
    }

    pub fn mul_i64(&self, factor: i64) -> Self {
        let prec = self.mid.prec();
        let rad = up(&self.rad * &up(factor.unsigned_abs()));
        Self::rounded(Float::with_val_round(prec, &self.mid * factor, Round::Nearest), rad)
    }

    pub fn div_i64(&self, divisor: i64) -> Result<Self> {
        if divisor == 0 {
            return Err(Error::DivisionByZero);
        }
        let prec = self.mid.prec();
        let rad = up(&self.rad / &Float::with_val_round(RADIUS_PREC, divisor.unsigned_abs(), Round::Down).0);
        Ok(Self::rounded(Float::with_val_round(prec, &self.mid / divisor, Round::Nearest), rad))
    }

    pub fn mul_rational(&self, factor: &Rational) -> Self {
        let other = Self::from_rational(factor, &self.ctx());
        self * &other
    }

    pub fn div(&self, other: &CertifiedReal) -> Result<Self> {
        if other.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let prec = self.mid.prec().max(other.mid.prec());
        let (mid, ord) = Float::with_val_round(prec, &self.mid / &other.mid, Round::Nearest);
        // |x/y - a/b| <= (ra + |a/b| rb) / (|b| - rb)
        let quotient_abs = up(&abs_up(&mid) + &ulp(&mid));
        let numer = up(&self.rad + &up(&quotient_abs * &other.rad));
        let denom = other.abs_lower();
        let rad = up(&numer / &denom);
        Ok(Self::rounded((mid, ord), rad))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one(&self.ctx()).div(self)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn powi(&self, exponent: u32) -> Self {
        let mut result = Self::one(&self.ctx());
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        result
    }

    pub fn sin(&self) -> Self {
        let prec = self.mid.prec();
        Self::rounded(Float::with_val_round(prec, self.mid.sin_ref(), Round::Nearest), self.rad.clone())
    }

    pub fn cos(&self) -> Self {
        let prec = self.mid.prec();
        Self::rounded(Float::with_val_round(prec, self.mid.cos_ref(), Round::Nearest), self.rad.clone())
    }

    pub fn cot(&self) -> Result<Self> {
        self.cos().div(&self.sin())
    }

    pub fn exp(&self) -> Self {
        let prec = self.mid.prec();
        // sup of exp' over the ball is exp(mid + rad)
        let top = up(&self.mid + &self.rad);
        let lipschitz = up(top.exp_ref());
        Self::rounded(
            Float::with_val_round(prec, self.mid.exp_ref(), Round::Nearest),
            up(&lipschitz * &self.rad),
        )
    }

    pub fn ln(&self) -> Result<Self> {
        let low = Float::with_val_round(RADIUS_PREC, &self.mid - &self.rad, Round::Down).0;
        if low <= 0 {
            return Err(Error::Domain("logarithm of a non-positive interval".into()));
        }
        let prec = self.mid.prec();
        let lipschitz = up(&Float::with_val(RADIUS_PREC, 1) / &low);
        Ok(Self::rounded(
            Float::with_val_round(prec, self.mid.ln_ref(), Round::Nearest),
            up(&lipschitz * &self.rad),
        ))
    }

    pub fn sqrt(&self) -> Result<Self> {
        let prec = self.mid.prec();
        if self.rad.is_zero() {
            if self.mid.is_sign_negative() && !self.mid.is_zero() {
                return Err(Error::Domain("square root of a negative number".into()));
            }
            return Ok(Self::rounded(
                Float::with_val_round(prec, self.mid.sqrt_ref(), Round::Nearest),
                zero_radius(),
            ));
        }
        let low = Float::with_val_round(RADIUS_PREC, &self.mid - &self.rad, Round::Down).0;
        if low <= 0 {
            return Err(Error::Domain("square root of an interval reaching 0".into()));
        }
        let root_low = Float::with_val_round(RADIUS_PREC, low.sqrt_ref(), Round::Down).0;
        let lipschitz = up(&Float::with_val(RADIUS_PREC, 0.5) / &root_low);
        Ok(Self::rounded(
            Float::with_val_round(prec, self.mid.sqrt_ref(), Round::Nearest),
            up(&lipschitz * &self.rad),
        ))
    }

    /// Sum in iteration order; the order is fixed so results are reproducible.
    pub fn sum<'a, I>(terms: I, ctx: &PrecisionContext) -> Self
    where
        I: IntoIterator<Item = &'a CertifiedReal>,
    {
        terms.into_iter().fold(Self::zero(ctx), |acc, term| &acc + term)
    }

    /// Context matching this ball's precision.
    pub fn ctx(&self) -> PrecisionContext {
        PrecisionContext::new(self.mid.prec().max(53)).expect("precision >= 53")
    }

    /// Exact `0x<mantissa>p<exponent>` rendering of the midpoint.
    pub fn midpoint_hex(&self) -> String {
        hex_float(&self.mid)
    }

    /// Exact `0x<mantissa>p<exponent>` rendering of the radius.
    pub fn radius_hex(&self) -> String {
        hex_float(&self.rad)
    }

    /// Decimal midpoint with `digits` significant digits.
    pub fn midpoint_decimal(&self, digits: usize) -> String {
        self.mid.to_string_radix(10, Some(digits))
    }
}

/// Hexadecimal float literal with an integer mantissa, e.g. `-0x3p-1` for -1.5.
pub fn hex_float(x: &Float) -> String {
    match x.to_integer_exp() {
        Some((mantissa, exp)) if mantissa != 0 => {
            let (sign, mantissa) = if mantissa < 0 { ("-", (-mantissa)) } else { ("", mantissa) };
            let tz = mantissa.find_one(0).unwrap_or(0);
            let mantissa = mantissa >> tz;
            format!("{sign}0x{}p{}", mantissa.to_string_radix(16), exp + tz as i32)
        }
        _ => "0x0p0".to_string(),
    }
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.mid.prec() as f64) * std::f64::consts::LOG10_2) as usize;
        write!(f, "{} ± {:.3e}", self.mid.to_string_radix(10, Some(digits.clamp(17, 40))), self.radius_f64())
    }
}

impl<'a> Add<&'a CertifiedReal> for &'a CertifiedReal {
    type Output = CertifiedReal;

    fn add(self, other: &CertifiedReal) -> CertifiedReal {
        let prec = self.mid.prec().max(other.mid.prec());
        CertifiedReal::rounded(
            Float::with_val_round(prec, &self.mid + &other.mid, Round::Nearest),
            up(&self.rad + &other.rad),
        )
    }
}

impl<'a> Sub<&'a CertifiedReal> for &'a CertifiedReal {
    type Output = CertifiedReal;

    fn sub(self, other: &CertifiedReal) -> CertifiedReal {
        let prec = self.mid.prec().max(other.mid.prec());
        CertifiedReal::rounded(
            Float::with_val_round(prec, &self.mid - &other.mid, Round::Nearest),
            up(&self.rad + &other.rad),
        )
    }
}

impl<'a> Mul<&'a CertifiedReal> for &'a CertifiedReal {
    type Output = CertifiedReal;

    fn mul(self, other: &CertifiedReal) -> CertifiedReal {
        let prec = self.mid.prec().max(other.mid.prec());
        let rad = up(&up(&abs_up(&self.mid) * &other.rad) + &up(&abs_up(&other.mid) * &self.rad));
        let rad = up(&rad + &up(&self.rad * &other.rad));
        CertifiedReal::rounded(Float::with_val_round(prec, &self.mid * &other.mid, Round::Nearest), rad)
    }
}

impl Neg for &CertifiedReal {
    type Output = CertifiedReal;

    fn neg(self) -> CertifiedReal {
        CertifiedReal { mid: Float::with_val(self.mid.prec(), -&self.mid), rad: self.rad.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<CertifiedReal> for CertifiedReal {
            type Output = CertifiedReal;
            fn $method(self, other: CertifiedReal) -> CertifiedReal {
                (&self).$method(&other)
            }
        }
        impl<'a> $tr<&'a CertifiedReal> for CertifiedReal {
            type Output = CertifiedReal;
            fn $method(self, other: &CertifiedReal) -> CertifiedReal {
                (&self).$method(other)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CertifiedReal {
    type Output = CertifiedReal;
    fn neg(self) -> CertifiedReal {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn precision_floor() {
        assert_eq!(PrecisionContext::new(52), Err(Error::InvalidPrecision(52)));
        assert!(PrecisionContext::new(53).is_ok());
    }

    #[test]
    fn exact_rationals_are_enclosed() {
        let third = Rational::from((1, 3));
        let ball = CertifiedReal::from_rational(&third, &ctx());
        assert!(ball.contains_rational(&third));
        assert!(!ball.radius().is_zero());
        let sum = &(&ball + &ball) + &ball;
        assert!(sum.contains_rational(&Rational::from(1)));
    }

    #[test]
    fn pi_encloses_known_digits() {
        let pi = CertifiedReal::pi(&ctx());
        let digits: Rational = "314159265358979323846264338327950288419716939937510/100000000000000000000000000000000000000000000000000"
            .parse()
            .unwrap();
        // the 50-digit truncation sits below pi by less than 1e-49
        let slack = Rational::from((1, Integer::from(Integer::u_pow_u(10, 45))));
        assert!(pi.upper() >= digits);
        assert!(pi.lower() <= digits + slack);
        assert!(pi.radius_f64() < 1e-37);
        let sin_pi = pi.sin();
        assert!(sin_pi.contains_zero());
    }

    #[test]
    fn division_by_ball_containing_zero_fails() {
        let c = ctx();
        let x = CertifiedReal::from_i64(1, &c);
        let z = CertifiedReal::zero(&c);
        assert_eq!(x.div(&z).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn elementary_functions_enclose_identities() {
        let c = ctx();
        let x = CertifiedReal::from_rational(&Rational::from((2, 7)), &c);
        let s = x.sin();
        let co = x.cos();
        let one = &s.square() + &co.square();
        assert!(one.contains_rational(&Rational::from(1)));
        let back = x.exp().ln().unwrap();
        assert!(back.overlaps(&x));
        let two = CertifiedReal::from_i64(2, &c);
        let root = two.sqrt().unwrap();
        assert!(root.square().contains_rational(&Rational::from(2)));
    }

    #[test]
    fn powi_matches_repeated_multiplication() {
        let c = ctx();
        let x = CertifiedReal::from_rational(&Rational::from((-3, 5)), &c);
        let p = x.powi(7);
        assert!(p.contains_rational(&Rational::from((-2187, 78125))));
        assert!(x.powi(0).contains_rational(&Rational::from(1)));
    }

    #[test]
    fn hex_rendering_is_exact() {
        let f = Float::with_val(64, -1.5);
        assert_eq!(hex_float(&f), "-0x3p-1");
        assert_eq!(hex_float(&Float::new(64)), "0x0p0");
        assert_eq!(hex_float(&Float::with_val(64, 8)), "0x1p3");
    }
}
