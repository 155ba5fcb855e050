use std::cmp::Ordering;
use std::fmt;

use rug::Rational;

use super::ball::{CertifiedReal, PrecisionContext};

/// An exact number `coefficient * pi^pi_exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiPowerRational {
    pub coefficient: Rational,
    pub pi_exponent: u32,
}

impl PiPowerRational {
    pub fn new(coefficient: Rational, pi_exponent: u32) -> Self {
        Self { coefficient, pi_exponent }
    }

    pub fn rational(value: Rational) -> Self {
        Self::new(value, 0)
    }

    pub fn to_certified(&self, ctx: &PrecisionContext) -> CertifiedReal {
        let pi_pow = CertifiedReal::pi(ctx).powi(self.pi_exponent);
        pi_pow.mul_rational(&self.coefficient)
    }

    pub fn mul(&self, other: &PiPowerRational) -> PiPowerRational {
        PiPowerRational::new(
            Rational::from(&self.coefficient * &other.coefficient),
            self.pi_exponent + other.pi_exponent,
        )
    }

    /// Exact comparison; only defined when both carry the same power of pi.
    pub fn partial_cmp_same_power(&self, other: &PiPowerRational) -> Option<Ordering> {
        (self.pi_exponent == other.pi_exponent).then(|| self.coefficient.cmp(&other.coefficient))
    }
}

impl fmt::Display for PiPowerRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_exponent {
            0 => write!(f, "{}", self.coefficient),
            1 => write!(f, "({})·π", self.coefficient),
            e => write!(f, "({})·π^{}", self.coefficient, e),
        }
    }
}
