use rug::Integer;

use super::arith::factorial;
use super::ball::{CertifiedReal, PrecisionContext};
use super::bernoulli::bernoulli;
use super::pipower::PiPowerRational;
use super::series::periodic_dirichlet_sum;
use crate::error::{Error, Result};

/// Euler's closed form `zeta(2m) = (-1)^{m+1} B_{2m} 2^{2m} / (2 (2m)!) * pi^{2m}`.
pub fn zeta_even(m: u32) -> PiPowerRational {
    assert!(m >= 1, "zeta_even needs m >= 1");
    let mut coefficient = bernoulli(2 * m) * Integer::from(Integer::u_pow_u(2, 2 * m));
    coefficient /= factorial(2 * m) * 2u32;
    if m % 2 == 0 {
        coefficient = -coefficient;
    }
    PiPowerRational::new(coefficient, 2 * m)
}

/// Certified `zeta(s)` for integer `s >= 2`.
pub fn zeta_value(s: u32, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    if s < 2 {
        return Err(Error::Domain(format!("zeta({s}) is not a convergent series")));
    }
    if s % 2 == 0 {
        Ok(zeta_even(s / 2).to_certified(ctx))
    } else {
        periodic_dirichlet_sum(&[1], s, ctx)
    }
}
