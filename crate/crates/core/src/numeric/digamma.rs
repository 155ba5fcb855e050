//! Digamma at rational points through Gauss's closed form.

use super::ball::{CertifiedReal, PrecisionContext};
use super::cot::cot_pi_rational;
use crate::error::{Error, Result};

/// `Psi(a/q)` for all `a = 1..=q`, sharing the `ln sin(pi j / q)` values.
#[derive(Clone, Debug)]
pub struct DigammaTable {
    q: u64,
    values: Vec<CertifiedReal>,
}

impl DigammaTable {
    pub fn new(q: u64, ctx: &PrecisionContext) -> Result<Self> {
        if q == 0 {
            return Err(Error::Domain("digamma table needs q >= 1".into()));
        }
        let gamma = CertifiedReal::euler_gamma(ctx);
        let pi = CertifiedReal::pi(ctx);
        let half_range = (q - 1) / 2;
        let log_sines = (1..=half_range)
            .map(|j| pi.mul_i64(j as i64).div_i64(q as i64)?.sin().ln())
            .collect::<Result<Vec<_>>>()?;
        // -gamma - ln(2q)
        let base = &(-&gamma) - &CertifiedReal::from_i64(2 * q as i64, ctx).ln()?;
        let half_pi = pi.div_i64(2)?;
        let mut values = Vec::with_capacity(q as usize);
        for a in 1..q {
            let mut acc = &base - &(&half_pi * &cot_pi_rational(a as i64, q, ctx)?);
            for (j, log_sin) in log_sines.iter().enumerate() {
                let j = j as i64 + 1;
                let angle = pi.mul_i64(2 * j * a as i64).div_i64(q as i64)?;
                acc = &acc + &(&angle.cos() * log_sin).mul_i64(2);
            }
            values.push(acc);
        }
        values.push(-&gamma);
        Ok(Self { q, values })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// `Psi(a/q)` for `1 <= a <= q`.
    pub fn get(&self, a: u64) -> &CertifiedReal {
        &self.values[(a - 1) as usize]
    }

    pub fn values(&self) -> &[CertifiedReal] {
        &self.values
    }
}

/// Certified `Psi(a/q)` for `1 <= a <= q`. `a = q` gives `Psi(1) = -gamma`.
pub fn digamma_rational(a: u64, q: u64, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    if a == 0 || a > q {
        return Err(Error::Domain(format!("digamma_rational needs 1 <= a <= q, got a = {a}, q = {q}")));
    }
    if a == q {
        return Ok(-CertifiedReal::euler_gamma(ctx));
    }
    let gamma = CertifiedReal::euler_gamma(ctx);
    let pi = CertifiedReal::pi(ctx);
    let mut acc = &(-&gamma) - &CertifiedReal::from_i64(2 * q as i64, ctx).ln()?;
    acc = &acc - &(&pi.div_i64(2)? * &cot_pi_rational(a as i64, q, ctx)?);
    for j in 1..=((q - 1) / 2) as i64 {
        let log_sin = pi.mul_i64(j).div_i64(q as i64)?.sin().ln()?;
        let angle = pi.mul_i64(2 * j * a as i64).div_i64(q as i64)?;
        acc = &acc + &(&angle.cos() * &log_sin).mul_i64(2);
    }
    Ok(acc)
}
