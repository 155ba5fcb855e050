//! Periodic Dirichlet series `sum_n w(n) / n^s` with a certified
//! Euler–Maclaurin tail.
//!
//! The head `n <= M q` is summed term by term. The remainder is
//! `sum_{m >= M} g(m)` with `g(x) = sum_a w_a (x q + a)^{-s}`, handled by
//! Euler–Maclaurin to order `p`; the leftover is bounded by
//! `2 zeta(2p) / (2 pi)^{2p} * int_M^inf |g^{(2p)}|`, using `zeta(2p) <= 2`.

use rug::ops::Pow;
use rug::{Integer, Rational};

use super::ball::{CertifiedReal, PrecisionContext};
use super::bernoulli::bernoulli;
use crate::error::{Error, Result};

/// How the tail was split; reported for diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TailPlan {
    pub periods: u64,
    pub correction_terms: u32,
}

const MAX_CORRECTION_TERMS: u32 = 256;

fn log2_rising(s: u32, len: u32) -> f64 {
    (0..len).map(|i| ((s + i) as f64).log2()).sum()
}

/// Pick the number of head periods and Euler–Maclaurin terms so the
/// remainder estimate falls below `2^-(bits + 4)`.
fn plan(q: u64, s: u32, weight_mass: f64, ctx: &PrecisionContext) -> Result<TailPlan> {
    let target = -((ctx.precision_bits() + 4) as f64);
    let log2_two_pi = (2.0 * std::f64::consts::PI).log2();
    let mut periods = 8u64;
    loop {
        if periods * q > ctx.max_terms() {
            return Err(Error::Domain(format!(
                "series at q = {q} needs more than {} terms at {} bits",
                ctx.max_terms(),
                ctx.precision_bits()
            )));
        }
        let log_mq = ((periods * q) as f64).log2();
        let log_q = (q as f64).log2();
        for p in 1..=MAX_CORRECTION_TERMS {
            let est = 2.0 + weight_mass.log2() - 2.0 * p as f64 * log2_two_pi
                + log2_rising(s, 2 * p)
                + (2 * p - 1) as f64 * log_q
                + (1.0 - s as f64 - 2.0 * p as f64) * log_mq
                - ((s + 2 * p - 1) as f64).log2();
            if est < target {
                return Ok(TailPlan { periods, correction_terms: p });
            }
        }
        periods *= 2;
    }
}

/// `sum_{n >= 1} w(n) / n^s` where `w` has period `q = weights.len()` and
/// `weights[a - 1] = w(a)`. For `s = 1` the weights must sum to zero.
pub fn periodic_dirichlet_sum(weights: &[i64], s: u32, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    periodic_dirichlet_sum_with_plan(weights, s, ctx).map(|(v, _)| v)
}

pub fn periodic_dirichlet_sum_with_plan(
    weights: &[i64],
    s: u32,
    ctx: &PrecisionContext,
) -> Result<(CertifiedReal, TailPlan)> {
    let q = weights.len() as u64;
    if q == 0 || s == 0 {
        return Err(Error::Domain("periodic series needs q >= 1 and s >= 1".into()));
    }
    if s == 1 && weights.iter().sum::<i64>() != 0 {
        return Err(Error::Domain("series with s = 1 diverges unless the weights sum to zero".into()));
    }
    let mass: i64 = weights.iter().map(|w| w.abs()).sum();
    if mass == 0 {
        return Ok((CertifiedReal::zero(ctx), TailPlan { periods: 0, correction_terms: 0 }));
    }
    let plan = plan(q, s, mass as f64, ctx)?;
    let m = plan.periods;

    let mut total = CertifiedReal::zero(ctx);
    for n in 1..=m * q {
        let w = weights[((n - 1) % q) as usize];
        if w != 0 {
            let term = Rational::from((Integer::from(w), Integer::from(n).pow(s)));
            total = &total + &CertifiedReal::from_rational(&term, ctx);
        }
    }

    let shifted = |a: u64| Integer::from(m * q + a);

    // integral of g over [M, inf)
    let integral = if s == 1 {
        let mut acc = CertifiedReal::zero(ctx);
        for (i, &w) in weights.iter().enumerate() {
            if w != 0 {
                let ln = CertifiedReal::from_integer(&shifted(i as u64 + 1), ctx).ln()?;
                acc = &acc + &ln.mul_i64(w);
            }
        }
        -acc.div_i64(q as i64)?
    } else {
        let mut acc = Rational::new();
        for (i, &w) in weights.iter().enumerate() {
            if w != 0 {
                acc += Rational::from((Integer::from(w), shifted(i as u64 + 1).pow(s - 1)));
            }
        }
        acc /= Integer::from(q) * (s - 1);
        CertifiedReal::from_rational(&acc, ctx)
    };
    total = &total + &integral;

    // g(M) / 2 and the Bernoulli corrections, all exact rationals
    let mut exact = Rational::new();
    for (i, &w) in weights.iter().enumerate() {
        if w != 0 {
            exact += Rational::from((Integer::from(w), shifted(i as u64 + 1).pow(s)));
        }
    }
    exact /= 2;
    let mut rising = Integer::from(s); // (s)_r for r = 2j - 1, updated in the loop
    let mut q_pow = Integer::from(q);
    let mut fact = Integer::from(2); // (2j)!
    for j in 1..=plan.correction_terms {
        let r = 2 * j - 1;
        // g^{(r)}(M) = -(s)_r q^r sum_a w_a (Mq + a)^{-s-r}   (r odd)
        let mut deriv = Rational::new();
        for (i, &w) in weights.iter().enumerate() {
            if w != 0 {
                deriv += Rational::from((Integer::from(w), shifted(i as u64 + 1).pow(s + r)));
            }
        }
        deriv *= Integer::from(&rising * &q_pow);
        deriv = -deriv;
        exact -= bernoulli(2 * j) * deriv / &fact;

        rising *= s + r;
        rising *= s + r + 1;
        q_pow *= q * q;
        fact *= (2 * j + 1) as u64;
        fact *= (2 * j + 2) as u64;
    }
    total = &total + &CertifiedReal::from_rational(&exact, ctx);

    // remainder bound: 4 / (2 pi)^{2p} * sum |w_a| (s)_{2p} q^{2p-1} (Mq+a)^{1-s-2p} / (s+2p-1)
    let p = plan.correction_terms;
    let mut rising_2p = Integer::from(1);
    for i in 0..2 * p {
        rising_2p *= s + i;
    }
    let mut bound = Rational::new();
    for (i, &w) in weights.iter().enumerate() {
        if w != 0 {
            bound += Rational::from((Integer::from(w.abs()), shifted(i as u64 + 1).pow(s + 2 * p - 1)));
        }
    }
    bound *= rising_2p * Integer::from(q).pow(2 * p - 1) * 4u32;
    bound /= Integer::from(s + 2 * p - 1);
    let two_pi_pow = CertifiedReal::pi(ctx).mul_i64(2).powi(2 * p);
    let remainder = CertifiedReal::from_rational(&bound, ctx).div(&two_pi_pow)?;
    Ok((total.widen(&remainder.abs_upper()), plan))
}
