//! Certified values of `L(k, f) = sum_n f(n) / n^k` for Erdős functions.
//!
//! Three independent routes:
//!
//! * [`l_value_direct`] sums the series itself, with a rigorous
//!   Euler–Maclaurin bound on the tail;
//! * [`l1_digamma`] uses `L(1, f) = -(1/q) sum_a f(a) Psi(a/q)`;
//! * [`l_closed_form`] uses the cotangent-derivative formula, available when
//!   `f` and `k` have the same parity.

use std::cmp::Ordering;

use crate::erdos::{ErdosFunction, ParityClass};
use crate::error::{Error, Result};
use crate::numeric::{
    cot_derivative_poly, factorial, periodic_dirichlet_sum, zeta_value, CertifiedReal, CotTable,
    DigammaTable, PrecisionContext,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LMethod {
    DirectSum,
    Digamma,
    ClosedForm,
}

/// One certified evaluation of `L(k, f)`.
#[derive(Clone, Debug)]
pub struct LValue {
    pub q: u32,
    pub k: u32,
    pub method: LMethod,
    pub value: CertifiedReal,
}

/// `L(k, f)` by summing the series: `M` full periods directly, then an
/// Euler–Maclaurin expansion of the remaining periods with a certified
/// remainder. `M` and the expansion order are chosen so the remainder is
/// below `2^-(bits + 4)`.
pub fn l_value_direct(f: &ErdosFunction, k: u32, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    if k == 0 {
        return Err(Error::Domain("L(k, f) needs k >= 1".into()));
    }
    let weights: Vec<i64> = f.values().iter().map(|&v| v as i64).collect();
    periodic_dirichlet_sum(&weights, k, ctx)
}

/// `L(1, f) = -(1/q) sum_{a=1}^{q} f(a) Psi(a/q)`.
pub fn l1_digamma(f: &ErdosFunction, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    let table = DigammaTable::new(f.modulus() as u64, ctx)?;
    l1_digamma_with(f, &table)
}

/// [`l1_digamma`] against a precomputed digamma table for the same modulus.
pub fn l1_digamma_with(f: &ErdosFunction, table: &DigammaTable) -> Result<CertifiedReal> {
    let q = f.modulus();
    if table.modulus() != q as u64 {
        return Err(Error::Domain(format!(
            "digamma table is for q = {}, function is mod {q}",
            table.modulus()
        )));
    }
    let ctx = table.get(1).ctx();
    let mut acc = CertifiedReal::zero(&ctx);
    for a in 1..q {
        let psi = table.get(a as u64);
        acc = match f.at(a as i64) {
            1 => &acc + psi,
            -1 => &acc - psi,
            _ => acc,
        };
    }
    Ok(-acc.div_i64(q as i64)?)
}

/// Per-residue weights `w_a` with `L(k, f) = sum_{a <= (q-1)/2} f(a) w_a`
/// for every `f` whose parity matches `k`:
///
/// `w_a = -(-1)^k pi^k / ((k-1)! q^k) * P_{k-1}(cot(pi a / q))`.
#[derive(Clone, Debug)]
pub struct ClosedFormWeights {
    q: u32,
    k: u32,
    weights: Vec<CertifiedReal>,
}

impl ClosedFormWeights {
    pub fn new(q: u32, k: u32, ctx: &PrecisionContext) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("L(k, f) needs k >= 1".into()));
        }
        let r = (q - 1) / 2;
        let cots = CotTable::new(q as u64, ctx)?;
        let poly = cot_derivative_poly(k - 1);
        // pi^k / ((k-1)! q^k), with the sign -(-1)^k
        let mut scale = CertifiedReal::pi(ctx).powi(k);
        scale = scale.div(&CertifiedReal::from_integer(&factorial(k - 1), ctx))?;
        scale = scale.div(&CertifiedReal::from_i64(q as i64, ctx).powi(k))?;
        if k % 2 == 0 {
            scale = -scale;
        }
        let weights = (1..=r).map(|a| &scale * &poly.evaluate(cots.cot(a as u64))).collect();
        Ok(Self { q, k, weights })
    }

    pub fn modulus(&self) -> u32 {
        self.q
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `w_a` for `a = 1..=(q-1)/2`.
    pub fn weights(&self) -> &[CertifiedReal] {
        &self.weights
    }

    /// `L(k, f)`; the caller is responsible for the parity match.
    pub fn evaluate(&self, f: &ErdosFunction) -> CertifiedReal {
        let ctx = self.weights.first().map(|w| w.ctx()).unwrap_or_default();
        let mut acc = CertifiedReal::zero(&ctx);
        for (i, w) in self.weights.iter().enumerate() {
            acc = match f.at(i as i64 + 1) {
                1 => &acc + w,
                _ => &acc - w,
            };
        }
        acc
    }
}

fn parity_matches(f: &ErdosFunction, k: u32) -> bool {
    matches!((f.parity(), k % 2), (ParityClass::Odd, 1) | (ParityClass::Even, 0))
}

/// `L(k, f) = -(-1)^k / ((k-1)! q^k) sum_{a <= (q-1)/2} f(a) pi^k P_{k-1}(cot(pi a / q))`.
pub fn l_closed_form(f: &ErdosFunction, k: u32, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    if k == 0 {
        return Err(Error::Domain("L(k, f) needs k >= 1".into()));
    }
    if !parity_matches(f, k) {
        let function = match f.parity() {
            ParityClass::Odd => "odd",
            ParityClass::Even => "even",
            ParityClass::Neither => "neither odd nor even",
        };
        return Err(Error::ParityMismatch { function, k });
    }
    Ok(ClosedFormWeights::new(f.modulus(), k, ctx)?.evaluate(f))
}

/// Evaluates `L(k, f)` by the chosen method.
pub fn l_value(f: &ErdosFunction, k: u32, method: LMethod, ctx: &PrecisionContext) -> Result<LValue> {
    let value = match method {
        LMethod::DirectSum => l_value_direct(f, k, ctx)?,
        LMethod::Digamma => {
            if k != 1 {
                return Err(Error::Domain("the digamma route only evaluates L(1, f)".into()));
            }
            l1_digamma(f, ctx)?
        }
        LMethod::ClosedForm => l_closed_form(f, k, ctx)?,
    };
    Ok(LValue { q: f.modulus(), k, method, value })
}

/// `2 - zeta(k)`, a lower bound for `|L(k, f)|` over all Erdős functions:
/// a zero of `L(k, f)` would force `1 = |f(1)| <= zeta(k) - 1`.
pub fn nonvanishing_bound(k: u32, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    if k < 2 {
        return Err(Error::BoundVacuous(k));
    }
    Ok(&CertifiedReal::from_i64(2, ctx) - &zeta_value(k, ctx)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NonzeroCertificate {
    /// `|midpoint| > radius`; carries the sign.
    CertifiedNonzero(Ordering),
    Undecided,
}

/// Certifies that a ball excludes zero. Zero itself is never certified.
pub fn certify_nonzero(v: &CertifiedReal) -> NonzeroCertificate {
    if v.contains_zero() {
        NonzeroCertificate::Undecided
    } else {
        NonzeroCertificate::CertifiedNonzero(v.midpoint().cmp0().expect("finite midpoint"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn q3_three_ways() {
        let f: ErdosFunction = "+-0".parse().unwrap();
        let direct = l_value_direct(&f, 1, &ctx()).unwrap();
        let dig = l1_digamma(&f, &ctx()).unwrap();
        let closed = l_closed_form(&f, 1, &ctx()).unwrap();
        assert!(direct.overlaps(&dig) && dig.overlaps(&closed) && direct.overlaps(&closed));
        assert!((closed.midpoint_f64() - 0.6045997880780726).abs() < 1e-15);
        for v in [&direct, &dig, &closed] {
            assert!(v.radius_f64() < 1e-30, "{v}");
        }
    }

    #[test]
    fn parity_mismatch_is_reported() {
        let f: ErdosFunction = "+-0".parse().unwrap();
        assert_eq!(
            l_closed_form(&f, 2, &ctx()).unwrap_err(),
            Error::ParityMismatch { function: "odd", k: 2 }
        );
        let g: ErdosFunction = "+-+--++-0".parse().unwrap();
        assert!(matches!(l_closed_form(&g, 1, &ctx()), Err(Error::ParityMismatch { .. })));
    }

    #[test]
    fn nonvanishing_bounds() {
        let b2 = nonvanishing_bound(2, &ctx()).unwrap();
        assert!((b2.midpoint_f64() - 0.35506593315177337).abs() < 1e-15);
        let b3 = nonvanishing_bound(3, &ctx()).unwrap();
        assert!((b3.midpoint_f64() - 0.7979430968404058).abs() < 1e-15);
        let b40 = nonvanishing_bound(40, &ctx()).unwrap();
        assert!((b40.midpoint_f64() - 1.0).abs() < 1e-11);
        assert_eq!(nonvanishing_bound(1, &ctx()).unwrap_err(), Error::BoundVacuous(1));
    }

    #[test]
    fn nonzero_certificates() {
        let c = ctx();
        let ball =
            |m: f64, r: f64| CertifiedReal::from_parts(Float::with_val(128, m), &Float::with_val(64, r));
        assert_eq!(certify_nonzero(&ball(0.5, 0.1)), NonzeroCertificate::CertifiedNonzero(Ordering::Greater));
        assert_eq!(certify_nonzero(&ball(0.0, 0.1)), NonzeroCertificate::Undecided);
        assert_eq!(
            certify_nonzero(&ball(-3e-40, 1e-45)),
            NonzeroCertificate::CertifiedNonzero(Ordering::Less)
        );
        assert_eq!(certify_nonzero(&CertifiedReal::zero(&c)), NonzeroCertificate::Undecided);
    }
}
