//! Derivatives of the cotangent as polynomials in `c = cot z`.

use std::sync::{OnceLock, RwLock};

use rug::Integer;

use super::ball::{CertifiedReal, PrecisionContext};
use crate::error::{Error, Result};

/// `d^m/dz^m cot z = P_m(cot z)`, coefficients listed from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CotDerivPolynomial {
    order: u32,
    coefficients: Vec<Integer>,
}

impl CotDerivPolynomial {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coefficients(&self) -> &[Integer] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.iter().rposition(|c| *c != 0).unwrap_or(0)
    }

    /// Horner evaluation at a certified value of `cot z`.
    pub fn evaluate(&self, cot: &CertifiedReal) -> CertifiedReal {
        let ctx = cot.ctx();
        let mut acc = CertifiedReal::zero(&ctx);
        for c in self.coefficients.iter().rev() {
            acc = &(&acc * cot) + &CertifiedReal::from_integer(c, &ctx);
        }
        acc
    }

    /// Exact evaluation at an integer or rational argument.
    pub fn evaluate_rational(&self, c: &rug::Rational) -> rug::Rational {
        let mut acc = rug::Rational::new();
        for coeff in self.coefficients.iter().rev() {
            acc = acc * c + coeff;
        }
        acc
    }

    fn next(&self) -> Self {
        // P_{m+1} = -(1 + c^2) P_m'
        let deriv: Vec<Integer> =
            self.coefficients.iter().enumerate().skip(1).map(|(i, c)| Integer::from(c * i as u64)).collect();
        let mut out = vec![Integer::new(); deriv.len() + 2];
        for (i, d) in deriv.iter().enumerate() {
            out[i] -= d;
            out[i + 2] -= d;
        }
        while out.len() > 1 && out.last().is_some_and(|c| *c == 0) {
            out.pop();
        }
        Self { order: self.order + 1, coefficients: out }
    }
}

fn table() -> &'static RwLock<Vec<CotDerivPolynomial>> {
    static TABLE: OnceLock<RwLock<Vec<CotDerivPolynomial>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        RwLock::new(vec![CotDerivPolynomial {
            order: 0,
            coefficients: vec![Integer::new(), Integer::from(1)],
        }])
    })
}

/// `P_m` with `P_0 = c`, `P_{m+1} = -(1 + c^2) P_m'(c)`. Memoized.
pub fn cot_derivative_poly(m: u32) -> CotDerivPolynomial {
    let m = m as usize;
    {
        let cached = table().read().expect("cot table poisoned");
        if let Some(p) = cached.get(m) {
            return p.clone();
        }
    }
    let mut cached = table().write().expect("cot table poisoned");
    while cached.len() <= m {
        let next = cached.last().expect("table seeded").next();
        cached.push(next);
    }
    cached[m].clone()
}

/// Certified `cot(pi a / q)`.
pub fn cot_pi_rational(a: i64, q: u64, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    if q == 0 || a.rem_euclid(q as i64) == 0 {
        return Err(Error::SingularArgument { a, q });
    }
    let a = a.rem_euclid(q as i64);
    let angle = CertifiedReal::pi(ctx).mul_i64(a).div_i64(q as i64)?;
    angle.cot()
}

/// Certified `P_m(cot(pi a / q))`, i.e. the m-th derivative of cot at `pi a / q`.
pub fn cot_derivative_at(m: u32, a: i64, q: u64, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    let cot = cot_pi_rational(a, q, ctx)?;
    Ok(cot_derivative_poly(m).evaluate(&cot))
}

/// `cot(pi t / q)` for `t = 1..q-1`, computed once for reuse in power sums.
#[derive(Clone, Debug)]
pub struct CotTable {
    q: u64,
    values: Vec<CertifiedReal>,
}

impl CotTable {
    pub fn new(q: u64, ctx: &PrecisionContext) -> Result<Self> {
        let values = (1..q as i64).map(|t| cot_pi_rational(t, q, ctx)).collect::<Result<Vec<_>>>()?;
        Ok(Self { q, values })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// `cot(pi t / q)` for `1 <= t < q`.
    pub fn cot(&self, t: u64) -> &CertifiedReal {
        &self.values[(t - 1) as usize]
    }

    /// `P_m(cot(pi t / q))` for `t = 1..q-1`.
    pub fn derivative_values(&self, m: u32) -> Vec<CertifiedReal> {
        let poly = cot_derivative_poly(m);
        self.values.iter().map(|c| poly.evaluate(c)).collect()
    }
}
