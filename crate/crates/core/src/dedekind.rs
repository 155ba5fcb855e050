//! Higher-dimensional Dedekind cotangent sums
//!
//! `C(a_i; a_0..^a_i..a_d | m_i; m_0..^m_i..m_d)
//!     = a_i^{-(m_i+1)} sum_{k=1}^{a_i-1} prod_{j != i} cot^{(m_j)}(pi k a_j / a_i)`,
//!
//! their reciprocity law, and the power sums
//! `S_{q,k}^{(u)} = sum_{t=1}^{q-1} (cot^{(k-1)}(pi t / q))^{2u}`, which are
//! polynomials in `q` of degree `2uk`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{
    bernoulli, factorial, gcd, reconstruct_rational, CertifiedReal, CotTable, PrecisionContext,
};

/// Parameters `(a_0..a_d | m_0..m_d)` with a distinguished index `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DedekindSpec {
    moduli: Vec<u64>,
    orders: Vec<u32>,
    distinguished: usize,
}

impl DedekindSpec {
    pub fn new(moduli: Vec<u64>, orders: Vec<u32>, distinguished: usize) -> Result<Self> {
        validate_shape(&moduli, &orders)?;
        if distinguished >= moduli.len() {
            return Err(Error::InvalidSpec(format!(
                "distinguished index {distinguished} out of range 0..={}",
                moduli.len() - 1
            )));
        }
        Ok(Self { moduli, orders, distinguished })
    }

    /// `d`, one less than the number of moduli.
    pub fn dimension(&self) -> usize {
        self.moduli.len() - 1
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn distinguished(&self) -> usize {
        self.distinguished
    }
}

impl fmt::Display for DedekindSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = self.distinguished;
        let rest = |v: Vec<String>| {
            v.into_iter().enumerate().filter(|&(j, _)| j != i).map(|(_, s)| s).collect::<Vec<_>>().join(",")
        };
        write!(
            f,
            "C({}; {} | {}; {})",
            self.moduli[i],
            rest(self.moduli.iter().map(u64::to_string).collect()),
            self.orders[i],
            rest(self.orders.iter().map(u32::to_string).collect())
        )
    }
}

fn validate_shape(moduli: &[u64], orders: &[u32]) -> Result<()> {
    if moduli.len() < 2 {
        return Err(Error::InvalidSpec("need at least two moduli (d >= 1)".into()));
    }
    if moduli.len() != orders.len() {
        return Err(Error::InvalidSpec(format!("{} moduli but {} orders", moduli.len(), orders.len())));
    }
    if moduli.contains(&0) {
        return Err(Error::InvalidSpec("moduli must be positive".into()));
    }
    Ok(())
}

/// Values `cot^{(m)}(pi t / a)` for `t = 1..a-1`, memoized per order.
struct CotDerivCache {
    table: CotTable,
    by_order: HashMap<u32, Vec<CertifiedReal>>,
}

impl CotDerivCache {
    fn new(a: u64, ctx: &PrecisionContext) -> Result<Self> {
        Ok(Self { table: CotTable::new(a, ctx)?, by_order: HashMap::new() })
    }

    fn get(&mut self, m: u32) -> &[CertifiedReal] {
        let table = &self.table;
        self.by_order.entry(m).or_insert_with(|| table.derivative_values(m))
    }
}

/// The sum for distinguished modulus `a_i >= 2`, with the other moduli and
/// their (possibly shifted) orders given as pairs.
fn cot_product_sum(
    a_i: u64,
    m_i: u32,
    others: &[(u64, u32)],
    cache: &mut CotDerivCache,
    ctx: &PrecisionContext,
) -> Result<CertifiedReal> {
    for &(a_j, _) in others {
        if gcd(a_j, a_i) != 1 {
            return Err(Error::SingularTerm { a_i, a_j });
        }
    }
    let columns: Vec<Vec<CertifiedReal>> = others.iter().map(|&(_, m_j)| cache.get(m_j).to_vec()).collect();
    let mut acc = CertifiedReal::zero(ctx);
    for k in 1..a_i {
        let mut term = CertifiedReal::one(ctx);
        for (col, &(a_j, _)) in columns.iter().zip(others) {
            let t = (k as u128 * a_j as u128 % a_i as u128) as usize;
            term = &term * &col[t - 1];
        }
        acc = acc + term;
    }
    acc.div(&CertifiedReal::from_integer(&Integer::from(a_i).pow(m_i + 1), ctx))
}

/// Certified value of the cotangent sum; exactly zero when `a_i = 1`.
pub fn dedekind_sum_numeric(spec: &DedekindSpec, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    let i = spec.distinguished;
    let a_i = spec.moduli[i];
    if a_i == 1 {
        return Ok(CertifiedReal::zero(ctx));
    }
    let others: Vec<(u64, u32)> =
        (0..spec.moduli.len()).filter(|&j| j != i).map(|j| (spec.moduli[j], spec.orders[j])).collect();
    let mut cache = CotDerivCache::new(a_i, ctx)?;
    cot_product_sum(a_i, spec.orders[i], &others, &mut cache, ctx)
}

/// `S_{q,k}^{(u)} = sum_{t=1}^{q-1} (cot^{(k-1)}(pi t / q))^{2u}`; zero for `q = 1`.
pub fn s_qk(u: u32, q: u64, k: u32, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    if q == 0 {
        return Err(Error::InvalidModulus(0));
    }
    if u == 0 || k == 0 {
        return Err(Error::Domain("S_{q,k}^{(u)} needs u, k >= 1".into()));
    }
    if q == 1 {
        return Ok(CertifiedReal::zero(ctx));
    }
    let values = CotTable::new(q, ctx)?.derivative_values(k - 1);
    let powers: Vec<CertifiedReal> = values.iter().map(|v| v.powi(2 * u)).collect();
    Ok(CertifiedReal::sum(powers.iter(), ctx))
}

/// Compositions of `total` into `parts` non-negative parts, in lexicographic order.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Checks the reciprocity hypotheses and returns `M = d + sum m_i`.
fn reciprocity_hypotheses(moduli: &[u64], orders: &[u32]) -> Result<u32> {
    validate_shape(moduli, orders)?;
    for (x, &a) in moduli.iter().enumerate() {
        for &b in &moduli[x + 1..] {
            if gcd(a, b) != 1 {
                return Err(Error::NotCoprime(a, b));
            }
        }
    }
    let big_m = (moduli.len() - 1) as u32 + orders.iter().sum::<u32>();
    if big_m % 2 != 0 {
        return Err(Error::ParityViolation(big_m));
    }
    Ok(big_m)
}

/// The coefficient `A_{i,j}` for order `m_i = m`.
pub fn reciprocity_a(j: u32, m: u32) -> Rational {
    if j == 0 {
        let f = Rational::from(factorial(m));
        return if m % 2 == 0 { f } else { -f };
    }
    if 2 * j < m + 1 {
        return Rational::new();
    }
    bernoulli(2 * j) / Rational::from(factorial(2 * j - 1 - m) * (2 * j))
}

/// `R = (-1)^{M/2} 2^M / prod a_i^{m_i+1} * sum_{|j| = M/2} prod a_i^{2 j_i} A_{i,j_i}`.
pub fn reciprocity_r(moduli: &[u64], orders: &[u32]) -> Result<Rational> {
    let big_m = reciprocity_hypotheses(moduli, orders)?;
    let mut sum = Rational::new();
    for js in compositions(big_m / 2, moduli.len()) {
        let mut term = Rational::from(1);
        for ((&a, &m), &j) in moduli.iter().zip(orders).zip(&js) {
            let a_coef = reciprocity_a(j, m);
            if a_coef == 0 {
                term = Rational::new();
                break;
            }
            term *= Rational::from(Integer::from(a).pow(2 * j)) * a_coef;
        }
        sum += term;
    }
    let mut denom = Integer::from(1);
    for (&a, &m) in moduli.iter().zip(orders) {
        denom *= Integer::from(a).pow(m + 1);
    }
    let mut r = Rational::from((Integer::from(1) << big_m, denom)) * sum;
    if (big_m / 2) % 2 == 1 {
        r = -r;
    }
    Ok(r)
}

/// Signs in `LHS = global * (R + correction * (-1)^{d/2} [all m_i = 0])`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SignConvention {
    pub global: i8,
    pub correction: i8,
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |s: i8| if s < 0 { '-' } else { '+' };
        write!(f, "LHS = {}(R {} (-1)^(d/2)[all m = 0])", sign(self.global), sign(self.correction))
    }
}

const CALIBRATION_MODULI: [u64; 3] = [2, 3, 5];
const CALIBRATION_ORDERS: [u32; 3] = [0, 0, 0];

/// Picks the one convention, among the four sign choices, whose right-hand
/// side lies in the numeric left-hand side for `(2,3,5 | 0,0,0)`.
pub fn calibrate_sign_convention(ctx: &PrecisionContext) -> Result<SignConvention> {
    let lhs = reciprocity_lhs(&CALIBRATION_MODULI, &CALIBRATION_ORDERS, ctx)?;
    let mut hits = Vec::new();
    for global in [1i8, -1] {
        for correction in [1i8, -1] {
            let conv = SignConvention { global, correction };
            let rhs = reciprocity_rhs_with(&CALIBRATION_MODULI, &CALIBRATION_ORDERS, conv)?;
            if lhs.contains_rational(&rhs) {
                hits.push(conv);
            }
        }
    }
    match hits.as_slice() {
        [conv] => Ok(*conv),
        _ => Err(Error::Domain(format!(
            "sign calibration matched {} conventions, expected exactly one",
            hits.len()
        ))),
    }
}

/// The calibrated convention, computed once per process.
pub fn sign_convention() -> SignConvention {
    static CONVENTION: OnceLock<SignConvention> = OnceLock::new();
    *CONVENTION.get_or_init(|| {
        calibrate_sign_convention(&PrecisionContext::default()).expect("calibration on (2,3,5) is well posed")
    })
}

/// Exact right-hand side of the reciprocity law under `conv`.
pub fn reciprocity_rhs_with(moduli: &[u64], orders: &[u32], conv: SignConvention) -> Result<Rational> {
    let mut value = reciprocity_r(moduli, orders)?;
    if orders.iter().all(|&m| m == 0) {
        let d = (moduli.len() - 1) as u32;
        let corr = if (d / 2) % 2 == 0 { 1 } else { -1 } * conv.correction as i32;
        value += corr;
    }
    if conv.global < 0 {
        value = -value;
    }
    Ok(value)
}

/// Exact right-hand side of the reciprocity law under [`sign_convention`].
pub fn reciprocity_rhs(moduli: &[u64], orders: &[u32]) -> Result<Rational> {
    reciprocity_hypotheses(moduli, orders)?;
    reciprocity_rhs_with(moduli, orders, sign_convention())
}

/// Numeric left-hand side:
/// `sum_i (-1)^{m_i} m_i! sum_{|l| = m_i} prod_{j != i} a_j^{l_j}/l_j! * C(a_i; .. | m_i; m_j + l_j)`.
pub fn reciprocity_lhs(moduli: &[u64], orders: &[u32], ctx: &PrecisionContext) -> Result<CertifiedReal> {
    reciprocity_hypotheses(moduli, orders)?;
    let n = moduli.len();
    let mut total = CertifiedReal::zero(ctx);
    for i in 0..n {
        let a_i = moduli[i];
        if a_i == 1 {
            continue;
        }
        let m_i = orders[i];
        let mut cache = CotDerivCache::new(a_i, ctx)?;
        let mut inner = CertifiedReal::zero(ctx);
        for ls in compositions(m_i, n - 1) {
            let mut weight = Rational::from(1);
            let mut others = Vec::with_capacity(n - 1);
            for (j, &l) in (0..n).filter(|&j| j != i).zip(&ls) {
                weight *= Rational::from((Integer::from(moduli[j]).pow(l), factorial(l)));
                others.push((moduli[j], orders[j] + l));
            }
            let c = cot_product_sum(a_i, m_i, &others, &mut cache, ctx)?;
            inner = inner + c.mul_rational(&weight);
        }
        let mut outer = Rational::from(factorial(m_i));
        if m_i % 2 == 1 {
            outer = -outer;
        }
        total = total + inner.mul_rational(&outer);
    }
    Ok(total)
}

/// `LHS - RHS` as a ball; encloses zero when the law holds.
pub fn reciprocity_check(moduli: &[u64], orders: &[u32], ctx: &PrecisionContext) -> Result<CertifiedReal> {
    let rhs = reciprocity_rhs(moduli, orders)?;
    let lhs = reciprocity_lhs(moduli, orders, ctx)?;
    Ok(lhs - CertifiedReal::from_rational(&rhs, ctx))
}

/// Exact polynomial `sum_j c_j q^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialInQ {
    coefficients: Vec<Rational>,
}

impl PolynomialInQ {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coefficients: Vec<Rational>) -> Self {
        while coefficients.last().is_some_and(|c| *c == 0) {
            coefficients.pop();
        }
        Self { coefficients }
    }

    /// Coefficients from `q^0` upwards.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.coefficients.last().cloned().unwrap_or_default()
    }

    pub fn evaluate(&self, q: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coefficients.iter().rev() {
            acc = acc * q + c;
        }
        acc
    }

    pub fn evaluate_u64(&self, q: u64) -> Rational {
        self.evaluate(&Rational::from(q))
    }
}

impl fmt::Display for PolynomialInQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coefficients.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let abs = Rational::from(c.abs_ref());
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            let show_coef = j == 0 || abs != 1;
            if show_coef {
                if j == 0 || *abs.denom() == 1 {
                    write!(f, "{abs}")?;
                } else {
                    write!(f, "({abs})")?;
                }
            }
            match j {
                0 => {}
                1 => write!(f, "{}q", if show_coef { "·" } else { "" })?,
                _ => write!(f, "{}q^{j}", if show_coef { "·" } else { "" })?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `2^{2uk} ((k-1)!)^{2u} (-1)^{uk+1} B_{2uk} / (2uk)!`.
pub fn s_qk_leading_coefficient(u: u32, k: u32) -> Rational {
    let n = 2 * u * k;
    let mut value =
        Rational::from(Integer::from(1) << n) * Rational::from(factorial(k - 1).pow(2 * u)) * bernoulli(n)
            / Rational::from(factorial(n));
    if (u * k) % 2 == 0 {
        value = -value;
    }
    value
}

/// Exact interpolation through `(x_i, y_i)`, returned in monomial form.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> PolynomialInQ {
    let n = xs.len();
    // Newton divided differences
    let mut dd: Vec<Rational> = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = Rational::from(&dd[i] - &dd[i - 1]);
            let den = Rational::from(&xs[i] - &xs[i - level]);
            dd[i] = num / den;
        }
    }
    let mut coeffs = vec![Rational::new(); n];
    // Horner on the Newton form: p = dd[n-1]; p = p*(q - x_i) + dd[i]
    for i in (0..n).rev() {
        let mut next = vec![Rational::new(); n];
        for j in 0..n - 1 {
            let shifted = coeffs[j].clone();
            next[j + 1] += &shifted;
            next[j] -= shifted * &xs[i];
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    PolynomialInQ::new(coeffs)
}

const MAX_RECONSTRUCTION_BITS: u32 = 8192;
const EXTRA_CHECKS: u64 = 4;

/// `S_{q,k}^{(u)}` as an exact polynomial in `q`, memoized.
///
/// Samples the certified sums at odd `q = 3, 5, ...`, recovers each as the
/// unique rational of bounded denominator in its ball, interpolates, then
/// checks four further moduli and the expected leading coefficient.
pub fn s_qk_polynomial(u: u32, k: u32) -> Result<PolynomialInQ> {
    static MEMO: OnceLock<Mutex<HashMap<(u32, u32), PolynomialInQ>>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(p) = memo.lock().expect("memo poisoned").get(&(u, k)) {
        return Ok(p.clone());
    }
    let p = build_s_qk_polynomial(u, k)?;
    memo.lock().expect("memo poisoned").insert((u, k), p.clone());
    Ok(p)
}

fn build_s_qk_polynomial(u: u32, k: u32) -> Result<PolynomialInQ> {
    if u == 0 || k == 0 {
        return Err(Error::Domain("S_{q,k}^{(u)} needs u, k >= 1".into()));
    }
    let degree = (2 * u * k) as u64;
    let sample_qs: Vec<u64> = (0..=degree).map(|i| 3 + 2 * i).collect();
    let check_qs: Vec<u64> = (0..EXTRA_CHECKS).map(|i| 3 + 2 * (degree + 1 + i)).collect();

    // values at integer q carry the coefficient denominators, which divide
    // products of Bernoulli denominators and factorials up to 2uk
    let den_guard = factorial(2 * u * k + 1).pow(2);
    let mut bits = 128;
    let (xs, ys) = loop {
        let ctx = PrecisionContext::new(bits)?;
        let mut ys = Vec::with_capacity(sample_qs.len());
        for &q in &sample_qs {
            let value = s_qk(u, q, k, &ctx)?;
            let max_den = &den_guard * Integer::from(q).pow(2 * u);
            match reconstruct_rational(&value, &max_den) {
                Some(r) => ys.push(r),
                None => break,
            }
        }
        if ys.len() == sample_qs.len() {
            break (sample_qs.iter().map(|&q| Rational::from(q)).collect::<Vec<_>>(), ys);
        }
        bits *= 2;
        if bits > MAX_RECONSTRUCTION_BITS {
            return Err(Error::ReconstructionFailure(format!(
                "S^({u})_(q,{k}) not recoverable at {MAX_RECONSTRUCTION_BITS} bits"
            )));
        }
    };
    let poly = interpolate(&xs, &ys);

    let ctx = PrecisionContext::new(bits)?;
    for &q in &check_qs {
        let value = s_qk(u, q, k, &ctx)?;
        if !value.contains_rational(&poly.evaluate_u64(q)) {
            return Err(Error::ReconstructionFailure(format!(
                "interpolant for (u, k) = ({u}, {k}) misses the value at q = {q}"
            )));
        }
    }
    let expected = s_qk_leading_coefficient(u, k);
    if poly.degree() as u64 != degree || poly.leading_coefficient() != expected {
        return Err(Error::ReconstructionFailure(format!(
            "interpolant for (u, k) = ({u}, {k}) has leading term {}·q^{}, expected {expected}·q^{degree}",
            poly.leading_coefficient(),
            poly.degree()
        )));
    }
    Ok(poly)
}
