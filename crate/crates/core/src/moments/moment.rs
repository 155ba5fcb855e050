use rug::ops::Pow;
use rug::{Integer, Rational};
use serde_json::{json, Value};

use super::partition::{block_multiplicity, partitions, Partition};
use super::sums::{half_range_distinct_sum_exact, recursion_exact, script_s_exact};
use crate::dedekind::s_qk_leading_coefficient;
use crate::erdos::{enumerate_parity, Parity};
use crate::error::{Error, Result};
use crate::lseries::ClosedFormWeights;
use crate::numeric::{factorial, hex_float, CertifiedReal, PiPowerRational, PrecisionContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MomentMethod {
    Enumeration,
    PartitionFormula,
    LiteralFormula,
    MonteCarlo,
}

impl MomentMethod {
    pub fn name(self) -> &'static str {
        match self {
            MomentMethod::Enumeration => "Enumeration",
            MomentMethod::PartitionFormula => "PartitionFormula",
            MomentMethod::LiteralFormula => "LiteralFormula",
            MomentMethod::MonteCarlo => "MonteCarlo",
        }
    }
}

#[derive(Clone, Debug)]
pub enum MomentValue {
    /// An exact `coefficient * pi^e`, with its certified enclosure.
    Exact(PiPowerRational, CertifiedReal),
    Certified(CertifiedReal),
    Estimate {
        mean: f64,
        standard_error: f64,
        samples: u64,
        seed: u64,
    },
}

/// One moment, of a finite population (`q = Some(..)`) or of the limit.
#[derive(Clone, Debug)]
pub struct MomentReport {
    pub q: Option<u64>,
    pub k: u32,
    pub order: u32,
    pub method: MomentMethod,
    pub value: MomentValue,
}

impl MomentReport {
    /// Certified enclosure, when there is one.
    pub fn certified(&self) -> Option<&CertifiedReal> {
        match &self.value {
            MomentValue::Exact(_, c) | MomentValue::Certified(c) => Some(c),
            MomentValue::Estimate { .. } => None,
        }
    }

    pub fn exact(&self) -> Option<&PiPowerRational> {
        match &self.value {
            MomentValue::Exact(p, _) => Some(p),
            _ => None,
        }
    }

    pub fn approx(&self) -> f64 {
        match &self.value {
            MomentValue::Exact(_, c) | MomentValue::Certified(c) => c.midpoint_f64(),
            MomentValue::Estimate { mean, .. } => *mean,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut obj = json!({
            "q": self.q.map_or(json!("inf"), |q| json!(q)),
            "k": self.k,
            "order": self.order,
            "method": self.method.name(),
            "pi_exponent": Value::Null,
            "coefficient_num": Value::Null,
            "coefficient_den": Value::Null,
            "midpoint": Value::Null,
            "radius": Value::Null,
        });
        match &self.value {
            MomentValue::Exact(p, c) => {
                obj["pi_exponent"] = json!(p.pi_exponent);
                obj["coefficient_num"] = json!(p.coefficient.numer().to_string());
                obj["coefficient_den"] = json!(p.coefficient.denom().to_string());
                certified_fields(&mut obj, c);
            }
            MomentValue::Certified(c) => certified_fields(&mut obj, c),
            MomentValue::Estimate { mean, standard_error, samples, seed } => {
                obj["midpoint"] = json!(hex_f64(*mean));
                obj["approx"] = json!(mean);
                obj["standard_error"] = json!(standard_error);
                obj["samples"] = json!(samples);
                obj["seed"] = json!(seed);
            }
        }
        obj
    }
}

fn certified_fields(obj: &mut Value, c: &CertifiedReal) {
    obj["midpoint"] = json!(c.midpoint_hex());
    obj["radius"] = json!(c.radius_hex());
    obj["approx"] = json!(c.midpoint_decimal(20));
}

fn hex_f64(x: f64) -> String {
    hex_float(&rug::Float::with_val(53, x))
}

fn exact_report(
    q: Option<u64>,
    k: u32,
    order: u32,
    method: MomentMethod,
    value: PiPowerRational,
    ctx: &PrecisionContext,
) -> MomentReport {
    let certified = value.to_certified(ctx);
    MomentReport { q, k, order, method, value: MomentValue::Exact(value, certified) }
}

fn require_odd_k(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    if k % 2 == 0 {
        return Err(Error::ParityMismatch { function: "odd", k });
    }
    Ok(())
}

/// `c(lambda) = prod_i l(lambda_i) - sum_{eta < lambda} <lambda choose eta> c(eta)`,
/// with `l(u)` the leading coefficient of `S_{q,k}^{(u)}` and the factorial in
/// it read as `(2uk)!`.
pub fn c_lambda(lambda: &Partition, k: u32) -> Rational {
    let power: Vec<Rational> = (1..=lambda.size()).map(|u| s_qk_leading_coefficient(u, k)).collect();
    recursion_exact(lambda, &power)
}

/// The half-range analogue of [`c_lambda`], built from `l(u) / 2`.
pub fn d_lambda(lambda: &Partition, k: u32) -> Rational {
    let power: Vec<Rational> = (1..=lambda.size()).map(|u| s_qk_leading_coefficient(u, k) / 2).collect();
    recursion_exact(lambda, &power)
}

/// `m_q(order)`: the average of `L(k, f)^order` over the functions of the
/// same parity as `k`, by enumeration.
pub fn moment_enumeration(q: u32, k: u32, order: u32, ctx: &PrecisionContext) -> Result<MomentReport> {
    let population = enumerate_parity(q, Parity::of_k(k))?;
    if population.is_empty() {
        return Err(Error::EmptyPopulation { q, k });
    }
    let weights = ClosedFormWeights::new(q, k, ctx)?;
    let powers = population.par_map(|f| weights.evaluate(f).powi(order));
    let total = CertifiedReal::sum(powers.iter(), ctx);
    let len = i64::try_from(population.len()).expect("population fits in i64");
    Ok(MomentReport {
        q: Some(q as u64),
        k,
        order,
        method: MomentMethod::Enumeration,
        value: MomentValue::Certified(total.div_i64(len)?),
    })
}

/// Exact `m_q(2n) = (pi^k / ((k-1)! q^k))^{2n} sum_{lambda |- n} N(lambda) H(lambda)`
/// with `H` the half-range distinct sum. Odd orders vanish.
pub fn moment_partition_exact(q: u64, k: u32, order: u32) -> Result<PiPowerRational> {
    require_odd_k(k)?;
    if order % 2 == 1 {
        return Ok(PiPowerRational::new(Rational::new(), 0));
    }
    let n = order / 2;
    let mut sum = Rational::new();
    for lambda in partitions(n) {
        let h = half_range_distinct_sum_exact(&lambda, q, k)?;
        sum += Rational::from(block_multiplicity(&lambda)) * h;
    }
    let scale = (factorial(k - 1) * Integer::from(q).clone().pow(k)).clone().pow(order);
    Ok(PiPowerRational::new(sum / Rational::from(scale), k * order))
}

/// [`moment_partition_exact`] as a report.
pub fn moment_partition_formula(q: u64, k: u32, order: u32, ctx: &PrecisionContext) -> Result<MomentReport> {
    let value = moment_partition_exact(q, k, order)?;
    Ok(exact_report(Some(q), k, order, MomentMethod::PartitionFormula, value, ctx))
}

/// The uncorrected constant
/// `pi^k / (((k-1)!)^{2n} 2^{2n} q^{2kn}) sum_{lambda |- n} S(lambda)`,
/// with full-range distinct sums and no multiplicities. Kept for comparison.
pub fn moment_literal_formula(q: u64, k: u32, order: u32, ctx: &PrecisionContext) -> Result<MomentReport> {
    require_odd_k(k)?;
    let value = if order % 2 == 1 {
        PiPowerRational::new(Rational::new(), 0)
    } else {
        let n = order / 2;
        let mut sum = Rational::new();
        for lambda in partitions(n) {
            sum += script_s_exact(&lambda, q, k)?;
        }
        let denom = factorial(k - 1).clone().pow(order)
            * (Integer::from(1) << order)
            * Integer::from(q).clone().pow(k * order);
        PiPowerRational::new(sum / Rational::from(denom), k)
    };
    Ok(exact_report(Some(q), k, order, MomentMethod::LiteralFormula, value, ctx))
}

/// `M(2n) = pi^{2nk} / ((k-1)!)^{2n} sum_{lambda |- n} N(lambda) d(lambda)`,
/// the `q -> oo` limit of [`moment_partition_exact`].
pub fn limiting_moment(n: u32, k: u32) -> Result<PiPowerRational> {
    require_odd_k(k)?;
    let mut sum = Rational::new();
    for lambda in partitions(n) {
        sum += Rational::from(block_multiplicity(&lambda)) * d_lambda(&lambda, k);
    }
    let scale = factorial(k - 1).clone().pow(2 * n);
    Ok(PiPowerRational::new(sum / Rational::from(scale), 2 * n * k))
}

/// The uncorrected limit `pi^{2nk} / (((k-1)!)^{2n} 2^{2n}) sum_{lambda |- n} c(lambda)`.
/// Kept for comparison.
pub fn limiting_moment_literal(n: u32, k: u32) -> Result<PiPowerRational> {
    require_odd_k(k)?;
    let sum: Rational = partitions(n).iter().map(|l| c_lambda(l, k)).sum();
    let scale = factorial(k - 1).clone().pow(2 * n) << (2 * n);
    Ok(PiPowerRational::new(sum / Rational::from(scale), 2 * n * k))
}

/// Limiting moment of any order as a report; odd orders vanish.
pub fn limiting_moment_report(
    order: u32,
    k: u32,
    method: MomentMethod,
    ctx: &PrecisionContext,
) -> Result<MomentReport> {
    let value = match (order % 2, method) {
        (1, _) => {
            require_odd_k(k)?;
            PiPowerRational::new(Rational::new(), 0)
        }
        (_, MomentMethod::LiteralFormula) => limiting_moment_literal(order / 2, k)?,
        (_, MomentMethod::PartitionFormula) => limiting_moment(order / 2, k)?,
        (_, other) => {
            return Err(Error::Domain(format!(
                "limiting moments come from the partition formulas, not {}",
                other.name()
            )))
        }
    };
    Ok(exact_report(None, k, order, method, value, ctx))
}

/// `(2n)! / (2^n n!)`, the `2n`-th moment of a standard Gaussian.
pub fn gaussian_moment(n: u32) -> Integer {
    factorial(2 * n) / (factorial(n) << n)
}

/// Whether `M(2n) <= (2n)!/(2^n n!) M(2)^n`, exactly.
pub fn sub_gaussian_holds(n: u32, k: u32) -> Result<bool> {
    let m2n = limiting_moment(n, k)?;
    let m2 = limiting_moment(1, k)?;
    let bound = Rational::from(gaussian_moment(n)) * m2.coefficient.clone().pow(n as i32);
    Ok(m2n.coefficient <= bound)
}

/// `phi(t) = sum_n (-1)^n M(2n) t^{2n} / (2n)!`, truncated after `n = truncation`.
///
/// Every limiting moment is bounded by the matching Gaussian moment with
/// variance `M(2)` (Rademacher sums are sub-Gaussian), so the tail is at most
/// `sum_{n > N} x^n / n!` with `x = M(2) t^2 / 2`. That tail is bounded by
/// `x^{N+1}/(N+1)! / (1 - x/(N+2))` when `x < N + 2`, and by `e^x` otherwise.
/// The domination is rechecked exactly for every `n <= truncation`.
pub fn characteristic_function(
    t: f64,
    k: u32,
    truncation: u32,
    ctx: &PrecisionContext,
) -> Result<CertifiedReal> {
    if truncation == 0 {
        return Err(Error::Domain("truncation must be at least 1".into()));
    }
    if !t.is_finite() {
        return Err(Error::Domain(format!("t = {t} is not finite")));
    }
    for n in 1..=truncation {
        if !sub_gaussian_holds(n, k)? {
            return Err(Error::TailBoundUnavailable(2 * n));
        }
    }
    let t_ball = CertifiedReal::from_f64(t, ctx);
    let t2 = t_ball.square();
    let mut sum = CertifiedReal::zero(ctx);
    let mut t_pow = CertifiedReal::one(ctx);
    for n in 0..=truncation {
        let m = limiting_moment(n, k)?.to_certified(ctx);
        let mut term = (&m * &t_pow).div(&CertifiedReal::from_integer(&factorial(2 * n), ctx))?;
        if n % 2 == 1 {
            term = -term;
        }
        sum = sum + term;
        t_pow = &t_pow * &t2;
    }
    let sigma2 = limiting_moment(1, k)?.to_certified(ctx);
    let x = (&sigma2 * &t2).div_i64(2)?;
    let big_n = truncation as i64;
    let x_upper = CertifiedReal::from_parts(x.upper(), &rug::Float::new(64));
    let limit = CertifiedReal::from_i64(big_n + 2, ctx);
    let tail = if limit.certainly_greater(&x_upper) {
        let lead = x_upper
            .powi(truncation + 1)
            .div(&CertifiedReal::from_integer(&factorial(truncation + 1), ctx))?;
        let ratio = x_upper.div_i64(big_n + 2)?;
        lead.div(&(&CertifiedReal::one(ctx) - &ratio))?
    } else {
        x_upper.exp()
    };
    Ok(sum.widen(&tail.upper()))
}
