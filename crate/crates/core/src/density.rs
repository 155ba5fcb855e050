//! Exhaustive non-vanishing scans of `L(1, f)`, the vanishing-set bound and
//! the density of possible zeros among all Erdős functions.

use std::collections::BTreeMap;
use std::io::Write;

use rug::{Integer, Rational};
use serde_json::{json, Value};

use crate::erdos::{enumerate_erdos, EquivalenceKey, ErdosPopulation};
use crate::error::{Error, Result};
use crate::lseries::{certify_nonzero, l1_digamma_with, NonzeroCertificate};
use crate::numeric::{binomial, euler_totient, factorial, CertifiedReal, DigammaTable, PrecisionContext};

/// Limits for exhaustive scans.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    /// Largest modulus that is enumerated.
    pub guard: u32,
    /// Precision cap for escalation.
    pub max_bits: u32,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self { guard: 17, max_bits: 4096 }
    }
}

/// Outcome of scanning every `f` in `E_q`.
#[derive(Clone, Debug)]
pub struct VerificationRecord {
    pub q: u32,
    pub population: u64,
    /// The smallest `|L(1, f)|` seen, as evaluated at the precision that certified it.
    pub min_abs: CertifiedReal,
    /// Always 0: a ball can exclude zero but never certify it.
    pub certified_zero_count: u64,
    pub undecided_count: u64,
    /// Highest precision any function needed.
    pub final_bits: u32,
}

impl VerificationRecord {
    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q,
            "population": self.population,
            "min_abs_midpoint": self.min_abs.midpoint_hex(),
            "min_abs_radius": self.min_abs.radius_hex(),
            "min_abs_approx": self.min_abs.midpoint_decimal(20),
            "certified_zero_count": self.certified_zero_count,
            "undecided_count": self.undecided_count,
            "final_bits": self.final_bits,
        })
    }
}

struct Scan {
    values: Vec<CertifiedReal>,
    undecided: u64,
    final_bits: u32,
}

/// Evaluates every rank at `ctx`, then re-evaluates the undecided ranks at
/// doubled precision until none remain or `max_bits` is passed.
fn escalate<E>(len: u64, ctx: &PrecisionContext, max_bits: u32, eval: E) -> Result<Scan>
where
    E: Fn(&[u64], &PrecisionContext) -> Result<Vec<CertifiedReal>>,
{
    let all: Vec<u64> = (0..len).collect();
    let mut values = eval(&all, ctx)?;
    let mut ctx = *ctx;
    let mut final_bits = ctx.precision_bits();
    loop {
        let pending: Vec<u64> = all
            .iter()
            .copied()
            .filter(|&r| certify_nonzero(&values[r as usize]) == NonzeroCertificate::Undecided)
            .collect();
        if pending.is_empty() || ctx.precision_bits() * 2 > max_bits {
            return Ok(Scan { values, undecided: pending.len() as u64, final_bits });
        }
        ctx = ctx.doubled();
        final_bits = ctx.precision_bits();
        for (r, v) in pending.iter().zip(eval(&pending, &ctx)?) {
            values[*r as usize] = v;
        }
    }
}

fn guarded_population(q: u32, config: &ScanConfig) -> Result<ErdosPopulation> {
    let population = enumerate_erdos(q)?;
    if q > config.guard {
        return Err(Error::PopulationTooLarge { q, size: population.len(), guard: config.guard });
    }
    Ok(population)
}

fn scan_l1(population: &ErdosPopulation, ctx: &PrecisionContext, config: &ScanConfig) -> Result<Scan> {
    let q = population.modulus();
    escalate(population.len(), ctx, config.max_bits, |ranks, ctx| {
        let table = DigammaTable::new(q as u64, ctx)?;
        if ranks.len() as u64 == population.len() {
            population.par_map(|f| l1_digamma_with(f, &table)).into_iter().collect()
        } else {
            ranks.iter().map(|&r| l1_digamma_with(&population.unrank(r), &table)).collect()
        }
    })
}

/// Certifies `L(1, f) != 0` for every `f` in `E_q` under the default limits.
pub fn count_vanishing(q: u32, ctx: &PrecisionContext) -> Result<VerificationRecord> {
    count_vanishing_with(q, ctx, &ScanConfig::default())
}

pub fn count_vanishing_with(
    q: u32,
    ctx: &PrecisionContext,
    config: &ScanConfig,
) -> Result<VerificationRecord> {
    let population = guarded_population(q, config)?;
    let scan = scan_l1(&population, ctx, config)?;
    if scan.undecided > 0 {
        return Err(Error::PrecisionExhausted { q, undecided: scan.undecided, bits: scan.final_bits });
    }
    let min_abs = scan
        .values
        .iter()
        .map(CertifiedReal::abs)
        .min_by(|a, b| a.midpoint().partial_cmp(b.midpoint()).expect("finite midpoints"))
        .expect("populations are non-empty");
    Ok(VerificationRecord {
        q,
        population: population.len(),
        min_abs,
        certified_zero_count: 0,
        undecided_count: 0,
        final_bits: scan.final_bits,
    })
}

/// Zero counts for one equivalence class of `E_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassZeroCount {
    pub key: EquivalenceKey,
    pub size: u64,
    pub certified_zeros: u64,
    pub undecided: u64,
}

/// Per-class zero counts. At most one zero per class is expected; more is an
/// [`Error::Domain`], as is any value left undecided.
pub fn class_zero_proposition_check(q: u32, ctx: &PrecisionContext) -> Result<Vec<ClassZeroCount>> {
    class_zero_proposition_check_with(q, ctx, &ScanConfig::default())
}

pub fn class_zero_proposition_check_with(
    q: u32,
    ctx: &PrecisionContext,
    config: &ScanConfig,
) -> Result<Vec<ClassZeroCount>> {
    let population = guarded_population(q, config)?;
    let scan = scan_l1(&population, ctx, config)?;
    let mut classes: BTreeMap<EquivalenceKey, ClassZeroCount> = BTreeMap::new();
    for (f, v) in population.iter().zip(&scan.values) {
        let key = f.equivalence_key();
        let entry = classes.entry(key.clone()).or_insert(ClassZeroCount {
            key,
            size: 0,
            certified_zeros: 0,
            undecided: 0,
        });
        entry.size += 1;
        if certify_nonzero(v) == NonzeroCertificate::Undecided {
            entry.undecided += 1;
        }
    }
    if scan.undecided > 0 {
        return Err(Error::PrecisionExhausted { q, undecided: scan.undecided, bits: scan.final_bits });
    }
    let classes: Vec<ClassZeroCount> = classes.into_values().collect();
    if let Some(c) = classes.iter().find(|c| c.certified_zeros > 1) {
        return Err(Error::Domain(format!("class {} has {} zeros", c.key, c.certified_zeros)));
    }
    Ok(classes)
}

fn check_odd(q: u32) -> Result<()> {
    if q < 3 || q % 2 == 0 {
        return Err(Error::InvalidModulus(q as u64));
    }
    Ok(())
}

/// `2^{q - 1 - phi(q)}`, an upper bound for `#V_q`.
pub fn vanishing_bound(q: u32) -> Result<Integer> {
    check_odd(q)?;
    let exponent = q as u64 - 1 - euler_totient(q as u64);
    Ok(Integer::from(1) << exponent as u32)
}

/// `#E_q = C(q - 1, (q - 1)/2)`.
pub fn population_size(q: u32) -> Result<Integer> {
    check_odd(q)?;
    Ok(binomial(q as u64 - 1, (q as u64 - 1) / 2))
}

#[derive(Clone, Debug)]
pub struct CentralBinomialRecord {
    pub r: u32,
    pub exact: Integer,
    /// `2^{2r} / (e^2 sqrt(pi r))`.
    pub bound: CertifiedReal,
    pub holds: bool,
}

/// Compares `C(2r, r)` with the lower bound that follows from Robbins' bounds.
pub fn central_binomial_lower(r: u32, ctx: &PrecisionContext) -> Result<CentralBinomialRecord> {
    if r == 0 {
        return Err(Error::Domain("central_binomial_lower needs r >= 1".into()));
    }
    let exact = binomial(2 * r as u64, r as u64);
    let e2 = CertifiedReal::from_i64(2, ctx).exp();
    let root = CertifiedReal::pi(ctx).mul_i64(r as i64).sqrt()?;
    let pow = CertifiedReal::from_integer(&(Integer::from(1) << (2 * r)), ctx);
    let bound = pow.div(&(&e2 * &root))?;
    let holds = CertifiedReal::from_integer(&exact, ctx).certainly_greater(&bound);
    Ok(CentralBinomialRecord { r, exact, bound, holds })
}

#[derive(Clone, Debug)]
pub struct RobbinsRecord {
    pub n: u32,
    /// `sqrt(2 pi) n^{n + 1/2} e^{-n}`.
    pub lower: CertifiedReal,
    pub exact: Integer,
    /// `e` times `lower`.
    pub upper: CertifiedReal,
    pub holds: bool,
}

/// The sandwich `sqrt(2 pi) n^{n+1/2} e^{-n} < n! < e sqrt(2 pi) n^{n+1/2} e^{-n}`.
pub fn robbins_factorial_bounds(n: u32, ctx: &PrecisionContext) -> Result<RobbinsRecord> {
    if n == 0 {
        return Err(Error::Domain("robbins_factorial_bounds needs n >= 1".into()));
    }
    let exact = factorial(n);
    let nn = CertifiedReal::from_i64(n as i64, ctx);
    let stirling = &(&CertifiedReal::pi(ctx).mul_i64(2).sqrt()? * &nn.powi(n)) * &nn.sqrt()?;
    let lower = &stirling * &CertifiedReal::from_i64(-(n as i64), ctx).exp();
    let upper = &lower * &CertifiedReal::one(ctx).exp();
    let value = CertifiedReal::from_integer(&exact, ctx);
    let holds = value.certainly_greater(&lower) && upper.certainly_greater(&value);
    Ok(RobbinsRecord { n, lower, exact, upper, holds })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityMode {
    /// Certified `#V_q = 0` inside the enumeration guard, the bound beyond it.
    ExactSmallQ,
    /// The bound for every `q`.
    Bound,
}

impl DensityMode {
    pub fn name(self) -> &'static str {
        match self {
            DensityMode::ExactSmallQ => "exact",
            DensityMode::Bound => "bound",
        }
    }
}

/// `(sum #V_q) / (sum #E_q)` over odd `3 <= q <= x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub x: u32,
    pub mode: DensityMode,
    pub numerator: Integer,
    pub denominator: Integer,
    pub ratio: Rational,
}

impl DensityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "x": self.x,
            "mode": self.mode.name(),
            "numerator": self.numerator.to_string(),
            "denominator": self.denominator.to_string(),
            "ratio_num": self.ratio.numer().to_string(),
            "ratio_den": self.ratio.denom().to_string(),
            "ratio_approx": format!("{:.6e}", self.ratio.to_f64()),
        })
    }
}

/// One report per odd `x` in `3..=max_x`, with cumulative sums.
pub fn density_table(max_x: u32, mode: DensityMode, ctx: &PrecisionContext) -> Result<Vec<DensityReport>> {
    density_table_with(max_x, mode, ctx, &ScanConfig::default())
}

pub fn density_table_with(
    max_x: u32,
    mode: DensityMode,
    ctx: &PrecisionContext,
    config: &ScanConfig,
) -> Result<Vec<DensityReport>> {
    if max_x < 3 {
        return Err(Error::Domain(format!("density needs x >= 3, got {max_x}")));
    }
    let mut numerator = Integer::new();
    let mut denominator = Integer::new();
    let mut out = Vec::new();
    for q in (3..=max_x).step_by(2) {
        let vanishing = match mode {
            DensityMode::ExactSmallQ if q <= config.guard => {
                Integer::from(count_vanishing_with(q, ctx, config)?.certified_zero_count)
            }
            _ => vanishing_bound(q)?,
        };
        numerator += vanishing;
        denominator += population_size(q)?;
        out.push(DensityReport {
            x: q,
            mode,
            numerator: numerator.clone(),
            denominator: denominator.clone(),
            ratio: Rational::from((numerator.clone(), denominator.clone())),
        });
    }
    Ok(out)
}

/// The density ratio at cutoff `x`.
pub fn density_ratio(x: u32, mode: DensityMode, ctx: &PrecisionContext) -> Result<DensityReport> {
    Ok(density_table(x, mode, ctx)?.pop().expect("x >= 3 gives one row"))
}

/// CSV with columns `x,numerator,denominator,ratio`.
pub fn write_density_csv<W: Write>(reports: &[DensityReport], writer: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["x", "numerator", "denominator", "ratio"])?;
    for r in reports {
        w.write_record([
            r.x.to_string(),
            r.numerator.to_string(),
            r.denominator.to_string(),
            r.ratio.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StolzRow {
    pub n: usize,
    /// `a_n / b_n`
    pub term_ratio: Rational,
    /// `(a_1 + .. + a_n) / (b_1 + .. + b_n)`
    pub cumulative_ratio: Rational,
}

/// Term ratios next to partial-sum ratios; the latter track the limit of the
/// former when `sum b_n` diverges.
pub fn stolz_ratio_diagnostic(a: &[Rational], b: &[Rational]) -> Result<Vec<StolzRow>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if let Some(i) = b.iter().position(|x| *x <= 0) {
        return Err(Error::Domain(format!("b_{} is not positive", i + 1)));
    }
    let mut sa = Rational::new();
    let mut sb = Rational::new();
    Ok(a.iter()
        .zip(b)
        .enumerate()
        .map(|(i, (x, y))| {
            sa += x;
            sb += y;
            StolzRow {
                n: i + 1,
                term_ratio: Rational::from(x / y),
                cumulative_ratio: Rational::from(&sa / &sb),
            }
        })
        .collect())
}

/// `a_n = 2^{2n - 2n / ln ln n}` and `b_n = 2^{2n} / sqrt(n)` for
/// `n = 3..=n_max`, rounded to rationals at the context precision.
pub fn comparison_sequences(n_max: u32, ctx: &PrecisionContext) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let mut a = Vec::new();
    let mut b = Vec::new();
    let ln2 = CertifiedReal::from_i64(2, ctx).ln()?;
    for n in 3..=n_max {
        let nn = CertifiedReal::from_i64(n as i64, ctx);
        let loglog = nn.ln()?.ln()?;
        let two_n = CertifiedReal::from_i64(2 * n as i64, ctx);
        let exponent = &two_n - &two_n.div(&loglog)?;
        let an = (&exponent * &ln2).exp();
        let bn = CertifiedReal::from_integer(&(Integer::from(1) << (2 * n)), ctx).div(&nn.sqrt()?)?;
        a.push(an.midpoint().to_rational().expect("finite"));
        b.push(bn.midpoint().to_rational().expect("finite"));
    }
    Ok((a, b))
}
