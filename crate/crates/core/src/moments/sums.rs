//! Distinct-index sums of powers of `x_t = (cot^{(k-1)}(pi t / q))^2`.
//!
//! For a partition `lambda = (l_1..l_m)` both sums run over ordered tuples of
//! pairwise distinct indices and add `prod_i x_{t_i}^{l_i}`:
//! the half-range sum over `1..=(q-1)/2`, the full-range sum over `1..q-1`.

use rug::Rational;

use super::partition::{MergeTable, Partition};
use crate::dedekind::s_qk_polynomial;
use crate::error::{Error, Result};
use crate::numeric::{CertifiedReal, CotTable, PrecisionContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistinctSumMethod {
    /// Enumerates the distinct tuples.
    Direct,
    /// Power-sum products corrected by merge counts.
    Recursion,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Range {
    Half,
    Full,
}

fn check_modulus(q: u64, range: Range) -> Result<()> {
    let ok = match range {
        Range::Half => q >= 3 && q % 2 == 1,
        Range::Full => q >= 2,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidModulus(q))
    }
}

fn squared_derivatives(q: u64, k: u32, range: Range, ctx: &PrecisionContext) -> Result<Vec<CertifiedReal>> {
    if k == 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    let mut values = CotTable::new(q, ctx)?.derivative_values(k - 1);
    if range == Range::Half {
        values.truncate(((q - 1) / 2) as usize);
    }
    Ok(values.iter().map(CertifiedReal::square).collect())
}

fn direct(xs: &[CertifiedReal], lambda: &Partition, ctx: &PrecisionContext) -> CertifiedReal {
    let parts = lambda.parts();
    if parts.len() > xs.len() {
        return CertifiedReal::zero(ctx);
    }
    let powers: Vec<Vec<CertifiedReal>> =
        parts.iter().map(|&l| xs.iter().map(|x| x.powi(l)).collect()).collect();
    fn go(
        depth: usize,
        acc: &CertifiedReal,
        used: &mut [bool],
        powers: &[Vec<CertifiedReal>],
        total: &mut CertifiedReal,
    ) {
        if depth == powers.len() {
            *total = &*total + acc;
            return;
        }
        for t in 0..used.len() {
            if used[t] {
                continue;
            }
            used[t] = true;
            let next = acc * &powers[depth][t];
            go(depth + 1, &next, used, powers, total);
            used[t] = false;
        }
    }
    let mut total = CertifiedReal::zero(ctx);
    let mut used = vec![false; xs.len()];
    go(0, &CertifiedReal::one(ctx), &mut used, &powers, &mut total);
    total
}

fn recursion_certified(xs: &[CertifiedReal], lambda: &Partition, ctx: &PrecisionContext) -> CertifiedReal {
    if lambda.is_empty() {
        return CertifiedReal::one(ctx);
    }
    let n = lambda.size();
    let power_sums: Vec<CertifiedReal> = (1..=n)
        .map(|u| {
            let terms: Vec<CertifiedReal> = xs.iter().map(|x| x.powi(u)).collect();
            CertifiedReal::sum(terms.iter(), ctx)
        })
        .collect();
    let table = MergeTable::for_size(n);
    let l = table.index_of(lambda).expect("partition of its own size");
    let mut total = CertifiedReal::zero(ctx);
    for (e, coef) in table.expansion(l) {
        let mut term = CertifiedReal::from_integer(coef, ctx);
        for &p in table.partitions()[*e].parts() {
            term = &term * &power_sums[p as usize - 1];
        }
        total = total + term;
    }
    total
}

fn distinct_sum(
    lambda: &Partition,
    q: u64,
    k: u32,
    range: Range,
    method: DistinctSumMethod,
    ctx: &PrecisionContext,
) -> Result<CertifiedReal> {
    check_modulus(q, range)?;
    let xs = squared_derivatives(q, k, range, ctx)?;
    Ok(match method {
        DistinctSumMethod::Direct => direct(&xs, lambda, ctx),
        DistinctSumMethod::Recursion => recursion_certified(&xs, lambda, ctx),
    })
}

/// Sum over distinct `a_1..a_m` in `1..=(q-1)/2` of `prod_i x_{a_i}^{lambda_i}`.
pub fn half_range_distinct_sum(
    lambda: &Partition,
    q: u64,
    k: u32,
    method: DistinctSumMethod,
    ctx: &PrecisionContext,
) -> Result<CertifiedReal> {
    distinct_sum(lambda, q, k, Range::Half, method, ctx)
}

/// Sum over distinct `t_1..t_m` in `1..q-1` of `prod_i x_{t_i}^{lambda_i}`.
pub fn script_s(
    lambda: &Partition,
    q: u64,
    k: u32,
    method: DistinctSumMethod,
    ctx: &PrecisionContext,
) -> Result<CertifiedReal> {
    distinct_sum(lambda, q, k, Range::Full, method, ctx)
}

/// Exact recursion value from exact power sums `power[u - 1]`.
pub(crate) fn recursion_exact(lambda: &Partition, power: &[Rational]) -> Rational {
    if lambda.is_empty() {
        return Rational::from(1);
    }
    let table = MergeTable::for_size(lambda.size());
    let l = table.index_of(lambda).expect("partition of its own size");
    let mut total = Rational::new();
    for (e, coef) in table.expansion(l) {
        let mut term = Rational::from(coef);
        for &p in table.partitions()[*e].parts() {
            term *= &power[p as usize - 1];
        }
        total += term;
    }
    total
}

fn exact_power_sums(q: u64, k: u32, n: u32, range: Range) -> Result<Vec<Rational>> {
    check_modulus(q, range)?;
    (1..=n)
        .map(|u| {
            let full = s_qk_polynomial(u, k)?.evaluate_u64(q);
            Ok(match range {
                Range::Full => full,
                Range::Half => full / 2,
            })
        })
        .collect()
}

/// Exact value of [`half_range_distinct_sum`], through the polynomials in `q`.
pub fn half_range_distinct_sum_exact(lambda: &Partition, q: u64, k: u32) -> Result<Rational> {
    let power = exact_power_sums(q, k, lambda.size(), Range::Half)?;
    Ok(recursion_exact(lambda, &power))
}

/// Exact value of [`script_s`], through the polynomials in `q`.
pub fn script_s_exact(lambda: &Partition, q: u64, k: u32) -> Result<Rational> {
    let power = exact_power_sums(q, k, lambda.size(), Range::Full)?;
    Ok(recursion_exact(lambda, &power))
}
