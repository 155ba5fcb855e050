//! Moments and the distribution of `L(k, f)` over Erdős functions.
//!
//! Ground truth is direct enumeration ([`moment_enumeration`]). The exact
//! partition formula ([`moment_partition_exact`]) writes
//! `m_q(2n) = (pi^k / ((k-1)! q^k))^{2n} sum_{lambda |- n} N(lambda) H(lambda)`,
//! where `N(lambda)` counts the ways to split `2n` indices into blocks of
//! sizes `2 lambda_i` and `H(lambda)` is a half-range distinct-index sum. Its
//! `q -> oo` limit is [`limiting_moment`].

mod distribution;
mod moment;
mod partition;
mod sums;

pub use distribution::{
    empirical_cdf, monte_carlo_moments, DistributionTable, HistogramBin, MONTE_CARLO_CHUNK,
};
pub use moment::{
    c_lambda, characteristic_function, d_lambda, gaussian_moment, limiting_moment, limiting_moment_literal,
    limiting_moment_report, moment_enumeration, moment_literal_formula, moment_partition_exact,
    moment_partition_formula, sub_gaussian_holds, MomentMethod, MomentReport, MomentValue,
};
pub use partition::{
    block_multiplicity, hardy_ramanujan_estimate, merge_count, partition_count, partitions, MergeTable,
    Partition,
};
pub use sums::{
    half_range_distinct_sum, half_range_distinct_sum_exact, script_s, script_s_exact, DistinctSumMethod,
};
