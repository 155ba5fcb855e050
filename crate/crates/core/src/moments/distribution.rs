use std::io::Write;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Rational;

use super::moment::{MomentMethod, MomentReport, MomentValue};
use crate::erdos::{enumerate_parity, Parity};
use crate::error::{Error, Result};
use crate::lseries::ClosedFormWeights;
use crate::numeric::{CertifiedReal, PrecisionContext};

/// Sorted values of `L(k, f)` over the functions of the same parity as `k`.
#[derive(Clone, Debug)]
pub struct DistributionTable {
    pub q: u32,
    pub k: u32,
    values: Vec<CertifiedReal>,
}

/// One histogram bin `[lo, hi)`; the last bin is closed.
#[derive(Clone, Debug, PartialEq)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
}

impl DistributionTable {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Ascending by midpoint.
    pub fn values(&self) -> &[CertifiedReal] {
        &self.values
    }

    /// `F(x) = #{f : L(k, f) <= x} / #population`, decided on midpoints.
    pub fn cdf(&self, x: f64) -> Rational {
        let below = self.values.partition_point(|v| v.midpoint_f64() <= x);
        Rational::from((below as u64, self.values.len() as u64))
    }

    /// `(value, cdf)` after each sample.
    pub fn steps(&self) -> Vec<(f64, f64)> {
        let n = self.values.len() as f64;
        self.values.iter().enumerate().map(|(i, v)| (v.midpoint_f64(), (i + 1) as f64 / n)).collect()
    }

    /// Mean of `L^order` over the table.
    pub fn moment(&self, order: u32, ctx: &PrecisionContext) -> Result<CertifiedReal> {
        let powers: Vec<CertifiedReal> = self.values.iter().map(|v| v.powi(order)).collect();
        CertifiedReal::sum(powers.iter(), ctx).div_i64(self.values.len() as i64)
    }

    /// `bins` equal-width bins spanning the observed range.
    pub fn histogram(&self, bins: usize) -> Vec<HistogramBin> {
        let bins = bins.max(1);
        let mids: Vec<f64> = self.values.iter().map(CertifiedReal::midpoint_f64).collect();
        let (lo, hi) = (mids[0], mids[mids.len() - 1]);
        let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
        let mut out: Vec<HistogramBin> = (0..bins)
            .map(|b| HistogramBin {
                lo: lo + width * b as f64,
                hi: if b + 1 == bins { hi.max(lo + width) } else { lo + width * (b + 1) as f64 },
                count: 0,
            })
            .collect();
        for m in mids {
            let b = (((m - lo) / width) as usize).min(bins - 1);
            out[b].count += 1;
        }
        out
    }

    /// CSV with columns `value,cdf`.
    pub fn write_csv<W: Write>(&self, writer: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["value", "cdf"])?;
        for (v, c) in self.steps() {
            w.write_record([format!("{v:.17e}"), format!("{c:.17e}")])?;
        }
        w.flush()?;
        Ok(())
    }

    /// CSV with columns `bin_lo,bin_hi,count`.
    pub fn write_histogram_csv<W: Write>(&self, bins: usize, writer: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["bin_lo", "bin_hi", "count"])?;
        for b in self.histogram(bins) {
            w.write_record([format!("{:.17e}", b.lo), format!("{:.17e}", b.hi), b.count.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// The exact step CDF of `L(k, f)` over the enumerated population.
pub fn empirical_cdf(q: u32, k: u32, ctx: &PrecisionContext) -> Result<DistributionTable> {
    let population = enumerate_parity(q, Parity::of_k(k))?;
    if population.is_empty() {
        return Err(Error::EmptyPopulation { q, k });
    }
    let weights = ClosedFormWeights::new(q, k, ctx)?;
    let mut values = population.par_map(|f| weights.evaluate(f));
    values.sort_by(|a, b| a.midpoint().partial_cmp(b.midpoint()).expect("finite midpoints"));
    Ok(DistributionTable { q, k, values })
}

/// Samples per independent random stream.
pub const MONTE_CARLO_CHUNK: u64 = 4096;

/// Sample moment of `L(k, f)^order` for uniformly random odd `f`.
///
/// Chunk `c` of [`MONTE_CARLO_CHUNK`] samples draws from `ChaCha8Rng` seeded
/// with `seed` on stream `c`, and chunk totals are combined in chunk order, so
/// the report is bit-identical for any thread count.
pub fn monte_carlo_moments(
    q: u32,
    k: u32,
    order: u32,
    samples: u64,
    seed: u64,
    ctx: &PrecisionContext,
) -> Result<MomentReport> {
    if k % 2 == 0 {
        return Err(Error::ParityMismatch { function: "odd", k });
    }
    if samples == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    let weights: Vec<f64> =
        ClosedFormWeights::new(q, k, ctx)?.weights().iter().map(CertifiedReal::midpoint_f64).collect();
    let chunks = samples.div_ceil(MONTE_CARLO_CHUNK);
    let partials: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let n = MONTE_CARLO_CHUNK.min(samples - c * MONTE_CARLO_CHUNK);
            let (mut s1, mut s2) = (0.0f64, 0.0f64);
            for _ in 0..n {
                let mut value = 0.0;
                let mut bits = 0u64;
                for (i, w) in weights.iter().enumerate() {
                    if i % 64 == 0 {
                        bits = rng.next_u64();
                    }
                    value += if bits & 1 == 0 { *w } else { -*w };
                    bits >>= 1;
                }
                let x = value.powi(order as i32);
                s1 += x;
                s2 += x * x;
            }
            (s1, s2)
        })
        .collect();
    let (s1, s2) = partials.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let n = samples as f64;
    let mean = s1 / n;
    let variance = if samples > 1 { ((s2 - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
    Ok(MomentReport {
        q: Some(q as u64),
        k,
        order,
        method: MomentMethod::MonteCarlo,
        value: MomentValue::Estimate { mean, standard_error: (variance / n).sqrt(), samples, seed },
    })
}
