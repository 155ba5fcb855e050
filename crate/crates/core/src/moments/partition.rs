use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use rug::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{binomial, factorial, CertifiedReal, PrecisionContext};

/// A partition of `n`: non-increasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Sorts the parts; rejects zero parts.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Domain("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `n`, the sum of the parts.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `m`, the number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `(part, multiplicity)` pairs, largest part first.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, c)) if *q == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `3,1,1`, `(3,1,1)` or `3 1 1`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>().map_err(|_| Error::Domain(format!("bad partition part {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

/// All partitions of `n` in reverse-lexicographic order; `partitions(0)` is
/// the single empty partition.
pub fn partitions(n: u32) -> Vec<Partition> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        for first in (1..=n.min(max)).rev() {
            prefix.push(first);
            go(n - first, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// `p(n)` by Euler's pentagonal-number recurrence.
pub fn partition_count(n: u32) -> Integer {
    let n = n as i64;
    let mut p = vec![Integer::from(1)];
    for m in 1..=n {
        let mut acc = Integer::new();
        for j in 1.. {
            let g1 = j * (3 * j - 1) / 2;
            if g1 > m {
                break;
            }
            let g2 = j * (3 * j + 1) / 2;
            let sign_pos = j % 2 == 1;
            for g in [g1, g2] {
                if g <= m {
                    let term = &p[(m - g) as usize];
                    if sign_pos {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
            }
        }
        p.push(acc);
    }
    p.pop().expect("non-empty")
}

/// `exp(pi sqrt(2n/3)) / (4 sqrt(3) n)`.
pub fn hardy_ramanujan_estimate(n: u32, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    if n == 0 {
        return Err(Error::Domain("the estimate needs n >= 1".into()));
    }
    let ratio = CertifiedReal::from_i64(2 * n as i64, ctx).div_i64(3)?;
    let exponent = &CertifiedReal::pi(ctx) * &ratio.sqrt()?;
    let denom = CertifiedReal::from_i64(3, ctx).sqrt()?.mul_i64(4 * n as i64);
    exponent.exp().div(&denom)
}

/// Number of set partitions of `{1..2n}` with block sizes `2 lambda_i`:
/// `(2n)! / (prod (2 lambda_i)! * prod_s mult_s!)`.
pub fn block_multiplicity(lambda: &Partition) -> Integer {
    let mut denom = Integer::from(1);
    for &p in lambda.parts() {
        denom *= factorial(2 * p);
    }
    for (_, mult) in lambda.multiplicities() {
        denom *= factorial(mult);
    }
    factorial(2 * lambda.size()) / denom
}

type MergeKey = (Vec<u32>, Vec<u32>);

/// Labelled merges of a multiset (multiplicity vector indexed by part value)
/// onto a target multiset, memoized on both vectors.
fn merges(lam: &mut Vec<u32>, eta: &mut Vec<u32>, memo: &mut HashMap<MergeKey, Integer>) -> Integer {
    let Some(v) = (1..lam.len()).rev().find(|&s| lam[s] > 0) else {
        return Integer::from(eta.iter().all(|&c| c == 0) as u32);
    };
    let key = (lam.clone(), eta.clone());
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    // the block holding one fixed copy of the largest remaining part
    lam[v] -= 1;
    let max_block = (1..eta.len()).rev().find(|&s| eta[s] > 0).unwrap_or(0);
    let mut total = Integer::new();
    let mut chosen = vec![0u32; lam.len()];
    fn extend(
        s: usize,
        sum: usize,
        weight: Integer,
        max_block: usize,
        lam: &mut Vec<u32>,
        eta: &mut Vec<u32>,
        chosen: &mut Vec<u32>,
        memo: &mut HashMap<MergeKey, Integer>,
        total: &mut Integer,
    ) {
        if s == 0 {
            if sum < eta.len() && eta[sum] > 0 {
                for (x, &c) in chosen.iter().enumerate() {
                    lam[x] -= c;
                }
                eta[sum] -= 1;
                *total += weight * merges(lam, eta, memo);
                eta[sum] += 1;
                for (x, &c) in chosen.iter().enumerate() {
                    lam[x] += c;
                }
            }
            return;
        }
        let avail = lam[s];
        for c in 0..=avail {
            let next = sum + c as usize * s;
            if next > max_block {
                break;
            }
            chosen[s] = c;
            let w = &weight * binomial(avail as u64, c as u64);
            extend(s - 1, next, w, max_block, lam, eta, chosen, memo, total);
        }
        chosen[s] = 0;
    }
    extend(lam.len() - 1, v, Integer::from(1), max_block, lam, eta, &mut chosen, memo, &mut total);
    lam[v] += 1;
    memo.insert(key, total.clone());
    total
}

fn multiplicity_vector(p: &Partition, n: u32) -> Vec<u32> {
    let mut v = vec![0u32; n as usize + 1];
    for &x in p.parts() {
        v[x as usize] += 1;
    }
    v
}

/// `<lambda choose eta>`: set partitions of the labelled parts of `lambda`
/// whose block sums form `eta`. Zero unless `eta` is a coarsening of `lambda`.
pub fn merge_count(lambda: &Partition, eta: &Partition) -> Result<Integer> {
    let n = lambda.size();
    if eta.size() != n {
        return Err(Error::SizeMismatch(n, eta.size()));
    }
    let mut memo = HashMap::new();
    Ok(merges(&mut multiplicity_vector(lambda, n), &mut multiplicity_vector(eta, n), &mut memo))
}

/// Partitions of `n` with all merge counts, and for each `lambda` the
/// integer expansion of the recursion
///
/// `X(lambda) = prod_i p(lambda_i) - sum_{eta < lambda} <lambda choose eta> X(eta)`
///
/// as `X(lambda) = sum_eta coef(lambda, eta) prod_j p(eta_j)`.
#[derive(Debug)]
pub struct MergeTable {
    n: u32,
    partitions: Vec<Partition>,
    /// `counts[l]` lists `(e, <partitions[l] choose partitions[e]>)` for strict coarsenings.
    counts: Vec<Vec<(usize, Integer)>>,
    expansions: Vec<Vec<(usize, Integer)>>,
}

impl MergeTable {
    /// Memoized per `n`.
    pub fn for_size(n: u32) -> Arc<MergeTable> {
        static TABLES: OnceLock<Mutex<HashMap<u32, Arc<MergeTable>>>> = OnceLock::new();
        let tables = TABLES.get_or_init(Default::default);
        if let Some(t) = tables.lock().expect("merge tables poisoned").get(&n) {
            return Arc::clone(t);
        }
        let table = Arc::new(MergeTable::build(n));
        tables.lock().expect("merge tables poisoned").entry(n).or_insert(table).clone()
    }

    fn build(n: u32) -> Self {
        let partitions = partitions(n);
        let vectors: Vec<Vec<u32>> = partitions.iter().map(|p| multiplicity_vector(p, n)).collect();
        let mut memo = HashMap::new();
        let mut counts = Vec::with_capacity(partitions.len());
        for (l, lam) in partitions.iter().enumerate() {
            let mut row = Vec::new();
            // coarsenings have fewer parts and come earlier in reverse-lex order
            for e in 0..l {
                if partitions[e].len() >= lam.len() {
                    continue;
                }
                let c = merges(&mut vectors[l].clone(), &mut vectors[e].clone(), &mut memo);
                if c != 0 {
                    row.push((e, c));
                }
            }
            counts.push(row);
        }
        let mut expansions: Vec<Vec<(usize, Integer)>> = Vec::with_capacity(partitions.len());
        for l in 0..partitions.len() {
            let mut coef = vec![Integer::new(); partitions.len()];
            coef[l] += 1;
            for (e, c) in &counts[l] {
                for (x, v) in &expansions[*e] {
                    coef[*x] -= Integer::from(c * v);
                }
            }
            expansions.push(coef.into_iter().enumerate().filter(|(_, v)| *v != 0).collect());
        }
        Self { n, partitions, counts, expansions }
    }

    pub fn size(&self) -> u32 {
        self.n
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn index_of(&self, lambda: &Partition) -> Option<usize> {
        self.partitions.iter().position(|p| p == lambda)
    }

    /// Strict coarsenings of `partitions[l]` with their merge counts.
    pub fn coarsenings(&self, l: usize) -> &[(usize, Integer)] {
        &self.counts[l]
    }

    /// Integer expansion of `X(partitions[l])` over power-sum products.
    pub fn expansion(&self, l: usize) -> &[(usize, Integer)] {
        &self.expansions[l]
    }
}
