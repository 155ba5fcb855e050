//! Erdős functions mod q: representation, ranked enumeration, parity and the
//! "agree off the units" equivalence.
//!
//! An Erdős function mod an odd `q >= 3` takes the value `±1` on every residue
//! `1..q-1`, vanishes at `q`, and sums to zero over a period, so exactly
//! `(q - 1) / 2` residues carry `+1`.
//!
//! Populations are enumerated in a fixed lexicographic order on the sign
//! sequence (`+` before `-`), which is the same as lexicographic order on the
//! set of `+1` positions. Every population can be ranked and unranked, so work
//! can be split across threads by rank range and recombined in rank order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::{euler_totient, gcd};

fn check_modulus(q: u32) -> Result<()> {
    if q < 3 || q % 2 == 0 {
        return Err(Error::InvalidModulus(q as u64));
    }
    Ok(())
}

/// A q-periodic sign pattern with `f(q) = 0` and zero sum over a period.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ErdosFunction {
    q: u32,
    /// `values[a - 1] = f(a)` for `a = 1..=q`.
    values: Vec<i8>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParityClass {
    Odd,
    Even,
    Neither,
}

/// Parity selector for the populations `E_q^{(k)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    /// The parity an Erdős function must have to pair with `L(k, .)`.
    pub fn of_k(k: u32) -> Self {
        if k % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

impl ErdosFunction {
    /// Validates `values` (residues `1..=q` in order).
    pub fn new(q: u32, values: Vec<i8>) -> Result<Self> {
        check_modulus(q)?;
        if values.len() != q as usize {
            return Err(Error::InvalidFunction(format!("expected {q} values, got {}", values.len())));
        }
        if values[q as usize - 1] != 0 {
            return Err(Error::InvalidFunction("f(q) must be 0".into()));
        }
        if values[..q as usize - 1].iter().any(|&v| v != 1 && v != -1) {
            return Err(Error::InvalidFunction("f(a) must be ±1 for 1 <= a < q".into()));
        }
        if values.iter().map(|&v| v as i64).sum::<i64>() != 0 {
            return Err(Error::InvalidFunction("values must sum to zero".into()));
        }
        Ok(Self { q, values })
    }

    /// The function with `+1` exactly at the given residues in `1..q`.
    pub fn from_plus_positions(q: u32, plus: &[u32]) -> Result<Self> {
        check_modulus(q)?;
        let mut values = vec![-1i8; q as usize];
        values[q as usize - 1] = 0;
        for &a in plus {
            if a == 0 || a >= q {
                return Err(Error::InvalidFunction(format!("residue {a} out of range")));
            }
            values[a as usize - 1] = 1;
        }
        Self::new(q, values)
    }

    pub fn modulus(&self) -> u32 {
        self.q
    }

    /// `r = (q - 1) / 2`.
    pub fn half_period(&self) -> u32 {
        (self.q - 1) / 2
    }

    /// Values at residues `1..=q`.
    pub fn values(&self) -> &[i8] {
        &self.values
    }

    /// `f(n)` for any integer n.
    pub fn at(&self, n: i64) -> i8 {
        let r = n.rem_euclid(self.q as i64);
        if r == 0 {
            0
        } else {
            self.values[r as usize - 1]
        }
    }

    pub fn negate(&self) -> Self {
        Self { q: self.q, values: self.values.iter().map(|v| -v).collect() }
    }

    pub fn parity(&self) -> ParityClass {
        let q = self.q as usize;
        let mirror = |a: usize| self.values[q - a - 1];
        let half = 1..=self.half_period() as usize;
        if half.clone().all(|a| mirror(a) == -self.values[a - 1]) {
            ParityClass::Odd
        } else if half.into_iter().all(|a| mirror(a) == self.values[a - 1]) {
            ParityClass::Even
        } else {
            ParityClass::Neither
        }
    }

    /// Compact `{+,-,0}` rendering, e.g. `+-0` for q = 3.
    pub fn to_sign_string(&self) -> String {
        self.values
            .iter()
            .map(|v| match v {
                1 => '+',
                -1 => '-',
                _ => '0',
            })
            .collect()
    }

    /// Restriction to residues not coprime to q.
    pub fn equivalence_key(&self) -> EquivalenceKey {
        let entries =
            non_unit_residues(self.q).into_iter().map(|a| (a, self.values[a as usize - 1])).collect();
        EquivalenceKey { q: self.q, entries }
    }
}

/// Parity class of `f`.
pub fn parity_of(f: &ErdosFunction) -> ParityClass {
    f.parity()
}

/// Pointwise negation.
pub fn negate(f: &ErdosFunction) -> ErdosFunction {
    f.negate()
}

impl fmt::Display for ErdosFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sign_string())
    }
}

/// Parses a sign string; accepts ASCII `-` and U+2212 for minus. The
/// modulus is the string length.
impl FromStr for ErdosFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' | '\u{2212}' => Ok(-1),
                '0' => Ok(0),
                other => Err(Error::InvalidFunction(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        let q = values.len() as u32;
        Self::new(q, values)
    }
}

/// `N_q`: residues `1 <= a < q` with `gcd(a, q) != 1`.
pub fn non_unit_residues(q: u32) -> Vec<u32> {
    (1..q).filter(|&a| gcd(a as u64, q as u64) != 1).collect()
}

fn choose(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflows u64")
}

/// Lexicographic unranking of a `k`-subset of `{1..=n}`.
fn unrank_combination(n: u64, k: u64, mut rank: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(k as usize);
    let mut next = 1u64;
    for i in 0..k {
        loop {
            let count = choose(n - next, k - i - 1);
            if rank < count {
                out.push(next as u32);
                next += 1;
                break;
            }
            rank -= count;
            next += 1;
        }
    }
    out
}

fn rank_combination(n: u64, k: u64, subset: &[u32]) -> u64 {
    let mut rank = 0;
    let mut next = 1u64;
    for (i, &c) in subset.iter().enumerate() {
        let c = c as u64;
        while next < c {
            rank += choose(n - next, k - i as u64 - 1);
            next += 1;
        }
        next = c + 1;
    }
    rank
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    All,
    Odd,
    Even,
}

/// A ranked population of Erdős functions: all of `E_q`, or one parity class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErdosPopulation {
    q: u32,
    kind: Kind,
    len: u64,
}

impl ErdosPopulation {
    pub fn modulus(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn half(&self) -> u64 {
        (self.q as u64 - 1) / 2
    }

    /// The function at position `rank` of the documented order.
    pub fn unrank(&self, rank: u64) -> ErdosFunction {
        assert!(rank < self.len, "rank {rank} out of range (len {})", self.len);
        let q = self.q as usize;
        let r = self.half();
        match self.kind {
            Kind::All => {
                let plus = unrank_combination(q as u64 - 1, r, rank);
                ErdosFunction::from_plus_positions(self.q, &plus).expect("valid by construction")
            }
            Kind::Odd => {
                let mut values = vec![0i8; q];
                for a in 1..=r as usize {
                    let bit = (rank >> (r as usize - a)) & 1;
                    let v = if bit == 0 { 1 } else { -1 };
                    values[a - 1] = v;
                    values[q - a - 1] = -v;
                }
                ErdosFunction { q: self.q, values }
            }
            Kind::Even => {
                let plus = unrank_combination(r, r / 2, rank);
                let mut values = vec![-1i8; q];
                values[q - 1] = 0;
                for a in plus {
                    values[a as usize - 1] = 1;
                    values[q - a as usize - 1] = 1;
                }
                ErdosFunction { q: self.q, values }
            }
        }
    }

    /// Position of `f` in this population, if it belongs to it.
    pub fn rank(&self, f: &ErdosFunction) -> Option<u64> {
        if f.q != self.q {
            return None;
        }
        let r = self.half();
        match self.kind {
            Kind::All => {
                let plus: Vec<u32> = (1..self.q).filter(|&a| f.at(a as i64) == 1).collect();
                Some(rank_combination(self.q as u64 - 1, r, &plus))
            }
            Kind::Odd => (f.parity() == ParityClass::Odd)
                .then(|| (1..=r).fold(0u64, |acc, a| (acc << 1) | u64::from(f.at(a as i64) == -1))),
            Kind::Even => (f.parity() == ParityClass::Even).then(|| {
                let plus: Vec<u32> = (1..=r as u32).filter(|&a| f.at(a as i64) == 1).collect();
                rank_combination(r, r / 2, &plus)
            }),
        }
    }

    pub fn iter(&self) -> ErdosIter<'_> {
        self.range(0, self.len)
    }

    /// Functions with rank in `start..end`.
    pub fn range(&self, start: u64, end: u64) -> ErdosIter<'_> {
        ErdosIter { population: self, next: start.min(self.len), end: end.min(self.len) }
    }

    /// Splits `0..len` into at most `parts` contiguous rank ranges.
    pub fn split(&self, parts: u64) -> Vec<std::ops::Range<u64>> {
        let parts = parts.max(1).min(self.len.max(1));
        let step = self.len.div_ceil(parts);
        (0..parts)
            .map(|i| (i * step).min(self.len)..((i + 1) * step).min(self.len))
            .filter(|r| !r.is_empty())
            .collect()
    }

    /// Maps every function in parallel; the output is in rank order no
    /// matter how many worker threads run.
    pub fn par_map<T, F>(&self, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&ErdosFunction) -> T + Sync + Send,
    {
        (0..self.len).into_par_iter().map(|rank| f(&self.unrank(rank))).collect()
    }
}

pub struct ErdosIter<'a> {
    population: &'a ErdosPopulation,
    next: u64,
    end: u64,
}

impl Iterator for ErdosIter<'_> {
    type Item = ErdosFunction;

    fn next(&mut self) -> Option<ErdosFunction> {
        if self.next >= self.end {
            return None;
        }
        let f = self.population.unrank(self.next);
        self.next += 1;
        Some(f)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for ErdosIter<'_> {}

impl<'a> IntoIterator for &'a ErdosPopulation {
    type Item = ErdosFunction;
    type IntoIter = ErdosIter<'a>;

    fn into_iter(self) -> ErdosIter<'a> {
        self.iter()
    }
}

/// All of `E_q`, `C(q-1, (q-1)/2)` functions.
pub fn enumerate_erdos(q: u32) -> Result<ErdosPopulation> {
    check_modulus(q)?;
    let r = (q as u64 - 1) / 2;
    Ok(ErdosPopulation { q, kind: Kind::All, len: choose(q as u64 - 1, r) })
}

/// The odd or even members of `E_q`. Odd functions are free on `1..=r`
/// (`2^r` of them); even ones need a balanced half, so there are
/// `C(r, r/2)` of them when `r` is even and none otherwise.
pub fn enumerate_parity(q: u32, parity: Parity) -> Result<ErdosPopulation> {
    check_modulus(q)?;
    let r = (q as u64 - 1) / 2;
    let (kind, len) = match parity {
        Parity::Odd => (Kind::Odd, 1u64 << r),
        Parity::Even if r % 2 == 0 => (Kind::Even, choose(r, r / 2)),
        Parity::Even => (Kind::Even, 0),
    };
    Ok(ErdosPopulation { q, kind, len })
}

/// The values of an Erdős function on `N_q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EquivalenceKey {
    pub q: u32,
    pub entries: Vec<(u32, i8)>,
}

impl EquivalenceKey {
    pub fn plus_count(&self) -> usize {
        self.entries.iter().filter(|(_, v)| *v == 1).count()
    }
}

impl fmt::Display for EquivalenceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> =
            self.entries.iter().map(|(a, v)| format!("{a}:{}", if *v == 1 { '+' } else { '-' })).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Classes of `E_q` under agreement on `N_q`, found by enumeration, with
/// their sizes. Keys come out sorted.
pub fn equivalence_classes(q: u32) -> Result<Vec<(EquivalenceKey, u64)>> {
    let population = enumerate_erdos(q)?;
    let mut classes: BTreeMap<EquivalenceKey, u64> = BTreeMap::new();
    for f in &population {
        *classes.entry(f.equivalence_key()).or_default() += 1;
    }
    Ok(classes.into_iter().collect())
}

/// Class count from the feasibility rule: a sign pattern on `N_q` with `j`
/// plus signs extends to an Erdős function iff `0 <= r - j <= phi(q)`.
pub fn feasible_class_count(q: u32) -> Result<u64> {
    check_modulus(q)?;
    let n = non_unit_residues(q).len() as u64;
    let r = (q as u64 - 1) / 2;
    let phi = euler_totient(q as u64);
    Ok((0..=n).filter(|&j| j <= r && r - j <= phi).map(|j| choose(n, j)).sum())
}

/// The two-case class count written with `n_q = (q - 1 - phi(q)) / 2`:
/// `2^{n_q}` when `r >= n_q`, else `sum_{j >= n_q - r} C(n_q, j)`. Kept for
/// comparison with [`equivalence_classes`]; it undercounts because
/// `|N_q| = 2 n_q`.
pub fn two_case_class_count(q: u32) -> Result<u64> {
    check_modulus(q)?;
    let r = (q as u64 - 1) / 2;
    let n_q = (q as u64 - 1 - euler_totient(q as u64)) / 2;
    if r >= n_q {
        Ok(1u64 << n_q)
    } else {
        Ok(((n_q - r)..=n_q).map(|j| choose(n_q, j)).sum())
    }
}
