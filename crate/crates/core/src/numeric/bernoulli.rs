//! Bernoulli numbers `B_m` with the `z / (e^z - 1)` convention (`B_1 = -1/2`).

use std::sync::{OnceLock, RwLock};

use rug::{Integer, Rational};

fn table() -> &'static RwLock<Vec<Rational>> {
    static TABLE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![Rational::from(1)]))
}

/// `B_m`, memoized across calls and threads.
///
/// Filled in by `B_m = -1/(m+1) * sum_{j<m} C(m+1, j) B_j`, which is the
/// generating-function identity `sum_{j<=m} C(m+1, j) B_j = 0` solved for the
/// last term.
pub fn bernoulli(m: u32) -> Rational {
    let m = m as usize;
    if m >= 3 && m % 2 == 1 {
        return Rational::new();
    }
    {
        let cached = table().read().expect("bernoulli table poisoned");
        if let Some(b) = cached.get(m) {
            return b.clone();
        }
    }
    let mut cached = table().write().expect("bernoulli table poisoned");
    while cached.len() <= m {
        let n = cached.len();
        if n >= 3 && n % 2 == 1 {
            cached.push(Rational::new());
            continue;
        }
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (j, b) in cached.iter().enumerate() {
            if *b.numer() != 0 {
                acc += Rational::from(&binom * b.numer()) / b.denom();
            }
            // C(n+1, j+1) from C(n+1, j)
            binom *= (n + 1 - j) as u64;
            binom /= (j + 1) as u64;
        }
        cached.push(-acc / Integer::from(n + 1));
    }
    cached[m].clone()
}
