//! Integer helpers: totient, binomials, factorials.

use rug::Integer;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Euler's totient via trial factorisation.
pub fn euler_totient(q: u64) -> u64 {
    assert!(q >= 1, "totient is defined for q >= 1");
    let mut n = q;
    let mut phi = q;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

pub fn binomial(n: u64, k: u64) -> Integer {
    if k > n {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}
