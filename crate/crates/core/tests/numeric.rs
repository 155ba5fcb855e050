use erdos_lseries::numeric::{
    bernoulli, binomial, cot_derivative_poly, digamma_rational, euler_totient, factorial,
    reconstruct_rational, simplest_rational_between, zeta_even, zeta_value, CertifiedReal, PrecisionContext,
};
use proptest::prelude::*;
use rug::{Integer, Rational};

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

/// Akiyama–Tanigawa; yields B_1 = +1/2, so odd indices above 1 are compared only.
fn akiyama_tanigawa(n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n + 1);
    let mut a: Vec<Rational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(Rational::from((1, m as i64 + 1)));
        for j in (1..=m).rev() {
            let diff = Rational::from(&a[j - 1] - &a[j]);
            a[j - 1] = diff * Rational::from(j as i64);
        }
        out.push(a[0].clone());
    }
    out
}

#[test]
fn bernoulli_matches_akiyama_tanigawa() {
    let oracle = akiyama_tanigawa(60);
    for (m, b) in oracle.iter().enumerate() {
        if m == 1 {
            assert_eq!(bernoulli(1).abs(), *b);
        } else {
            assert_eq!(bernoulli(m as u32), *b, "B_{m}");
        }
    }
    assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
}

#[test]
fn zeta_ratio_decreases() {
    for m in 1..=50u32 {
        let r = |m: u32| (bernoulli(2 * m) / Rational::from(factorial(2 * m))).abs();
        assert!(r(m + 1) < r(m), "m = {m}");
    }
}

#[test]
fn zeta_even_against_series() {
    let c = ctx();
    for m in 1..=4 {
        let exact = zeta_even(m).to_certified(&c);
        let series = zeta_value(2 * m + 1, &c).unwrap();
        // zeta is decreasing in s
        assert!(exact.certainly_greater(&series));
        // partial sum plus Euler-Maclaurin tail terms
        let s = 2.0 * m as f64;
        let n = 1000.0f64;
        let head: f64 = (1..=1000).map(|k| (k as f64).powf(-s)).sum();
        let f = head + n.powf(1.0 - s) / (s - 1.0) - n.powf(-s) / 2.0 + s * n.powf(-s - 1.0) / 12.0;
        assert!((exact.midpoint_f64() - f).abs() < 1e-9);
    }
}

/// Digamma by recurrence up to x >= 12, then the asymptotic series.
fn digamma_f64(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 12.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    acc + x.ln()
        - 0.5 / x
        - x2 * (1.0 / 12.0 - x2 * (1.0 / 120.0 - x2 * (1.0 / 252.0 - x2 * (1.0 / 240.0 - x2 / 132.0))))
}

#[test]
fn digamma_matches_series_oracle() {
    let c = ctx();
    for q in 1..=13u64 {
        for a in 1..=q {
            let v = digamma_rational(a, q, &c).unwrap();
            let oracle = digamma_f64(a as f64 / q as f64);
            assert!((v.midpoint_f64() - oracle).abs() < 1e-12, "Psi({a}/{q})");
            assert!(v.radius_f64() < 1e-30);
        }
    }
}

#[test]
fn digamma_reflection() {
    let c = ctx();
    let pi = CertifiedReal::pi(&c);
    for q in [3u64, 5, 7, 8, 12] {
        for a in 1..q {
            let lhs = &digamma_rational(a, q, &c).unwrap() - &digamma_rational(q - a, q, &c).unwrap();
            let angle = pi.mul_i64(a as i64).div_i64(q as i64).unwrap();
            let rhs = -&(&pi * &angle.cot().unwrap());
            assert!(lhs.overlaps(&rhs), "a = {a}, q = {q}");
        }
    }
}

#[test]
fn cot_polynomials_have_alternating_parity() {
    for m in 0..=20 {
        let p = cot_derivative_poly(m);
        assert_eq!(p.degree(), m as usize + 1);
        for (i, c) in p.coefficients().iter().enumerate() {
            if (i + m as usize) % 2 == 0 {
                assert_eq!(*c, 0, "m = {m}, power {i}");
            }
        }
    }
}

#[test]
fn cot_polynomial_derivative_oracle() {
    // d/dz P_m(cot z) = P_m'(c) * (-(1 + c^2))
    for m in 0..12u32 {
        let p = cot_derivative_poly(m);
        let next = cot_derivative_poly(m + 1);
        let c: Vec<Integer> = p.coefficients().to_vec();
        let mut expect = vec![Integer::new(); c.len() + 2];
        for (i, ci) in c.iter().enumerate().skip(1) {
            let d = Integer::from(ci * i as u32);
            expect[i - 1] -= &d;
            expect[i + 1] -= &d;
        }
        let got = next.coefficients();
        for i in 0..expect.len() {
            let g = got.get(i).cloned().unwrap_or_default();
            assert_eq!(g, expect[i], "m = {m}, power {i}");
        }
    }
}

#[test]
fn totients_by_counting() {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    for q in 1..=300u64 {
        let count = (1..=q).filter(|&a| gcd(a, q) == 1).count() as u64;
        assert_eq!(euler_totient(q), count);
    }
}

#[test]
fn binomials_by_pascal() {
    let mut row = vec![Integer::from(1)];
    for n in 1..=40u64 {
        let mut next = vec![Integer::from(1); n as usize + 1];
        for k in 1..n as usize {
            next[k] = Integer::from(&row[k - 1] + &row[k]);
        }
        row = next;
        for k in 0..=n {
            assert_eq!(binomial(n, k), row[k as usize]);
        }
    }
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-1000i64..1000, 1i64..200).prop_map(|(n, d)| Rational::from((n, d)))
}

proptest! {
    #[test]
    fn ball_arithmetic_encloses_exact(a in small_rational(), b in small_rational()) {
        let c = PrecisionContext::new(64).unwrap();
        let x = CertifiedReal::from_rational(&a, &c);
        let y = CertifiedReal::from_rational(&b, &c);
        prop_assert!((&x + &y).contains_rational(&Rational::from(&a + &b)));
        prop_assert!((&x - &y).contains_rational(&Rational::from(&a - &b)));
        prop_assert!((&x * &y).contains_rational(&Rational::from(&a * &b)));
        if b != 0 {
            prop_assert!(x.div(&y).unwrap().contains_rational(&Rational::from(&a / &b)));
        }
    }

    #[test]
    fn simplest_rational_is_simplest(n in 0i64..400, d in 1i64..60, w in 1i64..50) {
        let lo = Rational::from((n, d));
        let hi = &lo + Rational::from((1, w * d));
        let s = simplest_rational_between(&lo, &hi);
        prop_assert!(lo <= s && s <= hi);
        // nothing in the interval has a smaller denominator
        let den = s.denom().to_u32().unwrap();
        for smaller in 1..den {
            let num = Rational::from(&lo * smaller).ceil();
            let cand = Rational::from((num.numer().clone(), Integer::from(smaller)));
            prop_assert!(cand > hi);
        }
    }

    #[test]
    fn reconstruction_round_trips(n in -500i64..500, d in 1i64..500) {
        let r = Rational::from((n, d));
        let x = CertifiedReal::from_rational(&r, &ctx());
        prop_assert_eq!(reconstruct_rational(&x, &Integer::from(500)), Some(r));
    }
}
