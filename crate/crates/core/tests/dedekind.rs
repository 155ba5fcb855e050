use erdos_lseries::dedekind::{
    dedekind_sum_numeric, reciprocity_check, s_qk, s_qk_leading_coefficient, s_qk_polynomial, DedekindSpec,
};
use erdos_lseries::numeric::{PrecisionContext, Rational};

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

/// Known closed forms, written out as products of factors.
fn known(u: u32, k: u32, q: i64) -> Rational {
    let q = Rational::from(q);
    let f = |c: i64| Rational::from(&q + c);
    let q2 = q.clone() * &q;
    match (u, k) {
        (1, 1) => f(-1) * f(-2) / 3,
        (2, 1) => f(-1) * f(-2) * (q2.clone() + q.clone() * 3 - 13) / 45,
        (1, 2) => f(-1) * f(1) * (q2 + 11) / 45,
        (2, 2) => {
            let q4 = Rational::from(&q2 * &q2);
            f(-1) * f(1) * (q2.clone() + 11) * (q4 * 3 + q2 * 10 + 227) / 14175
        }
        _ => unreachable!(),
    }
}

#[test]
fn polynomials_match_known_closed_forms() {
    for (u, k) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
        let p = s_qk_polynomial(u, k).unwrap();
        assert_eq!(p.degree() as u32, 2 * u * k);
        for q in 1..=25 {
            assert_eq!(p.evaluate_u64(q as u64), known(u, k, q), "(u,k)=({u},{k}) q={q}");
        }
    }
}

#[test]
fn polynomials_enclose_numeric_sums() {
    for (u, k) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1), (1, 3)] {
        let p = s_qk_polynomial(u, k).unwrap();
        for q in (3..=21).step_by(2) {
            let v = s_qk(u, q, k, &ctx()).unwrap();
            assert!(v.contains_rational(&p.evaluate_u64(q)), "(u,k)=({u},{k}) q={q}");
        }
        // even moduli too
        for q in [2u64, 4, 10] {
            let v = s_qk(u, q, k, &ctx()).unwrap();
            assert!(v.contains_rational(&p.evaluate_u64(q)), "(u,k)=({u},{k}) q={q}");
        }
    }
}

#[test]
fn leading_coefficients() {
    assert_eq!(s_qk_leading_coefficient(1, 1), Rational::from((1, 3)));
    assert_eq!(s_qk_leading_coefficient(2, 1), Rational::from((1, 45)));
    assert_eq!(s_qk_leading_coefficient(1, 2), Rational::from((1, 45)));
    assert_eq!(s_qk_leading_coefficient(2, 2), Rational::from((1, 4725)));
    for (u, k) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
        assert_eq!(s_qk_polynomial(u, k).unwrap().leading_coefficient(), s_qk_leading_coefficient(u, k));
    }
}

#[test]
fn reciprocity_residuals_enclose_zero() {
    let cases: &[(&[u64], &[u32])] = &[
        // d = 1
        (&[2, 3], &[1, 0]),
        (&[2, 3], &[0, 1]),
        (&[3, 5], &[1, 0]),
        (&[3, 7], &[2, 1]),
        (&[4, 9], &[0, 3]),
        (&[5, 7], &[2, 3]),
        // d = 2
        (&[2, 3, 5], &[0, 0, 0]),
        (&[3, 4, 5], &[0, 0, 0]),
        (&[4, 5, 7], &[0, 0, 0]),
        (&[1, 2, 3], &[0, 0, 0]),
        (&[2, 5, 7], &[1, 1, 0]),
        (&[2, 3, 5], &[2, 0, 0]),
        (&[2, 3, 5], &[1, 1, 0]),
        // d = 3, 4
        (&[2, 3, 5, 7], &[1, 0, 0, 0]),
        (&[2, 3, 5, 7, 11], &[0, 0, 0, 0, 0]),
        (&[1, 2, 3, 5, 7], &[0, 0, 0, 0, 0]),
    ];
    for (a, m) in cases {
        let res = reciprocity_check(a, m, &ctx()).unwrap();
        assert!(res.contains_zero(), "{a:?} | {m:?}: residual {res}");
        assert!(res.radius_f64() < 1e-25);
    }
}

#[test]
fn classical_dedekind_sum_agrees() {
    // C(c; b, 1 | 0; 0, 0) = 4 s(b, c) with s the classical Dedekind sum,
    // computed here from sawtooth functions.
    fn sawtooth(x: Rational) -> Rational {
        let fl = Rational::from(x.floor_ref());
        if fl == x {
            Rational::new()
        } else {
            x - fl - Rational::from((1, 2))
        }
    }
    fn classical(b: i64, c: i64) -> Rational {
        (1..c).map(|k| sawtooth(Rational::from((k, c))) * sawtooth(Rational::from((k * b, c)))).sum()
    }
    for (b, c) in [(1, 5), (2, 5), (3, 7), (5, 11), (4, 13)] {
        let spec = DedekindSpec::new(vec![c as u64, b as u64, 1], vec![0, 0, 0], 0).unwrap();
        let v = dedekind_sum_numeric(&spec, &ctx()).unwrap();
        let expected = classical(b, c) * 4;
        assert!(v.contains_rational(&expected), "s({b},{c})");
    }
}
