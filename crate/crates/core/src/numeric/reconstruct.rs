use rug::{Integer, Rational};

use super::ball::CertifiedReal;

/// The rational with the smallest denominator in the closed interval `[lo, hi]`
/// (smallest numerator magnitude among ties).
pub fn simplest_rational_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo <= hi, "empty interval");
    if *lo <= 0 && *hi >= 0 {
        return Rational::new();
    }
    if *hi < 0 {
        let neg_hi = Rational::from(-hi);
        let neg_lo = Rational::from(-lo);
        return -simplest_rational_between(&neg_hi, &neg_lo);
    }
    simplest_positive(lo.clone(), hi.clone())
}

fn simplest_positive(lo: Rational, hi: Rational) -> Rational {
    let n = Integer::from(lo.floor_ref());
    if lo == n {
        return Rational::from(n);
    }
    let n1 = Integer::from(&n + 1);
    if hi >= n1 {
        return Rational::from(n1);
    }
    // lo and hi share the integer part n; recurse on the reciprocal fractional parts
    let lo_frac = Rational::from(&lo - &n);
    let hi_frac = Rational::from(&hi - &n);
    let inner = simplest_positive(hi_frac.recip(), lo_frac.recip());
    inner.recip() + n
}

/// The unique rational with denominator at most `max_den` inside the ball,
/// or `None` when the ball is too wide to single one out or holds none.
///
/// Two distinct such rationals differ by at least `1 / max_den^2`, so any
/// ball narrower than that holds at most one of them.
pub fn reconstruct_rational(x: &CertifiedReal, max_den: &Integer) -> Option<Rational> {
    let width = x.radius().to_rational()? * 2u32;
    let separation = Rational::from((1, Integer::from(max_den * max_den)));
    if width >= separation {
        return None;
    }
    let lo = x.lower().to_rational()?;
    let hi = x.upper().to_rational()?;
    let candidate = simplest_rational_between(&lo, &hi);
    (*candidate.denom() <= *max_den).then_some(candidate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::PrecisionContext;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn simplest_between_small_cases() {
        assert_eq!(simplest_rational_between(&r(1, 3), &r(1, 2)), r(1, 2));
        assert_eq!(simplest_rational_between(&r(3, 10), &r(4, 10)), r(1, 3));
        assert_eq!(simplest_rational_between(&r(-4, 10), &r(-3, 10)), r(-1, 3));
        assert_eq!(simplest_rational_between(&r(-1, 5), &r(1, 7)), r(0, 1));
        assert_eq!(simplest_rational_between(&r(7, 3), &r(7, 3)), r(7, 3));
        assert_eq!(simplest_rational_between(&r(21, 10), &r(29, 10)), r(5, 2));
    }

    #[test]
    fn reconstructs_from_balls() {
        let ctx = PrecisionContext::default();
        let x = CertifiedReal::from_i64(-19, &ctx).div_i64(45).unwrap();
        assert_eq!(reconstruct_rational(&x, &Integer::from(1000)), Some(r(-19, 45)));
        // denominator bound too small
        assert_eq!(reconstruct_rational(&x, &Integer::from(10)), None);
        // ball too wide
        let wide = x.widen(&rug::Float::with_val(64, 1e-3));
        assert_eq!(reconstruct_rational(&wide, &Integer::from(1000)), None);
    }
}
