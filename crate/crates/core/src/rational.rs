//! Exact rational helpers shared by every module.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact value of a finite float.
pub fn from_f64(value: f64) -> Rat {
    Rat::from_float(value).unwrap_or_else(Rat::zero)
}

/// Ceiling of `a / b` for `b > 0`.
pub fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

pub fn ceil_rat(r: &Rat) -> i64 {
    r.ceil().to_integer().to_i64().expect("ceiling fits in i64")
}

/// Turns a float produced by the LP backend into a rational.
///
/// Magnitudes below `1e-9` become zero. Values within `1e-9` of a fraction
/// with denominator at most 1000 snap to it; anything else keeps the exact
/// binary value of the float.
pub fn clean_float(value: f64) -> Rat {
    if !value.is_finite() || value.abs() < 1e-9 {
        return Rat::zero();
    }
    if let Some(r) = small_fraction(value, 1000) {
        if (to_f64(&r) - value).abs() <= 1e-9 * value.abs().max(1.0) {
            return r;
        }
    }
    from_f64(value)
}

fn small_fraction(value: f64, max_den: i64) -> Option<Rat> {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut rest = value;
    for _ in 0..40 {
        let a = rest.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = rest - a as f64;
        if frac.abs() < 1e-12 {
            break;
        }
        rest = 1.0 / frac;
    }
    (k1 > 0).then(|| ratio(h1, k1))
}

pub fn positive_part(r: Rat) -> Rat {
    if r.is_negative() {
        Rat::zero()
    } else {
        r
    }
}

/// Formats a rational as `a` or `a/b`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(text: &str) -> Option<Rat> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| Rat::new(n, d))
        }
        None => text.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_div_matches_definition() {
        assert_eq!(ceil_div(12, 10), 2);
        assert_eq!(ceil_div(10, 10), 1);
        assert_eq!(ceil_div(0, 10), 0);
        assert_eq!(ceil_div(-3, 10), 0);
    }

    #[test]
    fn clean_float_snaps_and_zeroes() {
        assert_eq!(clean_float(1e-12), Rat::zero());
        assert_eq!(clean_float(0.75 + 1e-12), ratio(3, 4));
        assert_eq!(clean_float(1.0 / 3.0), ratio(1, 3));
        assert_eq!(clean_float(-2.0), int(-2));
        let odd = 0.123456789123;
        assert_eq!(clean_float(odd), from_f64(odd));
    }

    #[test]
    fn rational_text_round_trip() {
        for r in [ratio(3, 4), int(-5), ratio(-7, 3)] {
            assert_eq!(parse_rat(&fmt_rat(&r)), Some(r));
        }
        assert_eq!(parse_rat("1/0"), None);
    }
}
