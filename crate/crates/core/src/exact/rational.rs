//! Arbitrary precision integers and rationals, plus the handful of
//! conversions (to floats, to decimal strings, to dyadic approximations)
//! the rest of the crate leans on.
//!
//! `Rat` is always kept in lowest terms with a positive denominator; that is
//! the `num_rational` invariant and every constructor here goes through it.

use alloc::string::{String, ToString};
use core::f64::consts::LN_2;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Int = BigInt;
pub type Rat = num_rational::BigRational;

/// `v` as a big integer.
pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// `v` as a rational.
pub fn rat_i(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

/// `num/den` as a rational.  Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "rational with zero denominator");
    Rat::new(Int::from(num), Int::from(den))
}

/// `base^exp` with `exp` of either sign.  Panics on `0^negative`.
pub fn pow_rat(base: &Rat, exp: i64) -> Rat {
    if exp == 0 {
        return Rat::one();
    }
    assert!(
        !base.is_zero() || exp > 0,
        "zero base with negative exponent"
    );
    let mut acc = Rat::one();
    let mut sq = base.clone();
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    if exp < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Parse `"p"` or `"p/q"` into a rational.  Whitespace is not trimmed.
pub fn parse_rat(s: &str) -> Option<Rat> {
    match s.split_once('/') {
        None => s.parse::<Int>().ok().map(Rat::from_integer),
        Some((p, q)) => {
            let num = p.parse::<Int>().ok()?;
            let den = q.parse::<Int>().ok()?;
            if den.is_zero() {
                None
            } else {
                Some(Rat::new(num, den))
            }
        }
    }
}

/// Format as `"p"` or `"p/q"`, matching what [`parse_rat`] accepts.
pub fn rat_string(x: &Rat) -> String {
    use alloc::format;
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn top_bits_f64(mag: &BigUint) -> (f64, i64) {
    let bits = mag.bits();
    if bits <= 63 {
        (mag.to_f64().unwrap_or(0.0), 0)
    } else {
        let shift = bits - 63;
        let top = mag >> shift;
        (top.to_f64().unwrap_or(0.0), shift as i64)
    }
}

/// Nearest `f64` to `x`, correct to a few ulps even when numerator and
/// denominator far exceed the `f64` range.  Overflow saturates to infinity.
pub fn rat_to_f64(x: &Rat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let (mn, en) = top_bits_f64(x.numer().magnitude());
    let (md, ed) = top_bits_f64(x.denom().magnitude());
    let scale = (en - ed).clamp(i32::MIN as i64, i32::MAX as i64) as i32;
    let mag = libm::scalbn(mn / md, scale);
    if x.is_negative() {
        -mag
    } else {
        mag
    }
}

/// `ln |x|` for a nonzero integer of any size.  Returns `None` for zero.
pub fn ln_int_abs(x: &Int) -> Option<f64> {
    if x.is_zero() {
        return None;
    }
    let (m, e) = top_bits_f64(x.magnitude());
    Some(libm::log(m) + e as f64 * LN_2)
}

/// `ln |x|` for a nonzero rational of any size.  Returns `None` for zero.
pub fn ln_rat_abs(x: &Rat) -> Option<f64> {
    let n = ln_int_abs(x.numer())?;
    let d = ln_int_abs(x.denom()).expect("denominator is nonzero");
    Some(n - d)
}

/// Round `x` to the nearest multiple of `2^-bits` (ties away from zero).
pub fn dyadic_round(x: &Rat, bits: u32) -> Rat {
    if x.is_zero() {
        return Rat::zero();
    }
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    let scaled = (num << (bits + 1)) + den;
    let q = scaled / (den << 1u8);
    let sign = if x.is_negative() {
        Sign::Minus
    } else {
        Sign::Plus
    };
    Rat::new(
        Int::from_biguint(sign, q),
        Int::from(BigUint::one() << bits),
    )
}

/// An upper bound for `sqrt(x)` accurate to `2^-bits`, for `x >= 0`.
pub fn sqrt_upper(x: &Rat, bits: u32) -> Rat {
    assert!(!x.is_negative(), "square root of a negative rational");
    if x.is_zero() {
        return Rat::zero();
    }
    let num = x.numer().magnitude() << (2 * bits as u64);
    let den = x.denom().magnitude();
    let (q, r) = num.div_rem(den);
    let mut root = q.sqrt();
    // q.sqrt() is the floor; bump until it dominates num/den.
    if !r.is_zero() || &root * &root < q {
        root += BigUint::one();
    }
    Rat::new(
        Int::from_biguint(Sign::Plus, root),
        Int::from(BigUint::one() << bits),
    )
}

/// `x` in scientific notation with `digits` significant decimal digits,
/// e.g. `-3.14159e0`.  Deterministic: rounding is half away from zero.
pub fn decimal_string(x: &Rat, digits: usize) -> String {
    use alloc::format;
    assert!(digits >= 1);
    if x.is_zero() {
        return String::from("0");
    }
    let ln10 = core::f64::consts::LN_10;
    let mut e10 = libm::floor(ln_rat_abs(x).unwrap() / ln10) as i64;
    let (mantissa, exp) = loop {
        let k = digits as i64 - 1 - e10;
        let (num, den) = if k >= 0 {
            (
                x.numer().magnitude() * BigUint::from(10u8).pow(k as u32),
                x.denom().magnitude().clone(),
            )
        } else {
            (
                x.numer().magnitude().clone(),
                x.denom().magnitude() * BigUint::from(10u8).pow((-k) as u32),
            )
        };
        let q = ((num << 1u8) + &den) / (den << 1u8);
        let s = q.to_string();
        if s.len() == digits {
            break (s, e10);
        } else if s.len() > digits {
            e10 += 1;
        } else {
            e10 -= 1;
        }
    };
    let sign = if x.is_negative() { "-" } else { "" };
    if digits == 1 {
        format!("{sign}{mantissa}e{exp}")
    } else {
        format!("{sign}{}.{}e{exp}", &mantissa[..1], &mantissa[1..])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pow_handles_negative_exponents() {
        let b = rat(2, 3);
        assert_eq!(pow_rat(&b, 3), rat(8, 27));
        assert_eq!(pow_rat(&b, -2), rat(9, 4));
        assert_eq!(pow_rat(&b, 0), rat_i(1));
        assert_eq!(pow_rat(&rat_i(0), 5), rat_i(0));
    }

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["0", "-7", "3/4", "-22/7", "1000000000000000000000/3"] {
            let v = parse_rat(s).unwrap();
            assert_eq!(rat_string(&v), s);
        }
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("x").is_none());
    }

    #[test]
    fn f64_conversion_handles_huge_values() {
        // 10^400 / (3 * 10^400) = 1/3 even though both sides overflow f64.
        let big = Int::from(10).pow(400u32);
        let x = Rat::new(big.clone(), big * 3);
        assert!((rat_to_f64(&x) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(rat_to_f64(&Rat::zero()), 0.0);
        assert!(rat_to_f64(&Rat::from_integer(Int::from(10).pow(400u32))).is_infinite());
    }

    #[test]
    fn ln_matches_known_values() {
        let x = Int::from(10).pow(100u32);
        let got = ln_int_abs(&x).unwrap();
        assert!((got - 100.0 * core::f64::consts::LN_10).abs() < 1e-9);
        assert!(ln_int_abs(&Int::zero()).is_none());
        let r = rat(1, 8);
        assert!((ln_rat_abs(&r).unwrap() + 3.0 * LN_2).abs() < 1e-12);
    }

    #[test]
    fn decimal_string_examples() {
        assert_eq!(decimal_string(&rat(1, 3), 5), "3.3333e-1");
        assert_eq!(decimal_string(&rat(-200, 1), 3), "-2.00e2");
        assert_eq!(decimal_string(&rat_i(0), 7), "0");
        // 0.9999 rounds up and carries into the exponent.
        assert_eq!(decimal_string(&rat(9999, 10000), 3), "1.00e0");
        assert_eq!(decimal_string(&rat(1, 7), 30), "1.42857142857142857142857142857e-1");
    }

    #[test]
    fn sqrt_upper_brackets_the_root() {
        let two = rat_i(2);
        let s = sqrt_upper(&two, 80);
        assert!(&s * &s >= two);
        // (s - sqrt2)(s + sqrt2) = s^2 - 2, and s + sqrt2 > 2, so the
        // overshoot is at most (s^2 - 2)/2.
        let err = &s * &s - &two;
        assert!(err < rat(1, 1 << 30));
    }

    proptest! {
        #[test]
        fn f64_round_trips_small_rationals(n in -10_000i64..10_000, d in 1i64..10_000) {
            let x = rat(n, d);
            let f = rat_to_f64(&x);
            let exact = n as f64 / d as f64;
            prop_assert!((f - exact).abs() <= 1e-12 * (1.0 + exact.abs()));
        }

        #[test]
        fn dyadic_round_is_close(n in -100_000i64..100_000, d in 1i64..100_000, bits in 1u32..60) {
            let x = rat(n, d);
            let r = dyadic_round(&x, bits);
            let err = (&r - &x).abs();
            prop_assert!(err <= Rat::new(Int::one(), Int::one() << (bits + 1)));
        }

        #[test]
        fn decimal_string_parses_back(n in -1_000_000i64..1_000_000, d in 1i64..1_000_000) {
            let x = rat(n, d);
            let s = decimal_string(&x, 17);
            // Reconstruct through f64 and compare loosely.
            let (mant, exp) = s.split_once('e').unwrap_or((s.as_str(), "0"));
            let v = mant.parse::<f64>().unwrap() * libm::pow(10.0, exp.parse::<f64>().unwrap());
            prop_assert!((v - rat_to_f64(&x)).abs() <= 1e-9 * (1.0 + v.abs()));
        }
    }
}
