//! Exact rational arithmetic helpers.
//!
//! All coordinates, lengths and LP coefficients in this crate are
//! arbitrary-precision rationals. Irrational intermediates (square roots,
//! pi) never leak into stored values: they are rounded in a direction that
//! preserves the surrounding guarantee, at a configurable number of dyadic
//! fractional bits.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in canonical form by
/// `num-rational` (gcd-reduced, positive denominator).
pub type Rat = BigRational;

/// Default number of fractional bits for rounded square roots.
pub const DEFAULT_PRECISION_BITS: u32 = 64;

/// `p/q` as a rational. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Lossy conversion for rendering and diagnostics only.
pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p/q"`, an integer, or a plain decimal (`"1.25"`, `"-0.5"`)
/// into an exact rational.
pub fn parse(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational literal".into());
    }
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().map_err(|_| format!("bad numerator {p:?}"))?;
        let den: BigInt = q.trim().parse().map_err(|_| format!("bad denominator {q:?}"))?;
        if den.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let sign = if ip.trim_start().starts_with('-') { -1 } else { 1 };
        let int_part: BigInt = if ip.is_empty() || ip == "-" || ip == "+" {
            BigInt::zero()
        } else {
            ip.parse().map_err(|_| format!("bad decimal {s:?}"))?
        };
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad decimal {s:?}"));
        }
        let frac_num: BigInt = fp.parse().map_err(|_| format!("bad decimal {s:?}"))?;
        let den = BigInt::from(10u32).pow(fp.len() as u32);
        let frac = BigRational::new(frac_num, den);
        let whole = BigRational::from_integer(int_part.clone());
        return Ok(if sign < 0 && !int_part.is_negative() {
            // "-0.5" has int part "-0" which parses to 0
            -(whole.abs() + frac)
        } else if int_part.is_negative() {
            whole - frac
        } else {
            whole + frac
        });
    }
    let num: BigInt = s.parse().map_err(|_| format!("bad rational {s:?}"))?;
    Ok(BigRational::from_integer(num))
}

/// Canonical `"p/q"` (or `"p"` for integers) form, inverse of [`parse`].
pub fn format(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn isqrt_floor(n: &BigUint) -> BigUint {
    n.sqrt()
}

/// Exact square root if `x` is the square of a rational, else `None`.
pub fn sqrt_exact(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let (pn, pd) = (x.numer().magnitude(), x.denom().magnitude());
    let sn = isqrt_floor(pn);
    let sd = isqrt_floor(pd);
    if &sn * &sn == *pn && &sd * &sd == *pd {
        Some(BigRational::new(
            BigInt::from_biguint(Sign::Plus, sn),
            BigInt::from_biguint(Sign::Plus, sd),
        ))
    } else {
        None
    }
}

/// Largest rational with denominator `2^bits` that is `<= sqrt(x)`;
/// returns the exact root when it is rational. Panics on negative input.
pub fn sqrt_floor(x: &Rat, bits: u32) -> Rat {
    assert!(!x.is_negative(), "sqrt of negative rational");
    if x.is_zero() {
        return Rat::zero();
    }
    if let Some(r) = sqrt_exact(x) {
        return r;
    }
    // floor(sqrt(p/q) * 2^bits) = s with s^2 q <= p 4^bits < (s+1)^2 q
    let p = x.numer().magnitude();
    let q = x.denom().magnitude();
    let scaled = p * (BigUint::one() << (2 * bits as usize));
    let mut s = isqrt_floor(&(&scaled / q));
    // division truncation can leave s off by one in either direction
    while &(&s + 1u32) * &(&s + 1u32) * q <= scaled {
        s += 1u32;
    }
    while &s * &s * q > scaled {
        s -= 1u32;
    }
    BigRational::new(
        BigInt::from_biguint(Sign::Plus, s),
        BigInt::one() << (bits as usize),
    )
}

/// Smallest rational with denominator `2^bits` that is `>= sqrt(x)`;
/// returns the exact root when it is rational.
pub fn sqrt_ceil(x: &Rat, bits: u32) -> Rat {
    assert!(!x.is_negative(), "sqrt of negative rational");
    if x.is_zero() {
        return Rat::zero();
    }
    if let Some(r) = sqrt_exact(x) {
        return r;
    }
    let fl = sqrt_floor(x, bits);
    // not exact, so the floor is strictly below the root
    fl + BigRational::new(BigInt::one(), BigInt::one() << (bits as usize))
}

// pi to 45 decimal digits; the true value lies strictly between the
// two bounds below (the last digit of the expansion is truncated).
const PI_DIGITS: &str = "3.141592653589793238462643383279502884197169399";

/// Rational strictly below pi (error < 1e-45).
pub fn pi_lo() -> Rat {
    parse(PI_DIGITS).expect("pi literal")
}

/// Rational strictly above pi (error < 1e-45).
pub fn pi_hi() -> Rat {
    let ulp = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(45));
    pi_lo() + ulp
}

/// `floor(x)` as a rational integer.
pub fn floor(x: &Rat) -> Rat {
    x.floor()
}

/// `ceil(x)` as a rational integer.
pub fn ceil(x: &Rat) -> Rat {
    x.ceil()
}

/// `floor(x)` as u64; panics if negative or too large.
pub fn floor_u64(x: &Rat) -> u64 {
    let f = x.floor();
    f.numer()
        .to_u64()
        .expect("floor does not fit in u64")
}

/// Convenience: `x^2`.
pub fn sq(x: &Rat) -> Rat {
    x * x
}

/// `(1+eps)^k` computed exactly.
pub fn pow_rat(base: &Rat, k: u32) -> Rat {
    let mut acc = Rat::one();
    let mut b = base.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        k >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/4", "-7/2", "5", "0", "-12"] {
            let x = parse(s).unwrap();
            assert_eq!(format(&x), s);
        }
        assert_eq!(parse("1.25").unwrap(), rat(5, 4));
        assert_eq!(parse("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(parse("2.").is_err(), true);
        assert_eq!(parse("4/0").is_err(), true);
    }

    #[test]
    fn sqrt_exact_detects_perfect_squares() {
        assert_eq!(sqrt_exact(&rat(9, 4)).unwrap(), rat(3, 2));
        assert_eq!(sqrt_exact(&rat(1, 9)).unwrap(), rat(1, 3));
        assert!(sqrt_exact(&rat(2, 1)).is_none());
    }

    #[test]
    fn sqrt_bounds_bracket_the_root() {
        let x = rat(2, 1);
        let lo = sqrt_floor(&x, 32);
        let hi = sqrt_ceil(&x, 32);
        assert!(&lo * &lo <= x);
        assert!(&hi * &hi >= x);
        assert!(&hi - &lo == rat(1, 1) / int(1 << 32));
    }

    #[test]
    fn sqrt_of_tiny_and_large_values() {
        for x in [rat(1, 1_000_000), rat(1_000_000, 1), rat(6, 4)] {
            let lo = sqrt_floor(&x, 64);
            let hi = sqrt_ceil(&x, 64);
            assert!(&lo * &lo <= x, "floor too big for {x}");
            assert!(&hi * &hi >= x, "ceil too small for {x}");
        }
    }

    #[test]
    fn pi_bounds_are_ordered_and_tight() {
        let lo = pi_lo();
        let hi = pi_hi();
        assert!(lo < hi);
        // both within 1e-14 of f64 pi
        assert!((to_f64(&lo) - std::f64::consts::PI).abs() < 1e-14);
        assert!((to_f64(&hi) - std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn pow_rat_matches_repeated_multiplication() {
        let b = rat(5, 4);
        let mut acc = int(1);
        for k in 0..10u32 {
            assert_eq!(pow_rat(&b, k), acc);
            acc *= &b;
        }
    }
}
