//! Helpers for exact rational arithmetic: parsing, decimal formatting and
//! dyadic rounding.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse "p", "p/q" or a plain decimal like "2.5" into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational literal `{s}`"));
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = BigRational::new(digits, scale);
        let whole = BigRational::from_integer(int_part);
        return Ok(if s.starts_with('-') {
            whole - frac_part
        } else {
            whole + frac_part
        });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// Round to the dyadic grid 2^-bits, toward negative infinity.
pub fn dyadic_floor(q: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = q * BigRational::from_integer(scale.clone());
    BigRational::new(scaled.floor().to_integer(), scale)
}

/// Round to the dyadic grid 2^-bits, toward positive infinity.
pub fn dyadic_ceil(q: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = q * BigRational::from_integer(scale.clone());
    BigRational::new(scaled.ceil().to_integer(), scale)
}

/// 2^-bits as a rational.
pub fn pow2_inv(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

/// Format a rational in plain decimal with at most `sig` significant digits,
/// trailing zeros trimmed. Exact when the value is a terminating decimal that
/// fits in the digit budget.
pub fn fmt_sig(q: &BigRational, sig: usize) -> String {
    assert!(sig > 0);
    if q.is_zero() {
        return "0".to_string();
    }
    let neg = q.is_negative();
    let a = q.abs();

    // Decimal exponent e with 10^(e-1) <= a < 10^e.
    let mut e: i64 = {
        let num_digits = a.numer().to_string().len() as i64;
        let den_digits = a.denom().to_string().len() as i64;
        num_digits - den_digits
    };
    let ten = BigInt::from(10u32);
    let pow10 = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(ten.pow(k as u32))
        } else {
            BigRational::new(BigInt::one(), ten.pow((-k) as u32))
        }
    };
    while a >= pow10(e) {
        e += 1;
    }
    while a < pow10(e - 1) {
        e -= 1;
    }

    // Scaled integer with `sig` digits, rounded half away from zero.
    let shift = sig as i64 - e;
    let scaled = &a * pow10(shift);
    let floor = scaled.floor().to_integer();
    let frac = &scaled - BigRational::from_integer(floor.clone());
    let mut digits_int = if frac >= rat(1, 2) {
        floor + BigInt::one()
    } else {
        floor
    };
    // Rounding may carry into an extra digit (e.g. 999.95 -> 1000).
    let mut e = e;
    if digits_int >= ten.pow(sig as u32) {
        digits_int /= &ten;
        e += 1;
    }
    let mut digits = digits_int.to_string();

    // Place the decimal point. e = number of digits before the point.
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if e <= 0 {
        out.push_str("0.");
        for _ in 0..(-e) {
            out.push('0');
        }
        out.push_str(digits.trim_end_matches('0'));
        if out.ends_with('.') {
            out.pop();
        }
    } else if (e as usize) >= digits.len() {
        for _ in 0..(e as usize - digits.len()) {
            digits.push('0');
        }
        out.push_str(&digits);
    } else {
        let (int_part, frac_part) = digits.split_at(e as usize);
        out.push_str(int_part);
        let frac_trimmed = frac_part.trim_end_matches('0');
        if !frac_trimmed.is_empty() {
            out.push('.');
            out.push_str(frac_trimmed);
        }
    }
    if out == "-0" {
        out = "0".to_string();
    }
    out
}

/// Exact plain-decimal rendering for rationals whose denominator has only
/// the prime factors 2 and 5; None otherwise.
pub fn fmt_exact_decimal(q: &BigRational) -> Option<String> {
    let mut den = q.denom().clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if den.abs() != BigInt::one() {
        return None;
    }
    let shift = twos.max(fives);
    let scaled = q * BigRational::from_integer(BigInt::from(10u32).pow(shift));
    debug_assert!(scaled.is_integer());
    let digits = scaled.to_integer();
    let neg = digits.sign() == Sign::Minus;
    let mut s = digits.abs().to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if shift == 0 {
        out.push_str(&s);
        return Some(out);
    }
    while s.len() <= shift as usize {
        s.insert(0, '0');
    }
    let split = s.len() - shift as usize;
    let (int_part, frac_part) = s.split_at(split);
    let frac_trimmed = frac_part.trim_end_matches('0');
    out.push_str(int_part);
    if !frac_trimmed.is_empty() {
        out.push('.');
        out.push_str(frac_trimmed);
    }
    if out == "-0" {
        out = "0".to_string();
    }
    Some(out)
}

/// Format an f64 through its exact rational value, 12 significant digits.
pub fn fmt_sig_f64(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let q = BigRational::from_float(x).expect("finite float");
    fmt_sig(&q, sig)
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Fall back for extreme numerators/denominators.
        let n = q.numer().to_f64().unwrap_or(f64::MAX);
        let d = q.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

pub fn bigint_sign(x: &BigInt) -> i32 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-3/4").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational("10").unwrap(), rat_int(10));
        assert_eq!(parse_rational("2.5").unwrap(), rat(5, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn formats_significant_digits() {
        assert_eq!(fmt_sig(&rat_int(10), 12), "10");
        assert_eq!(fmt_sig(&rat(21, 10), 12), "2.1");
        assert_eq!(fmt_sig(&rat(317, 100), 12), "3.17");
        assert_eq!(fmt_sig(&rat_int(0), 12), "0");
        assert_eq!(fmt_sig(&rat(-1, 8), 12), "-0.125");
        // 1/3 rounded to 5 digits.
        assert_eq!(fmt_sig(&rat(1, 3), 5), "0.33333");
        assert_eq!(fmt_sig(&rat(2, 3), 5), "0.66667");
        // Carry on rounding.
        assert_eq!(fmt_sig(&rat(99995, 100), 4), "1000");
        assert_eq!(fmt_sig_f64(314.15926535897932, 12), "314.159265359");
    }

    #[test]
    fn dyadic_rounding_brackets() {
        let q = rat(1, 3);
        let lo = dyadic_floor(&q, 10);
        let hi = dyadic_ceil(&q, 10);
        assert!(lo <= q && q <= hi);
        assert!(&hi - &lo <= pow2_inv(10));
    }
}
