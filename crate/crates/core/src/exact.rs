//! Exact rational arithmetic helpers.
//!
//! Protocol constants span well over a hundred orders of magnitude and the
//! interesting quantities are differences like `1 - s'` with `s'` within
//! `1e-69` of one, so they are carried as arbitrary-precision rationals.
//! The single irrational input, a square root, is replaced by a rational
//! approximation with [`SQRT_DIGITS`] correct digits.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Exact = BigRational;

/// Decimal digits kept after the point by [`sqrt_approx`].
pub const SQRT_DIGITS: u32 = 160;

pub fn int(v: i64) -> Exact {
    Exact::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Exact {
    Exact::new(BigInt::from(p), BigInt::from(q))
}

fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), e as usize)
}

/// Parses `"p/q"`, an integer, or a decimal with optional exponent
/// (`"-1.25e-3"`) into an exact rational.
pub fn parse_exact(text: &str) -> Result<Exact> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational or decimal number: {text:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Exact::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("0{whole}{frac}").parse().map_err(|_| bad())?;
    let scale = exponent - frac.len() as i32;
    let mut value = Exact::from_integer(digits);
    if scale >= 0 {
        value *= Exact::from_integer(pow10(scale as u32));
    } else {
        value /= Exact::from_integer(pow10(scale.unsigned_abs()));
    }
    Ok(if neg { -value } else { value })
}

/// The exact value of a finite double.
pub fn from_f64(x: f64) -> Exact {
    Exact::from_float(x).expect("finite double")
}

pub fn to_f64(x: &Exact) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Terminating decimal when the denominator is `2^a 5^b`, otherwise `"p/q"`.
pub fn to_canonical_string(x: &Exact) -> String {
    let mut d = x.denom().clone();
    let (mut twos, mut fives) = (0u32, 0u32);
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while d.is_even() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return format!("{}/{}", x.numer(), x.denom());
    }
    let places = twos.max(fives);
    let scaled = (x * Exact::from_integer(pow10(places))).to_integer();
    if places == 0 {
        return scaled.to_string();
    }
    let neg = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let padded = format!("{:0>width$}", digits, width = places as usize + 1);
    let (whole, frac) = padded.split_at(padded.len() - places as usize);
    let frac = frac.trim_end_matches('0');
    let sign = if neg { "-" } else { "" };
    if frac.is_empty() {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac}")
    }
}

/// `floor(log10 |x|)` for nonzero `x`.
fn decimal_exponent(x: &Exact) -> i64 {
    let a = x.abs();
    let bits = a.numer().bits() as i64 - a.denom().bits() as i64;
    let mut e = (bits as f64 * std::f64::consts::LOG10_2).floor() as i64;
    let ten_pow = |e: i64| {
        if e >= 0 {
            Exact::from_integer(pow10(e as u32))
        } else {
            Exact::new(BigInt::one(), pow10((-e) as u32))
        }
    };
    while ten_pow(e) > a {
        e -= 1;
    }
    while ten_pow(e + 1) <= a {
        e += 1;
    }
    e
}

/// Scientific notation with `sig` significant digits, rounded half up.
pub fn to_sci_string(x: &Exact, sig: u32) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let neg = x.is_negative();
    let a = x.abs();
    let mut e = decimal_exponent(&a);
    let shift = sig as i64 - 1 - e;
    let scaled = if shift >= 0 {
        &a * Exact::from_integer(pow10(shift as u32))
    } else {
        &a / Exact::from_integer(pow10((-shift) as u32))
    };
    let mut digits = (scaled + ratio(1, 2)).floor().to_integer();
    if digits >= pow10(sig) {
        digits /= BigInt::from(10);
        e += 1;
    }
    let text = digits.to_string();
    let (head, tail) = text.split_at(1);
    let tail = tail.trim_end_matches('0');
    let sign = if neg { "-" } else { "" };
    let mantissa = if tail.is_empty() { head.to_string() } else { format!("{head}.{tail}") };
    if e == 0 {
        format!("{sign}{mantissa}")
    } else {
        format!("{sign}{mantissa}e{e}")
    }
}

/// Rational approximation of `sqrt(x)` for `x >= 0`, from below, with
/// absolute error under `10^-SQRT_DIGITS` relative to the scale of `x`.
pub fn sqrt_approx(x: &Exact) -> Exact {
    assert!(!x.is_negative(), "square root of a negative number");
    if x.is_zero() {
        return Exact::zero();
    }
    // sqrt(p/q) = sqrt(p q) / q, scaled by 10^D to keep D digits.
    let p = x.numer().to_biguint().expect("nonnegative");
    let q = x.denom().to_biguint().expect("positive");
    let scale = num_traits::pow(BigUint::from(10u32), SQRT_DIGITS as usize);
    let root = (&p * &q * &scale * &scale).sqrt();
    Exact::new(BigInt::from_biguint(Sign::Plus, root), BigInt::from_biguint(Sign::Plus, q * scale))
}

pub fn pow(x: &Exact, e: u32) -> Exact {
    num_traits::pow(x.clone(), e as usize)
}

pub fn min(a: Exact, b: Exact) -> Exact {
    if a <= b {
        a
    } else {
        b
    }
}

/// `|a - b| / |b|`, as a double.
pub fn relative_difference(a: &Exact, b: &Exact) -> f64 {
    if b.is_zero() {
        return if a.is_zero() { 0.0 } else { f64::INFINITY };
    }
    to_f64(&((a - b) / b).abs())
}
