//! Helpers around [`BigRational`]: parsing, formatting and dyadic rounding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `2^k` as a rational, `k` may be negative.
pub fn pow2(k: i64) -> BigRational {
    let p = BigInt::one() << k.unsigned_abs();
    if k >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// `10^k` as a rational, `k` may be negative.
pub fn pow10(k: i64) -> BigRational {
    let p = num_traits::pow(BigInt::from(10), k.unsigned_abs() as usize);
    if k >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// Textual form used in every JSON schema: `"p"` or `"p/q"`.
pub fn format(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A parsed numeric literal. `decimals` is `Some(k)` when the literal was a
/// decimal with `k` digits after the point (or an exponent form), meaning the
/// text only pins the value to within `10^-k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Literal {
    pub value: BigRational,
    pub decimals: Option<i64>,
}

/// Parses `"p/q"`, `"-17"`, `"1.839"`, `"1e-12"`, `"2.5E3"`.
pub fn parse_literal(text: &str) -> Result<Literal> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::input("empty numeric literal"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::input(format!("bad numerator in {text:?}")))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::input(format!("bad denominator in {text:?}")))?;
        if d.is_zero() {
            return Err(Error::input(format!("zero denominator in {text:?}")));
        }
        return Ok(Literal {
            value: BigRational::new(n, d),
            decimals: None,
        });
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..]
                .parse()
                .map_err(|_| Error::input(format!("bad exponent in {text:?}")))?;
            (&s[..pos], Some(e))
        }
        None => (s, None),
    };
    let (negative, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty()
        || !whole.chars().all(|c| c.is_ascii_digit())
        || !frac.chars().all(|c| c.is_ascii_digit())
    {
        return Err(Error::input(format!("malformed number {text:?}")));
    }
    let digits = format!("{whole}{frac}");
    let mut n: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().expect("validated digits")
    };
    if negative {
        n = -n;
    }
    let scale = exponent.unwrap_or(0) - frac.len() as i64;
    let value = BigRational::from_integer(n) * pow10(scale);
    let decimals = if frac.is_empty() && exponent.is_none() {
        None
    } else {
        Some(-scale)
    };
    Ok(Literal { value, decimals })
}

pub fn parse_rational(text: &str) -> Result<BigRational> {
    parse_literal(text).map(|l| l.value)
}

fn bit_len(x: &BigInt) -> i64 {
    x.bits() as i64
}

fn round_dyadic(x: &BigRational, bits: u32, up: bool) -> BigRational {
    if x.is_zero() {
        return x.clone();
    }
    if x.numer().bits() + x.denom().bits() <= 2 * bits as u64 {
        return x.clone();
    }
    // keep roughly `bits` significant bits
    let k = bits as i64 - (bit_len(x.numer()) - bit_len(x.denom()));
    let scaled = x * pow2(k);
    let (q, r) = scaled.numer().div_mod_floor(scaled.denom());
    let q = if up && !r.is_zero() { q + 1 } else { q };
    BigRational::from_integer(q) * pow2(-k)
}

/// Largest dyadic number with about `bits` significant bits that is `<= x`.
pub fn round_down(x: &BigRational, bits: u32) -> BigRational {
    round_dyadic(x, bits, false)
}

/// Smallest dyadic number with about `bits` significant bits that is `>= x`.
pub fn round_up(x: &BigRational, bits: u32) -> BigRational {
    round_dyadic(x, bits, true)
}

/// Rough base-2 logarithm of a nonzero rational's magnitude, for reporting.
pub fn log2_approx(x: &BigRational) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let top = |v: &BigInt| -> (f64, i64) {
        let cut = v.bits().saturating_sub(60);
        ((v.abs() >> cut).to_f64().unwrap_or(f64::MAX), cut as i64)
    };
    let (n, ns) = top(x.numer());
    let (d, ds) = top(x.denom());
    n.log2() - d.log2() + (ns - ds) as f64
}
