//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Formats a rational in lowest terms: `p` for integers, `p/q` otherwise.
pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `-p`, or `p/q`.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Scales a list of positive rationals by the lcm of their denominators and
/// returns the integer numerators, if each fits in a `u128`.
pub fn scale_to_u128(weights: &[Rational]) -> Option<Vec<u128>> {
    let lcm = weights
        .iter()
        .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let mut out = Vec::with_capacity(weights.len());
    let mut total: u128 = 0;
    for w in weights {
        if w.is_negative() {
            return None;
        }
        let scaled = w.numer() * (&lcm / w.denom());
        let v: u128 = scaled.try_into().ok()?;
        total = total.checked_add(v)?;
        out.push(v);
    }
    Some(out)
}

/// Largest rational `x` with `x <= value` and denominator `den`.
pub fn floor_to_denominator(value: &Rational, den: &BigInt) -> Rational {
    let scaled = value * Rational::from_integer(den.clone());
    Rational::new(scaled.floor().to_integer(), den.clone())
}

pub fn pow(base: &Rational, exp: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
