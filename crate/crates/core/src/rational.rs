//! Exact rational helpers shared by every module.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_biguint(n: &BigUint) -> Rat {
    Rat::from_integer(BigInt::from(n.clone()))
}

pub fn to_f64(x: &Rat) -> f64 {
    match x.to_f64() {
        Some(v) if v.is_finite() => v,
        _ => {
            // Numerator and denominator may each overflow f64 while the ratio does not.
            let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
            let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
            if n.is_finite() && d.is_finite() {
                n / d
            } else {
                let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000);
                let n = (x.numer() >> shift).to_f64().unwrap_or(0.0);
                let d = (x.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
                n / d
            }
        }
    }
}

/// Exact conversion of a finite `f64` (every finite double is a dyadic rational).
pub fn from_f64(x: f64) -> Rat {
    Rat::from_float(x).expect("finite float")
}

pub fn pow(x: &Rat, k: usize) -> Rat {
    let mut acc = Rat::one();
    let mut base = x.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// y(y-1)...(y-m+1); equals 1 when m = 0.
pub fn falling_factorial(y: &Rat, m: usize) -> Rat {
    let mut acc = Rat::one();
    let mut f = y.clone();
    for _ in 0..m {
        acc *= &f;
        f -= Rat::one();
    }
    acc
}

/// Pochhammer symbol (y)_m = y(y+1)...(y+m-1).
pub fn rising_factorial(y: &Rat, m: usize) -> Rat {
    let mut acc = Rat::one();
    let mut f = y.clone();
    for _ in 0..m {
        acc *= &f;
        f += Rat::one();
    }
    acc
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn require_positive(name: &'static str, x: &Rat) -> Result<()> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(Error::NotPositive { name, value: x.to_string() })
    }
}

/// Parses `"3"`, `"-0.25"`, `"1e-3"`, `"7/4"` exactly.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let err = || Error::Parse(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rat::new(n, d));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = t[i + 1..].parse().map_err(|_| err())?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: String = format!("{int_part}{frac_part}");
    let n: BigInt = all.parse().map_err(|_| err())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = Rat::from_integer(BigInt::from(10));
    let mut v = Rat::from_integer(n);
    if scale >= 0 {
        v *= pow(&ten, scale as usize);
    } else {
        v /= pow(&ten, (-scale) as usize);
    }
    Ok(if neg { -v } else { v })
}

/// Renders a rational as `p/q` (or `p` for integers).
pub fn fmt_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn abs(x: &Rat) -> Rat {
    x.abs()
}
