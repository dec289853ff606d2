//! Univariate polynomials over the rationals, in the monomial basis and in
//! the falling-factorial basis l^{↓m}.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::rational::{falling_factorial, fmt_rat, pow, rat, Rat};

/// Σ c_k x^k, coefficients stored low to high without trailing zeros.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// c·x^k.
    pub fn monomial(k: usize, c: Rat) -> Self {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn x() -> Self {
        Self::monomial(1, Rat::one())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * rat(k as i64)).collect())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiplication by x.
    pub fn shift(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Rat::zero()];
        v.extend(self.coeffs.iter().cloned());
        Self::new(v)
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        self + &-rhs
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        self.scale(&-Rat::one())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UniPoly::new(v)
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, coeffs: &[Rat], var: &str) -> fmt::Result {
    let mut first = true;
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        if !first {
            write!(f, " {sign} ")?;
        } else if c.is_negative() {
            write!(f, "-")?;
        }
        first = false;
        let a = c.abs();
        match k {
            0 => write!(f, "{}", fmt_rat(&a))?,
            _ if a.is_one() => write!(f, "{var}{}", power_suffix(k))?,
            _ => write!(f, "{}·{var}{}", fmt_rat(&a), power_suffix(k))?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

fn power_suffix(k: usize) -> String {
    if k == 1 {
        String::new()
    } else {
        format!("^{k}")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs, "x")
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Σ c_m l^{↓m}.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct FactorialPoly {
    coeffs: Vec<Rat>,
}

impl FactorialPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        FactorialPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, m: usize) -> Rat {
        self.coeffs.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, l: &Rat) -> Rat {
        self.coeffs.iter().enumerate().map(|(m, c)| c * falling_factorial(l, m)).sum()
    }

    /// Expansion in ordinary monomials l^k.
    pub fn to_monomial(&self) -> UniPoly {
        let mut acc = UniPoly::zero();
        let mut ff = UniPoly::constant(Rat::one());
        for (m, c) in self.coeffs.iter().enumerate() {
            acc = &acc + &ff.scale(c);
            // l^{↓(m+1)} = l^{↓m}·(l − m)
            let factor = UniPoly::new(vec![rat(-(m as i64)), Rat::one()]);
            ff = &ff * &factor;
        }
        acc
    }

    /// The image under l^{↓m} ↦ r^m x^m.
    pub fn poisson_image(&self, r: &Rat) -> UniPoly {
        UniPoly::new(self.coeffs.iter().enumerate().map(|(m, c)| c * pow(r, m)).collect())
    }
}

impl fmt::Display for FactorialPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs, "l↓")
    }
}

impl fmt::Debug for FactorialPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
