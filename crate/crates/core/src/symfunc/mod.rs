//! Symmetric functions over exact rationals in the power-sum, elementary,
//! Schur and Frobenius–Schur bases, with evaluation on Young diagrams and on
//! points of the Thoma cone.

mod characters;
mod convert;
mod eval;
pub mod poly;
mod special;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::rational::{fmt_rat, rat, Rat};

pub use characters::{character, z_factor};
pub use convert::convert;
pub use eval::{
    eval_on_diagram, eval_on_point, eval_p_on_diagram, eval_p_on_point, fs_eval, fs_eval_fn, schur_at_point,
    SchurAtPoint,
};
pub use poly::{FactorialPoly, UniPoly};
pub use special::{boundary_basis_map, laguerre_poly_1d, laguerre_sym, meixner_poly_1d, meixner_sym};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    /// Power sums p_λ.
    P,
    /// Elementary e_λ.
    E,
    /// Schur S_λ.
    S,
    /// Frobenius–Schur FS_λ (evaluation-only).
    FS,
}

impl Basis {
    pub fn name(self) -> &'static str {
        match self {
            Basis::P => "p",
            Basis::E => "e",
            Basis::S => "s",
            Basis::FS => "fs",
        }
    }
}

/// A finite linear combination of basis elements indexed by partitions.
#[derive(Clone, PartialEq, Eq)]
pub struct SymFn {
    basis: Basis,
    coeffs: BTreeMap<Partition, Rat>,
}

impl SymFn {
    pub fn zero(basis: Basis) -> Self {
        SymFn { basis, coeffs: BTreeMap::new() }
    }

    pub fn one(basis: Basis) -> Self {
        Self::term(basis, Partition::empty(), Rat::one())
    }

    pub fn constant(basis: Basis, c: Rat) -> Self {
        Self::term(basis, Partition::empty(), c)
    }

    pub fn basis_element(basis: Basis, index: Partition) -> Self {
        Self::term(basis, index, Rat::one())
    }

    pub fn term(basis: Basis, index: Partition, c: Rat) -> Self {
        let mut f = Self::zero(basis);
        f.add_term(index, c);
        f
    }

    /// `p_k` (or `e_k`, ...) for a single index.
    pub fn generator(basis: Basis, k: usize) -> Self {
        Self::basis_element(basis, Partition::from_parts(&[k]))
    }

    pub fn from_terms(basis: Basis, terms: impl IntoIterator<Item = (Partition, Rat)>) -> Self {
        let mut f = Self::zero(basis);
        for (p, c) in terms {
            f.add_term(p, c);
        }
        f
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn add_term(&mut self, index: Partition, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(index);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, index: &Partition) -> Rat {
        self.coeffs.get(index).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rat)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// No terms at all; same as `is_zero` since zero coefficients are dropped.
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest |index| among stored terms (0 for the zero function).
    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(Partition::size).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rat) -> SymFn {
        if c.is_zero() {
            return Self::zero(self.basis);
        }
        SymFn { basis: self.basis, coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn add_scaled(&mut self, other: &SymFn, c: &Rat) {
        assert_eq!(self.basis, other.basis, "basis mismatch");
        for (k, v) in &other.coeffs {
            self.add_term(k.clone(), v * c);
        }
    }

    /// Product in a multiplicative basis (p or e), where `b_λ b_μ = b_{λ∪μ}`.
    pub fn mul(&self, other: &SymFn) -> Result<SymFn> {
        if self.basis != other.basis || !matches!(self.basis, Basis::P | Basis::E) {
            return Err(Error::UnsupportedBasis(self.basis.name()));
        }
        let mut out = Self::zero(self.basis);
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                out.add_term(merge(a, b), x * y);
            }
        }
        Ok(out)
    }

    /// Keeps only terms with |index| = d.
    pub fn homogeneous_part(&self, d: usize) -> SymFn {
        SymFn {
            basis: self.basis,
            coeffs: self.coeffs.iter().filter(|(k, _)| k.size() == d).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    /// ∂/∂g_n in a multiplicative basis, treating the generators g_k as
    /// independent variables.
    pub fn partial(&self, n: usize) -> Result<SymFn> {
        if !matches!(self.basis, Basis::P | Basis::E) {
            return Err(Error::UnsupportedBasis(self.basis.name()));
        }
        let mut out = Self::zero(self.basis);
        for (k, v) in &self.coeffs {
            let mult = k.parts().iter().filter(|&&x| x == n).count();
            if mult == 0 {
                continue;
            }
            let mut parts = k.parts().to_vec();
            let pos = parts.iter().position(|&x| x == n).expect("present");
            parts.remove(pos);
            out.add_term(Partition::from_parts(&parts), v * rat(mult as i64));
        }
        Ok(out)
    }

    /// Multiplication by the generator g_k (g_0 = 1) in a multiplicative basis.
    pub fn mul_generator(&self, k: usize) -> Result<SymFn> {
        if !matches!(self.basis, Basis::P | Basis::E) {
            return Err(Error::UnsupportedBasis(self.basis.name()));
        }
        if k == 0 {
            return Ok(self.clone());
        }
        let g = Partition::from_parts(&[k]);
        Ok(SymFn { basis: self.basis, coeffs: self.coeffs.iter().map(|(p, v)| (merge(p, &g), v.clone())).collect() })
    }

    /// Largest generator index occurring in any term.
    pub fn max_part(&self) -> usize {
        self.coeffs.keys().filter_map(|k| k.parts().first().copied()).max().unwrap_or(0)
    }

    pub fn to_basis(&self, target: Basis) -> Result<SymFn> {
        convert(self, target)
    }
}

/// Multiset union of the parts of two partitions.
pub(crate) fn merge(a: &Partition, b: &Partition) -> Partition {
    let mut parts: Vec<usize> = a.parts().iter().chain(b.parts()).copied().collect();
    parts.sort_unstable_by(|x, y| y.cmp(x));
    Partition::from_parts(&parts)
}

impl Add for &SymFn {
    type Output = SymFn;
    fn add(self, rhs: &SymFn) -> SymFn {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rat::one());
        out
    }
}

impl Sub for &SymFn {
    type Output = SymFn;
    fn sub(self, rhs: &SymFn) -> SymFn {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rat::one());
        out
    }
}

impl Neg for &SymFn {
    type Output = SymFn;
    fn neg(self) -> SymFn {
        self.scale(&-Rat::one())
    }
}

impl Mul<&Rat> for &SymFn {
    type Output = SymFn;
    fn mul(self, rhs: &Rat) -> SymFn {
        self.scale(rhs)
    }
}

impl fmt::Display for SymFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, v)) in self.coeffs.iter().enumerate() {
            let sign = if v.is_negative() { "-" } else { "+" };
            if i > 0 || v.is_negative() {
                write!(f, " {sign} ")?;
            }
            write!(f, "{}·{}{}", fmt_rat(&v.abs()), self.basis.name(), k)?;
        }
        Ok(())
    }
}

impl fmt::Debug for SymFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A point ω = (α, β, δ) of the Thoma cone with finitely many nonzero
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThomaPoint {
    alpha: Vec<Rat>,
    beta: Vec<Rat>,
    delta: Rat,
}

impl ThomaPoint {
    /// Validates monotonicity, positivity and `Σα + Σβ ≤ δ`; zero entries
    /// are dropped.
    pub fn new(alpha: Vec<Rat>, beta: Vec<Rat>, delta: Rat) -> Result<Self> {
        let clean = |v: Vec<Rat>, name: &str| -> Result<Vec<Rat>> {
            if v.iter().any(Signed::is_negative) {
                return Err(Error::InvalidQuery(format!("negative {name} coordinate")));
            }
            if v.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::InvalidQuery(format!("{name} must be weakly decreasing")));
            }
            Ok(v.into_iter().filter(|x| !x.is_zero()).collect())
        };
        let alpha = clean(alpha, "alpha")?;
        let beta = clean(beta, "beta")?;
        let total: Rat = alpha.iter().chain(&beta).sum();
        if total > delta {
            return Err(Error::InvalidQuery(format!(
                "sum of alpha and beta ({}) exceeds delta ({})",
                fmt_rat(&total),
                fmt_rat(&delta)
            )));
        }
        Ok(ThomaPoint { alpha, beta, delta })
    }

    /// The point ω_λ built from the modified Frobenius coordinates.
    pub fn from_diagram(lambda: &Partition) -> Self {
        let f = lambda.frobenius();
        ThomaPoint { alpha: f.a, beta: f.b, delta: Rat::from_integer(lambda.size().into()) }
    }

    pub fn alpha(&self) -> &[Rat] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Rat] {
        &self.beta
    }

    pub fn delta(&self) -> &Rat {
        &self.delta
    }

    /// |ω| = δ.
    pub fn size(&self) -> &Rat {
        &self.delta
    }

    /// The homothety ω ↦ cω for c ≥ 0.
    pub fn scaled(&self, c: &Rat) -> ThomaPoint {
        let s = |v: &[Rat]| -> Vec<Rat> {
            if c.is_zero() {
                Vec::new()
            } else {
                v.iter().map(|x| x * c).collect()
            }
        };
        ThomaPoint { alpha: s(&self.alpha), beta: s(&self.beta), delta: &self.delta * c }
    }

    /// δ − Σα − Σβ, the weight of the continuous part.
    pub fn gamma(&self) -> Rat {
        let total: Rat = self.alpha.iter().chain(&self.beta).sum();
        &self.delta - total
    }
}

/// Parameters (z, z′) carried through σ₁ = z + z′ and σ₂ = zz′.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamPair {
    sigma1: Rat,
    sigma2: Rat,
}

impl ParamPair {
    /// Accepts (σ₁, σ₂) only when k² + σ₁k + σ₂ > 0 for every integer k.
    pub fn new(sigma1: Rat, sigma2: Rat) -> Result<Self> {
        let p = ParamPair { sigma1, sigma2 };
        // The quadratic is convex: its integer minimum sits next to −σ₁/2.
        let vertex = -&p.sigma1 / rat(2);
        let lo = vertex.floor().to_integer();
        let hi = vertex.ceil().to_integer();
        let as_i64 = |b: num_bigint::BigInt| -> i64 { i64::try_from(b).unwrap_or(i64::MAX) };
        let min = p.weight(as_i64(lo)).min(p.weight(as_i64(hi)));
        if !min.is_positive() {
            return Err(Error::Inadmissible { sigma1: fmt_rat(&p.sigma1), sigma2: fmt_rat(&p.sigma2) });
        }
        Ok(p)
    }

    pub fn sigma1(&self) -> &Rat {
        &self.sigma1
    }

    pub fn sigma2(&self) -> &Rat {
        &self.sigma2
    }

    /// (z + c)(z′ + c) = c² + σ₁c + σ₂.
    pub fn weight(&self, c: i64) -> Rat {
        let c = rat(c);
        &c * &c + &self.sigma1 * &c + &self.sigma2
    }

    /// Π over the boxes of λ/μ of (z + c(□))(z′ + c(□)); μ ⊆ λ is assumed.
    pub fn content_product(&self, lambda: &Partition, mu: &Partition) -> Rat {
        lambda.cells().filter(|&(i, j)| j > mu.row(i - 1)).map(|(i, j)| self.weight(j as i64 - i as i64)).product()
    }

    /// (σ₁, σ₂) ↦ (−σ₁, σ₂), i.e. (z, z′) ↦ (−z, −z′).
    pub fn negated(&self) -> ParamPair {
        ParamPair { sigma1: -&self.sigma1, sigma2: self.sigma2.clone() }
    }
}
