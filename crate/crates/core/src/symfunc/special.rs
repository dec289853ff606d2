//! Meixner and Laguerre families: the symmetric-function versions indexed by
//! diagrams and their one-variable counterparts.

use num_traits::One;

use super::poly::{FactorialPoly, UniPoly};
use super::{Basis, ParamPair, SymFn};
use crate::error::{Error, Result};
use crate::partitions::{enumerate, skew_dim, Partition};
use crate::rational::{factorial, falling_factorial, from_biguint, pow, rat, require_positive, rising_factorial, Rat};

/// Σ_{μ ⊆ ν} step^{|ν/μ|} · dim(μ,ν)/|ν/μ|! · Π_{□∈ν/μ} w(c(□)) · b_μ.
fn content_expansion(nu: &Partition, sigma: &ParamPair, step: &Rat, basis: Basis) -> SymFn {
    let n = nu.size();
    let mut out = SymFn::zero(basis);
    for m in 0..=n {
        let k = n - m;
        let scalar = pow(step, k) / from_biguint(&factorial(k));
        for mu in enumerate(m) {
            if !nu.contains(&mu) {
                continue;
            }
            let c = &scalar * from_biguint(&skew_dim(&mu, nu)) * sigma.content_product(nu, &mu);
            out.add_term(mu, c);
        }
    }
    out
}

/// Meixner symmetric function M_ν in the Frobenius–Schur basis.
pub fn meixner_sym(nu: &Partition, sigma: &ParamPair, r: &Rat) -> Result<SymFn> {
    require_positive("r", r)?;
    Ok(content_expansion(nu, sigma, &-r, Basis::FS))
}

/// Laguerre symmetric function L_ν in the Schur basis.
pub fn laguerre_sym(nu: &Partition, sigma: &ParamPair) -> SymFn {
    content_expansion(nu, sigma, &-Rat::one(), Basis::S)
}

/// FS_μ ↦ r^{|μ|} S_μ, extended linearly.
pub fn boundary_basis_map(f: &SymFn, r: &Rat) -> Result<SymFn> {
    if f.basis() != Basis::FS {
        return Err(Error::UnsupportedBasis(f.basis().name()));
    }
    require_positive("r", r)?;
    Ok(SymFn::from_terms(Basis::S, f.terms().map(|(mu, c)| (mu.clone(), c * pow(r, mu.size())))))
}

/// (c)_n Σ_m step^{n−m} n^{↓m} / ((c)_m m!), the shared coefficient pattern.
fn hypergeometric_coeffs(n: usize, c: &Rat, step: &Rat) -> Vec<Rat> {
    let cn = rising_factorial(c, n);
    let nn = rat(n as i64);
    (0..=n)
        .map(|m| {
            &cn * pow(step, n - m) * falling_factorial(&nn, m) / (rising_factorial(c, m) * from_biguint(&factorial(m)))
        })
        .collect()
}

/// Monic Meixner polynomial of degree n, in the falling-factorial basis.
pub fn meixner_poly_1d(n: usize, c: &Rat, r: &Rat) -> Result<FactorialPoly> {
    require_positive("c", c)?;
    require_positive("r", r)?;
    Ok(FactorialPoly::new(hypergeometric_coeffs(n, c, &-r)))
}

/// Monic Laguerre polynomial of degree n with parameter c.
pub fn laguerre_poly_1d(n: usize, c: &Rat) -> Result<UniPoly> {
    require_positive("c", c)?;
    Ok(UniPoly::new(hypergeometric_coeffs(n, c, &-Rat::one())))
}
