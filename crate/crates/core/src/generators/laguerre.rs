//! The one-variable Laguerre operator x d² + (c − x) d and its
//! infinite-variate counterpart over the elementary generators e₁, e₂, ….

use num_traits::{One, Zero};

use crate::error::Result;
use crate::rational::{rat, Rat};
use crate::symfunc::{Basis, ParamPair, SymFn, UniPoly};

/// x ↦ e^{−rx} · poly(x).
#[derive(Clone, Debug, PartialEq)]
pub struct ExpPoly1D {
    pub rate: Rat,
    pub poly: UniPoly,
}

/// The three pieces of D(e^{−rx} p) = e^{−rx}[D p + (r² x − r(c − x)) p − 2r x p′].
pub fn laguerre_op_1d_split(c: &Rat, g: &ExpPoly1D) -> [UniPoly; 3] {
    let r = &g.rate;
    let p = &g.poly;
    let x = UniPoly::x();
    let d1 = p.derivative();
    let d2 = d1.derivative();
    let c_minus_x = &UniPoly::constant(c.clone()) - &x;
    let plain = &(&x * &d2) + &(&c_minus_x * &d1);
    let weight = &x.scale(&(r * r)) - &c_minus_x.scale(r);
    let from_exp = &weight * p;
    let cross = (&x * &d1).scale(&(rat(-2) * r));
    [from_exp, plain, cross]
}

/// x d²/dx² + (c − x) d/dx applied to e^{−rx} p(x).
pub fn laguerre_op_1d(c: &Rat, g: &ExpPoly1D) -> ExpPoly1D {
    let [a, b, cc] = laguerre_op_1d_split(c, g);
    ExpPoly1D { rate: g.rate.clone(), poly: &(&a + &b) + &cc }
}

/// ω ↦ e^{−r e₁(ω)} · F(ω), F kept in the e basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpSymFn {
    pub rate: Rat,
    pub f: SymFn,
}

impl ExpSymFn {
    pub fn new(rate: Rat, f: &SymFn) -> Result<Self> {
        Ok(ExpSymFn { rate, f: f.to_basis(Basis::E)? })
    }
}

/// Σ_{k=0}^{n−1} (n′ + n − 1 − 2k) e_{n′+n−1−k} e_k, for n′ ≥ n.
fn second_order_coeff(n_prime: usize, n: usize) -> SymFn {
    let mut out = SymFn::zero(Basis::E);
    for k in 0..n {
        let w = rat((n_prime + n - 1 - 2 * k) as i64);
        let mut term = SymFn::one(Basis::E);
        for idx in [n_prime + n - 1 - k, k] {
            term = term.mul_generator(idx).expect("e basis");
        }
        out.add_scaled(&term, &w);
    }
    out
}

/// −n e_n + (z − n + 1)(z′ − n + 1) e_{n−1}.
fn first_order_coeff(sigma: &ParamPair, n: usize) -> SymFn {
    let mut out = SymFn::term(Basis::E, crate::partitions::Partition::from_parts(&[n]), rat(-(n as i64)));
    let lower = SymFn::one(Basis::E).mul_generator(n - 1).expect("e basis");
    out.add_scaled(&lower, &sigma.weight(1 - n as i64));
    out
}

/// The operator on polynomials in e₁, e₂, … (rate 0).
fn laguerre_poly_part(sigma: &ParamPair, f: &SymFn) -> SymFn {
    let top = f.max_part();
    let mut out = SymFn::zero(Basis::E);
    let firsts: Vec<SymFn> = (1..=top).map(|n| f.partial(n).expect("e basis")).collect();
    for n in 1..=top {
        let d = &firsts[n - 1];
        if d.is_zero() {
            continue;
        }
        let coeff = first_order_coeff(sigma, n);
        out = &out + &coeff.mul(d).expect("e basis");
        for n_prime in n..=top {
            let dd = d.partial(n_prime).expect("e basis");
            if dd.is_zero() {
                continue;
            }
            let mut a = second_order_coeff(n_prime, n);
            if n_prime > n {
                a = a.scale(&rat(2));
            }
            out = &out + &a.mul(&dd).expect("e basis");
        }
    }
    out
}

/// Σ_n n e_n ∂/∂e_n.
pub fn euler_operator(f: &SymFn) -> Result<SymFn> {
    let f = f.to_basis(Basis::E)?;
    let mut out = SymFn::zero(Basis::E);
    for n in 1..=f.max_part() {
        let d = f.partial(n)?.mul_generator(n)?;
        out.add_scaled(&d, &rat(n as i64));
    }
    Ok(out)
}

/// The three expressions of the product rule for D(G F) with
/// G = e^{−r e₁}, each given as the factor multiplying G.
#[derive(Clone, Debug, PartialEq)]
pub struct LaguerreSplit {
    /// (D G)/G · F = ((r² + r) e₁ − r σ₂) F.
    pub from_exponential: SymFn,
    /// D F.
    pub from_polynomial: SymFn,
    /// Cross terms, −2r Σ n e_n ∂F/∂e_n.
    pub cross: SymFn,
}

pub fn laguerre_split(sigma: &ParamPair, phi: &ExpSymFn) -> Result<LaguerreSplit> {
    let f = phi.f.to_basis(Basis::E)?;
    let r = &phi.rate;
    // D restricted to e₁ acting on e^{−r e₁}: A(1,1) r² + B₁ (−r).
    let a11 = second_order_coeff(1, 1);
    let b1 = first_order_coeff(sigma, 1);
    let g_factor = &a11.scale(&(r * r)) + &b1.scale(&-r);
    let from_exponential = g_factor.mul(&f)?;
    let from_polynomial = laguerre_poly_part(sigma, &f);
    // Only ∂/∂e₁ reaches G; A(n′, 1) = n′ e_{n′}, doubled off the diagonal.
    let mut cross = SymFn::zero(Basis::E);
    if !r.is_zero() {
        for n in 1..=f.max_part() {
            let mut a = second_order_coeff(n, 1);
            if n > 1 {
                a = a.scale(&rat(2));
            }
            // the symmetric pairing in the product rule doubles the diagonal term
            let weight = if n == 1 { rat(2) } else { Rat::one() };
            let term = a.mul(&f.partial(n)?)?;
            cross.add_scaled(&term, &(-r * weight));
        }
    }
    Ok(LaguerreSplit { from_exponential, from_polynomial, cross })
}

/// D^{z,z′} applied to e^{−r e₁} F; the result carries the same rate.
pub fn laguerre_op_sym(sigma: &ParamPair, phi: &ExpSymFn) -> Result<ExpSymFn> {
    let s = laguerre_split(sigma, phi)?;
    Ok(ExpSymFn { rate: phi.rate.clone(), f: &(&s.from_exponential + &s.from_polynomial) + &s.cross })
}
