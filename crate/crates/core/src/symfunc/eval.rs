//! Evaluation of symmetric functions on Young diagrams (through modified
//! Frobenius coordinates) and on points of the Thoma cone.

use num_traits::{One, Zero};

use super::{convert, Basis, SymFn, ThomaPoint};
use crate::error::{Error, Result};
use crate::partitions::{determinant, dim, skew_dim, Partition};
use crate::rational::{factorial, falling_factorial, from_biguint, pow, rat, Rat};

fn signed_power_sum(a: &[Rat], b: &[Rat], k: usize) -> Rat {
    let sa: Rat = a.iter().map(|x| pow(x, k)).sum();
    let sb: Rat = b.iter().map(|x| pow(x, k)).sum();
    if k % 2 == 1 {
        sa + sb
    } else {
        sa - sb
    }
}

/// p_k(λ) = Σ a_i^k + (−1)^{k−1} Σ b_i^k.
pub fn eval_p_on_diagram(k: usize, lambda: &Partition) -> Rat {
    assert!(k >= 1, "power sums are indexed from 1");
    let f = lambda.frobenius();
    signed_power_sum(&f.a, &f.b, k)
}

/// p_1(ω) = δ; p_k(ω) = Σ α_i^k + (−1)^{k−1} Σ β_i^k for k ≥ 2.
pub fn eval_p_on_point(k: usize, omega: &ThomaPoint) -> Rat {
    assert!(k >= 1, "power sums are indexed from 1");
    if k == 1 {
        return omega.delta().clone();
    }
    signed_power_sum(omega.alpha(), omega.beta(), k)
}

fn eval_with(f: &SymFn, pk: impl Fn(usize) -> Rat) -> Result<Rat> {
    if f.basis() == Basis::FS {
        return Err(Error::UnsupportedBasis("fs"));
    }
    let in_p = convert(f, Basis::P)?;
    let max = in_p.terms().flat_map(|(k, _)| k.parts().first().copied()).max().unwrap_or(0);
    let values: Vec<Rat> = (1..=max).map(pk).collect();
    Ok(in_p.terms().map(|(rho, c)| rho.parts().iter().fold(c.clone(), |acc, &k| acc * &values[k - 1])).sum())
}

pub fn eval_on_diagram(f: &SymFn, lambda: &Partition) -> Result<Rat> {
    eval_with(f, |k| eval_p_on_diagram(k, lambda))
}

pub fn eval_on_point(f: &SymFn, omega: &ThomaPoint) -> Result<Rat> {
    eval_with(f, |k| eval_p_on_point(k, omega))
}

/// FS_μ(λ) = l^{↓m} · dim(μ, λ) / dim λ with l = |λ|, m = |μ|.
pub fn fs_eval(mu: &Partition, lambda: &Partition) -> Rat {
    if !lambda.contains(mu) {
        return Rat::zero();
    }
    let l = rat(lambda.size() as i64);
    falling_factorial(&l, mu.size()) * from_biguint(&skew_dim(mu, lambda)) / from_biguint(&dim(lambda))
}

/// Pointwise value of an fs-basis combination.
pub fn fs_eval_fn(f: &SymFn, lambda: &Partition) -> Result<Rat> {
    if f.basis() != Basis::FS {
        return Err(Error::UnsupportedBasis(f.basis().name()));
    }
    Ok(f.terms().map(|(mu, c)| c * fs_eval(mu, lambda)).sum())
}

/// Evaluates S_μ(ω) for many μ at a fixed point by Jacobi–Trudi,
/// det[h_{μ_i − i + j}], with the h_n read off
/// H(t) = Π (1 − α_i t)^{−1} · Π (1 + β_j t) · e^{γt}, γ = δ − Σα − Σβ.
/// When μ has more rows than columns the dual form det[e_{μ′_i − i + j}] is
/// used, with E(t) the same series after α ↔ β.
pub struct SchurAtPoint {
    h: Vec<Rat>,
    e: Vec<Rat>,
}

fn h_series(alpha: &[Rat], beta: &[Rat], gamma: &Rat, n: usize) -> Vec<Rat> {
    let mut h: Vec<Rat> = (0..=n).map(|k| pow(gamma, k) / from_biguint(&factorial(k))).collect();
    for a in alpha {
        // multiplication by 1/(1 − a t)
        for k in 1..=n {
            let prev = h[k - 1].clone();
            h[k] += prev * a;
        }
    }
    for b in beta {
        for k in (1..=n).rev() {
            let prev = h[k - 1].clone();
            h[k] += prev * b;
        }
    }
    h
}

fn jacobi_trudi(seq: &[Rat], mu: &Partition) -> Rat {
    let len = mu.len();
    if len == 0 {
        return Rat::one();
    }
    let m: Vec<Vec<Rat>> = (0..len)
        .map(|i| {
            (0..len)
                .map(|j| {
                    let idx = mu.row(i) as i64 - i as i64 + j as i64;
                    if idx < 0 {
                        Rat::zero()
                    } else {
                        seq[idx as usize].clone()
                    }
                })
                .collect()
        })
        .collect();
    determinant(m)
}

impl SchurAtPoint {
    pub fn new(omega: &ThomaPoint, max_degree: usize) -> Self {
        let gamma = omega.gamma();
        SchurAtPoint {
            h: h_series(omega.alpha(), omega.beta(), &gamma, max_degree),
            e: h_series(omega.beta(), omega.alpha(), &gamma, max_degree),
        }
    }

    /// Panics if |μ| exceeds the degree given at construction.
    pub fn value(&self, mu: &Partition) -> Rat {
        assert!(mu.size() < self.h.len(), "degree {} beyond the precomputed range", mu.size());
        if mu.len() > mu.row(0) {
            jacobi_trudi(&self.e, &mu.transpose())
        } else {
            jacobi_trudi(&self.h, mu)
        }
    }
}

pub fn schur_at_point(mu: &Partition, omega: &ThomaPoint) -> Rat {
    SchurAtPoint::new(omega, mu.size()).value(mu)
}
