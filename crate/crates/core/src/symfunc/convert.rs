//! Changes of basis between p, e and s.
//!
//! The power sums act as the hub: s ↔ p through characters, e ↔ p through
//! Newton's identities. Schur to elementary goes directly through the dual
//! Jacobi–Trudi determinant.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::One;

use super::characters::{character, z_factor};
use super::{Basis, SymFn};
use crate::error::{Error, Result};
use crate::partitions::{enumerate, Partition};
use crate::rational::{rat, Rat};

pub fn convert(f: &SymFn, target: Basis) -> Result<SymFn> {
    if f.basis() == Basis::FS {
        return Err(Error::UnsupportedBasis("fs"));
    }
    if target == Basis::FS {
        return Err(Error::UnsupportedBasis("fs"));
    }
    if f.basis() == target {
        return Ok(f.clone());
    }
    if f.basis() == Basis::S && target == Basis::E {
        return Ok(linear_map(f, Basis::E, schur_in_e));
    }
    let in_p = match f.basis() {
        Basis::P => f.clone(),
        Basis::S => linear_map(f, Basis::P, schur_in_p),
        Basis::E => linear_map(f, Basis::P, elementary_in_p),
        Basis::FS => unreachable!(),
    };
    Ok(match target {
        Basis::P => in_p,
        Basis::S => linear_map(&in_p, Basis::S, power_in_s),
        Basis::E => linear_map(&in_p, Basis::E, power_in_e),
        Basis::FS => unreachable!(),
    })
}

fn linear_map(f: &SymFn, target: Basis, image: fn(&Partition) -> SymFn) -> SymFn {
    let mut out = SymFn::zero(target);
    for (k, c) in f.terms() {
        out.add_scaled(&image(k), c);
    }
    out
}

type Memo = RwLock<HashMap<(Basis, Basis, Partition), SymFn>>;

fn memo() -> &'static Memo {
    static M: OnceLock<Memo> = OnceLock::new();
    M.get_or_init(|| RwLock::new(HashMap::new()))
}

fn memoized(from: Basis, to: Basis, index: &Partition, build: impl FnOnce() -> SymFn) -> SymFn {
    let key = (from, to, index.clone());
    if let Some(v) = memo().read().unwrap().get(&key) {
        return v.clone();
    }
    let v = build();
    memo().write().unwrap().insert(key, v.clone());
    v
}

/// s_λ = Σ_ρ χ^λ(ρ)/z_ρ · p_ρ.
fn schur_in_p(lambda: &Partition) -> SymFn {
    memoized(Basis::S, Basis::P, lambda, || {
        SymFn::from_terms(
            Basis::P,
            enumerate(lambda.size()).into_iter().map(|rho| {
                let c = Rat::new(character(lambda, &rho), BigInt::from(z_factor(&rho)));
                (rho, c)
            }),
        )
    })
}

/// p_ρ = Σ_λ χ^λ(ρ) s_λ.
fn power_in_s(rho: &Partition) -> SymFn {
    memoized(Basis::P, Basis::S, rho, || {
        SymFn::from_terms(
            Basis::S,
            enumerate(rho.size()).into_iter().map(|l| {
                let c = Rat::from_integer(character(&l, rho));
                (l, c)
            }),
        )
    })
}

/// e_n = Σ_{ρ ⊢ n} (−1)^{n−ℓ(ρ)} p_ρ / z_ρ, extended multiplicatively.
fn elementary_in_p(lambda: &Partition) -> SymFn {
    memoized(Basis::E, Basis::P, lambda, || {
        let mut acc = SymFn::one(Basis::P);
        for &n in lambda.parts() {
            let en = SymFn::from_terms(
                Basis::P,
                enumerate(n).into_iter().map(|rho| {
                    let sign = if (n - rho.len()) % 2 == 0 { 1 } else { -1 };
                    let c = Rat::new(BigInt::from(sign), BigInt::from(z_factor(&rho)));
                    (rho, c)
                }),
            );
            acc = acc.mul(&en).expect("p basis is multiplicative");
        }
        acc
    })
}

/// p_n in the e basis from Newton's identity
/// n e_n = Σ_{i=1}^{n} (−1)^{i−1} e_{n−i} p_i.
fn power_sum_in_e(n: usize) -> SymFn {
    let index = Partition::from_parts(&[n]);
    memoized(Basis::P, Basis::E, &index, || {
        // (−1)^{n−1} p_n = n e_n − Σ_{i<n} (−1)^{i−1} e_{n−i} p_i
        let mut rhs = SymFn::term(Basis::E, index.clone(), rat(n as i64));
        for i in 1..n {
            let sign = if (i - 1) % 2 == 0 { -Rat::one() } else { Rat::one() };
            let e = SymFn::generator(Basis::E, n - i);
            let term = e.mul(&power_sum_in_e(i)).expect("e basis is multiplicative");
            rhs.add_scaled(&term, &sign);
        }
        if (n - 1) % 2 == 1 {
            rhs = -&rhs;
        }
        rhs
    })
}

fn power_in_e(rho: &Partition) -> SymFn {
    let mut acc = SymFn::one(Basis::E);
    for &k in rho.parts() {
        acc = acc.mul(&power_sum_in_e(k)).expect("e basis is multiplicative");
    }
    acc
}

/// Dual Jacobi–Trudi: s_λ = det[e_{λ′_i − i + j}], expanded by a
/// row-by-row Laplace recursion memoized on the set of used columns.
fn schur_in_e(lambda: &Partition) -> SymFn {
    memoized(Basis::S, Basis::E, lambda, || {
        let conj = lambda.transpose();
        let k = conj.len();
        if k == 0 {
            return SymFn::one(Basis::E);
        }
        let entry = |i: usize, j: usize| -> Option<SymFn> {
            let idx = conj.row(i) as i64 - i as i64 + j as i64;
            match idx {
                0 => Some(SymFn::one(Basis::E)),
                n if n > 0 => Some(SymFn::generator(Basis::E, n as usize)),
                _ => None,
            }
        };
        let mut table: HashMap<u32, SymFn> = HashMap::new();
        table.insert(0, SymFn::one(Basis::E));
        // table[mask] = signed sum over placements of rows 0..|mask| into columns `mask`.
        for row in 0..k {
            let mut next: HashMap<u32, SymFn> = HashMap::new();
            for (mask, partial) in &table {
                for col in 0..k {
                    if mask & (1 << col) != 0 {
                        continue;
                    }
                    let Some(e) = entry(row, col) else { continue };
                    let crossings = (mask >> col).count_ones();
                    let sign = if crossings % 2 == 0 { Rat::one() } else { -Rat::one() };
                    let term = partial.mul(&e).expect("e basis is multiplicative");
                    next.entry(mask | (1 << col)).or_insert_with(|| SymFn::zero(Basis::E)).add_scaled(&term, &sign);
                }
            }
            table = next;
        }
        table.remove(&((1u32 << k) - 1)).unwrap_or_else(|| SymFn::zero(Basis::E))
    })
}
