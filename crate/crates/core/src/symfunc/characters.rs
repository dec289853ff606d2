//! Irreducible characters of the symmetric group by the Murnaghan–Nakayama
//! rule, run on beta-sets (bead positions of an abacus).

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::partitions::Partition;
use crate::rational::factorial;

type Key = (Partition, Partition);

fn cache() -> &'static RwLock<HashMap<Key, BigInt>> {
    static CACHE: OnceLock<RwLock<HashMap<Key, BigInt>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// χ^λ(ρ): the character of the irreducible representation λ on the class of
/// cycle type ρ. Zero when |λ| ≠ |ρ|.
pub fn character(lambda: &Partition, rho: &Partition) -> BigInt {
    if lambda.size() != rho.size() {
        return BigInt::zero();
    }
    if rho.is_empty() {
        return BigInt::one();
    }
    let key = (lambda.clone(), rho.clone());
    if let Some(v) = cache().read().unwrap().get(&key) {
        return v.clone();
    }
    let k = rho.parts()[0];
    let rest = Partition::from_parts(&rho.parts()[1..]);
    let len = lambda.len();
    let beta: Vec<usize> = (0..len).map(|i| lambda.row(i) + len - 1 - i).collect();
    let mut total = BigInt::zero();
    for (idx, &b) in beta.iter().enumerate() {
        if b < k || beta.contains(&(b - k)) {
            continue;
        }
        // Moving a bead from b to b-k removes a k-rim hook; its height is
        // the number of beads jumped over.
        let height = beta.iter().filter(|&&g| g > b - k && g < b).count();
        let mut next = beta.clone();
        next[idx] = b - k;
        let smaller = from_beta(next);
        let chi = character(&smaller, &rest);
        if height % 2 == 0 {
            total += chi;
        } else {
            total -= chi;
        }
    }
    cache().write().unwrap().insert(key, total.clone());
    total
}

fn from_beta(mut beta: Vec<usize>) -> Partition {
    beta.sort_unstable_by(|a, b| b.cmp(a));
    let len = beta.len();
    let parts = beta.iter().enumerate().map(|(i, &b)| b - (len - 1 - i)).collect();
    Partition::new(parts).expect("beta-set yields a partition")
}

/// z_ρ = Π_i i^{m_i} m_i!, the centralizer order of a permutation of type ρ.
pub fn z_factor(rho: &Partition) -> BigUint {
    let mut mult: HashMap<usize, usize> = HashMap::new();
    for &p in rho.parts() {
        *mult.entry(p).or_default() += 1;
    }
    mult.into_iter().fold(BigUint::one(), |acc, (i, m)| acc * BigUint::from(i).pow(m as u32) * factorial(m))
}
