use std::collections::HashMap;

use super::{WeightedEnsemble, Weights};
use crate::error::{Error, Result};
use crate::generators::RateMatrix;
use crate::partitions::Partition;
use crate::rational::to_f64;
use crate::stats::{poisson_pmf, poisson_tail};

/// Uniformization truncation: terms beyond the cut carry at most this mass.
const UNIFORMIZATION_TOL: f64 = 1e-10;

/// A Q-matrix restricted to the window grade ≤ N. Jumps leaving the window
/// are kept in the exit rates, so mass that leaves is lost and counted.
#[derive(Clone, Debug)]
pub struct TruncatedChain<S> {
    states: Vec<S>,
    index: HashMap<S, usize>,
    rows: Vec<Vec<(usize, f64)>>,
    exit: Vec<f64>,
    rate: f64,
}

impl<S: Clone + Eq + std::hash::Hash> TruncatedChain<S> {
    pub fn new<G: RateMatrix<State = S>>(g: &G, n: usize) -> Self {
        let states = g.states_up_to(n);
        let index: HashMap<S, usize> = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let mut rows = Vec::with_capacity(states.len());
        let mut exit = Vec::with_capacity(states.len());
        for s in &states {
            rows.push(
                g.off_diagonal(s).into_iter().filter_map(|(t, q)| index.get(&t).map(|&j| (j, to_f64(&q)))).collect(),
            );
            exit.push(to_f64(&g.exit_rate(s)));
        }
        let rate = exit.iter().cloned().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        TruncatedChain { states, index, rows, exit, rate }
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn index_of(&self, s: &S) -> Option<usize> {
        self.index.get(s).copied()
    }

    fn cut(&self, t: f64) -> usize {
        let x = self.rate * t;
        let mut k = x.floor() as usize;
        while poisson_tail(x, k + 1) > UNIFORMIZATION_TOL {
            k += 1;
        }
        k
    }

    /// Poisson-weighted sum of k-fold applications of `step`, and the
    /// Poisson mass beyond the cut.
    fn uniformize(&self, v: &[f64], t: f64, step: impl Fn(&[f64]) -> Vec<f64>) -> (Vec<f64>, f64) {
        if t == 0.0 {
            return (v.to_vec(), 0.0);
        }
        let x = self.rate * t;
        let k_max = self.cut(t);
        let mut out = vec![0.0; v.len()];
        let mut cur = v.to_vec();
        let mut used = 0.0;
        for k in 0..=k_max {
            let w = poisson_pmf(x, k);
            used += w;
            if w > 0.0 {
                for (o, c) in out.iter_mut().zip(&cur) {
                    *o += w * c;
                }
            }
            if k < k_max {
                cur = step(&cur);
            }
        }
        (out, (1.0 - used).max(0.0))
    }

    /// v ↦ v e^{tQ_N}; returns the evolved row vector and the mass no longer
    /// accounted for (leak plus uniformization residual).
    pub fn evolve_vector(&self, v: &[f64], t: f64) -> (Vec<f64>, f64) {
        let before: f64 = v.iter().sum();
        let (out, _) = self.uniformize(v, t, |cur| {
            let mut next: Vec<f64> = cur.iter().zip(&self.exit).map(|(c, e)| c * (1.0 - e / self.rate)).collect();
            for (i, row) in self.rows.iter().enumerate() {
                if cur[i] != 0.0 {
                    for &(j, q) in row {
                        next[j] += cur[i] * q / self.rate;
                    }
                }
            }
            next
        });
        let after: f64 = out.iter().sum();
        (out, (before - after).max(0.0))
    }

    /// f ↦ e^{tQ_N} f for a column vector, plus the per-state probability of
    /// the truncated chain still being accounted for at time t.
    pub fn apply_to_function(&self, f: &[f64], t: f64) -> (Vec<f64>, Vec<f64>) {
        let step = |cur: &[f64]| -> Vec<f64> {
            self.rows
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let mut acc = cur[i] * (1.0 - self.exit[i] / self.rate);
                    for &(j, q) in row {
                        acc += q / self.rate * cur[j];
                    }
                    acc
                })
                .collect()
        };
        let (tf, _) = self.uniformize(f, t, step);
        let (survival, _) = self.uniformize(&vec![1.0; f.len()], t, step);
        (tf, survival)
    }
}

/// m0 e^{tQ_N} over the window |λ| ≤ n; the result's tail bound is the
/// initial tail plus all mass lost to the boundary or the series cut.
pub fn evolve<G: RateMatrix<State = Partition>>(
    g: &G,
    m0: &WeightedEnsemble,
    t: f64,
    n: usize,
) -> Result<WeightedEnsemble> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidQuery(format!("evolution time {t} must be finite and ≥ 0")));
    }
    let chain = TruncatedChain::new(g, n);
    let mut v = vec![0.0; chain.states().len()];
    for (lambda, w) in m0.iter() {
        let i = chain
            .index_of(lambda)
            .ok_or_else(|| Error::InvalidQuery(format!("initial state {lambda} lies outside the window |λ| ≤ {n}")))?;
        v[i] += w;
    }
    let (out, lost) = chain.evolve_vector(&v, t);
    Ok(WeightedEnsemble {
        support: chain.states().to_vec(),
        weights: Weights::Float(out),
        max_size: n,
        tail_bound: m0.tail_bound + lost,
    })
}
