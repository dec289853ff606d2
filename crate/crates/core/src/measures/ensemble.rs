use serde::{Deserialize, Serialize};

use crate::partitions::Partition;
use crate::rational::{to_f64, Rat};

/// Weights of a truncated measure.
#[derive(Clone, Debug, PartialEq)]
pub enum Weights {
    /// Exact shape parts; the true weight is `scalar · shape[i]`.
    Exact { shape: Vec<Rat>, scalar: f64 },
    /// Normalized floating-point weights.
    Float(Vec<f64>),
}

/// A measure on Young diagrams restricted to |λ| ≤ `max_size`, with a bound
/// on the mass lying outside the window.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedEnsemble {
    pub support: Vec<Partition>,
    pub weights: Weights,
    pub max_size: usize,
    pub tail_bound: f64,
}

impl WeightedEnsemble {
    pub fn delta(lambda: &Partition) -> Self {
        WeightedEnsemble {
            support: vec![lambda.clone()],
            weights: Weights::Float(vec![1.0]),
            max_size: lambda.size(),
            tail_bound: 0.0,
        }
    }

    pub fn float_weights(&self) -> Vec<f64> {
        match &self.weights {
            Weights::Exact { shape, scalar } => shape.iter().map(|w| scalar * to_f64(w)).collect(),
            Weights::Float(w) => w.clone(),
        }
    }

    pub fn to_float(&self) -> WeightedEnsemble {
        WeightedEnsemble { weights: Weights::Float(self.float_weights()), ..self.clone() }
    }

    pub fn total_mass(&self) -> f64 {
        self.float_weights().iter().sum()
    }

    pub fn weight_of(&self, lambda: &Partition) -> f64 {
        self.support.iter().position(|p| p == lambda).map(|i| self.float_weights()[i]).unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, f64)> {
        self.support.iter().zip(self.float_weights())
    }

    /// Total variation distance on the common window, ½ Σ |p − q|, plus the
    /// larger of the two tail bounds.
    pub fn tv_distance(&self, other: &WeightedEnsemble) -> (f64, f64) {
        use std::collections::HashMap;
        let mut diff: HashMap<&Partition, f64> = HashMap::new();
        for (p, w) in self.iter() {
            *diff.entry(p).or_default() += w;
        }
        for (p, w) in other.iter() {
            *diff.entry(p).or_default() -= w;
        }
        let on_window = 0.5 * diff.values().map(|d| d.abs()).sum::<f64>();
        (on_window, self.tail_bound.max(other.tail_bound))
    }
}

/// A piecewise-constant sample path started at t = 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<S> {
    pub events: Vec<(f64, S)>,
    pub t_end: f64,
}

impl<S: Clone> Trajectory<S> {
    pub fn state_at(&self, t: f64) -> &S {
        let idx = self.events.partition_point(|(s, _)| *s <= t);
        &self.events[idx.saturating_sub(1)].1
    }

    /// Holding times of all completed sojourns before `t_end`.
    pub fn holding_times(&self) -> Vec<(S, f64)> {
        self.events.windows(2).map(|w| (w[0].1.clone(), w[1].0 - w[0].0)).collect()
    }

    /// ∫_0^{t_end} f(X_s) ds / t_end.
    pub fn time_average(&self, f: impl Fn(&S) -> f64) -> f64 {
        if self.t_end <= 0.0 {
            return f(&self.events[0].1);
        }
        let mut acc = 0.0;
        for (i, (t, s)) in self.events.iter().enumerate() {
            let until = self.events.get(i + 1).map_or(self.t_end, |e| e.0).min(self.t_end);
            if until > *t {
                acc += f(s) * (until - t);
            }
        }
        acc / self.t_end
    }
}
