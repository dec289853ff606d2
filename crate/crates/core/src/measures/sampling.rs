use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::{size_marginal, z_scalar, Trajectory};
use crate::error::{Error, Result};
use crate::generators::RateMatrix;
use crate::partitions::{enumerate, Partition};
use crate::rational::{require_positive, to_f64, Rat};
use crate::symfunc::ParamPair;

/// Independent generator for block `stream` under a master seed.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// What to do when a drawn size lies beyond the table cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CapPolicy {
    Resample,
    Abort,
}

struct ShapeTable {
    shapes: Vec<Partition>,
    cumulative: Vec<f64>,
}

/// Two-stage exact sampler for M^{σ,r}: the size from its negative binomial
/// marginal, then the shape from the conditional law on Y_l.
pub struct Sampler {
    sigma: ParamPair,
    cap: usize,
    policy: CapPolicy,
    size_cumulative: Vec<f64>,
    tables: Vec<OnceLock<ShapeTable>>,
    resampled: std::sync::atomic::AtomicU64,
}

impl Sampler {
    pub fn new(sigma: ParamPair, r: Rat, cap: usize, policy: CapPolicy) -> Result<Self> {
        require_positive("r", &r)?;
        let scalar = z_scalar(&sigma, &r);
        let mut acc = 0.0;
        let mut size_cumulative = Vec::with_capacity(cap + 1);
        for l in 0..=cap {
            acc += scalar * to_f64(&size_marginal(&sigma, &r, l)?);
            size_cumulative.push(acc);
        }
        Ok(Sampler {
            sigma,
            cap,
            policy,
            size_cumulative,
            tables: (0..=cap).map(|_| OnceLock::new()).collect(),
            resampled: 0.into(),
        })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Probability that a size draw lands beyond the cap.
    pub fn cap_tail(&self) -> f64 {
        (1.0 - self.size_cumulative[self.cap]).max(0.0)
    }

    /// Number of draws discarded under `CapPolicy::Resample`.
    pub fn resampled(&self) -> u64 {
        self.resampled.load(std::sync::atomic::Ordering::Relaxed)
    }

    /// Conditional law on Y_l, proportional to Π w(c) / Π h², built in log space.
    fn table(&self, l: usize) -> &ShapeTable {
        self.tables[l].get_or_init(|| {
            let shapes = enumerate(l);
            let s1 = to_f64(self.sigma.sigma1());
            let s2 = to_f64(self.sigma.sigma2());
            let logs: Vec<f64> = shapes
                .iter()
                .map(|lambda| {
                    let w: f64 = lambda
                        .contents()
                        .map(|c| {
                            let c = c as f64;
                            (c * c + s1 * c + s2).ln()
                        })
                        .sum();
                    let h: f64 = lambda.hooks().iter().map(|&h| (h as f64).ln()).sum();
                    w - 2.0 * h
                })
                .collect();
            let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut acc = 0.0;
            let mut cumulative: Vec<f64> = logs
                .iter()
                .map(|v| {
                    acc += (v - top).exp();
                    acc
                })
                .collect();
            for c in &mut cumulative {
                *c /= acc;
            }
            ShapeTable { shapes, cumulative }
        })
    }

    fn draw_size<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<usize> {
        loop {
            let u: f64 = rng.random();
            let l = self.size_cumulative.partition_point(|&c| c <= u);
            if l <= self.cap {
                return Ok(l);
            }
            match self.policy {
                CapPolicy::Resample => {
                    self.resampled.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                }
                CapPolicy::Abort => return Err(Error::CapExceeded { size: l, cap: self.cap }),
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Partition> {
        let l = self.draw_size(rng)?;
        let table = self.table(l);
        let u: f64 = rng.random();
        let i = table.cumulative.partition_point(|&c| c <= u).min(table.shapes.len() - 1);
        Ok(table.shapes[i].clone())
    }
}

/// Event-driven simulation up to `t_end`: exponential holding times with rate
/// −Q(s,s), jumps proportional to the off-diagonal row.
pub fn gillespie<G: RateMatrix, R: Rng + ?Sized>(
    g: &G,
    start: G::State,
    t_end: f64,
    rng: &mut R,
) -> Trajectory<G::State> {
    let mut events = vec![(0.0, start.clone())];
    let mut state = start;
    let mut t = 0.0;
    loop {
        let exit = to_f64(&g.exit_rate(&state));
        if exit <= 0.0 {
            break;
        }
        let u: f64 = rng.random();
        t += -(1.0 - u).ln() / exit;
        if t > t_end {
            break;
        }
        let row = g.off_diagonal_f64(&state);
        let total: f64 = row.iter().map(|(_, q)| q).sum();
        let mut v = rng.random::<f64>() * total;
        let mut next = row.len() - 1;
        for (i, (_, q)) in row.iter().enumerate() {
            if v < *q {
                next = i;
                break;
            }
            v -= q;
        }
        state = row[next].0.clone();
        events.push((t, state.clone()));
    }
    Trajectory { events, t_end }
}
