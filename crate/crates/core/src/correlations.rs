//! Point configurations of diagrams on r⁻¹(Z + ½), static and dynamic
//! correlation measures of the z-measure chains, and the backward recursion
//! for finite-dimensional distributions.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{RateMatrix, ZMeasureRates};
use crate::measures::{mixed_z_ensemble, Sampler, TruncatedChain, WeightedEnsemble};
use crate::partitions::Partition;
use crate::rational::{rat, ratio, require_positive, Rat};
use crate::symfunc::ParamPair;

/// Finite configuration on ℝ \ {0}: positive points from the arms, negative
/// points from the legs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfig {
    pub points: Vec<Rat>,
}

impl PointConfig {
    pub fn contains(&self, x: &Rat) -> bool {
        self.points.iter().any(|p| p == x)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Σ |x| over the configuration.
    pub fn total_mass(&self) -> Rat {
        self.points.iter().map(|p| p.abs()).sum()
    }

    /// Number of points with |x| ≥ ε.
    pub fn count_outside(&self, eps: &Rat) -> usize {
        self.points.iter().filter(|p| p.abs() >= *eps).count()
    }
}

/// {a_i / r} ∪ {−b_i / r} from the modified Frobenius coordinates.
pub fn config_of(lambda: &Partition, r: &Rat) -> Result<PointConfig> {
    require_positive("r", r)?;
    let f = lambda.frobenius();
    let mut points: Vec<Rat> = f.a.iter().map(|a| a / r).collect();
    points.extend(f.b.iter().map(|b| -(b / r)));
    Ok(PointConfig { points })
}

/// Whether x lies on r⁻¹(Z + ½).
pub fn is_lattice_point(x: &Rat, r: &Rat) -> bool {
    let y = x * r - ratio(1, 2);
    y.is_integer()
}

/// |{x : |x| ≥ ε}| · ε ≤ |φ_r(λ)| = |λ| / r, checked in exact arithmetic.
pub fn ball_bound_holds(lambda: &Partition, r: &Rat, eps: &Rat) -> Result<bool> {
    require_positive("eps", eps)?;
    let cfg = config_of(lambda, r)?;
    let lhs = rat(cfg.count_outside(eps) as i64) * eps;
    Ok(lhs <= rat(lambda.size() as i64) / r)
}

/// A probability computed on a truncated window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowValue {
    pub value: f64,
    /// |true value − value| ≤ error_bound.
    pub error_bound: f64,
    /// Some queried point is not on the lattice; the value is 0.
    pub off_lattice: bool,
}

fn check_points(points: &[Rat], r: &Rat) -> Result<bool> {
    let distinct: BTreeSet<&Rat> = points.iter().collect();
    if distinct.len() != points.len() {
        return Err(Error::InvalidQuery("correlation points must be distinct".into()));
    }
    if points.iter().any(|p| p.is_zero()) {
        return Err(Error::InvalidQuery("correlation points must be nonzero".into()));
    }
    Ok(points.iter().all(|p| is_lattice_point(p, r)))
}

/// P[pts ⊆ config_of(λ, r)] under M^{σ,r}, summed over |λ| ≤ n.
pub fn static_correlation(sigma: &ParamPair, r: &Rat, pts: &[Rat], n: usize) -> Result<WindowValue> {
    let ensemble = mixed_z_ensemble(sigma, r, n)?;
    static_correlation_in(&ensemble, r, pts)
}

pub fn static_correlation_in(ensemble: &WeightedEnsemble, r: &Rat, pts: &[Rat]) -> Result<WindowValue> {
    if !check_points(pts, r)? {
        return Ok(WindowValue { value: 0.0, error_bound: 0.0, off_lattice: true });
    }
    let mut value = 0.0;
    for (lambda, w) in ensemble.iter() {
        let cfg = config_of(lambda, r)?;
        if pts.iter().all(|p| cfg.contains(p)) {
            value += w;
        }
    }
    Ok(WindowValue { value, error_bound: ensemble.tail_bound, off_lattice: false })
}

/// Sample mean and standard error of 1[pts ⊆ config] over `samples` draws.
pub fn mc_static_correlation<R: Rng + ?Sized>(
    sampler: &Sampler,
    r: &Rat,
    pts: &[Rat],
    samples: usize,
    rng: &mut R,
) -> Result<(f64, f64)> {
    if !check_points(pts, r)? {
        return Ok((0.0, 0.0));
    }
    let mut hits = 0usize;
    for _ in 0..samples {
        let cfg = config_of(&sampler.sample(rng)?, r)?;
        if pts.iter().all(|p| cfg.contains(p)) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    Ok((p, (p * (1.0 - p) / samples as f64).sqrt()))
}

/// ⟨g₁ ⊗ ⋯ ⊗ g_k, M(t₁, …, t_k)⟩ for the chain started from `m0`, by the
/// backward recursion h_k = g_k, h_i = g_i · T(t_{i+1} − t_i) h_{i+1}, paired
/// as ⟨T(t₁) h₁, m0⟩. The g's must take values in [0, 1]; the error bound is
/// the initial tail plus the probability of leaving the window by t_k.
pub fn fdd<G: RateMatrix<State = Partition>>(
    g: &G,
    m0: &WeightedEnsemble,
    times: &[f64],
    gs: &[&dyn Fn(&Partition) -> f64],
    n: usize,
) -> Result<WindowValue> {
    let chain = TruncatedChain::new(g, n);
    fdd_on_chain(&chain, m0, times, gs)
}

pub fn fdd_on_chain(
    chain: &TruncatedChain<Partition>,
    m0: &WeightedEnsemble,
    times: &[f64],
    gs: &[&dyn Fn(&Partition) -> f64],
) -> Result<WindowValue> {
    if times.is_empty() || times.len() != gs.len() {
        return Err(Error::InvalidQuery("need one g-function per time".into()));
    }
    if times[0] < 0.0 || times.windows(2).any(|w| w[1] < w[0]) || times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidQuery("times must be finite, nonnegative and weakly increasing".into()));
    }
    let states = chain.states();
    let eval = |g: &dyn Fn(&Partition) -> f64| -> Result<Vec<f64>> {
        states
            .iter()
            .map(|s| {
                let v = g(s);
                if (0.0..=1.0).contains(&v) {
                    Ok(v)
                } else {
                    Err(Error::InvalidQuery(format!("g-function value {v} at {s} outside [0, 1]")))
                }
            })
            .collect()
    };
    let k = times.len();
    let mut h = eval(gs[k - 1])?;
    for i in (0..k - 1).rev() {
        let (th, _) = chain.apply_to_function(&h, times[i + 1] - times[i]);
        h = eval(gs[i])?.iter().zip(&th).map(|(g, t)| g * t).collect();
    }
    let (h0, _) = chain.apply_to_function(&h, times[0]);
    let mut m = vec![0.0; states.len()];
    for (lambda, w) in m0.iter() {
        let i = chain
            .index_of(lambda)
            .ok_or_else(|| Error::InvalidQuery(format!("initial state {lambda} lies outside the window")))?;
        m[i] += w;
    }
    let value = m.iter().zip(&h0).map(|(a, b)| a * b).sum();
    let (_, leaked) = chain.evolve_vector(&m, times[k - 1]);
    Ok(WindowValue { value, error_bound: m0.tail_bound + leaked, off_lattice: false })
}

/// Space-time points (x, t) with weakly increasing times.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceTimeQuery {
    pub points: Vec<(Rat, f64)>,
}

impl SpaceTimeQuery {
    pub fn new(points: Vec<(Rat, f64)>) -> Result<Self> {
        if points.iter().any(|(x, _)| x.is_zero()) {
            return Err(Error::InvalidQuery("positions must be nonzero".into()));
        }
        if points.windows(2).any(|w| w[1].1 < w[0].1) {
            return Err(Error::InvalidQuery("times must be weakly increasing".into()));
        }
        Ok(SpaceTimeQuery { points })
    }

    /// Positions grouped by distinct time.
    fn slices(&self) -> Vec<(f64, Vec<Rat>)> {
        let mut out: Vec<(f64, Vec<Rat>)> = Vec::new();
        for (x, t) in &self.points {
            match out.last_mut() {
                Some((s, xs)) if *s == *t => xs.push(x.clone()),
                _ => out.push((*t, vec![x.clone()])),
            }
        }
        out
    }
}

type Indicator = Box<dyn Fn(&Partition) -> f64>;

/// Probability under the stationary chain that at every queried time the
/// configuration contains the points queried at that time.
pub fn dynamic_correlation(sigma: &ParamPair, r: &Rat, q: &SpaceTimeQuery, n: usize) -> Result<WindowValue> {
    let chain = TruncatedChain::new(&ZMeasureRates::new(sigma.clone(), r.clone())?, n);
    let m0 = mixed_z_ensemble(sigma, r, n)?;
    dynamic_correlation_on(&chain, &m0, r, q)
}

pub fn dynamic_correlation_on(
    chain: &TruncatedChain<Partition>,
    m0: &WeightedEnsemble,
    r: &Rat,
    q: &SpaceTimeQuery,
) -> Result<WindowValue> {
    let slices = q.slices();
    if slices.is_empty() {
        return Ok(WindowValue { value: 1.0, error_bound: m0.tail_bound, off_lattice: false });
    }
    let mut lattice = true;
    for (_, xs) in &slices {
        lattice &= check_points(xs, r)?;
    }
    if !lattice {
        return Ok(WindowValue { value: 0.0, error_bound: 0.0, off_lattice: true });
    }
    let indicators: Vec<Indicator> = slices
        .iter()
        .map(|(_, xs)| {
            let xs = xs.clone();
            let r = r.clone();
            Box::new(move |lambda: &Partition| {
                let cfg = config_of(lambda, &r).expect("r checked positive");
                if xs.iter().all(|x| cfg.contains(x)) {
                    1.0
                } else {
                    0.0
                }
            }) as Box<dyn Fn(&Partition) -> f64>
        })
        .collect();
    let gs: Vec<&dyn Fn(&Partition) -> f64> = indicators.iter().map(|b| b.as_ref()).collect();
    let times: Vec<f64> = slices.iter().map(|(t, _)| *t).collect();
    fdd_on_chain(chain, m0, &times, &gs)
}

/// Point of r⁻¹(Z + ½) with index k: (k + ½)/r.
pub fn lattice_point(k: i64, r: &Rat) -> Rat {
    (rat(k) + ratio(1, 2)) / r
}
