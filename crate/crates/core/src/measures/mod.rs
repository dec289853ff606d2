//! Mixed z-measures and their size marginals, the Poissonized Plancherel
//! measure and flow, and exact stationarity checks.

mod ensemble;
mod sampling;
mod semigroup;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::generators::{RateMatrix, ZMeasureRates};
use crate::links::bouquet_row;
use crate::partitions::{dim, enumerate, enumerate_up_to, Partition};
use crate::rational::{
    factorial, fmt_rat, from_biguint, from_f64, pow, rat, require_positive, rising_factorial, to_f64, Rat,
};
use crate::stats::neg_binomial_tail;
use crate::symfunc::{ParamPair, ThomaPoint};

pub use ensemble::{Trajectory, WeightedEnsemble, Weights};
pub use sampling::{gillespie, stream_rng, CapPolicy, Sampler};
pub use semigroup::{evolve, TruncatedChain};

/// (dim λ / |λ|!)².
fn plancherel_shape(lambda: &Partition) -> Rat {
    let q = from_biguint(&dim(lambda)) / from_biguint(&factorial(lambda.size()));
    &q * &q
}

fn xi(r: &Rat) -> Rat {
    r / (r + Rat::one())
}

/// Shape part (r/(r+1))^{|λ|} Π_{□∈λ} (c² + σ₁c + σ₂) (dim λ / |λ|!)².
pub fn z_weight(sigma: &ParamPair, r: &Rat, lambda: &Partition) -> Result<Rat> {
    require_positive("r", r)?;
    Ok(pow(&xi(r), lambda.size()) * sigma.content_product(lambda, &Partition::empty()) * plancherel_shape(lambda))
}

/// The normalization (r+1)^{−σ₂} carried outside the shape part.
pub fn z_scalar(sigma: &ParamPair, r: &Rat) -> f64 {
    (to_f64(r) + 1.0).powf(-to_f64(sigma.sigma2()))
}

/// Closed form (σ₂)_l / l! · (r/(r+1))^l with the rising factorial.
pub fn size_marginal(sigma: &ParamPair, r: &Rat, l: usize) -> Result<Rat> {
    require_positive("r", r)?;
    Ok(rising_factorial(sigma.sigma2(), l) / from_biguint(&factorial(l)) * pow(&xi(r), l))
}

/// Σ_{λ ∈ Y_l} z_weight(λ), by enumeration.
pub fn size_marginal_sum(sigma: &ParamPair, r: &Rat, l: usize) -> Result<Rat> {
    let mut acc = Rat::zero();
    for lambda in enumerate(l) {
        acc += z_weight(sigma, r, &lambda)?;
    }
    Ok(acc)
}

/// M^{σ,r} restricted to |λ| ≤ n with exact shape weights.
pub fn mixed_z_ensemble(sigma: &ParamPair, r: &Rat, n: usize) -> Result<WeightedEnsemble> {
    let support = enumerate_up_to(n);
    let shape = support.iter().map(|l| z_weight(sigma, r, l)).collect::<Result<Vec<_>>>()?;
    Ok(WeightedEnsemble {
        support,
        weights: Weights::Exact { shape, scalar: z_scalar(sigma, r) },
        max_size: n,
        tail_bound: neg_binomial_tail(to_f64(sigma.sigma2()), to_f64(r), n + 1),
    })
}

/// e^{−θ} θ^{|λ|} (dim λ / |λ|!)².
pub fn plancherel_measure(theta: &Rat, lambda: &Partition) -> Result<f64> {
    require_positive("theta", theta)?;
    Ok((-to_f64(theta)).exp() * to_f64(&(pow(theta, lambda.size()) * plancherel_shape(lambda))))
}

pub fn plancherel_ensemble(theta: &Rat, n: usize) -> Result<WeightedEnsemble> {
    require_positive("theta", theta)?;
    let support = enumerate_up_to(n);
    let shape = support.iter().map(|l| pow(theta, l.size()) * plancherel_shape(l)).collect();
    let x = to_f64(theta);
    Ok(WeightedEnsemble {
        support,
        weights: Weights::Exact { shape, scalar: (-x).exp() },
        max_size: n,
        tail_bound: crate::stats::poisson_tail(x, n + 1),
    })
}

/// The flow written in q = e^{−t} ∈ (0, 1]: (α, β, δ) ↦ (qα, qβ, qδ + 1 − q).
/// Composition is multiplication of the q's, so the semigroup law is exact.
pub fn plancherel_flow_q(q: &Rat, omega: &ThomaPoint) -> Result<ThomaPoint> {
    if q <= &Rat::zero() || q > &Rat::one() {
        return Err(Error::InvalidQuery(format!("flow parameter q = {q} outside (0, 1]")));
    }
    let scale = |v: &[Rat]| v.iter().map(|x| q * x).collect::<Vec<_>>();
    ThomaPoint::new(scale(omega.alpha()), scale(omega.beta()), q * omega.delta() + Rat::one() - q)
}

/// P(t) for real t ≥ 0, with e^{−t} rounded to the nearest double.
pub fn plancherel_flow(t: f64, omega: &ThomaPoint) -> Result<ThomaPoint> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidQuery(format!("flow time {t} must be finite and ≥ 0")));
    }
    plancherel_flow_q(&from_f64((-t).exp()), omega)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BalanceReport {
    pub edges_checked: usize,
    pub failures: Vec<(Partition, Partition)>,
}

impl BalanceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// z_weight(λ)Q(λ, λ+□) = z_weight(λ+□)Q(λ+□, λ) on every edge with |λ| < n.
pub fn detailed_balance_check(sigma: &ParamPair, r: &Rat, n: usize) -> Result<BalanceReport> {
    let q = ZMeasureRates::new(sigma.clone(), r.clone())?;
    let mut report = BalanceReport { edges_checked: 0, failures: Vec::new() };
    for lambda in enumerate_up_to(n.saturating_sub(1)) {
        let w = z_weight(sigma, r, &lambda)?;
        for (up, rate_up) in q.off_diagonal(&lambda) {
            if up.size() < lambda.size() {
                continue;
            }
            let rate_down =
                q.off_diagonal(&up).into_iter().find(|(k, _)| *k == lambda).map(|(_, v)| v).unwrap_or_else(Rat::zero);
            report.edges_checked += 1;
            if &w * rate_up != z_weight(sigma, r, &up)? * rate_down {
                report.failures.push((lambda.clone(), up));
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoherenceRow {
    pub mu: Partition,
    pub pushed: f64,
    pub target: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoherenceReport {
    pub rows: Vec<CoherenceRow>,
    /// Upper bound on the mass of M_{r′} beyond the window.
    pub tail_bound: f64,
}

impl CoherenceReport {
    pub fn max_defect(&self) -> f64 {
        self.rows.iter().map(|r| (r.pushed - r.target).abs()).fold(0.0, f64::max)
    }

    /// Partial sums stay below the target and miss it by at most the tail.
    pub fn passed(&self) -> bool {
        let slack = 1e-12;
        self.rows.iter().all(|r| r.pushed <= r.target + slack && r.target - r.pushed <= self.tail_bound + slack)
    }
}

/// Compares (M_{r′} Λ^{r′}_r)(μ) over the window |λ| ≤ n with M_r(μ) for |μ| ≤ n/2.
pub fn coherence_check(sigma: &ParamPair, r_prime: &Rat, r: &Rat, n: usize) -> Result<CoherenceReport> {
    if r_prime <= r {
        return Err(Error::ParameterOrder { r_prime: fmt_rat(r_prime), r: fmt_rat(r) });
    }
    let fine = mixed_z_ensemble(sigma, r_prime, n)?;
    let mut pushed = std::collections::BTreeMap::<Partition, Rat>::new();
    let shape = match &fine.weights {
        Weights::Exact { shape, .. } => shape,
        Weights::Float(_) => unreachable!("mixed_z_ensemble is exact"),
    };
    for (lambda, w) in fine.support.iter().zip(shape) {
        for (mu, l) in bouquet_row(r_prime, r, lambda)? {
            if mu.size() <= n / 2 {
                *pushed.entry(mu).or_insert_with(Rat::zero) += w * l;
            }
        }
    }
    let fine_scalar = z_scalar(sigma, r_prime);
    let coarse_scalar = z_scalar(sigma, r);
    let mut rows = Vec::new();
    for mu in enumerate_up_to(n / 2) {
        let p = pushed.get(&mu).map_or(0.0, |w| fine_scalar * to_f64(w));
        let target = coarse_scalar * to_f64(&z_weight(sigma, r, &mu)?);
        rows.push(CoherenceRow { mu, pushed: p, target });
    }
    Ok(CoherenceReport { rows, tail_bound: fine.tail_bound })
}

fn stirling2(k: usize, j: usize) -> Rat {
    let mut row = vec![Rat::one()];
    for n in 1..=k {
        let mut next = vec![Rat::zero(); n + 1];
        for (i, v) in row.iter().enumerate() {
            next[i] += rat(i as i64) * v;
            next[i + 1] += v;
        }
        row = next;
    }
    row.get(j).cloned().unwrap_or_else(Rat::zero)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaMomentReport {
    pub k: usize,
    pub r: Vec<Rat>,
    /// E[(|λ|/r)^k] under M^{σ,r}, one entry per r.
    pub moments: Vec<Rat>,
    /// (σ₂)(σ₂ + 1)⋯(σ₂ + k − 1).
    pub target: Rat,
}

impl GammaMomentReport {
    pub fn defects(&self) -> Vec<Rat> {
        self.moments.iter().map(|m| (m - &self.target).abs()).collect()
    }

    pub fn monotone(&self) -> bool {
        self.defects().windows(2).all(|w| w[1] <= w[0])
    }
}

/// Exact k-th moment of |λ|/r. The size marginal has factorial moments
/// E[|λ|^{↓j}] = (σ₂)_j r^j, combined through Stirling numbers.
pub fn gamma_moment_check(sigma: &ParamPair, rs: &[Rat], k: usize) -> Result<GammaMomentReport> {
    if k == 0 {
        return Err(Error::InvalidQuery("moment order must be ≥ 1".into()));
    }
    let mut moments = Vec::new();
    for r in rs {
        require_positive("r", r)?;
        let mut m = Rat::zero();
        for j in 1..=k {
            m += stirling2(k, j) * rising_factorial(sigma.sigma2(), j) * pow(r, j) / pow(r, k);
        }
        moments.push(m);
    }
    Ok(GammaMomentReport { k, r: rs.to_vec(), moments, target: rising_factorial(sigma.sigma2(), k) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn p(parts: &[usize]) -> Partition {
        Partition::from_parts(parts)
    }

    #[test]
    fn weights_examples() {
        let s = ParamPair::new(rat(0), rat(1)).unwrap();
        assert_eq!(z_weight(&s, &rat(1), &Partition::empty()).unwrap(), rat(1));
        assert_eq!(z_weight(&s, &rat(1), &p(&[1])).unwrap(), ratio(1, 2));
        assert_eq!(size_marginal(&s, &rat(1), 2).unwrap(), ratio(1, 4));
        assert_eq!(size_marginal_sum(&s, &rat(1), 2).unwrap(), ratio(1, 4));
    }

    #[test]
    fn marginal_sum_matches_closed_form() {
        for (s1, s2) in [(rat(0), rat(1)), (rat(1), ratio(1, 4)), (rat(2), rat(3))] {
            let s = ParamPair::new(s1, s2).unwrap();
            for l in 0..=8 {
                assert_eq!(
                    size_marginal(&s, &ratio(2, 3), l).unwrap(),
                    size_marginal_sum(&s, &ratio(2, 3), l).unwrap()
                );
            }
        }
    }

    #[test]
    fn ensemble_mass() {
        let s = ParamPair::new(rat(1), ratio(1, 4)).unwrap();
        let e = mixed_z_ensemble(&s, &rat(1), 25).unwrap();
        let total = e.total_mass() + e.tail_bound;
        assert!((total - 1.0).abs() < 1e-12, "{total}");
        let pl = plancherel_ensemble(&rat(1), 15).unwrap();
        assert!((pl.total_mass() + pl.tail_bound - 1.0).abs() < 1e-12);
    }

    #[test]
    fn balance_and_coherence() {
        let s = ParamPair::new(rat(1), ratio(1, 4)).unwrap();
        let rep = detailed_balance_check(&s, &rat(2), 6).unwrap();
        assert!(rep.passed());
        assert!(rep.edges_checked > 0);
        let c = coherence_check(&s, &rat(2), &ratio(1, 2), 16).unwrap();
        assert!(c.passed(), "{c:?}");
    }

    #[test]
    fn flow_fixed_point_and_semigroup() {
        let w1 = ThomaPoint::new(vec![], vec![], rat(1)).unwrap();
        assert_eq!(plancherel_flow_q(&ratio(1, 3), &w1).unwrap(), w1);
        let w = ThomaPoint::new(vec![ratio(1, 2)], vec![ratio(1, 4)], rat(2)).unwrap();
        let (a, b) = (ratio(2, 3), ratio(5, 7));
        let two = plancherel_flow_q(&a, &plancherel_flow_q(&b, &w).unwrap()).unwrap();
        assert_eq!(two, plancherel_flow_q(&(&a * &b), &w).unwrap());
    }

    #[test]
    fn gamma_moments() {
        let s = ParamPair::new(rat(0), rat(2)).unwrap();
        let rs = [rat(5), rat(10), rat(20)];
        let rep1 = gamma_moment_check(&s, &rs, 1).unwrap();
        assert!(rep1.defects().iter().all(|d| d.is_zero()));
        let rep2 = gamma_moment_check(&s, &rs, 2).unwrap();
        assert_eq!(rep2.moments[0], rat(6) + ratio(2, 5));
        assert!(rep2.monotone());
    }
}
