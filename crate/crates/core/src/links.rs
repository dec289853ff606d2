//! Markov kernels of the binomial and Young-bouquet projective systems, the
//! boundary kernels to R₊ and to the Thoma cone, and the homothety φ_r.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::measures::{WeightedEnsemble, Weights};
use crate::partitions::{dim, enumerate, skew_dim, Partition};
use crate::rational::{binomial, factorial, fmt_rat, from_biguint, pow, require_positive, to_f64, Rat};
use crate::stats::{poisson_factorial_moment_tail, poisson_pmf, poisson_tail};
use crate::symfunc::{SchurAtPoint, ThomaPoint};

/// A link between two levels of a projective system.
#[derive(Clone, Debug, PartialEq)]
pub enum LinkSpec {
    /// Z₊ ⇢ Z₊ at levels r′ > r.
    Binomial { r_prime: Rat, r: Rat },
    /// R₊ ⇢ Z₊.
    Poisson1D { r: Rat },
    /// Y_l ⇢ Y_m.
    Young { l: usize, m: usize },
    /// Y ⇢ Y at levels r′ > r.
    Bouquet { r_prime: Rat, r: Rat },
    /// Thoma cone ⇢ Y.
    Boundary { r: Rat },
}

impl LinkSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            LinkSpec::Binomial { r_prime, r } | LinkSpec::Bouquet { r_prime, r } => check_order(r_prime, r),
            LinkSpec::Poisson1D { r } | LinkSpec::Boundary { r } => require_positive("r", r),
            LinkSpec::Young { l, m } if m > l => {
                Err(Error::InvalidQuery(format!("Young link needs m ≤ l, got l={l}, m={m}")))
            }
            LinkSpec::Young { .. } => Ok(()),
        }
    }
}

fn check_order(r_prime: &Rat, r: &Rat) -> Result<()> {
    if !r.is_positive() || r_prime <= r {
        return Err(Error::ParameterOrder { r_prime: fmt_rat(r_prime), r: fmt_rat(r) });
    }
    Ok(())
}

/// C(l,m) (r/r′)^m (1 − r/r′)^{l−m}.
pub fn binomial_link(r_prime: &Rat, r: &Rat, l: usize, m: usize) -> Result<Rat> {
    check_order(r_prime, r)?;
    Ok(binomial_unchecked(&(r / r_prime), l, m))
}

fn binomial_unchecked(ratio: &Rat, l: usize, m: usize) -> Rat {
    if m > l {
        return Rat::zero();
    }
    from_biguint(&binomial(l, m)) * pow(ratio, m) * pow(&(Rat::one() - ratio), l - m)
}

/// e^{−rx} (rx)^m / m!.
pub fn poisson_link(r: &Rat, x: &Rat, m: usize) -> f64 {
    poisson_pmf(to_f64(r) * to_f64(x), m)
}

/// dim μ · dim(μ, λ) / dim λ.
pub fn young_link(lambda: &Partition, mu: &Partition) -> Rat {
    if !lambda.contains(mu) {
        return Rat::zero();
    }
    from_biguint(&dim(mu)) * from_biguint(&skew_dim(mu, lambda)) / from_biguint(&dim(lambda))
}

pub fn bouquet_link(r_prime: &Rat, r: &Rat, lambda: &Partition, mu: &Partition) -> Result<Rat> {
    check_order(r_prime, r)?;
    Ok(bouquet_unchecked(&(r / r_prime), lambda, mu))
}

fn bouquet_unchecked(ratio: &Rat, lambda: &Partition, mu: &Partition) -> Rat {
    if !lambda.contains(mu) {
        return Rat::zero();
    }
    binomial_unchecked(ratio, lambda.size(), mu.size()) * young_link(lambda, mu)
}

/// e^{−r|ω|} (r^m/m!) dim μ · S_μ(ω).
pub fn boundary_link(r: &Rat, omega: &ThomaPoint, mu: &Partition) -> f64 {
    boundary_link_with(r, omega, mu, &SchurAtPoint::new(omega, mu.size()))
}

fn boundary_link_with(r: &Rat, omega: &ThomaPoint, mu: &Partition, schur: &SchurAtPoint) -> f64 {
    let m = mu.size();
    let exact = pow(r, m) / from_biguint(&factorial(m)) * from_biguint(&dim(mu)) * schur.value(mu);
    (-to_f64(r) * to_f64(omega.size())).exp() * to_f64(&exact)
}

/// Row {m ↦ Λ(l, m)} of the binomial link.
pub fn binomial_row(r_prime: &Rat, r: &Rat, l: usize) -> Result<Vec<(usize, Rat)>> {
    check_order(r_prime, r)?;
    let ratio = r / r_prime;
    Ok((0..=l).map(|m| (m, binomial_unchecked(&ratio, l, m))).collect())
}

/// Row {μ ↦ Λ(λ, μ)} of the Young-bouquet link, zero entries omitted.
pub fn bouquet_row(r_prime: &Rat, r: &Rat, lambda: &Partition) -> Result<Vec<(Partition, Rat)>> {
    check_order(r_prime, r)?;
    let ratio = r / r_prime;
    Ok(sub_diagrams(lambda)
        .into_iter()
        .map(|mu| {
            let w = bouquet_unchecked(&ratio, lambda, &mu);
            (mu, w)
        })
        .filter(|(_, w)| !w.is_zero())
        .collect())
}

/// Row {μ ∈ Y_m ↦ Λ^l_m(λ, μ)}.
pub fn young_row(lambda: &Partition, m: usize) -> Vec<(Partition, Rat)> {
    enumerate(m)
        .into_iter()
        .filter(|mu| lambda.contains(mu))
        .map(|mu| {
            let w = young_link(lambda, &mu);
            (mu, w)
        })
        .collect()
}

/// All μ ⊆ λ, in canonical order.
pub fn sub_diagrams(lambda: &Partition) -> Vec<Partition> {
    (0..=lambda.size()).flat_map(enumerate).filter(|mu| lambda.contains(mu)).collect()
}

/// (ΛF)(λ) for a row-finite link on Y (Bouquet or Young).
pub fn apply_link_to_function(link: &LinkSpec, f: impl Fn(&Partition) -> Rat, lambda: &Partition) -> Result<Rat> {
    link.validate()?;
    let row = match link {
        LinkSpec::Bouquet { r_prime, r } => bouquet_row(r_prime, r, lambda)?,
        LinkSpec::Young { l, m } => {
            if lambda.size() != *l {
                return Err(Error::InvalidQuery(format!("{lambda} is not in Y_{l}")));
            }
            young_row(lambda, *m)
        }
        _ => {
            return Err(Error::InvalidQuery(
                "only row-finite links on Y act on functions of diagrams; use the 1-D or boundary helpers".into(),
            ))
        }
    };
    Ok(row.iter().map(|(mu, w)| w * f(mu)).sum())
}

/// (ΛF)(l) for the binomial link.
pub fn apply_binomial_to_function(r_prime: &Rat, r: &Rat, f: impl Fn(usize) -> Rat, l: usize) -> Result<Rat> {
    Ok(binomial_row(r_prime, r, l)?.iter().map(|(m, w)| w * f(*m)).sum())
}

/// A truncated infinite sum with a rigorous bound on the omitted part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncated {
    pub value: f64,
    pub tail_bound: f64,
    /// Largest level included in the sum.
    pub levels: usize,
}

/// Growth control on the function a boundary link is applied to: a bound
/// on sup |F| over each level, turned into a bound on the Poisson tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GrowthBound {
    /// |F| ≤ c everywhere.
    Bounded(f64),
    /// |F(μ)| ≤ c · q^{|μ|} · |μ|^{↓m}.
    FallingFactorial { c: f64, q: f64, m: usize },
}

impl GrowthBound {
    /// Σ_{k > n} Pois_x(k) · sup_{level k} |F|.
    pub fn tail(&self, x: f64, n: usize) -> f64 {
        match *self {
            GrowthBound::Bounded(c) => c * poisson_tail(x, n + 1),
            GrowthBound::FallingFactorial { c, q, m } => c * poisson_factorial_moment_tail(x, q, m, n),
        }
    }
}

fn truncation_level(x: f64, growth: GrowthBound, tol: f64, max_levels: usize) -> Result<(usize, f64)> {
    let mut n = 0;
    loop {
        let tail = growth.tail(x, n);
        if tail <= tol {
            return Ok((n, tail));
        }
        if n >= max_levels {
            return Err(Error::Truncation(format!("tail {tail:.3e} still above {tol:.1e} at level {max_levels}")));
        }
        n += 1;
    }
}

/// (Λ^∞_r F)(x) = Σ_m Pois_{rx}(m) F(m), truncated once the tail is below `tol`.
pub fn apply_poisson_to_function(
    r: &Rat,
    f: impl Fn(usize) -> f64,
    x: &Rat,
    growth: GrowthBound,
    tol: f64,
    max_levels: usize,
) -> Result<Truncated> {
    require_positive("r", r)?;
    let rx = to_f64(r) * to_f64(x);
    let (n, tail) = truncation_level(rx, growth, tol, max_levels)?;
    let value = (0..=n).map(|m| poisson_pmf(rx, m) * f(m)).sum();
    Ok(Truncated { value, tail_bound: tail, levels: n })
}

/// Rows Λ^∞_r(ω, ·) of the boundary link, computed level by level and kept
/// for reuse across test functions at the same (r, ω).
pub struct BoundaryKernel {
    r: Rat,
    omega: ThomaPoint,
    x: f64,
    levels: std::cell::RefCell<Vec<Vec<(Partition, f64)>>>,
}

impl BoundaryKernel {
    pub fn new(r: &Rat, omega: &ThomaPoint) -> Result<Self> {
        require_positive("r", r)?;
        Ok(BoundaryKernel {
            r: r.clone(),
            omega: omega.clone(),
            x: to_f64(r) * to_f64(omega.size()),
            levels: Default::default(),
        })
    }

    fn extend_to(&self, n: usize) {
        let mut levels = self.levels.borrow_mut();
        if levels.len() > n {
            return;
        }
        let schur = SchurAtPoint::new(&self.omega, n);
        for m in levels.len()..=n {
            let row = enumerate(m)
                .into_iter()
                .map(|mu| {
                    let w = boundary_link_with(&self.r, &self.omega, &mu, &schur);
                    (mu, w)
                })
                .collect();
            levels.push(row);
        }
    }

    /// (Λ^∞_r F)(ω), truncated at the first level where the Poisson tail,
    /// weighted by the growth bound, falls below `tol`.
    pub fn apply(
        &self,
        f: impl Fn(&Partition) -> f64,
        growth: GrowthBound,
        tol: f64,
        max_levels: usize,
    ) -> Result<Truncated> {
        let (n, tail) = truncation_level(self.x, growth, tol, max_levels)?;
        self.extend_to(n);
        let levels = self.levels.borrow();
        let mut value = 0.0;
        for row in &levels[..=n] {
            for (mu, w) in row {
                let fv = f(mu);
                if fv != 0.0 {
                    value += w * fv;
                }
            }
        }
        Ok(Truncated { value, tail_bound: tail, levels: n })
    }
}

/// (Λ^∞_r F)(ω) = Σ_μ Λ^∞_r(ω, μ) F(μ), truncated at the first level where
/// the Poisson tail, weighted by the growth bound, falls below `tol`.
pub fn apply_boundary_to_function(
    r: &Rat,
    f: impl Fn(&Partition) -> f64,
    omega: &ThomaPoint,
    growth: GrowthBound,
    tol: f64,
    max_levels: usize,
) -> Result<Truncated> {
    BoundaryKernel::new(r, omega)?.apply(f, growth, tol, max_levels)
}

/// M ↦ MΛ for a row-finite link on Y. Exact weights stay exact.
pub fn apply_link_to_measure(m: &WeightedEnsemble, link: &LinkSpec) -> Result<WeightedEnsemble> {
    link.validate()?;
    let row = |lambda: &Partition| -> Result<Vec<(Partition, Rat)>> {
        match link {
            LinkSpec::Bouquet { r_prime, r } => bouquet_row(r_prime, r, lambda),
            LinkSpec::Young { l, m } => {
                if lambda.size() != *l {
                    return Err(Error::InvalidQuery(format!("{lambda} is not in Y_{l}")));
                }
                Ok(young_row(lambda, *m))
            }
            _ => Err(Error::InvalidQuery("measure pushforward needs a row-finite link on Y".into())),
        }
    };
    let max_size = match link {
        LinkSpec::Young { m: target, .. } => *target,
        _ => m.max_size,
    };
    match &m.weights {
        Weights::Exact { shape, scalar } => {
            let mut acc: BTreeMap<Partition, Rat> = BTreeMap::new();
            for (lambda, w) in m.support.iter().zip(shape) {
                for (mu, l) in row(lambda)? {
                    *acc.entry(mu).or_insert_with(Rat::zero) += w * l;
                }
            }
            let (support, shape) = acc.into_iter().unzip();
            Ok(WeightedEnsemble {
                support,
                weights: Weights::Exact { shape, scalar: *scalar },
                max_size,
                tail_bound: m.tail_bound,
            })
        }
        Weights::Float(ws) => {
            let mut acc: BTreeMap<Partition, f64> = BTreeMap::new();
            for (lambda, w) in m.support.iter().zip(ws) {
                for (mu, l) in row(lambda)? {
                    *acc.entry(mu).or_default() += w * to_f64(&l);
                }
            }
            let (support, weights) = acc.into_iter().unzip();
            Ok(WeightedEnsemble { support, weights: Weights::Float(weights), max_size, tail_bound: m.tail_bound })
        }
    }
}

/// φ_r(λ) = r^{−1} ω_λ.
pub fn phi_r(lambda: &Partition, r: &Rat) -> Result<ThomaPoint> {
    require_positive("r", r)?;
    Ok(ThomaPoint::from_diagram(lambda).scaled(&r.recip()))
}

/// max over |λ| ≤ n of |Λ^r_s(λ, μ) − Λ^∞_s(φ_r(λ), μ)|.
pub fn approx_sup_error(r: &Rat, s: &Rat, mu: &Partition, n: usize) -> Result<f64> {
    check_order(r, s)?;
    let ratio = s / r;
    let mut worst: f64 = 0.0;
    for l in 0..=n {
        for lambda in enumerate(l) {
            let fine = to_f64(&bouquet_unchecked(&ratio, &lambda, mu));
            let coarse = boundary_link(s, &phi_r(&lambda, r)?, mu);
            worst = worst.max((fine - coarse).abs());
        }
    }
    Ok(worst)
}

/// max over l ≤ n of |Λ^r_s(l, m) − Λ^∞_s(l/r, m)|.
pub fn binomial_poisson_sup_error(r: &Rat, s: &Rat, m: usize, n: usize) -> Result<f64> {
    check_order(r, s)?;
    let ratio = s / r;
    Ok((0..=n)
        .map(|l| {
            let fine = to_f64(&binomial_unchecked(&ratio, l, m));
            let x = Rat::from_integer(l.into()) / r;
            (fine - poisson_link(s, &x, m)).abs()
        })
        .fold(0.0, f64::max))
}
