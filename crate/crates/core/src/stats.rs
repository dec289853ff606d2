//! Floating-point distribution helpers: Poisson and negative-binomial tails,
//! and the goodness-of-fit statistics used by the Monte Carlo checks.

use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::gamma::ln_gamma;

pub fn poisson_pmf(x: f64, k: usize) -> f64 {
    if x == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let k = k as f64;
    (k * x.ln() - x - ln_gamma(k + 1.0)).exp()
}

/// P[Pois(x) ≥ k0], summed upward from k0 so small tails keep full relative precision.
pub fn poisson_tail(x: f64, k0: usize) -> f64 {
    if k0 == 0 {
        return 1.0;
    }
    if x == 0.0 {
        return 0.0;
    }
    if (k0 as f64) < x {
        // Bulk side: the complement is the smaller sum.
        let head: f64 = (0..k0).map(|k| poisson_pmf(x, k)).sum();
        return (1.0 - head).max(0.0);
    }
    let mut term = poisson_pmf(x, k0);
    let mut sum = 0.0;
    let mut k = k0;
    while term > 0.0 && term > sum * 1e-17 {
        sum += term;
        k += 1;
        term *= x / k as f64;
    }
    sum
}

/// Σ_{l > n} Pois_x(l) · q^l · l^{↓m} = e^{−x(1−q)} (qx)^m P[Pois(qx) ≥ n − m + 1].
pub fn poisson_factorial_moment_tail(x: f64, q: f64, m: usize, n: usize) -> f64 {
    let qx = q * x;
    let k0 = (n + 1).saturating_sub(m);
    (-x * (1.0 - q)).exp() * qx.powi(m as i32) * poisson_tail(qx, k0)
}

/// Negative binomial weight (c)_l / l! · ξ^l · (1 − ξ)^c with ξ = r/(r+1).
pub fn neg_binomial_pmf(c: f64, r: f64, l: usize) -> f64 {
    let xi = r / (r + 1.0);
    let lf = l as f64;
    (ln_gamma(c + lf) - ln_gamma(c) - ln_gamma(lf + 1.0) + lf * xi.ln() - c * (r + 1.0).ln()).exp()
}

/// P[NB ≥ k0] for the negative binomial above.
pub fn neg_binomial_tail(c: f64, r: f64, k0: usize) -> f64 {
    let xi = r / (r + 1.0);
    let mean = c * r;
    if (k0 as f64) < mean {
        let head: f64 = (0..k0).map(|l| neg_binomial_pmf(c, r, l)).sum();
        return (1.0 - head).max(0.0);
    }
    let mut term = neg_binomial_pmf(c, r, k0);
    let mut sum = 0.0;
    let mut l = k0;
    while term > 0.0 && term > sum * 1e-17 {
        sum += term;
        term *= xi * (c + l as f64) / (l as f64 + 1.0);
        l += 1;
    }
    sum
}

/// Pearson χ² statistic and p-value. Cells with expected count below
/// `min_expected` are pooled into one tail cell.
pub fn chi_square_test(observed: &[u64], expected_prob: &[f64], min_expected: f64) -> (f64, usize, f64) {
    let n: u64 = observed.iter().sum();
    let nf = n as f64;
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut pooled = (0.0, 0.0);
    for (i, &p) in expected_prob.iter().enumerate() {
        let o = observed.get(i).copied().unwrap_or(0) as f64;
        if p * nf >= min_expected {
            cells.push((o, p * nf));
        } else {
            pooled.0 += o;
            pooled.1 += p * nf;
        }
    }
    let covered: f64 = expected_prob.iter().sum();
    let beyond: u64 = observed.iter().skip(expected_prob.len()).sum();
    pooled.0 += beyond as f64;
    pooled.1 += (1.0 - covered).max(0.0) * nf;
    if pooled.1 > 0.0 {
        cells.push(pooled);
    }
    let stat: f64 = cells.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = cells.len().saturating_sub(1).max(1);
    let p = 1.0 - ChiSquared::new(dof as f64).expect("positive dof").cdf(stat);
    (stat, dof, p)
}

/// One-sample Kolmogorov–Smirnov test against a continuous CDF; returns
/// (D, asymptotic p-value).
pub fn ks_test(samples: &[f64], cdf: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    (d, kolmogorov_sf(d * n.sqrt()))
}

/// P[K > t] for the Kolmogorov distribution.
fn kolmogorov_sf(t: f64) -> f64 {
    if t < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * t * t).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}
