//! The θ-limit of the z-measure chains and the first-order operator of the
//! limiting deterministic flow on the Thoma cone.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::{PlancherelRates, RateMatrix, ZMeasureRates};
use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::rational::{rat, to_f64, Rat};
use crate::symfunc::{Basis, ParamPair, SymFn};

/// (1 − p₁)∂/∂p₁ − Σ_{n≥2} n p_n ∂/∂p_n, the generator of
/// (α, β, δ) ↦ (e^{−t}α, e^{−t}β, e^{−t}δ + 1 − e^{−t}).
pub fn plancherel_limit_operator(f: &SymFn) -> Result<SymFn> {
    let f = f.to_basis(Basis::P)?;
    let mut out = SymFn::zero(Basis::P);
    for n in 1..=f.max_part() {
        let d = f.partial(n)?;
        if d.is_zero() {
            continue;
        }
        if n == 1 {
            out = &out + &d;
            out.add_scaled(&d.mul_generator(1)?, &rat(-1));
        } else {
            out.add_scaled(&d.mul_generator(n)?, &rat(-(n as i64)));
        }
    }
    Ok(out)
}

/// d/dt F(P(t)ω) at t = 0, computed by substituting p₁ ↦ q p₁ + 1 − q and
/// p_n ↦ qⁿ p_n, expanding in q = e^{−t} and taking −d/dq at q = 1.
pub fn plancherel_flow_derivative(f: &SymFn) -> Result<SymFn> {
    let f = f.to_basis(Basis::P)?;
    let mut out = SymFn::zero(Basis::P);
    for (mu, coeff) in f.terms() {
        // polynomial in q with SymFn coefficients
        let mut poly: BTreeMap<usize, SymFn> = BTreeMap::new();
        poly.insert(0, SymFn::one(Basis::P));
        for &part in mu.parts() {
            let mut next: BTreeMap<usize, SymFn> = BTreeMap::new();
            for (deg, c) in &poly {
                if part == 1 {
                    // q p₁ + 1 − q
                    let with_p = c.mul_generator(1)?;
                    add_at(&mut next, deg + 1, &with_p, &Rat::one());
                    add_at(&mut next, *deg, c, &Rat::one());
                    add_at(&mut next, deg + 1, c, &rat(-1));
                } else {
                    add_at(&mut next, deg + part, &c.mul_generator(part)?, &Rat::one());
                }
            }
            poly = next;
        }
        for (deg, c) in poly {
            if deg > 0 {
                out.add_scaled(&c, &(-coeff * rat(deg as i64)));
            }
        }
    }
    Ok(out)
}

fn add_at(poly: &mut BTreeMap<usize, SymFn>, deg: usize, f: &SymFn, c: &Rat) {
    poly.entry(deg).or_insert_with(|| SymFn::zero(Basis::P)).add_scaled(f, c);
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlancherelLimitReport {
    pub theta: Rat,
    pub sigma2: Vec<Rat>,
    /// max over rows |λ| ≤ N of |Q^σ_{θ/σ₂}(λ,κ) − Q_θ(λ,κ)|, diagonal included.
    pub max_defect: Vec<Rat>,
    /// Rates at ∅ that match exactly (the appended-box rate is θ for all σ).
    pub empty_row_exact: bool,
}

impl PlancherelLimitReport {
    pub fn ratios(&self) -> Vec<f64> {
        self.max_defect.windows(2).map(|w| to_f64(&w[1]) / to_f64(&w[0])).collect()
    }

    pub fn decreasing(&self) -> bool {
        self.max_defect.windows(2).all(|w| w[1] < w[0])
    }
}

/// Compares the z-measure chain at r = θ/σ₂ with the Plancherel chain along
/// a sequence of parameter pairs.
pub fn plancherel_limit_check(theta: &Rat, sigmas: &[ParamPair], n: usize) -> Result<PlancherelLimitReport> {
    let limit = PlancherelRates::new(theta.clone())?;
    let mut report = PlancherelLimitReport {
        theta: theta.clone(),
        sigma2: Vec::new(),
        max_defect: Vec::new(),
        empty_row_exact: true,
    };
    for sigma in sigmas {
        if !sigma.sigma2().is_positive() {
            return Err(Error::InvalidQuery("σ₂ must be positive".into()));
        }
        let r = theta / sigma.sigma2();
        let z = ZMeasureRates::new(sigma.clone(), r)?;
        let mut worst = Rat::zero();
        for lambda in limit.states_up_to(n) {
            let defect = row_defect(&z, &limit, &lambda);
            if lambda.is_empty() && !defect.is_zero() {
                report.empty_row_exact = false;
            }
            if defect > worst {
                worst = defect;
            }
        }
        report.sigma2.push(sigma.sigma2().clone());
        report.max_defect.push(worst);
    }
    Ok(report)
}

fn row_defect(z: &ZMeasureRates, limit: &PlancherelRates, lambda: &Partition) -> Rat {
    let mut diff: BTreeMap<Partition, Rat> = BTreeMap::new();
    for (k, q) in z.off_diagonal(lambda) {
        *diff.entry(k).or_insert_with(Rat::zero) += q;
    }
    for (k, q) in limit.off_diagonal(lambda) {
        *diff.entry(k).or_insert_with(Rat::zero) -= q;
    }
    let diag = (z.exit_rate(lambda) - limit.exit_rate(lambda)).abs();
    diff.into_values().map(|d| d.abs()).fold(diag, |a, b| a.max(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::enumerate_up_to;

    fn pgen(k: usize) -> SymFn {
        SymFn::generator(Basis::P, k)
    }

    #[test]
    fn operator_on_generators() {
        let one = SymFn::one(Basis::P);
        assert!(plancherel_limit_operator(&one).unwrap().is_zero());
        assert_eq!(plancherel_limit_operator(&pgen(1)).unwrap(), &one - &pgen(1));
        assert_eq!(plancherel_limit_operator(&pgen(2)).unwrap(), pgen(2).scale(&rat(-2)));
    }

    #[test]
    fn operator_is_flow_derivative() {
        for mu in enumerate_up_to(5) {
            let f = SymFn::basis_element(Basis::P, mu);
            assert_eq!(plancherel_limit_operator(&f).unwrap(), plancherel_flow_derivative(&f).unwrap());
        }
    }

    #[test]
    fn schur_action() {
        for mu in enumerate_up_to(5) {
            let s = SymFn::basis_element(Basis::S, mu.clone());
            let got = plancherel_limit_operator(&s).unwrap().to_basis(Basis::S).unwrap();
            let mut expected = s.scale(&rat(-(mu.size() as i64)));
            for down in mu.down_set() {
                expected.add_term(down, Rat::one());
            }
            assert_eq!(got, expected, "μ = {mu}");
        }
    }

    #[test]
    fn rates_converge() {
        let theta = rat(2);
        let sigmas: Vec<ParamPair> =
            [100, 1000, 10000].iter().map(|&s| ParamPair::new(rat(0), rat(s)).unwrap()).collect();
        let rep = plancherel_limit_check(&theta, &sigmas, 5).unwrap();
        assert!(rep.empty_row_exact);
        assert!(rep.decreasing());
        for q in rep.ratios() {
            assert!((q - 0.1).abs() < 0.02, "{q}");
        }
    }
}
