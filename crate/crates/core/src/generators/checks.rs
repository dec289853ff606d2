//! Exact intertwining checks and window estimates of the regularity
//! constants with γ = η = grade + 1.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::RateMatrix;
use crate::error::Result;
use crate::rational::{fmt_rat, rat, to_f64, Rat};

#[derive(Clone, Debug, PartialEq)]
pub struct IntertwiningReport {
    pub rows_checked: usize,
    pub entries_checked: usize,
    pub mismatches: Vec<String>,
}

impl IntertwiningReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares (Q_fine Λ)(s, ·) with (Λ Q_coarse)(s, ·) entrywise for every
/// state of grade ≤ n. `link_row(s)` returns the nonzero entries Λ(s, ·).
pub fn verify_intertwining<G: RateMatrix>(
    fine: &G,
    coarse: &G,
    link_row: impl Fn(&G::State) -> Result<Vec<(G::State, Rat)>>,
    n: usize,
) -> Result<IntertwiningReport> {
    let mut report = IntertwiningReport { rows_checked: 0, entries_checked: 0, mismatches: Vec::new() };
    for s in fine.states_up_to(n) {
        let mut left: BTreeMap<G::State, Rat> = BTreeMap::new();
        let mut fine_row = fine.off_diagonal(&s);
        fine_row.push((s.clone(), -fine.exit_rate(&s)));
        for (t, q) in &fine_row {
            for (u, l) in link_row(t)? {
                *left.entry(u).or_insert_with(Rat::zero) += q * l;
            }
        }
        let mut right: BTreeMap<G::State, Rat> = BTreeMap::new();
        for (t, l) in link_row(&s)? {
            let mut coarse_row = coarse.off_diagonal(&t);
            coarse_row.push((t.clone(), -coarse.exit_rate(&t)));
            for (u, q) in coarse_row {
                *right.entry(u).or_insert_with(Rat::zero) += &l * q;
            }
        }
        let keys: std::collections::BTreeSet<&G::State> = left.keys().chain(right.keys()).collect();
        for k in keys {
            report.entries_checked += 1;
            let a = left.get(k).cloned().unwrap_or_else(Rat::zero);
            let b = right.get(k).cloned().unwrap_or_else(Rat::zero);
            if a != b {
                report.mismatches.push(format!("row {s:?}, column {k:?}: QΛ = {}, ΛQ = {}", fmt_rat(&a), fmt_rat(&b)));
            }
        }
        report.rows_checked += 1;
    }
    Ok(report)
}

/// Birth–death rates up(n) = a + b n, down(n) = d n of the grade process.
#[derive(Clone, Debug, PartialEq)]
pub struct OneDimRates {
    pub a: Rat,
    pub b: Rat,
    pub d: Rat,
}

impl OneDimRates {
    fn up(&self, n: usize) -> Rat {
        &self.a + &self.b * rat(n as i64)
    }

    fn down(&self, n: usize) -> Rat {
        &self.d * rat(n as i64)
    }

    /// −Q(n,n)/γ(n).
    pub fn exit_ratio(&self, n: usize) -> Rat {
        (self.up(n) + self.down(n)) / rat(n as i64 + 1)
    }

    /// γ(n) · (Q 1/γ)(n).
    pub fn inverse_ratio(&self, n: usize) -> Rat {
        let g = |k: usize| rat(k as i64 + 1);
        let mut q = self.up(n) * (g(n + 1).recip() - g(n).recip());
        if n > 0 {
            q += self.down(n) * (g(n - 1).recip() - g(n).recip());
        }
        q * g(n)
    }

    /// (Q η)(n) / η(n).
    pub fn eta_ratio(&self, n: usize) -> Rat {
        (self.up(n) - self.down(n)) / rat(n as i64 + 1)
    }

    /// Suprema over all of Z₊ of the three ratios, from their monotonicity:
    /// the exit ratio moves from a to b + d, the η ratio from a to b − d,
    /// and the inverse ratio is −a/2 at 0 and d − (a + bn)/(n + 2) beyond.
    pub fn analytic_constants(&self) -> [Rat; 3] {
        let c1 = self.a.clone().max(&self.b + &self.d);
        let at_zero = -&self.a / rat(2);
        let tail = if rat(2) * &self.b >= self.a { &self.d - (&self.a + &self.b) / rat(3) } else { &self.d - &self.b };
        let c2 = at_zero.max(tail);
        let c3 = self.a.clone().max(&self.b - &self.d);
        [c1, c2, c3]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EkBound {
    pub name: &'static str,
    /// max over the window grade ≤ N.
    pub window: Rat,
    /// max over grade ≤ N/2.
    pub half_window: Rat,
    /// Supremum predicted from the grade process.
    pub analytic: Rat,
    /// Every state of a grade gives the same value as the grade process.
    pub grade_reduction_exact: bool,
}

impl EkBound {
    /// Window value does not exceed the prediction and approaches it as the
    /// window grows.
    pub fn stabilized(&self) -> bool {
        self.window <= self.analytic
            && self.half_window <= self.window
            && (&self.analytic - &self.window).abs() <= (&self.analytic - &self.half_window).abs()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EkReport {
    pub bounds: Vec<EkBound>,
}

impl EkReport {
    pub fn passed(&self) -> bool {
        self.bounds.iter().all(|b| b.stabilized() && b.grade_reduction_exact)
    }

    pub fn max_gap(&self) -> f64 {
        self.bounds.iter().map(|b| to_f64(&(&b.analytic - &b.window))).fold(0.0, f64::max)
    }
}

/// Window maxima of −Q(a,a)/γ, γ·Q(1/γ) and Qη/η with γ = η = grade + 1.
pub fn verify_ek_bounds<G: RateMatrix>(g: &G, n: usize) -> EkReport {
    let grade_rates = g.grade_rates();
    let gamma = |s: &G::State| rat(g.grade(s) as i64 + 1);
    let mut bounds = Vec::new();
    type Ratio<'a, S> = Box<dyn Fn(&S) -> Rat + 'a>;
    type Bound<'a, S> = (&'static str, Ratio<'a, S>, fn(&OneDimRates, usize) -> Rat);
    let exact: [Bound<G::State>; 3] = [
        ("exit rate ≤ Cγ", Box::new(|s: &G::State| g.exit_rate(s) / gamma(s)), OneDimRates::exit_ratio),
        (
            "Q(1/γ) ≤ C/γ",
            Box::new(|s: &G::State| {
                let off: Rat = g.off_diagonal(s).iter().map(|(t, q)| q / gamma(t)).sum();
                (off - g.exit_rate(s) / gamma(s)) * gamma(s)
            }),
            OneDimRates::inverse_ratio,
        ),
        (
            "Qη ≤ Cη",
            Box::new(|s: &G::State| {
                let off: Rat = g.off_diagonal(s).iter().map(|(t, q)| q * gamma(t)).sum();
                (off - g.exit_rate(s) * gamma(s)) / gamma(s)
            }),
            OneDimRates::eta_ratio,
        ),
    ];
    let analytic = grade_rates.analytic_constants();
    for (i, (name, f, one_dim)) in exact.iter().enumerate() {
        let mut window: Option<Rat> = None;
        let mut half: Option<Rat> = None;
        let mut reduction = true;
        for k in 0..=n {
            let predicted = one_dim(&grade_rates, k);
            for s in g.states_of_grade(k) {
                let v = f(&s);
                if v != predicted {
                    reduction = false;
                }
                if window.as_ref().is_none_or(|w| v > *w) {
                    window = Some(v.clone());
                }
                if 2 * k <= n && half.as_ref().is_none_or(|w| v > *w) {
                    half = Some(v);
                }
            }
        }
        bounds.push(EkBound {
            name,
            window: window.expect("nonempty window"),
            half_window: half.expect("nonempty window"),
            analytic: analytic[i].clone(),
            grade_reduction_exact: reduction,
        });
    }
    EkReport { bounds }
}
