//! Verification suites behind `thoma verify`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use thoma::generators::{
    apply_q, laguerre_op_sym, plancherel_flow_derivative, plancherel_limit_check, plancherel_limit_operator,
    verify_ek_bounds, verify_intertwining, ExpSymFn, Meixner1D, PlancherelRates, ZMeasureRates,
};
use thoma::links::{apply_link_to_function, binomial_row, bouquet_row, LinkSpec};
use thoma::measures::{coherence_check, detailed_balance_check, plancherel_flow_q};
use thoma::rational::{fmt_rat, pow, rat, ratio, to_f64};
use thoma::symfunc::{fs_eval, fs_eval_fn, laguerre_sym, meixner_poly_1d, meixner_sym};
use thoma::{enumerate_up_to, Basis, ParamPair, Partition, Rat, SymFn, ThomaPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Links,
    Intertwine,
    Eigen,
    Balance,
    Bounds,
    Plancherel,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Links => "links",
            Suite::Intertwine => "intertwine",
            Suite::Eigen => "eigen",
            Suite::Balance => "balance",
            Suite::Bounds => "bounds",
            Suite::Plancherel => "plancherel",
            Suite::All => "all",
        }
    }
}

pub struct Setup {
    pub sigma: ParamPair,
    pub r: Rat,
    pub r_prime: Rat,
    pub theta: Rat,
    pub max_size: usize,
    pub nu_max: usize,
}

pub struct Check {
    pub suite: &'static str,
    pub check_id: String,
    pub params: Value,
    pub passed: bool,
    pub max_defect: f64,
}

impl Check {
    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "check_id": self.check_id,
            "params": self.params,
            "status": if self.passed { "pass" } else { "fail" },
            "max_defect": self.max_defect,
        })
    }
}

fn defect(a: &Rat, b: &Rat) -> f64 {
    to_f64(&(a - b).abs())
}

pub fn run(suite: Suite, s: &Setup) -> thoma::Result<Vec<Check>> {
    let order = [Suite::Links, Suite::Intertwine, Suite::Eigen, Suite::Balance, Suite::Bounds, Suite::Plancherel];
    let mut out = Vec::new();
    for one in order {
        if suite == Suite::All || suite == one {
            match one {
                Suite::Links => links(s, &mut out)?,
                Suite::Intertwine => intertwine(s, &mut out)?,
                Suite::Eigen => eigen(s, &mut out)?,
                Suite::Balance => balance(s, &mut out)?,
                Suite::Bounds => bounds(s, &mut out),
                Suite::Plancherel => plancherel(s, &mut out)?,
                Suite::All => unreachable!(),
            }
        }
    }
    Ok(out)
}

fn links(s: &Setup, out: &mut Vec<Check>) -> thoma::Result<()> {
    let suite = Suite::Links.name();
    let (rp, r) = (&s.r_prime, &s.r);
    let params = json!({"r": fmt_rat(r), "r_prime": fmt_rat(rp), "max_size": s.max_size});

    let mut worst = 0.0f64;
    for lambda in enumerate_up_to(s.max_size) {
        let row: Rat = bouquet_row(rp, r, &lambda)?.into_iter().map(|(_, w)| w).sum();
        worst = worst.max(defect(&row, &Rat::one()));
    }
    for l in 0..=4 * s.max_size {
        let row: Rat = binomial_row(rp, r, l)?.into_iter().map(|(_, w)| w).sum();
        worst = worst.max(defect(&row, &Rat::one()));
    }
    out.push(Check {
        suite,
        check_id: "rows-stochastic".into(),
        params: params.clone(),
        passed: worst == 0.0,
        max_defect: worst,
    });

    // Λ^{r″}_{r′} Λ^{r′}_r = Λ^{r″}_r with r″ = r′ + 1.
    let rpp = rp + Rat::one();
    let mut worst = 0.0f64;
    for lambda in enumerate_up_to(s.max_size) {
        let mut two: BTreeMap<Partition, Rat> = BTreeMap::new();
        for (mu, w) in bouquet_row(&rpp, rp, &lambda)? {
            for (nu, v) in bouquet_row(rp, r, &mu)? {
                *two.entry(nu).or_insert_with(Rat::zero) += &w * v;
            }
        }
        for (nu, v) in bouquet_row(&rpp, r, &lambda)? {
            worst = worst.max(defect(&v, two.get(&nu).unwrap_or(&Rat::zero())));
        }
    }
    out.push(Check {
        suite,
        check_id: "bouquet-composition".into(),
        params: params.clone(),
        passed: worst == 0.0,
        max_defect: worst,
    });

    // FS_μ ↦ (r/r′)^{|μ|} FS_μ.
    let link = LinkSpec::Bouquet { r_prime: rp.clone(), r: r.clone() };
    let mut worst = 0.0f64;
    for mu in enumerate_up_to(3) {
        let scale = pow(&(r / rp), mu.size());
        for lambda in enumerate_up_to(s.max_size) {
            let got = apply_link_to_function(&link, |k| fs_eval(&mu, k), &lambda)?;
            worst = worst.max(defect(&got, &(&scale * fs_eval(&mu, &lambda))));
        }
    }
    out.push(Check { suite, check_id: "bouquet-fs-eigen".into(), params, passed: worst == 0.0, max_defect: worst });
    Ok(())
}

fn intertwine(s: &Setup, out: &mut Vec<Check>) -> thoma::Result<()> {
    let suite = Suite::Intertwine.name();
    let (rp, r) = (&s.r_prime, &s.r);
    let base = |extra: Value| {
        let mut p = json!({"sigma1": fmt_rat(s.sigma.sigma1()), "sigma2": fmt_rat(s.sigma.sigma2()),
                           "r": fmt_rat(r), "r_prime": fmt_rat(rp), "max_size": s.max_size});
        if let (Value::Object(p), Value::Object(e)) = (&mut p, extra) {
            p.extend(e);
        }
        p
    };
    let fine = ZMeasureRates::new(s.sigma.clone(), rp.clone())?;
    let coarse = ZMeasureRates::new(s.sigma.clone(), r.clone())?;
    let rep = verify_intertwining(&fine, &coarse, |l| bouquet_row(rp, r, l), s.max_size)?;
    out.push(Check {
        suite,
        check_id: "zmeasure".into(),
        params: base(json!({"entries": rep.entries_checked})),
        passed: rep.passed(),
        max_defect: if rep.passed() { 0.0 } else { f64::NAN },
    });

    let c = s.sigma.sigma2().clone();
    let fine = Meixner1D::new(c.clone(), rp.clone())?;
    let coarse = Meixner1D::new(c, r.clone())?;
    let window = 4 * s.max_size;
    let rep = verify_intertwining(&fine, &coarse, |&l| binomial_row(rp, r, l), window)?;
    out.push(Check {
        suite,
        check_id: "meixner-size".into(),
        params: base(json!({"entries": rep.entries_checked, "window": window})),
        passed: rep.passed(),
        max_defect: if rep.passed() { 0.0 } else { f64::NAN },
    });

    let theta_p = &s.theta * rp / r;
    let fine = PlancherelRates::new(theta_p.clone())?;
    let coarse = PlancherelRates::new(s.theta.clone())?;
    let rep = verify_intertwining(&fine, &coarse, |l| bouquet_row(&theta_p, &s.theta, l), s.max_size)?;
    out.push(Check {
        suite,
        check_id: "plancherel".into(),
        params: json!({"theta": fmt_rat(&s.theta), "theta_prime": fmt_rat(&theta_p), "max_size": s.max_size,
                       "entries": rep.entries_checked}),
        passed: rep.passed(),
        max_defect: if rep.passed() { 0.0 } else { f64::NAN },
    });
    Ok(())
}

fn eigen(s: &Setup, out: &mut Vec<Check>) -> thoma::Result<()> {
    let suite = Suite::Eigen.name();
    let params = json!({"sigma1": fmt_rat(s.sigma.sigma1()), "sigma2": fmt_rat(s.sigma.sigma2()),
                        "r": fmt_rat(&s.r), "max_size": s.max_size, "nu_max": s.nu_max});

    let q = ZMeasureRates::new(s.sigma.clone(), s.r.clone())?;
    let mut worst = 0.0f64;
    for nu in enumerate_up_to(s.nu_max) {
        let m = meixner_sym(&nu, &s.sigma, &s.r)?;
        let mut values = HashMap::new();
        for k in enumerate_up_to(s.max_size + 1) {
            let v = fs_eval_fn(&m, &k)?;
            values.insert(k, v);
        }
        let eig = -rat(nu.size() as i64);
        for lambda in enumerate_up_to(s.max_size) {
            let lhs = apply_q(&q, |k| values[k].clone(), &lambda);
            worst = worst.max(defect(&lhs, &(&eig * &values[&lambda])));
        }
    }
    out.push(Check {
        suite,
        check_id: "meixner-symmetric".into(),
        params: params.clone(),
        passed: worst == 0.0,
        max_defect: worst,
    });

    let mut worst = 0.0f64;
    for nu in enumerate_up_to(s.nu_max) {
        let l = laguerre_sym(&nu, &s.sigma);
        let got = laguerre_op_sym(&s.sigma, &ExpSymFn::new(Rat::zero(), &l)?)?.f;
        let diff = &got - &l.to_basis(Basis::E)?.scale(&-rat(nu.size() as i64));
        worst = worst.max(diff.terms().map(|(_, c)| to_f64(&c.abs())).fold(0.0, f64::max));
    }
    out.push(Check {
        suite,
        check_id: "laguerre-symmetric".into(),
        params: params.clone(),
        passed: worst == 0.0,
        max_defect: worst,
    });

    let c = s.sigma.sigma2().clone();
    let q = Meixner1D::new(c.clone(), s.r.clone())?;
    let mut worst = 0.0f64;
    for n in 0..=s.nu_max {
        let m = meixner_poly_1d(n, &c, &s.r)?;
        for l in 0..=4 * s.max_size {
            let lhs = apply_q(&q, |&k| m.eval(&rat(k as i64)), &l);
            worst = worst.max(defect(&lhs, &(-rat(n as i64) * m.eval(&rat(l as i64)))));
        }
    }
    out.push(Check { suite, check_id: "meixner-1d".into(), params, passed: worst == 0.0, max_defect: worst });
    Ok(())
}

fn balance(s: &Setup, out: &mut Vec<Check>) -> thoma::Result<()> {
    let suite = Suite::Balance.name();
    let params = json!({"sigma1": fmt_rat(s.sigma.sigma1()), "sigma2": fmt_rat(s.sigma.sigma2()),
                        "r": fmt_rat(&s.r), "r_prime": fmt_rat(&s.r_prime), "max_size": s.max_size});
    let rep = detailed_balance_check(&s.sigma, &s.r, s.max_size)?;
    out.push(Check {
        suite,
        check_id: "detailed-balance".into(),
        params: params.clone(),
        passed: rep.passed(),
        max_defect: if rep.passed() { 0.0 } else { f64::NAN },
    });
    let rep = coherence_check(&s.sigma, &s.r_prime, &s.r, 2 * s.max_size)?;
    out.push(Check {
        suite,
        check_id: "measure-coherence".into(),
        params,
        passed: rep.passed(),
        max_defect: rep.max_defect(),
    });
    Ok(())
}

fn bounds(s: &Setup, out: &mut Vec<Check>) {
    let suite = Suite::Bounds.name();
    let mut push = |id: &str, rep: thoma::generators::EkReport, params: Value| {
        for (i, b) in rep.bounds.iter().enumerate() {
            out.push(Check {
                suite,
                check_id: format!("{id}-c{}", i + 1),
                params: {
                    let mut p = params.clone();
                    p["bound"] = json!(b.name);
                    p["window_max"] = json!(fmt_rat(&b.window));
                    p["analytic"] = json!(fmt_rat(&b.analytic));
                    p
                },
                passed: b.stabilized() && b.grade_reduction_exact,
                max_defect: to_f64(&(&b.analytic - &b.window)),
            });
        }
    };
    if let Ok(z) = ZMeasureRates::new(s.sigma.clone(), s.r.clone()) {
        let params = json!({"sigma1": fmt_rat(s.sigma.sigma1()), "sigma2": fmt_rat(s.sigma.sigma2()),
                            "r": fmt_rat(&s.r), "max_size": s.max_size});
        push("zmeasure", verify_ek_bounds(&z, s.max_size), params);
    }
    if let Ok(m) = Meixner1D::new(s.sigma.sigma2().clone(), s.r.clone()) {
        let window = 8 * s.max_size;
        let params = json!({"c": fmt_rat(s.sigma.sigma2()), "r": fmt_rat(&s.r), "max_size": window});
        push("meixner", verify_ek_bounds(&m, window), params);
    }
}

fn plancherel(s: &Setup, out: &mut Vec<Check>) -> thoma::Result<()> {
    let suite = Suite::Plancherel.name();
    let sigmas: Vec<ParamPair> = [100, 1000, 10000]
        .iter()
        .map(|&k| ParamPair::new(s.sigma.sigma1().clone(), rat(k)))
        .collect::<thoma::Result<_>>()?;
    let rep = plancherel_limit_check(&s.theta, &sigmas, s.max_size)?;
    let ratios = rep.ratios();
    out.push(Check {
        suite,
        check_id: "rate-convergence".into(),
        params: json!({"theta": fmt_rat(&s.theta), "sigma1": fmt_rat(s.sigma.sigma1()),
                       "sigma2": rep.sigma2.iter().map(fmt_rat).collect::<Vec<_>>(), "max_size": s.max_size,
                       "defect_ratios": ratios}),
        passed: rep.empty_row_exact && rep.decreasing() && ratios.iter().all(|q| (0.05..=0.2).contains(q)),
        max_defect: rep.max_defect.last().map(to_f64).unwrap_or(0.0),
    });

    let points = [
        ThomaPoint::new(vec![ratio(3, 4), ratio(1, 4)], vec![ratio(1, 2)], rat(2))?,
        ThomaPoint::new(vec![], vec![ratio(2, 3)], rat(1))?,
        ThomaPoint::from_diagram(&Partition::from_parts(&[3, 1])),
    ];
    let fixed = ThomaPoint::new(vec![], vec![], rat(1))?;
    let qs = [ratio(1, 2), ratio(2, 3), ratio(9, 10)];
    let mut ok = true;
    for omega in &points {
        for a in &qs {
            ok &= plancherel_flow_q(a, &fixed)? == fixed;
            for b in &qs {
                ok &= plancherel_flow_q(a, &plancherel_flow_q(b, omega)?)? == plancherel_flow_q(&(a * b), omega)?;
            }
        }
    }
    out.push(Check {
        suite,
        check_id: "flow-semigroup".into(),
        params: json!({"q": qs.iter().map(fmt_rat).collect::<Vec<_>>()}),
        passed: ok,
        max_defect: if ok { 0.0 } else { f64::NAN },
    });

    let mut worst = 0.0f64;
    for mu in enumerate_up_to(s.nu_max) {
        let f = SymFn::basis_element(Basis::P, mu);
        let diff = &plancherel_limit_operator(&f)? - &plancherel_flow_derivative(&f)?;
        worst = worst.max(diff.terms().map(|(_, c)| to_f64(&c.abs())).fold(0.0, f64::max));
    }
    out.push(Check {
        suite,
        check_id: "generator-vs-flow".into(),
        params: json!({"nu_max": s.nu_max}),
        passed: worst == 0.0,
        max_defect: worst,
    });
    Ok(())
}
