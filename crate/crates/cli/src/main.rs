//! `thoma`: verification suites, sampling, simulation, evolution and
//! correlation queries for the z-measure dynamics.

mod failure;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use thoma::correlations::{dynamic_correlation, static_correlation, SpaceTimeQuery};
use thoma::generators::{Meixner1D, PlancherelRates, RateMatrix, ZMeasureRates};
use thoma::measures::{
    evolve, gillespie, mixed_z_ensemble, plancherel_ensemble, plancherel_flow, plancherel_flow_q, stream_rng,
    CapPolicy, Sampler, Trajectory, WeightedEnsemble,
};
use thoma::rational::{fmt_rat, parse_rational};
use thoma::{ParamPair, Partition, Rat, ThomaPoint};

use failure::Failure;
use output::{destination, Format, Sink, VERSION};

/// Samples per independent random stream; fixes output regardless of workers.
const BLOCK: usize = 1024;

#[derive(Parser)]
#[command(name = "thoma", version = VERSION, about = "Markov dynamics on the Young lattice and the Thoma cone")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run exact verification suites.
    Verify(VerifyArgs),
    /// Draw independent samples from the mixed z-measure.
    Sample(SampleArgs),
    /// Simulate trajectories of a jump process.
    Simulate(SimulateArgs),
    /// Evolve a distribution under the truncated semigroup.
    Evolve(EvolveArgs),
    /// Static or space-time correlation of the lattice configuration.
    Correlate(CorrelateArgs),
    /// Plancherel-limit flow and rate convergence.
    Plancherel(PlancherelArgs),
    /// Validate a file written by another subcommand.
    CheckOutput(CheckArgs),
}

fn rational(s: &str) -> Result<Rat, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// A comma-separated list of rationals, parsed as one argument value.
#[derive(Clone, Debug, Default)]
struct RatList(Vec<Rat>);

fn rational_list(s: &str) -> Result<RatList, String> {
    if s.trim().is_empty() {
        return Ok(RatList::default());
    }
    s.split(',').map(rational).collect::<Result<_, _>>().map(RatList)
}

fn partition(s: &str) -> Result<Partition, String> {
    let t = s.trim().trim_start_matches('(').trim_end_matches(')');
    if t.is_empty() || t == "∅" {
        return Ok(Partition::empty());
    }
    let parts = t
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let parts: Vec<usize> = parts.into_iter().filter(|&p| p > 0).collect();
    if parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(format!("{s:?}: parts must be weakly decreasing"));
    }
    Ok(Partition::from_parts(&parts))
}

#[derive(Args)]
struct Params {
    /// σ₁ as a decimal or p/q literal.
    #[arg(long, default_value = "0", value_parser = rational, allow_hyphen_values = true)]
    sigma1: Rat,
    /// σ₂ as a decimal or p/q literal.
    #[arg(long, default_value = "1", value_parser = rational, allow_hyphen_values = true)]
    sigma2: Rat,
    /// Level parameter r > 0.
    #[arg(long, default_value = "1", value_parser = rational, allow_hyphen_values = true)]
    r: Rat,
}

impl Params {
    fn sigma(&self) -> Result<ParamPair, Failure> {
        Ok(ParamPair::new(self.sigma1.clone(), self.sigma2.clone())?)
    }

    fn json(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("sigma1".into(), json!(fmt_rat(&self.sigma1)));
        m.insert("sigma2".into(), json!(fmt_rat(&self.sigma2)));
        m.insert("r".into(), json!(fmt_rat(&self.r)));
        m
    }
}

#[derive(Args)]
struct Output {
    /// Output file; defaults to <out-dir>/<command>.<ext> or stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Default output directory.
    #[arg(long, env = "THOMA_OUT_DIR")]
    out_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

impl Output {
    fn sink(&self, cmd: &str, params: Map<String, Value>, seed: Option<u64>) -> Result<Sink, Failure> {
        let path = destination(self.out.as_deref(), self.out_dir.as_deref(), cmd, self.format);
        Sink::open(cmd, params, seed, self.format, path)
    }

    fn json_only(&self, cmd: &str) -> Result<(), Failure> {
        if self.format == Format::Csv {
            return Err(Failure::config(format!(
                "{cmd} writes nested records; CSV is available for sample and evolve"
            )));
        }
        Ok(())
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    params: Params,
    #[command(flatten)]
    output: Output,
    #[arg(long, value_enum, default_value = "all")]
    suite: verify::Suite,
    /// Finer level r′ > r; defaults to r + 1.
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    r_prime: Option<Rat>,
    #[arg(long, default_value = "1", value_parser = rational, allow_hyphen_values = true)]
    theta: Rat,
    /// Largest diagram size in the check window.
    #[arg(long, default_value_t = 6)]
    max_size: usize,
    /// Largest |ν| among eigenfunctions.
    #[arg(long, default_value_t = 4)]
    nu_max: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Resample,
    Abort,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    params: Params,
    #[command(flatten)]
    output: Output,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest size kept in the shape tables.
    #[arg(long, default_value_t = 50)]
    cap: usize,
    #[arg(long, value_enum, default_value = "resample")]
    policy: Policy,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Emit the size histogram instead of the samples.
    #[arg(long)]
    histogram: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Z,
    Plancherel,
    Meixner,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    params: Params,
    #[command(flatten)]
    output: Output,
    #[arg(long, value_enum, default_value = "z")]
    model: Model,
    #[arg(long, default_value = "1", value_parser = rational)]
    theta: Rat,
    /// Start state: a partition such as "2,1" (or a size for the Meixner model).
    #[arg(long, default_value = "")]
    start: String,
    #[arg(long, default_value_t = 10.0)]
    t_end: f64,
    #[arg(long, default_value_t = 1)]
    trajectories: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    params: Params,
    #[command(flatten)]
    output: Output,
    #[arg(long, value_enum, default_value = "z")]
    model: Model,
    #[arg(long, default_value = "1", value_parser = rational)]
    theta: Rat,
    /// "stationary" or a partition such as "2,1".
    #[arg(long, default_value = "stationary")]
    start: String,
    #[arg(long)]
    t: f64,
    #[arg(long, default_value_t = 25)]
    max_size: usize,
    /// Fail with exit code 3 when the error bound exceeds this.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct CorrelateArgs {
    #[command(flatten)]
    params: Params,
    #[command(flatten)]
    output: Output,
    /// Comma-separated positions.
    #[arg(long, value_parser = rational_list, allow_hyphen_values = true)]
    points: RatList,
    /// Comma-separated times, one per point or one for all; omit for the static law.
    #[arg(long)]
    times: Option<String>,
    #[arg(long, default_value_t = 20)]
    max_size: usize,
    /// Lift the 3-slice, 6-point budget.
    #[arg(long)]
    unbounded: bool,
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct PlancherelArgs {
    #[command(flatten)]
    output: Output,
    #[arg(long, default_value = "0", value_parser = rational, allow_hyphen_values = true)]
    sigma1: Rat,
    #[arg(long, default_value = "1", value_parser = rational)]
    theta: Rat,
    /// σ₂ values along which the z-measure rates are compared with the limit.
    #[arg(long, default_value = "100,1000,10000", value_parser = rational_list)]
    sigma2_grid: RatList,
    #[arg(long, default_value_t = 6)]
    max_size: usize,
    /// Flow the point (alpha, beta, delta) for time t ...
    #[arg(long)]
    t: Option<f64>,
    /// ... or to the exact parameter q = e^{−t} in (0, 1].
    #[arg(long, value_parser = rational)]
    q: Option<Rat>,
    #[arg(long, default_value = "", value_parser = rational_list)]
    alpha: RatList,
    #[arg(long, default_value = "", value_parser = rational_list)]
    beta: RatList,
    #[arg(long, value_parser = rational)]
    delta: Option<Rat>,
}

#[derive(Args)]
struct CheckArgs {
    path: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Evolve(a) => cmd_evolve(a),
        Command::Correlate(a) => cmd_correlate(a),
        Command::Plancherel(a) => cmd_plancherel(a),
        Command::CheckOutput(a) => cmd_check(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("thoma: {f}");
            ExitCode::from(f.code)
        }
    }
}

fn parts_json(p: &Partition) -> Value {
    json!(p.parts())
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Failure> {
    a.output.json_only("verify")?;
    let sigma = a.params.sigma()?;
    let r_prime = a.r_prime.clone().unwrap_or_else(|| &a.params.r + Rat::from_integer(1.into()));
    let setup = verify::Setup {
        sigma,
        r: a.params.r.clone(),
        r_prime: r_prime.clone(),
        theta: a.theta.clone(),
        max_size: a.max_size,
        nu_max: a.nu_max,
    };
    let mut params = a.params.json();
    params.insert("r_prime".into(), json!(fmt_rat(&r_prime)));
    params.insert("theta".into(), json!(fmt_rat(&a.theta)));
    params.insert("max_size".into(), json!(a.max_size));
    params.insert("nu_max".into(), json!(a.nu_max));
    params.insert("suite".into(), json!(format!("{:?}", a.suite).to_lowercase()));
    let checks = verify::run(a.suite, &setup)?;
    let mut sink = a.output.sink("verify", params, None)?;
    let mut failed = Vec::new();
    for c in &checks {
        sink.write(c.to_json())?;
        if !c.passed {
            failed.push(format!("{}/{}", c.suite, c.check_id));
        }
    }
    sink.finish()?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::checks(format!("failed checks: {}", failed.join(", "))))
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Failure::config(format!("worker pool: {e}")))
}

fn policy_name(p: Policy) -> &'static str {
    match p {
        Policy::Resample => "resample",
        Policy::Abort => "abort",
    }
}

fn cmd_sample(a: SampleArgs) -> Result<(), Failure> {
    let sigma = a.params.sigma()?;
    let policy = match a.policy {
        Policy::Resample => CapPolicy::Resample,
        Policy::Abort => CapPolicy::Abort,
    };
    let sampler = Sampler::new(sigma, a.params.r.clone(), a.cap, policy)?;
    let blocks = a.n.div_ceil(BLOCK);
    let draws: Vec<Vec<Partition>> = pool(a.workers)?.install(|| {
        (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut rng = stream_rng(a.seed, b as u64);
                let count = BLOCK.min(a.n - b * BLOCK);
                (0..count).map(|_| sampler.sample(&mut rng)).collect::<thoma::Result<Vec<_>>>()
            })
            .collect::<thoma::Result<Vec<_>>>()
    })?;
    let mut params = a.params.json();
    params.insert("n".into(), json!(a.n));
    params.insert("cap".into(), json!(a.cap));
    params.insert("policy".into(), json!(policy_name(a.policy)));
    params.insert("cap_tail".into(), json!(sampler.cap_tail()));
    let mut sink = a.output.sink("sample", params, Some(a.seed))?;
    if a.histogram {
        let mut hist = vec![0u64; a.cap + 1];
        for p in draws.iter().flatten() {
            hist[p.size()] += 1;
        }
        for (size, count) in hist.into_iter().enumerate() {
            sink.write(json!({"size": size, "count": count}))?;
        }
    } else {
        for (i, p) in draws.iter().flatten().enumerate() {
            let parts = p.parts().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
            let record = match a.output.format {
                Format::Csv => json!({"index": i, "size": p.size(), "parts": parts}),
                Format::Json => json!({"index": i, "size": p.size(), "parts": parts_json(p)}),
            };
            sink.write(record)?;
        }
    }
    sink.finish()
}

fn trajectories<G, R>(g: &G, start: G::State, a: &SimulateArgs, render: R) -> Result<Vec<Value>, Failure>
where
    G: RateMatrix + Sync,
    G::State: Send + Sync,
    R: Fn(&G::State) -> Value + Sync,
{
    let runs: Vec<Trajectory<G::State>> = pool(a.workers)?.install(|| {
        (0..a.trajectories)
            .into_par_iter()
            .map(|k| gillespie(g, start.clone(), a.t_end, &mut stream_rng(a.seed, k as u64)))
            .collect()
    });
    let mut out = Vec::new();
    for (k, traj) in runs.iter().enumerate() {
        for (step, (t, s)) in traj.events.iter().enumerate() {
            out.push(json!({"trajectory": k, "step": step, "t": t, "state": render(s)}));
        }
    }
    Ok(out)
}

fn cmd_simulate(a: SimulateArgs) -> Result<(), Failure> {
    a.output.json_only("simulate")?;
    if !(a.t_end >= 0.0 && a.t_end.is_finite()) {
        return Err(Failure::config(format!("t-end {} must be finite and ≥ 0", a.t_end)));
    }
    let mut params = a.params.json();
    params.insert("t_end".into(), json!(a.t_end));
    params.insert("trajectories".into(), json!(a.trajectories));
    let records = match a.model {
        Model::Z | Model::Plancherel => {
            let start = partition(&a.start).map_err(Failure::config)?;
            params.insert("start".into(), parts_json(&start));
            if a.model == Model::Z {
                params.insert("model".into(), json!("z"));
                let g = ZMeasureRates::new(a.params.sigma()?, a.params.r.clone())?;
                trajectories(&g, start, &a, parts_json)?
            } else {
                params.insert("model".into(), json!("plancherel"));
                params.insert("theta".into(), json!(fmt_rat(&a.theta)));
                let g = PlancherelRates::new(a.theta.clone())?;
                trajectories(&g, start, &a, parts_json)?
            }
        }
        Model::Meixner => {
            let start: usize = if a.start.trim().is_empty() {
                0
            } else {
                a.start.trim().parse().map_err(|e| Failure::config(format!("start: {e}")))?
            };
            params.insert("model".into(), json!("meixner"));
            params.insert("c".into(), json!(fmt_rat(&a.params.sigma2)));
            params.insert("start".into(), json!(start));
            let g = Meixner1D::new(a.params.sigma2.clone(), a.params.r.clone())?;
            trajectories(&g, start, &a, |l| json!(l))?
        }
    };
    let mut sink = a.output.sink("simulate", params, Some(a.seed))?;
    for r in records {
        sink.write(r)?;
    }
    sink.finish()
}

fn cmd_evolve(a: EvolveArgs) -> Result<(), Failure> {
    if !(a.t >= 0.0 && a.t.is_finite()) {
        return Err(Failure::config(format!("t {} must be finite and ≥ 0", a.t)));
    }
    let mut params = a.params.json();
    params.insert("t".into(), json!(a.t));
    params.insert("max_size".into(), json!(a.max_size));
    params.insert("start".into(), json!(a.start));
    let stationary = a.start.trim() == "stationary";
    let initial = |m: WeightedEnsemble| -> Result<WeightedEnsemble, Failure> {
        if stationary {
            Ok(m)
        } else {
            Ok(WeightedEnsemble::delta(&partition(&a.start).map_err(Failure::config)?))
        }
    };
    let result = match a.model {
        Model::Z => {
            params.insert("model".into(), json!("z"));
            let sigma = a.params.sigma()?;
            let g = ZMeasureRates::new(sigma.clone(), a.params.r.clone())?;
            let m0 = initial(mixed_z_ensemble(&sigma, &a.params.r, a.max_size)?)?;
            evolve(&g, &m0, a.t, a.max_size)?
        }
        Model::Plancherel => {
            params.insert("model".into(), json!("plancherel"));
            params.insert("theta".into(), json!(fmt_rat(&a.theta)));
            let g = PlancherelRates::new(a.theta.clone())?;
            let m0 = initial(plancherel_ensemble(&a.theta, a.max_size)?)?;
            evolve(&g, &m0, a.t, a.max_size)?
        }
        Model::Meixner => return Err(Failure::config("evolve supports the z and plancherel models".into())),
    };
    let mut sink = a.output.sink("evolve", params, None)?;
    for (lambda, w) in result.iter() {
        let parts = lambda.parts().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        let record = match a.output.format {
            Format::Csv => json!({"size": lambda.size(), "parts": parts, "weight": w}),
            Format::Json => json!({"parts": parts_json(lambda), "weight": w}),
        };
        sink.write(record)?;
    }
    if a.output.format == Format::Json {
        sink.write(json!({"total_mass": result.total_mass(), "tail_bound": result.tail_bound}))?;
    }
    sink.finish()?;
    check_tolerance(result.tail_bound, a.tolerance)
}

fn check_tolerance(bound: f64, tolerance: Option<f64>) -> Result<(), Failure> {
    match tolerance {
        Some(tol) if bound > tol => {
            Err(Failure::exhausted(format!("error bound {bound:.3e} exceeds tolerance {tol:.3e}")))
        }
        _ => Ok(()),
    }
}

fn cmd_correlate(a: CorrelateArgs) -> Result<(), Failure> {
    a.output.json_only("correlate")?;
    let sigma = a.params.sigma()?;
    let points = a.points.0;
    if points.is_empty() {
        return Err(Failure::config("--points is required".into()));
    }
    let mut params = a.params.json();
    params.insert("points".into(), json!(points.iter().map(fmt_rat).collect::<Vec<_>>()));
    params.insert("max_size".into(), json!(a.max_size));
    let value = match &a.times {
        None => {
            if !a.unbounded && points.len() > 6 {
                return Err(Failure::config("more than 6 points; pass --unbounded to allow".into()));
            }
            static_correlation(&sigma, &a.params.r, &points, a.max_size)?
        }
        Some(times) => {
            let times: Vec<f64> = times
                .split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|e| Failure::config(format!("time {t:?}: {e}"))))
                .collect::<Result<_, _>>()?;
            let times = match times.len() {
                1 => vec![times[0]; points.len()],
                n if n == points.len() => times,
                n => return Err(Failure::config(format!("{n} times for {} points", points.len()))),
            };
            if times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
                return Err(Failure::config("times must be finite and ≥ 0".into()));
            }
            let mut slices = times.clone();
            slices.dedup();
            if !a.unbounded && (points.len() > 6 || slices.len() > 3) {
                return Err(Failure::config("more than 3 time slices or 6 points; pass --unbounded to allow".into()));
            }
            params.insert("times".into(), json!(times));
            let mut pairs: Vec<(Rat, f64)> = points.into_iter().zip(times).collect();
            pairs.sort_by(|x, y| x.1.total_cmp(&y.1));
            dynamic_correlation(&sigma, &a.params.r, &SpaceTimeQuery::new(pairs)?, a.max_size)?
        }
    };
    let mut sink = a.output.sink("correlate", params, None)?;
    sink.write(serde_json::to_value(value).map_err(|e| Failure::config(e.to_string()))?)?;
    sink.finish()?;
    check_tolerance(value.error_bound, a.tolerance)
}

fn point_json(w: &ThomaPoint) -> Value {
    json!({
        "alpha": w.alpha().iter().map(fmt_rat).collect::<Vec<_>>(),
        "beta": w.beta().iter().map(fmt_rat).collect::<Vec<_>>(),
        "delta": fmt_rat(w.delta()),
    })
}

fn cmd_plancherel(a: PlancherelArgs) -> Result<(), Failure> {
    a.output.json_only("plancherel")?;
    let sigmas = a
        .sigma2_grid
        .0
        .iter()
        .map(|s2| ParamPair::new(a.sigma1.clone(), s2.clone()))
        .collect::<thoma::Result<Vec<_>>>()?;
    let mut params = Map::new();
    params.insert("theta".into(), json!(fmt_rat(&a.theta)));
    params.insert("sigma1".into(), json!(fmt_rat(&a.sigma1)));
    params.insert("max_size".into(), json!(a.max_size));
    let alpha = a.alpha.0.clone();
    let beta = a.beta.0.clone();
    let flowed = match (&a.delta, a.t, &a.q) {
        (None, None, None) => None,
        (Some(delta), t, q) => {
            let omega = ThomaPoint::new(alpha, beta, delta.clone())?;
            params.insert("point".into(), point_json(&omega));
            let out = match (t, q) {
                (Some(t), None) => {
                    params.insert("t".into(), json!(t));
                    plancherel_flow(t, &omega)?
                }
                (None, Some(q)) => {
                    params.insert("q".into(), json!(fmt_rat(q)));
                    plancherel_flow_q(q, &omega)?
                }
                _ => return Err(Failure::config("give exactly one of --t and --q".into())),
            };
            Some(out)
        }
        _ => return Err(Failure::config("--t/--q need a point given by --delta (and --alpha/--beta)".into())),
    };
    let mut sink = a.output.sink("plancherel", params, None)?;
    if !sigmas.is_empty() {
        let rep = thoma::generators::plancherel_limit_check(&a.theta, &sigmas, a.max_size)?;
        for (s2, d) in rep.sigma2.iter().zip(&rep.max_defect) {
            sink.write(json!({"kind": "rate-defect", "sigma2": fmt_rat(s2), "max_defect": fmt_rat(d),
                              "max_defect_f64": thoma::rational::to_f64(d)}))?;
        }
        sink.write(json!({"kind": "rate-summary", "ratios": rep.ratios(), "decreasing": rep.decreasing(),
                          "empty_row_exact": rep.empty_row_exact}))?;
    }
    if let Some(w) = flowed {
        sink.write(json!({"kind": "flow", "point": point_json(&w)}))?;
    }
    sink.finish()
}

fn cmd_check(a: CheckArgs) -> Result<(), Failure> {
    let file = std::fs::File::open(&a.path).map_err(|e| Failure::config(format!("{}: {e}", a.path.display())))?;
    let is_csv = a.path.extension().is_some_and(|e| e == "csv");
    let count = if is_csv {
        output::parse_csv(file).map_err(Failure::config)?.len()
    } else {
        output::parse_jsonl(std::io::BufReader::new(file)).map_err(Failure::config)?.len()
    };
    println!("{}: {count} records", a.path.display());
    Ok(())
}
