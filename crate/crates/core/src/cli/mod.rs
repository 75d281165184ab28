//! Command-line front end. Every subcommand writes a JSON document with a
//! top-level `"schema": 1`, an echo of its inputs, its results and any
//! verification reports. Exit status is 0 when every check passes, 1 when
//! a check fails and 2 on usage, input or budget errors.

mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::apcount::{hypothesis_ratio, relsz_experiment, ApReport, ExperimentConfig, DEFAULT_DEVIATION_THRESHOLD};
use crate::budget::{largest_feasible, Budget};
use crate::cyclic::{CyclicFn, Measure, ResidueSet};
use crate::error::{Error, Result};
use crate::genmeasure::{generate, random_edge_fn, seeded_rng, GeneratorKind, GeneratorSpec};
use crate::gowersnorm::{box_norm_brute, box_power_brute, cube_cost, gcs_cost, gcs_verify, u_brute_cost, u_norm_brute, u_norm_fast, EdgeFn};
use crate::hypersystem::{is_prime, represent, HypergraphSystem, WeightedHypergraph};
use crate::linform::{
    binomial_expansion_identity, chain_cost, chain_verify, cube_centered_bound, cube_centered_expectation, cube_expectation,
    lf2_chain_cost, lf2_chain_verify, lf2_cost, lf2_expectation, lf2_telescoping, lf2_term, nu_prime, nu_prime_cost,
    slf_lhs, slf_single_chain_cost, slf_single_chain_verify, slf_single_lhs, Cap, CubePattern, Lf2Exponents, SlfInstance,
    SlfSingleInstance,
};
use crate::report::{Check, VerificationReport};

pub use verify::{verify_cost, verify_suite};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "gowers", version, about = "Exact uniformity norms and linear-forms checks on Z_N")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Serialize)]
struct GlobalArgs {
    /// Maximum number of elementary products a brute-force engine may perform
    #[arg(long, global = true, env = "GOWERS_BUDGET", default_value = "100000000", value_parser = parse_budget)]
    budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

fn parse_budget(s: &str) -> std::result::Result<u64, String> {
    let v = match s.parse::<u64>() {
        Ok(v) => v,
        Err(_) => {
            let f: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
            if !(f.is_finite() && f >= 0.0 && f.fract() == 0.0 && f <= u64::MAX as f64) {
                return Err(format!("{s:?} is not a whole number of products"));
            }
            f as u64
        }
    };
    if v == 0 {
        return Err("budget must be positive".into());
    }
    Ok(v)
}

#[derive(Subcommand, Debug)]
enum Command {
    /// U^k norm of a function on Z_N
    Norm(NormArgs),
    /// Box norm of a function on a product of finite sets
    Boxnorm(BoxArgs),
    /// Gowers-Cauchy-Schwarz inequality for a tuple of functions
    Gcs(BoxArgs),
    /// Represent a measure as a weighted hypergraph and check norm preservation
    Represent(HyperArgs),
    /// Cube-product expectations on one edge
    Cube(CubeArgs),
    /// Strong linear forms and their Cauchy-Schwarz chain
    Slf(SlfArgs),
    /// Single-copy strong linear forms
    SlfSingle(SlfArgs),
    /// The averaged weight nu' and its L^2 deviation
    Nuprime(HyperArgs),
    /// Expectations with a doubled x_0
    Lf2(Lf2Args),
    /// Progression density and hypothesis ratios
    Count(CountArgs),
    /// Progression count against uniformity for a generated measure
    Experiment(ExperimentArgs),
    /// Property suite at fixed sizes
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Serialize)]
struct MeasureArgs {
    #[arg(long, default_value = "random")]
    kind: GeneratorKind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON file holding a generator spec, {"n", "members"} or {"n", "values"}
    #[arg(long)]
    input: Option<PathBuf>,
}

enum Source {
    Function(CyclicFn),
    Measure(Measure),
}

impl MeasureArgs {
    fn spec(&self) -> Result<GeneratorSpec> {
        let n = self.n.ok_or_else(|| Error::InvalidSpec("--n is required without --input".into()))?;
        Ok(GeneratorSpec::new(self.kind, n, self.p, self.seed))
    }

    fn source(&self) -> Result<Source> {
        let Some(path) = &self.input else {
            return Ok(Source::Measure(generate(&self.spec()?)?));
        };
        let value: Value = read_json(path)?;
        if value.get("kind").is_some() {
            Ok(Source::Measure(generate(&serde_json::from_value::<GeneratorSpec>(value)?)?))
        } else if value.get("members").is_some() {
            Ok(Source::Measure(serde_json::from_value::<ResidueSet>(value)?.to_measure()?))
        } else {
            Ok(Source::Function(serde_json::from_value::<CyclicFn>(value)?))
        }
    }

    fn measure(&self) -> Result<Measure> {
        match self.source()? {
            Source::Measure(m) => Ok(m),
            Source::Function(f) => Measure::new(f),
        }
    }

    fn function(&self) -> Result<CyclicFn> {
        match self.source()? {
            Source::Measure(m) => Ok(m.func().clone()),
            Source::Function(f) => Ok(f),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Brute,
    Fast,
    Both,
}

#[derive(Args, Debug, Serialize)]
struct NormArgs {
    #[command(flatten)]
    measure: MeasureArgs,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, value_enum, default_value_t = Mode::Fast)]
    mode: Mode,
    /// Take the norm of f - 1
    #[arg(long)]
    centered: bool,
}

#[derive(Args, Debug, Serialize)]
struct BoxArgs {
    /// JSON file: one function {"edge", "dims", "values"} (boxnorm) or an array of 2^|e| of them (gcs)
    #[arg(long)]
    input: Option<PathBuf>,
    /// Arity of the random function(s) generated without --input
    #[arg(long, default_value_t = 2)]
    arity: usize,
    /// Size of every vertex set for random functions
    #[arg(long, default_value_t = 5)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
struct HyperArgs {
    #[command(flatten)]
    measure: MeasureArgs,
    #[arg(long, default_value_t = 2)]
    r: usize,
}

#[derive(Args, Debug, Serialize)]
struct CubeArgs {
    #[command(flatten)]
    hyper: HyperArgs,
    /// Edge index j; the function is nu_{e_j}
    #[arg(long, default_value_t = 0)]
    edge: usize,
    /// Exponents as 0/1 characters, character w for cube vertex w; all ones by default
    #[arg(long)]
    pattern: Option<String>,
}

#[derive(Args, Debug, Serialize)]
struct SlfArgs {
    #[command(flatten)]
    hyper: HyperArgs,
    /// Caps as "nu", "one", or a comma list (2r entries for slf, r for slf-single)
    #[arg(long, default_value = "nu")]
    caps: String,
    /// Seed for g = u * cap; omit to take every g equal to its cap
    #[arg(long)]
    g_seed: Option<u64>,
    /// JSON instance file, replacing the measure and cap flags
    #[arg(long)]
    instance: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct Lf2Args {
    #[command(flatten)]
    hyper: HyperArgs,
    /// n_{1,0} n_{1,1} n_{2,0} ... as 0/1 characters; all ones by default
    #[arg(long)]
    exponents: Option<String>,
    /// Vertex j of the centered term
    #[arg(long, default_value_t = 1)]
    vertex: usize,
}

#[derive(Args, Debug, Serialize)]
struct CountArgs {
    #[command(flatten)]
    measure: MeasureArgs,
    /// Progression length
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Uniformity order for the hypothesis ratio; k - 1 by default
    #[arg(long)]
    r: Option<usize>,
    /// Count with the indicator 1_S and predict p^k
    #[arg(long)]
    indicator: bool,
}

#[derive(Args, Debug, Serialize)]
struct ExperimentArgs {
    #[command(flatten)]
    measure: MeasureArgs,
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[arg(long, default_value_t = DEFAULT_DEVIATION_THRESHOLD)]
    threshold: f64,
    /// JSON experiment config {"r", "spec", "threshold"}
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[arg(long, default_value_t = 7)]
    n: usize,
    #[arg(long, default_value_t = 10)]
    seeds: u64,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// What a subcommand hands back for printing.
struct Outcome {
    result: Value,
    reports: Vec<VerificationReport>,
    csv: Option<String>,
}

impl Outcome {
    fn new(result: Value) -> Self {
        Outcome { result, reports: Vec::new(), csv: None }
    }

    fn report(mut self, r: VerificationReport) -> Self {
        self.reports.push(r);
        self
    }

    fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed())
    }
}

/// A failure together with a hint on the largest size that fits the budget.
struct Failure {
    error: Error,
    hint: Option<String>,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { error, hint: None }
    }
}

fn with_hint<T>(r: Result<T>, hint: impl FnOnce() -> Option<String>) -> std::result::Result<T, Failure> {
    r.map_err(|error| {
        let hint = matches!(error, Error::BudgetExceeded { .. }).then(hint).flatten();
        Failure { error, hint }
    })
}

fn largest_prime_at_most(n: usize, above: usize) -> Option<usize> {
    (above + 1..=n).rev().find(|&m| is_prime(m))
}

fn suggest_n(budget: Budget, n: usize, r: usize, cost: impl Fn(usize) -> u128) -> Option<String> {
    let m = largest_feasible(budget, n, cost)?;
    Some(match largest_prime_at_most(m, r) {
        Some(p) => format!("largest feasible N is {m} (largest usable prime {p}); raise --budget or GOWERS_BUDGET for more"),
        None => format!("largest feasible N is {m}; raise --budget or GOWERS_BUDGET for more"),
    })
}

/// Cost of a chain check for the all-ones hypergraph of the same shape.
fn slf_chain_cost_at(r: usize, m: usize) -> u128 {
    let Ok(w) = HypergraphSystem::cyclic(r, m).and_then(|s| WeightedHypergraph::constant(s, 1.0)) else {
        return u128::MAX;
    };
    SlfInstance::at_caps(w, vec![[Cap::Nu; 2]; r]).map(|i| chain_cost(&i)).unwrap_or(u128::MAX)
}

fn slf_single_chain_cost_at(r: usize, m: usize) -> u128 {
    let Ok(w) = HypergraphSystem::cyclic(r, m).and_then(|s| WeightedHypergraph::constant(s, 1.0)) else {
        return u128::MAX;
    };
    SlfSingleInstance::at_caps(w, vec![Cap::Nu; r]).map(|i| slf_single_chain_cost(&i)).unwrap_or(u128::MAX)
}

fn parse_caps(s: &str, count: usize) -> Result<Vec<Cap>> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() == 1 {
        return Ok(vec![parts[0].parse()?; count]);
    }
    if parts.len() != count {
        return Err(Error::InvalidSpec(format!("expected 1 or {count} caps, got {}", parts.len())));
    }
    parts.iter().map(|p| p.parse()).collect()
}

fn run_norm(a: &NormArgs, budget: Budget) -> std::result::Result<Outcome, Failure> {
    let mut f = a.measure.function()?;
    if a.centered {
        f = f.sub_constant(1.0);
    }
    let n = f.modulus();
    let brute = match a.mode {
        Mode::Fast => None,
        _ => Some(with_hint(u_norm_brute(&f, a.k, budget), || suggest_n(budget, n, 0, |m| u_brute_cost(m, a.k)))?),
    };
    let fast = match a.mode {
        Mode::Brute => None,
        _ => Some(u_norm_fast(&f, a.k)?),
    };
    let mut out = Outcome::new(json!({ "modulus": n, "k": a.k, "brute": brute, "fast": fast }));
    if let (Some(b), Some(fa)) = (brute, fast) {
        let mut rep = VerificationReport::new("norm");
        rep.push(Check::eq("oracle-agreement", fa, b, 1e-9));
        out = out.report(rep);
    }
    Ok(out)
}

fn random_box_fns(a: &BoxArgs, count: usize) -> Result<Vec<EdgeFn>> {
    let mut rng = seeded_rng(a.seed);
    let edge: Vec<usize> = (0..a.arity).collect();
    (0..count).map(|_| random_edge_fn(edge.clone(), vec![a.dim; a.arity], -1.0, 1.0, &mut rng)).collect()
}

fn run_boxnorm(a: &BoxArgs, budget: Budget) -> std::result::Result<Outcome, Failure> {
    let g = match &a.input {
        Some(p) => read_json::<EdgeFn>(p)?,
        None => random_box_fns(a, 1)?.remove(0),
    };
    let hint = || {
        let dims = g.dims().to_vec();
        let m = largest_feasible(budget, dims.iter().copied().max().unwrap_or(1), |d| cube_cost(&vec![d; dims.len()]))?;
        Some(format!("largest feasible common vertex-set size is {m}"))
    };
    let power = with_hint(box_power_brute(&g, budget), hint)?;
    let norm = box_norm_brute(&g, budget)?;
    Ok(Outcome::new(json!({ "edge": g.edge(), "dims": g.dims(), "power": power, "norm": norm })))
}

fn run_gcs(a: &BoxArgs, budget: Budget) -> std::result::Result<Outcome, Failure> {
    let gs = match &a.input {
        Some(p) => read_json::<Vec<EdgeFn>>(p)?,
        None => random_box_fns(a, 1 << a.arity)?,
    };
    let dims = gs.first().map(|g| g.dims().to_vec()).unwrap_or_default();
    let hint = || {
        let m = largest_feasible(budget, dims.iter().copied().max().unwrap_or(1), |d| gcs_cost(&vec![d; dims.len()]))?;
        Some(format!("largest feasible common vertex-set size is {m}"))
    };
    let rep = with_hint(gcs_verify(&gs, budget), hint)?;
    Ok(Outcome::new(json!({ "functions": gs.len(), "dims": dims })).report(rep))
}

fn run_represent(a: &HyperArgs, budget: Budget) -> std::result::Result<Outcome, Failure> {
    let nu = a.measure.measure()?;
    let w = represent(&nu, a.r)?;
    let edge_cost = cube_cost(&vec![nu.modulus(); a.r]).saturating_mul(a.r as u128 + 1);
    with_hint(budget.check(edge_cost), || suggest_n(budget, nu.modulus(), a.r, |m| cube_cost(&vec![m; a.r]) * (a.r as u128 + 1)))?;
    let target = u_norm_fast(&nu.centered(), a.r)?;
    let mut rep = VerificationReport::new("norm-preservation");
    rep.measure("cyclic_norm", target);
    for j in 0..=a.r {
        let b = box_norm_brute(&w.centered(j), Budget::UNLIMITED)?;
        rep.push(Check::eq(format!("edge[{j}]"), b, target, 1e-9));
    }
    Ok(Outcome::new(json!({ "hypergraph": w, "sup": w.sup() })).report(rep))
}

fn run_cube(a: &CubeArgs, budget: Budget) -> std::result::Result<Outcome, Failure> {
    let nu = a.hyper.measure.measure()?;
    let w = represent(&nu, a.hyper.r)?;
    if a.edge > a.hyper.r {
        return Err(Error::InvalidVertex { vertex: a.edge, reason: "edge index exceeds r" }.into());
    }
    let g = w.weight(a.edge);
    let pat = match &a.pattern {
        Some(s) => CubePattern::parse(g.edge().to_vec(), s)?,
        None => CubePattern::full(g.edge().to_vec()),
    };
    let terms = 1u128 << pat.support().len();
    let r = a.hyper.r;
    let hint = || suggest_n(budget, nu.modulus(), r, |m| cube_cost(&vec![m; r]).saturating_mul(terms + 3));
    with_hint(budget.check(cube_cost(g.dims()).saturating_mul(terms + 3)), hint)?;
    let raw = cube_expectation(g, &pat, budget)?;
    let mut out = Outcome::new(json!({}));
    let centered = if pat.is_zero() {
        None
    } else {
        out = out.report(cube_centered_bound(g, &pat, budget)?);
        Some(cube_centered_expectation(g, &pat, budget)?)
    };
    out = out.report(binomial_expansion_identity(g, &pat, Budget::UNLIMITED)?);
    out.result = json!({ "edge": g.edge(), "pattern": pat, "expectation": raw, "centered": centered });
    Ok(out)
}

fn run_slf(a: &SlfArgs, budget: Budget) -> std::result::Result<Outcome, Failure> {
    let inst = match &a.instance {
        Some(p) => read_json::<SlfInstance>(p)?,
        None => {
            let w = represent(&a.hyper.measure.measure()?, a.hyper.r)?;
            let flat = parse_caps(&a.caps, 2 * a.hyper.r)?;
            let caps: Vec<[Cap; 2]> = flat.chunks(2).map(|c| [c[0], c[1]]).collect();
            match a.g_seed {
                Some(s) => SlfInstance::seeded(w, caps, s)?,
                None => SlfInstance::at_caps(w, caps)?,
            }
        }
    };
    let r = inst.r();
    let n = inst.hypergraph().system().dims()[0];
    let rep = with_hint(chain_verify(&inst, budget), || suggest_n(budget, n, r, |m| slf_chain_cost_at(r, m)))?;
    let lhs = slf_lhs(&inst, Budget::UNLIMITED)?;
    Ok(Outcome::new(json!({ "r": r, "n": n, "lhs": lhs })).report(rep))
}

fn run_slf_single(a: &SlfArgs, budget: Budget) -> std::result::Result<Outcome, Failure> {
    let inst = match &a.instance {
        Some(p) => read_json::<SlfSingleInstance>(p)?,
        None => {
            let w = represent(&a.hyper.measure.measure()?, a.hyper.r)?;
            let caps = parse_caps(&a.caps, a.hyper.r)?;
            match a.g_seed {
                Some(s) => SlfSingleInstance::seeded(w, caps, s)?,
                None => SlfSingleInstance::at_caps(w, caps)?,
            }
        }
    };
    let r = inst.hypergraph().r();
    let n = inst.hypergraph().system().dims()[0];
    let rep =
        with_hint(slf_single_chain_verify(&inst, budget), || suggest_n(budget, n, r, |m| slf_single_chain_cost_at(r, m)))?;
    let lhs = slf_single_lhs(&inst, Budget::UNLIMITED)?;
    Ok(Outcome::new(json!({ "r": r, "n": n, "lhs": lhs })).report(rep))
}

fn run_nuprime(a: &HyperArgs, budget: Budget) -> std::result::Result<Outcome, Failure> {
    let nu = a.measure.measure()?;
    let w = represent(&nu, a.r)?;
    let r = a.r;
    let cost = |w: &WeightedHypergraph| nu_prime_cost(w).saturating_add(lf2_cost(w));
    let hint = || {
        suggest_n(budget, nu.modulus(), r, |m| {
            HypergraphSystem::cyclic(r, m).and_then(|s| WeightedHypergraph::constant(s, 1.0)).map(|w| cost(&w)).unwrap_or(u128::MAX)
        })
    };
    with_hint(budget.check(cost(&w)), hint)?;
    let np = nu_prime(&w, Budget::UNLIMITED)?;
    let vals = np.values();
    let count = vals.len() as f64;
    let first = crate::sum::sum(vals.iter().copied()) / count;
    let second = crate::sum::sum(vals.iter().map(|v| v * v)) / count;
    let dev = crate::sum::sum(vals.iter().map(|v| (v - 1.0) * (v - 1.0))) / count;
    let doubled = lf2_expectation(&w, &Lf2Exponents::ones(r), Budget::UNLIMITED)?;
    let mut rep = VerificationReport::new("nu-prime");
    rep.push(Check::eq("l2-expansion", dev, second - 2.0 * first + 1.0, 1e-9));
    rep.push(Check::eq("second-moment=doubled", second, doubled, 1e-9));
    let reference = u_norm_fast(&nu.centered(), r)? * w.sup().powi(r as i32 - 1);
    rep.measure("l2_dev", dev).measure("reference", reference);
    Ok(Outcome::new(json!({ "l2_dev": dev, "mean": first, "second_moment": second, "reference": reference })).report(rep))
}

fn run_lf2(a: &Lf2Args, budget: Budget) -> std::result::Result<Outcome, Failure> {
    let nu = a.hyper.measure.measure()?;
    let r = a.hyper.r;
    let w = represent(&nu, r)?;
    let exps = match &a.exponents {
        None => Lf2Exponents::ones(r),
        Some(s) => {
            let bits: Vec<u8> = s
                .chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(Error::InvalidSpec(format!("exponent character {c:?} is not 0 or 1"))),
                })
                .collect::<Result<_>>()?;
            if bits.len() != 2 * r {
                return Err(Error::InvalidSpec(format!("need {} exponents, got {}", 2 * r, bits.len())).into());
            }
            Lf2Exponents::new(bits.chunks(2).map(|c| [c[0], c[1]]).collect())?
        }
    };
    let j = a.vertex;
    let cost = |w: &WeightedHypergraph| lf2_chain_cost(w, j, &exps).map(|c| c.saturating_add(lf2_cost(w) * (2 * r as u128 + 3)));
    let hint = || {
        suggest_n(budget, nu.modulus(), r, |m| {
            HypergraphSystem::cyclic(r, m)
                .and_then(|s| WeightedHypergraph::constant(s, 1.0))
                .and_then(|w| cost(&w))
                .unwrap_or(u128::MAX)
        })
    };
    with_hint(budget.check(cost(&w)?), hint)?;
    let value = lf2_expectation(&w, &exps, Budget::UNLIMITED)?;
    let term = lf2_term(&w, j, &exps, Budget::UNLIMITED)?;
    Ok(Outcome::new(json!({ "exponents": exps, "vertex": j, "expectation": value, "term": term }))
        .report(lf2_telescoping(&w, &exps, Budget::UNLIMITED)?)
        .report(lf2_chain_verify(&w, j, &exps, Budget::UNLIMITED)?))
}

fn run_count(a: &CountArgs, budget: Budget) -> std::result::Result<Outcome, Failure> {
    let nu = a.measure.measure()?;
    let n = nu.modulus();
    let hint = || suggest_n(budget, n, 0, |m| (m as u128).pow(2) * 2 * a.k as u128);
    let ap = with_hint(
        if a.indicator { ApReport::for_indicator(&nu.support(), n, a.k, budget) } else { ApReport::for_measure(&nu, a.k, budget) },
        hint,
    )?;
    let r = a.r.unwrap_or(a.k.saturating_sub(1).max(1));
    let h = hypothesis_ratio(&nu, r)?;
    let mut out = Outcome::new(json!({ "ap": ap, "hypothesis": h }));
    out.csv = Some(format!(
        "{},r,norm,p,hypothesis_ratio,hypothesis_half_ratio\n{},{},{:e},{:e},{:e},{:e}\n",
        ApReport::csv_header(),
        ap.csv_row(),
        h.r,
        h.norm,
        h.p,
        h.ratio,
        h.half_ratio
    ));
    Ok(out)
}

fn run_experiment(a: &ExperimentArgs, budget: Budget) -> std::result::Result<Outcome, Failure> {
    let cfg = match &a.config {
        Some(p) => read_json::<ExperimentConfig>(p)?,
        None => ExperimentConfig { r: a.r, spec: a.measure.spec()?, threshold: a.threshold },
    };
    let r = cfg.r;
    let hint = || suggest_n(budget, cfg.spec.n, r, |m| crate::apcount::telescoping_cost(m, r));
    let outcome = with_hint(relsz_experiment(&cfg, budget), hint)?;
    let mut out = Outcome::new(json!({
        "config": cfg,
        "ap": outcome.ap,
        "hypothesis": outcome.hypothesis,
        "deviation": outcome.deviation,
        "pseudorandom": outcome.pseudorandom,
    }));
    out.csv = Some(format!(
        "{},deviation,pseudorandom,norm,hypothesis_ratio\n{},{:e},{},{:e},{:e}\n",
        ApReport::csv_header(),
        outcome.ap.csv_row(),
        outcome.deviation,
        outcome.pseudorandom,
        outcome.hypothesis.norm,
        outcome.hypothesis.ratio
    ));
    Ok(out.report(outcome.report))
}

fn run_verify(a: &VerifyArgs, budget: Budget) -> std::result::Result<Outcome, Failure> {
    let hint = || suggest_n(budget, a.n, a.r, |m| verify_cost(a.r, m, a.seeds));
    with_hint(budget.check(verify_cost(a.r, a.n, a.seeds)), hint)?;
    let rep = verify_suite(a.r, a.n, a.seeds)?;
    Ok(Outcome::new(json!({ "checks": rep.checks.len(), "passed": rep.passed() })).report(rep))
}

fn checks_csv(reports: &[VerificationReport]) -> String {
    let mut s = String::from("report,label,kind,lhs,rhs,margin,tolerance,pass\n");
    for r in reports {
        for c in &r.checks {
            let kind = match c.kind {
                crate::report::CheckKind::Inequality => "inequality",
                crate::report::CheckKind::Identity => "identity",
            };
            s.push_str(&format!(
                "{},\"{}\",{kind},{:e},{:e},{:e},{:e},{}\n",
                r.name, c.label, c.lhs, c.rhs, c.margin, c.tolerance, c.pass
            ));
        }
    }
    s
}

fn dispatch(cmd: &Command, budget: Budget) -> std::result::Result<(&'static str, Value, Outcome), Failure> {
    fn echo<T: Serialize>(t: &T) -> Value {
        serde_json::to_value(t).unwrap_or(Value::Null)
    }
    Ok(match cmd {
        Command::Norm(a) => ("norm", echo(a), run_norm(a, budget)?),
        Command::Boxnorm(a) => ("boxnorm", echo(a), run_boxnorm(a, budget)?),
        Command::Gcs(a) => ("gcs", echo(a), run_gcs(a, budget)?),
        Command::Represent(a) => ("represent", echo(a), run_represent(a, budget)?),
        Command::Cube(a) => ("cube", echo(a), run_cube(a, budget)?),
        Command::Slf(a) => ("slf", echo(a), run_slf(a, budget)?),
        Command::SlfSingle(a) => ("slf-single", echo(a), run_slf_single(a, budget)?),
        Command::Nuprime(a) => ("nuprime", echo(a), run_nuprime(a, budget)?),
        Command::Lf2(a) => ("lf2", echo(a), run_lf2(a, budget)?),
        Command::Count(a) => ("count", echo(a), run_count(a, budget)?),
        Command::Experiment(a) => ("experiment", echo(a), run_experiment(a, budget)?),
        Command::Verify(a) => ("verify", echo(a), run_verify(a, budget)?),
    })
}

fn emit(text: &str, output: Option<&Path>) -> std::io::Result<()> {
    match output {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let budget = Budget(cli.global.budget);
    let (name, inputs, outcome) = match dispatch(&cli.command, budget) {
        Ok(v) => v,
        Err(Failure { error, hint }) => {
            eprintln!("error: {error}");
            if let Some(h) = hint {
                eprintln!("hint: {h}");
            }
            return 2;
        }
    };
    deliver(name, inputs, &outcome, &cli.global)
}

/// Prints or writes the report and maps the outcome to an exit code.
fn deliver(name: &str, inputs: Value, outcome: &Outcome, global: &GlobalArgs) -> i32 {
    let passed = outcome.passed();
    let text = match global.format {
        Format::Json => {
            let doc = json!({
                "schema": SCHEMA_VERSION,
                "command": name,
                "inputs": inputs,
                "budget": global.budget,
                "result": outcome.result,
                "reports": outcome.reports,
                "passed": passed,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => outcome.csv.clone().unwrap_or_else(|| checks_csv(&outcome.reports)),
    };
    if let Err(e) = emit(&text, global.output.as_deref()) {
        eprintln!("error: {e}");
        return 2;
    }
    if !passed {
        for r in &outcome.reports {
            for c in r.failures() {
                eprintln!("failed: {}/{} (lhs {:e}, rhs {:e})", r.name, c.label, c.lhs, c.rhs);
            }
        }
        return 1;
    }
    0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_check_exits_one() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        let global = GlobalArgs { budget: 10, format: Format::Json, output: Some(path.clone()) };
        let mut rep = VerificationReport::new("demo");
        rep.push(Check::le("holds", 1.0, 2.0, 0.0));
        let ok = Outcome::new(json!({})).report(rep.clone());
        assert_eq!(deliver("demo", Value::Null, &ok, &global), 0);
        rep.push(Check::le("fails", 3.0, 2.0, 0.0));
        let bad = Outcome::new(json!({})).report(rep);
        assert_eq!(deliver("demo", Value::Null, &bad, &global), 1);
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(doc["passed"], false);
        assert_eq!(doc["schema"], 1);
    }

    #[test]
    fn budget_parsing() {
        assert_eq!(parse_budget("1e8"), Ok(100_000_000));
        assert_eq!(parse_budget("250"), Ok(250));
        assert!(parse_budget("0").is_err());
        assert!(parse_budget("1.5").is_err());
        assert!(parse_budget("lots").is_err());
    }

    #[test]
    fn caps_lists() {
        assert_eq!(parse_caps("nu", 3).unwrap(), vec![Cap::Nu; 3]);
        assert_eq!(parse_caps("one, nu", 2).unwrap(), vec![Cap::One, Cap::Nu]);
        assert!(parse_caps("one,nu,nu", 2).is_err());
        assert!(parse_caps("two", 1).is_err());
    }

    #[test]
    fn prime_hint() {
        assert_eq!(largest_prime_at_most(12, 2), Some(11));
        assert_eq!(largest_prime_at_most(3, 3), None);
    }
}
