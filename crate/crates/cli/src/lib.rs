//! `clustertest` command-line driver.
//!
//! Exit codes: 0 accept / success, 1 reject, 2 usage or format error,
//! 3 oracle size cap exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use clustertest_core::geometry::covering_t;
use clustertest_core::io::{load_points, save_instance, PointFile, SCHEMA};
use clustertest_core::oracle::farness;
use clustertest_core::outliers::KClusterOptions;
use clustertest_core::{
    cluster_1_outliers, cluster_k_outliers, gen_clusterable, gen_far, gen_outliers, test_1_cluster,
    test_k_cluster, BodySpec, ClusterReport, ConvexBody, Error, PointSet, TestReport, TesterParams,
    Truth,
};
use serde_json::{json, Value};

mod stats;
pub use stats::wilson_interval;

pub const EXIT_ACCEPT: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "clustertest", version, about = "Property testing for geometric clusterability")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic instance file.
    Gen(GenArgs),
    /// Run the 1- or k-cluster tester on a point file.
    Test(TestArgs),
    /// Sample-based k-center clustering that tolerates outliers.
    Cluster(ClusterArgs),
    /// Exact farness of a (small) point file.
    Verify(VerifyArgs),
    /// Repeat `test` or `cluster` over consecutive seeds.
    Bench(BenchArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GenKind {
    Clusterable,
    Far,
    Outliers,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    /// Body as JSON (e.g. '{"kind":"ball","radius":1}'), a JSON file, or `ball`.
    #[arg(long)]
    body: String,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Minimum outlier distance from planted centres; defaults to 10 diameters.
    #[arg(long)]
    spread: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `.json` keeps the ground truth; any other extension writes CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug, Clone)]
struct TestArgs {
    #[arg(long)]
    body: String,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value_t = TesterParams::DEFAULT_DELTA)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "in")]
    input: PathBuf,
    /// Covering number override for k >= 2.
    #[arg(long)]
    t: Option<u64>,
    /// Slack used to derive the covering number.
    #[arg(long, default_value_t = 0.01)]
    slack: f64,
}

#[derive(Args, Debug, Clone)]
struct ClusterArgs {
    #[arg(long, default_value = "ball")]
    body: String,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value_t = TesterParams::DEFAULT_DELTA)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    t: Option<u64>,
    #[arg(long, default_value_t = 0.01)]
    slack: f64,
    /// Largest distinct sample solved exactly.
    #[arg(long, default_value_t = clustertest_core::kcenter::KCENTER_EXACT_CAP)]
    exact_cap: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    body: String,
    #[arg(long, default_value_t = 1)]
    k: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BenchMode {
    Test,
    Cluster,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_enum, default_value_t = BenchMode::Test)]
    mode: BenchMode,
    #[arg(long)]
    trials: u64,
    #[arg(long, default_value = "ball")]
    body: String,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value_t = TesterParams::DEFAULT_DELTA)]
    delta: f64,
    /// Trial `i` runs with seed `seed + i`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    t: Option<u64>,
    #[arg(long, default_value_t = 0.01)]
    slack: f64,
    #[arg(long, default_value_t = clustertest_core::kcenter::KCENTER_EXACT_CAP)]
    exact_cap: usize,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Print JSON instead of a text table.
    #[arg(long)]
    json: bool,
}

struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => EXIT_CAP,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        msg: msg.into(),
    }
}

/// Runs one invocation, writing results to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_ACCEPT };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.cmd {
        Command::Gen(a) => cmd_gen(a, out),
        Command::Test(a) => cmd_test(a, out),
        Command::Cluster(a) => cmd_cluster(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Bench(a) => cmd_bench(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

pub fn parse_body(text: &str) -> Result<ConvexBody, Error> {
    let t = text.trim();
    if t.starts_with('{') {
        return BodySpec::parse(t);
    }
    if t == "ball" {
        return ConvexBody::ball(1.0);
    }
    let path = Path::new(t);
    if path.is_file() {
        return BodySpec::parse(&std::fs::read_to_string(path)?);
    }
    Err(Error::Parse {
        line: 1,
        msg: format!("unrecognised body spec {t:?}"),
    })
}

fn body_arg(text: &str) -> Result<ConvexBody, Failure> {
    parse_body(text).map_err(|e| usage(format!("--body: {e}")))
}

fn load(path: &Path) -> Result<PointFile, Failure> {
    load_points(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).expect("json values serialize");
    writeln!(out, "{text}").map_err(|e| usage(e.to_string()))
}

fn cmd_gen(a: GenArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let body = body_arg(&a.body)?;
    let inst = match a.kind {
        GenKind::Clusterable => gen_clusterable(&body, a.k, a.n, a.d, a.seed)?,
        GenKind::Far => gen_far(&body, a.k, a.n, a.d, a.epsilon, a.seed)?,
        GenKind::Outliers => {
            let spread = a.spread.unwrap_or(10.0 * body.diameter());
            gen_outliers(&body, a.k, a.n, a.d, a.epsilon, spread, a.seed)?
        }
    };
    save_instance(&a.out, &inst).map_err(|e| usage(format!("{}: {e}", a.out.display())))?;
    emit(
        out,
        &json!({
            "schema": SCHEMA,
            "out": a.out.display().to_string(),
            "n": inst.points.len(),
            "dim": inst.points.dim(),
            "truth": inst.truth,
        }),
    )?;
    Ok(EXIT_ACCEPT)
}

fn resolve_t(body: &ConvexBody, dim: usize, t: Option<u64>, slack: f64) -> Result<u64, Error> {
    match t {
        Some(t) => Ok(t),
        None => covering_t(body, dim, slack).map(|c| c.t),
    }
}

fn run_test(
    points: &PointSet,
    body: &ConvexBody,
    k: usize,
    params: &TesterParams,
    t: u64,
) -> Result<TestReport, Error> {
    if k == 1 {
        test_1_cluster(points, body, params)
    } else {
        test_k_cluster(points, body, k, params, t)
    }
}

fn cmd_test(a: TestArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let body = body_arg(&a.body)?;
    let file = load(&a.input)?;
    let params = TesterParams::new(a.epsilon, a.delta, a.seed)?;
    let t = if a.k == 1 { 0 } else { resolve_t(&body, file.points.dim(), a.t, a.slack)? };
    let report = run_test(&file.points, &body, a.k, &params, t)?;
    let reject = report.verdict.is_reject();
    let (witness, used) = match &report.verdict {
        clustertest_core::Verdict::Reject { witness, iterations_used } => (json!(witness), *iterations_used),
        clustertest_core::Verdict::Accept => (json!([]), report.iterations),
    };
    let mut v = json!({
        "schema": SCHEMA,
        "verdict": if reject { "reject" } else { "accept" },
        "witness": witness,
        "iterations": report.iterations,
        "iterations_used": used,
        "subset_size": report.subset_size,
        "guarantee_void": report.guarantee_void,
        "k": a.k,
    });
    if a.k > 1 {
        v["t"] = json!(t);
    }
    emit(out, &v)?;
    Ok(if reject { EXIT_REJECT } else { EXIT_ACCEPT })
}

fn require_ball(body: &ConvexBody) -> Result<(), Failure> {
    match body {
        ConvexBody::Ball { .. } => Ok(()),
        _ => Err(usage("cluster needs a Euclidean ball body")),
    }
}

fn run_cluster(
    points: &PointSet,
    k: usize,
    params: &TesterParams,
    t: u64,
    exact_cap: usize,
) -> Result<ClusterReport, Error> {
    if k == 1 {
        cluster_1_outliers(points, params)
    } else {
        let mut opts = KClusterOptions::new(t);
        opts.exact_cap = exact_cap;
        cluster_k_outliers(points, k, params, &opts)
    }
}

fn cmd_cluster(a: ClusterArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let body = body_arg(&a.body)?;
    require_ball(&body)?;
    let file = load(&a.input)?;
    let params = TesterParams::new(a.epsilon, a.delta, a.seed)?;
    let t = if a.k == 1 { 0 } else { resolve_t(&body, file.points.dim(), a.t, a.slack)? };
    let r = run_cluster(&file.points, a.k, &params, t, a.exact_cap)?;
    emit(
        out,
        &json!({
            "schema": SCHEMA,
            "centers": r.centers,
            "radii": r.radii,
            "sample_size": r.sample_size,
            "distinct_points": r.distinct_points,
            "covered_fraction_estimate": r.covered_fraction_estimate,
            "exact": r.exact,
            "sample_mode": r.sample_mode,
        }),
    )?;
    Ok(EXIT_ACCEPT)
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let body = body_arg(&a.body)?;
    let file = load(&a.input)?;
    let res = farness(&body, &file.points, a.k)?;
    let n = file.points.len();
    // What the generator promised, when the file records it for this k.
    let claim = match &file.truth {
        Some(Truth::Far { spike_count, .. }) => Some((*spike_count, "exact")),
        Some(Truth::Clusterable { centers }) if centers.len() <= a.k => Some((0, "exact")),
        Some(Truth::Outliers { centers, outlier_indices }) if centers.len() <= a.k => {
            Some((outlier_indices.len(), "at_most"))
        }
        _ => None,
    };
    let agrees = claim.map(|(c, kind)| if kind == "exact" { res.removals == c } else { res.removals <= c });
    emit(
        out,
        &json!({
            "schema": SCHEMA,
            "n": n,
            "k": a.k,
            "removals": res.removals,
            "fraction": if n == 0 { 0.0 } else { res.removals as f64 / n as f64 },
            "exact": res.exact,
            "best_centers": res.best_centers,
            "claimed_removals": claim.map(|c| c.0),
            "claim": claim.map(|c| c.1),
            "agrees": agrees,
        }),
    )?;
    Ok(EXIT_ACCEPT)
}

enum Trial {
    Test { reject: bool, void: bool },
    Cluster { covered: f64, radius: f64, sample: u64, exact: bool },
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    use rayon::prelude::*;

    if a.trials == 0 {
        return Err(usage("--trials must be positive"));
    }
    let body = body_arg(&a.body)?;
    if matches!(a.mode, BenchMode::Cluster) {
        require_ball(&body)?;
    }
    let file = load(&a.input)?;
    let points = &file.points;
    TesterParams::new(a.epsilon, a.delta, a.seed)?;
    let t = if a.k == 1 { 0 } else { resolve_t(&body, points.dim(), a.t, a.slack)? };

    let one = |i: u64| -> Result<Trial, Error> {
        let params = TesterParams::new(a.epsilon, a.delta, a.seed.wrapping_add(i))?;
        Ok(match a.mode {
            BenchMode::Test => {
                let r = run_test(points, &body, a.k, &params, t)?;
                Trial::Test {
                    reject: r.verdict.is_reject(),
                    void: r.guarantee_void,
                }
            }
            BenchMode::Cluster => {
                let r = run_cluster(points, a.k, &params, t, a.exact_cap)?;
                let hit = points.iter().filter(|p| r.covers(p)).count();
                Trial::Cluster {
                    covered: hit as f64 / points.len() as f64,
                    radius: r.max_radius(),
                    sample: r.sample_size,
                    exact: r.exact,
                }
            }
        })
    };
    let trials: Vec<Trial> = {
        let work = || (0..a.trials).into_par_iter().map(one).collect::<Result<Vec<_>, _>>();
        match a.threads {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| usage(e.to_string()))?
                .install(work)?,
            None => work()?,
        }
    };

    let header = json!({
        "schema": SCHEMA,
        "mode": match a.mode { BenchMode::Test => "test", BenchMode::Cluster => "cluster" },
        "trials": a.trials,
        "seed": a.seed,
        "n": points.len(),
        "dim": points.dim(),
        "k": a.k,
        "epsilon": a.epsilon,
        "delta": a.delta,
    });
    let (value, table) = match a.mode {
        BenchMode::Test => {
            let rejects = trials.iter().filter(|t| matches!(t, Trial::Test { reject: true, .. })).count() as u64;
            let void = trials.iter().any(|t| matches!(t, Trial::Test { void: true, .. }));
            let rows = [("accept", a.trials - rejects), ("reject", rejects)];
            let mut v = header.clone();
            v["outcomes"] = rate_rows(&rows, a.trials);
            v["guarantee_void"] = json!(void);
            let mut text = table_header(&header);
            text.push_str(&rate_table(&rows, a.trials));
            if void {
                text.push_str("note: epsilon below the k-tester threshold; no rejection guarantee\n");
            }
            (v, text)
        }
        BenchMode::Cluster => {
            let mut good = 0u64;
            let mut radii = Vec::new();
            let mut samples = 0u64;
            let mut exact = 0u64;
            for t in &trials {
                if let Trial::Cluster { covered, radius, sample, exact: ex } = t {
                    if *covered >= 1.0 - a.epsilon - 1e-12 {
                        good += 1;
                    }
                    radii.push(*radius);
                    samples = *sample;
                    exact += u64::from(*ex);
                }
            }
            let rows = [("covered", good), ("short", a.trials - good)];
            let mean = radii.iter().sum::<f64>() / radii.len() as f64;
            let min = radii.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = radii.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut v = header.clone();
            v["outcomes"] = rate_rows(&rows, a.trials);
            v["radius"] = json!({ "mean": mean, "min": min, "max": max });
            v["sample_size"] = json!(samples);
            v["exact_trials"] = json!(exact);
            let mut text = table_header(&header);
            text.push_str(&rate_table(&rows, a.trials));
            text.push_str(&format!(
                "radius mean {mean:.6}  min {min:.6}  max {max:.6}\nsample size {samples}  exact trials {exact}\n"
            ));
            (v, text)
        }
    };
    if a.json {
        emit(out, &value)?;
    } else {
        out.write_all(table.as_bytes()).map_err(|e| usage(e.to_string()))?;
    }
    Ok(EXIT_ACCEPT)
}

fn rate_rows(rows: &[(&str, u64)], trials: u64) -> Value {
    rows.iter()
        .map(|&(name, count)| {
            let (lo, hi) = wilson_interval(count, trials);
            (
                name.to_string(),
                json!({ "count": count, "rate": count as f64 / trials as f64, "ci95": [lo, hi] }),
            )
        })
        .collect::<serde_json::Map<_, _>>()
        .into()
}

fn table_header(h: &Value) -> String {
    format!(
        "mode {}  trials {}  seed {}  n {}  d {}  k {}  epsilon {}  delta {}\n",
        h["mode"].as_str().unwrap_or(""),
        h["trials"],
        h["seed"],
        h["n"],
        h["dim"],
        h["k"],
        h["epsilon"],
        h["delta"]
    )
}

fn rate_table(rows: &[(&str, u64)], trials: u64) -> String {
    let mut s = format!("{:<8} {:>8} {:>8} {:>10} {:>10}\n", "outcome", "count", "rate", "ci95_low", "ci95_high");
    for &(name, count) in rows {
        let (lo, hi) = wilson_interval(count, trials);
        s.push_str(&format!(
            "{:<8} {:>8} {:>8.4} {:>10.4} {:>10.4}\n",
            name,
            count,
            count as f64 / trials as f64,
            lo,
            hi
        ));
    }
    s
}
