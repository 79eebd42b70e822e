//! Command-line front end: run, sweep, verify, oracle, and fit workflows.
//!
//! Exit codes: 0 success, 1 internal invariant failure or failed
//! verification, 2 invalid arguments. Stdout carries the human-readable,
//! deterministic results; timings go to stderr and machine-readable data
//! only to files.

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use trilab::analytics::{
    checkpoint_snapshot, compute_r, compute_t, compute_t_brute, decomposition_identity_check,
    drift_oracle_q, drift_oracle_yu, drift_oracle_yuv, for_each_reachable, parse_rational,
    r_identity_route, sum_codegrees_over_edges, ParamSet, Rat, SamplingPlan,
};
use trilab::harness::{
    fit_exponent, read_checkpoints, read_summary, run_sweep, violation_report, write_checkpoints,
    CheckpointRow, SweepConfig, SweepSummary,
};
use trilab::process::{CheckpointPolicy, ProcessState};
use trilab::rng;

const OUT_ENV: &str = "TRILAB_OUT";

#[derive(Parser)]
#[command(name = "trilab", version, about = "Random greedy triangle-packing lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a single run and print its terminal statistics.
    Run(RunArgs),
    /// Execute a full seed sweep over a grid of n.
    Sweep(SweepArgs),
    /// Regress ln(final_edges) on ln(n) over a sweep directory.
    Fit(DirArgs),
    /// Check envelope violations over a sweep directory.
    Verify(DirArgs),
    /// Run the exact drift and identity suites over all process prefixes.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Config file (flat JSON; flags override file values).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Tracking constant alpha (rational, e.g. "1" or "1/2").
    #[arg(long)]
    alpha: Option<String>,
    /// Tracking constant beta.
    #[arg(long)]
    beta: Option<String>,
    /// Tracking constant kappa.
    #[arg(long)]
    kappa: Option<String>,
    /// Tracking constant mu.
    #[arg(long)]
    mu: Option<String>,
    /// Trajectory exponent gamma.
    #[arg(long)]
    gamma: Option<String>,
    /// Checkpoint grid spacing in p.
    #[arg(long)]
    dp: Option<f64>,
    /// R_uv pairs sampled per checkpoint.
    #[arg(long)]
    pairs: Option<usize>,
    /// Co-degree triples sampled per checkpoint.
    #[arg(long)]
    triples: Option<usize>,
    /// Output directory (falls back to $TRILAB_OUT).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    /// Number of vertices.
    #[arg(long)]
    n: Option<usize>,
    /// Master seed of the run.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct DirArgs {
    /// Sweep directory (falls back to $TRILAB_OUT).
    dir: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Largest n whose process tree is enumerated (4..=16).
    #[arg(long, default_value_t = 6)]
    max_n: usize,
    /// Removals explored from K_n.
    #[arg(long, default_value_t = 3)]
    depth: usize,
}

/// Flat config file; keys match the flag names, plus the sweep grid keys.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    n: Option<usize>,
    seed: Option<u64>,
    dp: Option<f64>,
    alpha: Option<RatIn>,
    beta: Option<RatIn>,
    kappa: Option<RatIn>,
    mu: Option<RatIn>,
    gamma: Option<RatIn>,
    pairs: Option<usize>,
    triples: Option<usize>,
    out: Option<PathBuf>,
    jobs: Option<usize>,
    n_list: Option<Vec<usize>>,
    seeds_per_n: Option<u64>,
    p_floor: Option<f64>,
}

/// Rational constants accept either a JSON string ("1/2") or a number.
#[derive(Deserialize)]
#[serde(untagged)]
enum RatIn {
    Text(String),
    Number(f64),
}

impl RatIn {
    fn parse(&self, name: &str) -> Result<Rat, String> {
        let text = match self {
            RatIn::Text(s) => s.clone(),
            RatIn::Number(x) => format!("{x}"),
        };
        parse_rational(&text).map_err(|e| format!("{name}: {e}"))
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

enum CliError {
    /// Bad arguments or config: exit 2.
    Usage(String),
    /// The work itself failed or falsified something: exit 1.
    Failure(String),
}

fn dispatch(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Oracle(args) => cmd_oracle(args),
    }
}

fn load_file_config(path: Option<&Path>) -> Result<FileConfig, CliError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}

fn build_params(common: &CommonArgs, file: &FileConfig) -> Result<ParamSet, CliError> {
    let defaults = ParamSet::reference_values();
    let resolve = |flag: &Option<String>,
                   from_file: &Option<RatIn>,
                   name: &str,
                   default: Rat|
     -> Result<Rat, CliError> {
        if let Some(s) = flag {
            return parse_rational(s).map_err(|e| CliError::Usage(format!("--{name}: {e}")));
        }
        if let Some(r) = from_file {
            return r.parse(name).map_err(CliError::Usage);
        }
        Ok(default)
    };
    let alpha = resolve(&common.alpha, &file.alpha, "alpha", defaults.alpha())?;
    let beta = resolve(&common.beta, &file.beta, "beta", defaults.beta())?;
    let kappa = resolve(&common.kappa, &file.kappa, "kappa", defaults.kappa())?;
    let mu = resolve(&common.mu, &file.mu, "mu", defaults.mu())?;
    let gamma = resolve(&common.gamma, &file.gamma, "gamma", defaults.gamma())?;
    ParamSet::new(alpha, beta, kappa, mu, gamma).map_err(|e| CliError::Usage(e.to_string()))
}

fn out_dir(common: &CommonArgs, file: &FileConfig) -> Option<PathBuf> {
    common
        .out
        .clone()
        .or_else(|| file.out.clone())
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
}

fn build_sweep_config(common: &CommonArgs, file: &FileConfig) -> Result<SweepConfig, CliError> {
    let defaults = SweepConfig::default();
    let config = SweepConfig {
        n_list: file.n_list.clone().unwrap_or(defaults.n_list),
        seeds_per_n: file.seeds_per_n.unwrap_or(defaults.seeds_per_n),
        params: build_params(common, file)?,
        dp: common.dp.or(file.dp).unwrap_or(defaults.dp),
        pairs: common.pairs.or(file.pairs).unwrap_or(defaults.pairs),
        triples: common.triples.or(file.triples).unwrap_or(defaults.triples),
        p_floor: file.p_floor,
        out_dir: out_dir(common, file).unwrap_or(defaults.out_dir),
        jobs: common.jobs.or(file.jobs).unwrap_or(defaults.jobs),
    };
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(config)
}

fn param_echo(params: &ParamSet) -> String {
    serde_json::to_string(params).expect("params serialize")
}

fn cmd_run(args: RunArgs) -> Result<ExitCode, CliError> {
    let file = load_file_config(args.common.config.as_deref())?;
    let n = args
        .n
        .or(file.n)
        .ok_or_else(|| CliError::Usage("run requires --n".into()))?;
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let params = build_params(&args.common, &file)?;
    let dp = args.common.dp.or(file.dp).unwrap_or(0.01);
    let pairs = args.common.pairs.or(file.pairs).unwrap_or(2000);
    let triples = args.common.triples.or(file.triples).unwrap_or(2000);
    let out = out_dir(&args.common, &file);

    let mut state = ProcessState::new(n, seed).map_err(|e| CliError::Usage(e.to_string()))?;

    println!(
        "run: n={n} seed={seed} dp={dp} pairs={pairs} triples={triples} params={}",
        param_echo(&params)
    );

    let summary = if let Some(dir) = out {
        std::fs::create_dir_all(&dir)
            .map_err(|e| CliError::Failure(format!("cannot create {}: {e}", dir.display())))?;
        let plan = SamplingPlan { pairs, triples };
        let mut measure = rng::measurement_stream(seed);
        let mut records = Vec::new();
        let summary = state.run_to_completion(CheckpointPolicy::every(dp), |s| {
            records.push(checkpoint_snapshot(
                s.graph(),
                s.index(),
                s.steps(),
                &params,
                &plan,
                &mut measure,
            ));
        });
        let path = dir.join(SweepConfig::checkpoint_filename(n, seed));
        write_checkpoints(&path, n, seed, &records).map_err(|e| CliError::Failure(e.to_string()))?;
        println!("checkpoints: {}", path.display());
        summary
    } else {
        state.run_to_completion(CheckpointPolicy::none(), |_| {})
    };

    println!("M={}", summary.m);
    println!("final_edges={}", summary.final_edges);
    eprintln!("wall_ms={}", summary.wall_ms);
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, CliError> {
    let file = load_file_config(args.common.config.as_deref())?;
    let config = build_sweep_config(&args.common, &file)?;
    eprintln!(
        "sweep: {} sizes x {} seeds -> {}",
        config.n_list.len(),
        config.seeds_per_n,
        config.out_dir.display()
    );
    let outcome = run_sweep(&config).map_err(|e| CliError::Failure(e.to_string()))?;
    println!(
        "sweep complete: {} runs in {}",
        outcome.summary.runs.len(),
        config.out_dir.display()
    );
    for run in &outcome.summary.runs {
        println!("  n={} seed={} M={} final_edges={}", run.n, run.seed, run.m, run.final_edges);
    }
    if !outcome.failures.is_empty() {
        for (n, seed, msg) in &outcome.failures {
            eprintln!("run n={n} seed={seed} failed: {msg}");
        }
        return Err(CliError::Failure(format!(
            "{} run(s) failed to persist",
            outcome.failures.len()
        )));
    }
    Ok(ExitCode::SUCCESS)
}

fn resolve_dir(dir: Option<PathBuf>) -> Result<PathBuf, CliError> {
    dir.or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .ok_or_else(|| CliError::Usage(format!("no directory given and ${OUT_ENV} unset")))
}

/// Loads a sweep directory, failing on partial output (runs listed in the
/// summary whose checkpoint files are missing or unreadable, or a summary
/// shorter than its own config demands).
fn load_sweep_dir(dir: &Path) -> Result<(SweepSummary, Vec<CheckpointRow>), CliError> {
    let summary = read_summary(dir).map_err(CliError::Failure)?;
    let mut rows = Vec::new();
    let mut problems = Vec::new();
    for run in &summary.runs {
        let path = dir.join(SweepConfig::checkpoint_filename(run.n, run.seed));
        match read_checkpoints(&path) {
            Ok(mut r) => rows.append(&mut r),
            Err(e) => problems.push(format!("  n={} seed={}: {e}", run.n, run.seed)),
        }
    }
    let expected = summary.config.n_list.len() as u64 * summary.config.seeds_per_n;
    if summary.runs.len() as u64 != expected {
        problems.push(format!(
            "  summary lists {} runs, config demands {expected}",
            summary.runs.len()
        ));
    }
    if !problems.is_empty() {
        return Err(CliError::Failure(format!(
            "partial sweep output in {}:\n{}",
            dir.display(),
            problems.join("\n")
        )));
    }
    Ok((summary, rows))
}

fn cmd_fit(args: DirArgs) -> Result<ExitCode, CliError> {
    let dir = resolve_dir(args.dir)?;
    let (summary, _) = load_sweep_dir(&dir)?;
    let fit = fit_exponent(&summary.runs).map_err(|e| CliError::Failure(e.to_string()))?;
    println!("terminal exponent fit over {}", dir.display());
    for s in &fit.per_size {
        println!(
            "  n={:<6} runs={:<3} mean_ln_edges={:.6} sd={:.6}",
            s.n, s.runs, s.mean_ln_edges, s.sd_ln_edges
        );
    }
    if fit.excluded_zero_edges > 0 {
        eprintln!("warning: {} zero-edge run(s) excluded", fit.excluded_zero_edges);
    }
    println!("slope={:.6}", fit.slope);
    println!("intercept={:.6}", fit.intercept);
    println!("r_squared={:.6}", fit.r_squared);
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: DirArgs) -> Result<ExitCode, CliError> {
    let dir = resolve_dir(args.dir)?;
    let (summary, rows) = load_sweep_dir(&dir)?;
    let report = violation_report(&rows, &summary.config);
    print!("{report}");
    if report.any_violation() {
        eprintln!("verification FAILED: {} envelope violation(s)", report.total_violations);
        return Ok(ExitCode::from(1));
    }
    if report.all_vacuous() {
        eprintln!("verification VACUOUS: no run had a window below p = 1 (not passing)");
        return Ok(ExitCode::from(1));
    }
    println!("verification passed: zero violations in all windows");
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(args: OracleArgs) -> Result<ExitCode, CliError> {
    if !(4..=16).contains(&args.max_n) {
        return Err(CliError::Usage("--max-n must lie in 4..=16".into()));
    }
    let mut graphs = 0u64;
    let mut checks = 0u64;
    let mut mismatches: Vec<String> = Vec::new();
    for n in 4..=args.max_n {
        for_each_reachable(n, args.depth, |g| {
            graphs += 1;
            let q = g.count_triangles_brute();
            if q >= 1 {
                let (exact, formula) = drift_oracle_q(g);
                checks += 1;
                if exact != formula {
                    mismatches.push(format!("n={n} dQ: {exact} vs {formula}"));
                }
                for u in 0..g.n() {
                    let (exact, formula) = drift_oracle_yu(g, u);
                    checks += 1;
                    if exact != formula {
                        mismatches.push(format!("n={n} dY_{u}: {exact} vs {formula}"));
                    }
                    for v in 0..u {
                        let (exact, formula) = drift_oracle_yuv(g, v, u);
                        checks += 1;
                        if exact != formula {
                            mismatches.push(format!("n={n} dY_({v},{u}): {exact} vs {formula}"));
                        }
                    }
                }
            }
            // Identity suite holds on every prefix, triangle-free or not.
            for u in 0..g.n() {
                checks += 2;
                if compute_t(g, u) != compute_t_brute(g, u) {
                    mismatches.push(format!("n={n} T_{u} routes disagree"));
                }
                let twice: u64 = g.neighbors(u).iter().map(|&x| g.codegree(u, x) as u64).sum();
                if 2 * compute_t(g, u) != twice {
                    mismatches.push(format!("n={n} 2T_{u} != codegree sum"));
                }
                for v in 0..g.n() {
                    if u == v {
                        continue;
                    }
                    checks += 1;
                    if compute_r(g, u, v) as i64 != r_identity_route(g, u, v) {
                        mismatches.push(format!("n={n} R_({u},{v}) routes disagree"));
                    }
                    if v < u {
                        checks += 1;
                        if !decomposition_identity_check(g, v, u) {
                            mismatches.push(format!("n={n} decomposition fails at ({v},{u})"));
                        }
                    }
                }
            }
            checks += 1;
            if sum_codegrees_over_edges(g) != 3 * q as i64 {
                mismatches.push(format!("n={n} edge co-degree sum != 3Q"));
            }
        })
        .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    if mismatches.is_empty() {
        println!("all identities exact ({graphs} graphs, {checks} checks)");
        Ok(ExitCode::SUCCESS)
    } else {
        for m in mismatches.iter().take(20) {
            eprintln!("mismatch: {m}");
        }
        Err(CliError::Failure(format!("{} oracle mismatch(es)", mismatches.len())))
    }
}
