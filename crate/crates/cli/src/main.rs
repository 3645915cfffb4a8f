//! `relaylink`: single-point evaluation, Monte Carlo runs, sweeps, figure data and self-test.
//!
//! Exit status 0 on success, 1 on invalid or infeasible requests, 2 on
//! numerical failures. Data goes to stdout or `--out`; everything else to stderr.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use relaylink::acceptance::{self, Scale};
use relaylink::analytic::check_supported;
use relaylink::experiments::{
    compare_report, run_sweep_with, write_csv, write_json, SweepOutput, DEFAULT_SEED, DEFAULT_TRIALS,
};
use relaylink::montecarlo::{default_workers, RELIABLE_COUNT};
use relaylink::specfun::DEFAULT_ABS_TOL;
use relaylink::{
    db_to_linear, figure_recipe, Abscissa, ExperimentError, FigureId, Method, Scheme, SweepConfig, SystemParams,
};

#[derive(Parser)]
#[command(
    name = "relaylink",
    version,
    about = "Outage probability of dual-hop AF relaying with a multi-antenna relay under co-channel interference"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one closed-form outage probability
    Analytic(AnalyticArgs),
    /// Estimate one outage probability by Monte Carlo
    Simulate(SimulateArgs),
    /// Sweep ρ₁ or N for several schemes and methods
    Sweep(SweepArgs),
    /// Emit the data behind one of the reference figures
    Figure(FigureArgs),
    /// Run the acceptance checks
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct Link {
    /// Relay antennas N
    #[arg(long)]
    n: usize,
    /// Interferers M
    #[arg(long)]
    m: usize,
    #[arg(long, allow_hyphen_values = true)]
    rho1_db: f64,
}

/// Settings shared by every evaluating subcommand.
#[derive(Args)]
struct Common {
    /// ρ₂/ρ₁
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    /// Second-hop SNR in dB; overrides --mu
    #[arg(long, allow_hyphen_values = true)]
    rho2_db: Option<f64>,
    /// Interferer powers in dB, comma separated; one value is used for all M (default 0)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    rho_i_db: Vec<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    gamma_th_db: f64,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Absolute quadrature tolerance
    #[arg(long, default_value_t = DEFAULT_ABS_TOL)]
    tol: f64,
}

#[derive(Args)]
struct Output {
    /// Output file (default stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads (default: available cores)
    #[arg(long, env = "RELAYLINK_WORKERS")]
    workers: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct AnalyticArgs {
    #[arg(long)]
    scheme: Scheme,
    /// exact, lower, highsnr or largen
    #[arg(long, default_value = "exact")]
    method: Method,
    #[command(flatten)]
    link: Link,
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    scheme: Scheme,
    #[command(flatten)]
    link: Link,
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum AbscissaArg {
    Rho1Db,
    N,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "mrc,zf,mmse")]
    scheme: Vec<Scheme>,
    #[arg(long, value_delimiter = ',', default_value = "exact,mc")]
    method: Vec<Method>,
    #[arg(long, value_enum, default_value_t = AbscissaArg::Rho1Db)]
    abscissa: AbscissaArg,
    /// Abscissa values, comma separated
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required_unless_present = "range",
        conflicts_with = "range"
    )]
    values: Vec<f64>,
    /// Abscissa range start:stop:step, stop included
    #[arg(long, allow_hyphen_values = true)]
    range: Option<String>,
    /// Relay antennas N (ρ₁ sweeps)
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: usize,
    /// First-hop SNR in dB (N sweeps)
    #[arg(long, allow_hyphen_values = true)]
    rho1_db: Option<f64>,
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    output: Output,
    /// Also write a comparison report (gaps, slopes, crossovers) to this file
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    /// fig2 to fig7
    #[arg(long)]
    id: FigureId,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: Output,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Use the full trial counts instead of the quick ones
    #[arg(long)]
    full: bool,
    /// Run only these criteria
    #[arg(long, value_delimiter = ',')]
    criterion: Vec<u8>,
    #[arg(long, env = "RELAYLINK_WORKERS")]
    workers: Option<usize>,
}

enum Failure {
    Invalid(String),
    Numerical(String),
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Analytic(a) => analytic(a),
        Command::Simulate(a) => simulate(a),
        Command::Sweep(a) => sweep(a),
        Command::Figure(a) => figure(a),
        Command::Selftest(a) => selftest(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(2)
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::Invalid(e.to_string())
}

fn interference(rho_i_db: &[f64], m: usize) -> Result<Vec<f64>, Failure> {
    let db = match rho_i_db.len() {
        0 => vec![0.0; m],
        1 => vec![rho_i_db[0]; m],
        k if k == m => rho_i_db.to_vec(),
        k => return Err(Failure::Invalid(format!("--rho-i-db lists {k} powers but M = {m}"))),
    };
    Ok(db.into_iter().map(db_to_linear).collect())
}

fn params(n: usize, m: usize, rho1_db: f64, c: &Common) -> Result<SystemParams, Failure> {
    let rho_i = interference(&c.rho_i_db, m)?;
    let (rho1, gamma_th) = (db_to_linear(rho1_db), db_to_linear(c.gamma_th_db));
    match c.rho2_db {
        Some(r2) => SystemParams::with_rho2(n, rho1, db_to_linear(r2), gamma_th, rho_i),
        None => SystemParams::new(n, rho1, c.mu, gamma_th, rho_i),
    }
    .map_err(invalid)
}

fn single_point(scheme: Scheme, method: Method, link: &Link, c: &Common) -> Result<SweepConfig, Failure> {
    let template = params(link.n, link.m, link.rho1_db, c)?;
    if let Method::Analytic(am) = method {
        check_supported(scheme, am, &template).map_err(invalid)?;
    }
    Ok(SweepConfig {
        schemes: vec![scheme],
        methods: vec![method],
        abscissa: Abscissa::Rho1Db,
        values: vec![link.rho1_db],
        template,
        cases: Vec::new(),
        trials: c.trials,
        seed: c.seed,
        tol: c.tol,
    })
}

fn analytic(a: AnalyticArgs) -> Outcome {
    if a.method == Method::MonteCarlo {
        return Err(Failure::Invalid("--method mc belongs to the simulate subcommand".into()));
    }
    let cfg = single_point(a.scheme, a.method, &a.link, &a.common)?;
    execute(&cfg, &a.output, None)
}

fn simulate(a: SimulateArgs) -> Outcome {
    let cfg = single_point(a.scheme, Method::MonteCarlo, &a.link, &a.common)?;
    execute(&cfg, &a.output, None)
}

fn parse_range(s: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Invalid(format!("--range expects start:stop:step, got '{s}'")))?;
    let [start, stop, step] = parts[..] else {
        return Err(Failure::Invalid(format!("--range expects start:stop:step, got '{s}'")));
    };
    if step.is_nan() || step <= 0.0 || start.is_nan() || stop.is_nan() || stop < start || (stop - start) / step > 1e6 {
        return Err(Failure::Invalid(format!("--range {s} does not describe an increasing grid")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| start + step * i as f64).collect())
}

fn sweep(a: SweepArgs) -> Outcome {
    let values = match &a.range {
        Some(r) => parse_range(r)?,
        None => a.values.clone(),
    };
    let (abscissa, n, rho1_db) = match a.abscissa {
        AbscissaArg::Rho1Db => {
            if a.common.rho2_db.is_some() {
                return Err(Failure::Invalid("--rho2-db cannot stay fixed while ρ₁ is swept; use --mu".into()));
            }
            let n = a.n.ok_or_else(|| Failure::Invalid("--n is required when sweeping ρ₁".into()))?;
            (Abscissa::Rho1Db, n, 0.0)
        }
        AbscissaArg::N => {
            let rho1 = a.rho1_db.ok_or_else(|| Failure::Invalid("--rho1-db is required when sweeping N".into()))?;
            // the template N is replaced at every point
            (Abscissa::NAntennas, a.n.unwrap_or(a.m + 1), rho1)
        }
    };
    let template = params(n, a.m, rho1_db, &a.common)?;
    for &scheme in &a.scheme {
        for &method in &a.method {
            if let Method::Analytic(am) = method {
                if let Err(e) = check_supported(scheme, am, &template) {
                    eprintln!("skipping {scheme} {method}: {e}");
                }
            }
        }
    }
    let cfg = SweepConfig {
        schemes: a.scheme.clone(),
        methods: a.method.clone(),
        abscissa,
        values,
        template,
        cases: Vec::new(),
        trials: a.common.trials,
        seed: a.common.seed,
        tol: a.common.tol,
    };
    execute(&cfg, &a.output, a.report.as_deref())
}

fn figure(a: FigureArgs) -> Outcome {
    let mut cfg = figure_recipe(a.id);
    if let Some(t) = a.trials {
        cfg.trials = t;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    execute(&cfg, &a.output, a.report.as_deref())
}

fn workers(w: Option<usize>) -> Result<usize, Failure> {
    match w {
        Some(0) => Err(Failure::Invalid("--workers must be at least 1".into())),
        Some(w) => Ok(w),
        None => Ok(default_workers()),
    }
}

fn execute(cfg: &SweepConfig, out: &Output, report: Option<&Path>) -> Outcome {
    let workers = workers(out.workers)?;
    let result = run_sweep_with(cfg, workers)?;
    warn_unreliable(&result);
    write_output(&result, out)?;
    if let Some(path) = report {
        let rep = compare_report(&result.curves)?;
        std::fs::write(path, rep.to_text()).map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    if result.failures.is_empty() {
        return Ok(());
    }
    for f in &result.failures {
        eprintln!("{} at {}: {}", f.curve, f.x, f.message);
    }
    let msg = format!("{} point(s) failed and were left empty", result.failures.len());
    if result.failures.iter().any(|f| f.numerical) {
        Err(Failure::Numerical(msg))
    } else {
        Err(Failure::Invalid(msg))
    }
}

fn warn_unreliable(result: &SweepOutput) {
    for c in result.curves.iter().filter(|c| c.method == Method::MonteCarlo) {
        let trials = c.trials.unwrap_or(0) as f64;
        let few = c
            .points
            .iter()
            .filter(|p| p.probability.is_some_and(|v| (v * trials).round() < RELIABLE_COUNT as f64))
            .count();
        if few > 0 {
            eprintln!("warning: {}: {few} point(s) with fewer than {RELIABLE_COUNT} outages", c.label);
        }
    }
}

fn write_output(result: &SweepOutput, out: &Output) -> Outcome {
    let sink: Box<dyn Write> = match &out.out {
        Some(path) => {
            Box::new(File::create(path).map_err(|e| invalid(format!("cannot create {}: {e}", path.display())))?)
        }
        None => Box::new(io::stdout().lock()),
    };
    let mut w = BufWriter::new(sink);
    match out.format {
        Format::Csv => write_csv(&result.curves, &mut w)?,
        Format::Json => write_json(&result.curves, &mut w)?,
    }
    w.flush().map_err(invalid)
}

fn selftest(a: SelftestArgs) -> Outcome {
    let workers = workers(a.workers)?;
    let scale = if a.full { Scale::Full } else { Scale::Quick };
    let ids: Vec<u8> = if a.criterion.is_empty() { (1..=11).collect() } else { a.criterion.clone() };
    if let Some(bad) = ids.iter().find(|&&id| !(1..=11).contains(&id)) {
        return Err(Failure::Invalid(format!("no criterion {bad}; criteria are numbered 1 to 11")));
    }
    let mut failed = Vec::new();
    for id in ids {
        let r = acceptance::run_criterion(id, scale, workers);
        println!("{}", r.line());
        if !r.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("criteria {failed:?} failed")))
    }
}
