//! `longmem` — command-line front end for the long-memory toolkit.
//!
//! Subcommands: `generate` (simulate a series), `dwt` (finest-scale Haar
//! transform), `periodogram` (ordinary / wavelet-OLS / robust-LAD ordinates),
//! `estimate` (memory parameter of one series), `sweep` (Monte Carlo
//! bandwidth sweep), and `reproduce` (preset sweep configurations).
//!
//! Conventions shared by every subcommand:
//!
//! * artifacts are CSV (header row, plain decimal reals); JSON appears only
//!   for single estimates and config echoes;
//! * every run embeds its full effective configuration in its artifacts —
//!   sweeps write `config.json`, single-file commands write a
//!   `<out>.meta.json` sidecar — so any result is reproducible from the
//!   artifact alone;
//! * `--config <file>` loads defaults from a flat JSON object whose keys
//!   mirror long flag names; explicit flags win over file values;
//! * exit codes: 0 success, 1 for bad flags or configuration, 2 for runtime
//!   failures (I/O, malformed data, estimation breakdowns).

use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use longmem::datagen::{
    arfima_1_d_0, fractional_noise, lmsv_series, log_squared, GenConfig, NoiseKind,
};
use longmem::estimators::{
    bandwidth_from_exponent, estimate_gph, estimate_nkk, estimate_wblp, Method,
};
use longmem::experiments::{run_sweep, SweepConfig, SweepResult};
use longmem::io::{
    export_sweep, read_series_csv, write_coeffs_csv, write_json, write_periodogram_csv,
    write_series_csv,
};
use longmem::spectra::{nkk_periodogram, ordinary_periodogram, wavelet_ols_periodogram};
use longmem::wavelet::haar_dwt_finest;
use longmem::{Error, Result};

#[derive(Parser)]
#[command(
    name = "longmem",
    version,
    about = "Long-memory time series: simulation, wavelet spectra, and memory-parameter estimation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Base RNG seed; every random quantity derives from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output path (a file for generate/dwt/periodogram, a directory for
    /// sweep/reproduce, optional JSON copy for estimate).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Suppress the human-readable summary table.
    #[arg(long, global = true)]
    quiet: bool,

    /// Flat JSON object of default flag values; explicit flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a series and write it as `t,value` CSV.
    Generate(GenerateArgs),
    /// Finest-scale Haar coefficients of a series, written as `q,w` CSV.
    Dwt(DwtArgs),
    /// Periodogram of a series, written as `k,lambda,ordinate,converged` CSV.
    Periodogram(PeriodogramArgs),
    /// Estimate the memory parameter of one series; JSON on standard output.
    Estimate(EstimateArgs),
    /// Monte Carlo bandwidth sweep; writes a four-file artifact directory.
    Sweep(SweepArgs),
    /// Preset sweep configurations (figures 1-3) at a chosen replication count.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    /// Pure fractional noise (ARFIMA(0,d,0)).
    Fractional,
    /// ARFIMA(1,d,0).
    Arfima,
    /// Stochastic-volatility series with long-memory latent log-volatility.
    Lmsv,
    /// Log of the squared stochastic-volatility series.
    LogsqLmsv,
}

impl Model {
    fn name(self) -> &'static str {
        match self {
            Model::Fractional => "fractional",
            Model::Arfima => "arfima",
            Model::Lmsv => "lmsv",
            Model::LogsqLmsv => "logsq-lmsv",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NoiseArg {
    Gaussian,
    StudentT,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Ordinary,
    WaveletOls,
    Nkk,
}

impl KindArg {
    fn name(self) -> &'static str {
        match self {
            KindArg::Ordinary => "ordinary",
            KindArg::WaveletOls => "wavelet-ols",
            KindArg::Nkk => "nkk",
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    /// Which process to simulate.
    #[arg(long, value_enum)]
    model: Model,
    /// Series length.
    #[arg(long)]
    n: usize,
    /// Memory parameter.
    #[arg(long, default_value_t = 0.2)]
    d: f64,
    /// AR(1) coefficient of the latent process (arfima/lmsv models).
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    /// Innovation variance of the latent process.
    #[arg(long, default_value_t = 1.0)]
    sigma_eps2: f64,
    /// Volatility scale (lmsv models).
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Multiplicative-noise distribution (lmsv models).
    #[arg(long, value_enum, default_value_t = NoiseArg::Gaussian)]
    noise: NoiseArg,
    /// Degrees of freedom; required with --noise student-t.
    #[arg(long)]
    noise_df: Option<f64>,
    /// Leading samples generated and discarded before the reported series.
    #[arg(long, default_value_t = 0)]
    burn_in: usize,
}

#[derive(Args)]
struct DwtArgs {
    /// Input series CSV (`t,value`).
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Args)]
struct PeriodogramArgs {
    /// Input series CSV (`t,value`); wavelet kinds transform it internally.
    #[arg(long = "in")]
    input: PathBuf,
    /// Ordinate family.
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Number of Fourier frequencies.
    #[arg(long)]
    m: usize,
    /// Convergence tolerance of the robust fit (nkk only).
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Args)]
struct EstimateArgs {
    /// Input series CSV (`t,value`).
    #[arg(long = "in")]
    input: PathBuf,
    /// Estimator: gph, wblp, or nkk.
    #[arg(long)]
    method: String,
    /// Bandwidth (number of Fourier frequencies).
    #[arg(long, conflicts_with = "m_exp")]
    m: Option<usize>,
    /// Bandwidth as an exponent: m = floor(n^m_exp).
    #[arg(long)]
    m_exp: Option<f64>,
    /// Convergence tolerance of the robust fit (nkk only).
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Emit compact single-line JSON instead of pretty-printed.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Series length (power of two when wavelet methods are requested).
    #[arg(long)]
    n: usize,
    /// True memory parameter of the simulated process.
    #[arg(long)]
    d: f64,
    /// AR(1) coefficient of the latent process.
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    /// Innovation variance of the latent process.
    #[arg(long, default_value_t = 0.37)]
    sigma_eps2: f64,
    /// Monte Carlo replications.
    #[arg(long, default_value_t = 200)]
    reps: usize,
    /// Grid lower edge as an exponent of n.
    #[arg(long, default_value_t = 0.3)]
    lo_exp: f64,
    /// Grid upper edge as an exponent of n.
    #[arg(long, default_value_t = 0.8)]
    hi_exp: f64,
    /// Comma-separated estimators to run.
    #[arg(long, default_value = "gph,wblp,nkk")]
    methods: String,
    /// Convergence tolerance of the robust fit.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Worker threads; 0 means one per core. Never changes the numbers.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Preset: 1 (n=1024, d=0.2, phi=0.4), 2 (n=1024, d=0.3, phi=0.5),
    /// 3 (n=2048, d=0.3, phi=0.4); innovation variance 0.37 throughout.
    #[arg(long)]
    figure: u8,
    /// Monte Carlo replications.
    #[arg(long, default_value_t = 200)]
    reps: usize,
    /// Worker threads; 0 means one per core. Never changes the numbers.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

fn main() {
    let raw: Vec<String> = std::env::args().collect();
    std::process::exit(real_main(raw));
}

fn real_main(raw: Vec<String>) -> i32 {
    let argv = match merged_argv(raw) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return if e.is_validation() { 1 } else { 2 };
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                1
            } else {
                2
            }
        }
    }
}

/// Applies `--config <file>`: loads the flat JSON object and appends
/// `--key value` for every key not already present on the command line, so
/// explicit flags always win. Boolean `true` becomes a bare flag, `false` is
/// dropped, and nested values are rejected.
fn merged_argv(raw: Vec<String>) -> Result<Vec<String>> {
    let Some(path) = config_path(&raw) else {
        return Ok(raw);
    };
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.clone(),
        line: e.line(),
        reason: e.to_string(),
    })?;
    inject_config(raw, &value)
}

fn config_path(raw: &[String]) -> Option<PathBuf> {
    for (i, arg) in raw.iter().enumerate() {
        if arg == "--config" {
            return raw.get(i + 1).map(PathBuf::from);
        }
        if let Some(rest) = arg.strip_prefix("--config=") {
            return Some(PathBuf::from(rest));
        }
    }
    None
}

fn inject_config(mut argv: Vec<String>, config: &Value) -> Result<Vec<String>> {
    let Some(obj) = config.as_object() else {
        return Err(Error::invalid(
            "config",
            "config file must hold a flat JSON object of flag values",
        ));
    };
    let explicit: Vec<String> = argv.clone();
    let present = |flag: &str| -> bool {
        explicit
            .iter()
            .any(|a| a == flag || a.starts_with(&format!("{flag}=")))
    };
    // Deterministic injection order regardless of file order.
    let mut keys: Vec<&String> = obj.keys().collect();
    keys.sort();
    for key in keys {
        if key == "config" {
            continue;
        }
        // Keys may be written either like the flag (`lo-exp`) or like a
        // struct field (`lo_exp`).
        let flag = format!("--{}", key.replace('_', "-"));
        if present(&flag) {
            continue;
        }
        match &obj[key.as_str()] {
            Value::Bool(true) => argv.push(flag),
            Value::Bool(false) => {}
            Value::Number(x) => {
                argv.push(flag);
                argv.push(x.to_string());
            }
            Value::String(s) => {
                argv.push(flag);
                argv.push(s.clone());
            }
            other => {
                return Err(Error::invalid(
                    "config",
                    format!("key `{key}` must be a scalar, got {other}"),
                ));
            }
        }
    }
    Ok(argv)
}

fn execute(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Generate(args) => run_generate(&cli, args),
        Command::Dwt(args) => run_dwt(&cli, args),
        Command::Periodogram(args) => run_periodogram(&cli, args),
        Command::Estimate(args) => run_estimate(&cli, args),
        Command::Sweep(args) => run_sweep_cmd(&cli, args),
        Command::Reproduce(args) => run_reproduce(&cli, args),
    }
}

fn require_out(cli: &Cli) -> Result<PathBuf> {
    cli.out
        .clone()
        .ok_or_else(|| Error::invalid("out", "this subcommand requires --out <path>"))
}

/// Writes `<artifact>.meta.json` next to an artifact so the run is
/// reproducible from its outputs alone.
fn write_meta(artifact: &Path, meta: Value) -> Result<()> {
    let path = PathBuf::from(format!("{}.meta.json", artifact.display()));
    write_json(path, &meta)
}

fn run_generate(cli: &Cli, args: &GenerateArgs) -> Result<()> {
    let noise = match (args.noise, args.noise_df) {
        (NoiseArg::Gaussian, None) => NoiseKind::Gaussian,
        (NoiseArg::Gaussian, Some(_)) => {
            return Err(Error::invalid(
                "noise_df",
                "--noise-df applies only to --noise student-t",
            ));
        }
        (NoiseArg::StudentT, Some(df)) => NoiseKind::StudentT { df },
        (NoiseArg::StudentT, None) => {
            return Err(Error::invalid(
                "noise_df",
                "--noise student-t requires --noise-df",
            ));
        }
    };
    let cfg = GenConfig {
        n: args.n,
        d: args.d,
        phi: args.phi,
        sigma_eps2: args.sigma_eps2,
        sigma: args.sigma,
        seed: cli.seed,
        noise,
        burn_in: args.burn_in,
    };
    let series = match args.model {
        Model::Fractional => {
            cfg.validate()?;
            fractional_noise(cfg.d, cfg.n, cfg.seed)
        }
        Model::Arfima => arfima_1_d_0(&cfg)?,
        Model::Lmsv => lmsv_series(&cfg)?,
        Model::LogsqLmsv => log_squared(&lmsv_series(&cfg)?)?,
    };
    let out = require_out(cli)?;
    write_series_csv(&out, &series)?;
    write_meta(
        &out,
        json!({ "command": "generate", "model": args.model.name(), "config": cfg }),
    )?;
    if !cli.quiet {
        println!("wrote {} samples to {}", series.n(), out.display());
    }
    Ok(())
}

fn run_dwt(cli: &Cli, args: &DwtArgs) -> Result<()> {
    let series = read_series_csv(&args.input)?;
    let coeffs = haar_dwt_finest(&series)?;
    let out = require_out(cli)?;
    write_coeffs_csv(&out, &coeffs)?;
    write_meta(
        &out,
        json!({
            "command": "dwt",
            "in": args.input.display().to_string(),
            "n": series.n(),
            "scale_j": coeffs.scale_j(),
        }),
    )?;
    if !cli.quiet {
        println!(
            "wrote {} scale-{} coefficients to {}",
            coeffs.coeffs().len(),
            coeffs.scale_j(),
            out.display()
        );
    }
    Ok(())
}

fn run_periodogram(cli: &Cli, args: &PeriodogramArgs) -> Result<()> {
    let series = read_series_csv(&args.input)?;
    let p = match args.kind {
        KindArg::Ordinary => ordinary_periodogram(&series, args.m)?,
        KindArg::WaveletOls => wavelet_ols_periodogram(&haar_dwt_finest(&series)?, args.m)?,
        KindArg::Nkk => nkk_periodogram(&haar_dwt_finest(&series)?, args.m, args.tol)?,
    };
    let out = require_out(cli)?;
    write_periodogram_csv(&out, &p)?;
    write_meta(
        &out,
        json!({
            "command": "periodogram",
            "in": args.input.display().to_string(),
            "kind": args.kind.name(),
            "m": args.m,
            "tol": args.tol,
        }),
    )?;
    if !cli.quiet {
        println!("wrote {} ordinates to {}", p.m(), out.display());
    }
    Ok(())
}

fn run_estimate(cli: &Cli, args: &EstimateArgs) -> Result<()> {
    let method: Method = args.method.parse()?;
    let series = read_series_csv(&args.input)?;
    let m = match (args.m, args.m_exp) {
        (Some(m), None) => m,
        (None, Some(exp)) => bandwidth_from_exponent(series.n(), exp)?,
        (None, None) => {
            return Err(Error::invalid("m", "pass either --m or --m-exp"));
        }
        (Some(_), Some(_)) => unreachable!("clap rejects --m with --m-exp"),
    };
    let est = match method {
        Method::Gph => estimate_gph(&series, m)?,
        Method::Wblp => estimate_wblp(&series, m)?,
        Method::Nkk => estimate_nkk(&series, m, args.tol)?,
    };
    let payload = json!({
        "d_hat": est.d_hat,
        "method": est.method.name(),
        "m": est.m,
        "intercept": est.intercept,
        "se": est.se_asymptotic,
        "skipped_k": est.skipped_k,
        "config": {
            "in": args.input.display().to_string(),
            "method": method.name(),
            "m": m,
            "tol": args.tol,
            "seed": cli.seed,
        },
    });
    let text = if args.json {
        serde_json::to_string(&payload)
    } else {
        serde_json::to_string_pretty(&payload)
    }
    .expect("static JSON value serializes");
    println!("{text}");
    if let Some(out) = &cli.out {
        write_json(out, &payload)?;
    }
    Ok(())
}

fn parse_methods(spec: &str) -> Result<Vec<Method>> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        if part.is_empty() {
            return Err(Error::invalid(
                "methods",
                "expected a comma-separated subset of gph, wblp, nkk",
            ));
        }
        out.push(part.parse::<Method>()?);
    }
    Ok(out)
}

fn finish_sweep(cli: &Cli, cfg: &SweepConfig, workers: usize) -> Result<()> {
    let out = require_out(cli)?;
    let res = run_sweep(cfg, workers)?;
    export_sweep(&res, &out)?;
    if !cli.quiet {
        println!("{}", summarize(&res)?);
        println!("artifacts in {}", out.display());
    }
    Ok(())
}

fn run_sweep_cmd(cli: &Cli, args: &SweepArgs) -> Result<()> {
    let cfg = SweepConfig {
        n: args.n,
        d: args.d,
        phi: args.phi,
        sigma_eps2: args.sigma_eps2,
        sigma: 1.0,
        reps: args.reps,
        lo_exp: args.lo_exp,
        hi_exp: args.hi_exp,
        methods: parse_methods(&args.methods)?,
        base_seed: cli.seed,
        tol: args.tol,
    };
    finish_sweep(cli, &cfg, args.workers)
}

fn run_reproduce(cli: &Cli, args: &ReproduceArgs) -> Result<()> {
    let (n, d, phi) = match args.figure {
        1 => (1024, 0.2, 0.4),
        2 => (1024, 0.3, 0.5),
        3 => (2048, 0.3, 0.4),
        other => {
            return Err(Error::invalid(
                "figure",
                format!("unknown preset {other}; valid figures are 1, 2, 3"),
            ));
        }
    };
    let cfg = SweepConfig {
        n,
        d,
        phi,
        sigma_eps2: 0.37,
        sigma: 1.0,
        reps: args.reps,
        lo_exp: 0.3,
        hi_exp: 0.8,
        methods: Method::ALL.to_vec(),
        base_seed: cli.seed,
        tol: 1e-8,
    };
    finish_sweep(cli, &cfg, args.workers)
}

/// Fixed-width summary: one row per bandwidth, one mse/bias/variance column
/// group per method in the stable gph, wblp, nkk order. Cells aggregated from
/// fewer than 80% of replications are starred.
fn summarize(res: &SweepResult) -> Result<String> {
    if res.methods.is_empty() || res.grid.is_empty() {
        return Err(Error::invalid(
            "result",
            "nothing to summarize: no methods or empty bandwidth grid",
        ));
    }
    let cell = |v: f64, starred: bool| -> String {
        let body = if v.is_finite() {
            format!("{v:.3e}")
        } else {
            "nan".to_string()
        };
        if starred {
            format!("{body}*")
        } else {
            body
        }
    };

    let cfg = &res.config;
    let mut text = format!(
        "sweep: n={} d={} phi={} sigma_eps2={} reps={} seed={}\n",
        cfg.n, cfg.d, cfg.phi, cfg.sigma_eps2, cfg.reps, cfg.base_seed
    );
    text.push_str(&format!("{:>6}", "m"));
    for method in &res.methods {
        text.push_str(&format!(
            " | {:>11} {:>11} {:>11}",
            format!("{method}.mse"),
            format!("{method}.bias"),
            format!("{method}.var")
        ));
    }
    text.push('\n');

    let mut any_starred = false;
    for (gi, &m) in res.grid.iter().enumerate() {
        text.push_str(&format!("{m:>6}"));
        for mi in 0..res.methods.len() {
            let c = &res.cells[mi * res.grid.len() + gi];
            any_starred |= c.unreliable;
            text.push_str(&format!(
                " | {:>11} {:>11} {:>11}",
                cell(c.mse, c.unreliable),
                cell(c.bias, c.unreliable),
                cell(c.variance, c.unreliable)
            ));
        }
        text.push('\n');
    }
    if any_starred {
        text.push_str(
            "* aggregated from fewer than 80% of replications; see reps_used in aggregate.csv\n",
        );
    }
    Ok(text)
}
