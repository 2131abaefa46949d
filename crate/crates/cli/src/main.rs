use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chromlab_core::coupling::Statistic;
use chromlab_core::lab::{self, Command, RunOptions, Table};
use chromlab_core::util::parse_biguint;
use chromlab_core::Error;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

const EXIT_USAGE: u8 = 64;
const DEFAULT_OUT: &str = "lab-out";
const DEFAULT_BUDGET_MS: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

/// Random-graph laboratory for the chromatic number of G(n, 1/2).
///
/// Every run writes its report, tables and a replayable manifest under --out.
#[derive(Debug, Parser)]
#[command(name = "chromlab", version)]
struct Cli {
    /// Output directory [default: lab-out]
    #[arg(long, global = true, env = "CHROMLAB_OUT")]
    out: Option<PathBuf>,

    /// What to print on stdout [default: json]
    #[arg(long, global = true, env = "CHROMLAB_FORMAT", value_enum)]
    format: Option<Format>,

    /// Worker threads; results do not depend on this
    #[arg(long, global = true, env = "CHROMLAB_THREADS")]
    threads: Option<usize>,

    /// Budget per exact solve, in milliseconds [default: 10000]
    #[arg(long, global = true, env = "CHROMLAB_BUDGET_MS")]
    budget_ms: Option<u64>,

    /// JSON file supplying defaults for any flag
    #[arg(long, global = true, env = "CHROMLAB_CONFIG")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Closed-form quantities for one n
    Profile { n: String },
    /// Smallest n >= N with x(n) in (c1, c2)
    FindBand {
        c1: f64,
        c2: f64,
        #[arg(value_name = "N")]
        start: String,
        /// Evaluation cap [default: 100000000]
        #[arg(long)]
        cap: Option<u64>,
    },
    /// f(n') - f(n) against r + (1 - x) r / a
    Fgap { n: String },
    /// sigma_t profile and the bound on E[Y]
    Ybound {
        n: String,
        #[arg(value_name = "A")]
        big_a: String,
    },
    /// Step sequence n_1 < n_2 < ... for the non-concentration bookkeeping
    Ledger {
        c: f64,
        n1: String,
        /// Steps enumerated before switching to an estimate [default: 1000000]
        #[arg(long)]
        enumerate_cap: Option<u64>,
    },
    /// Shifted-set check for Poi(lambda); SET is like `1190..` or `0..5,9`
    PoissonShift { lambda: f64, eps: f64, set: String },
    /// One G(n, 1/2) sample as a binary graph file
    Sample {
        n: usize,
        seed: u64,
        /// Also write a DIMACS .col file
        #[arg(long)]
        dimacs: bool,
    },
    /// Empirical law of X_k against Poi(mu)
    XkDist { n: usize, k: usize, samples: usize, seed: u64 },
    /// Build and verify a conditioned pair (H, H')
    Couple {
        n: usize,
        a: usize,
        #[arg(value_name = "A")]
        big_a: usize,
        r: usize,
        seed: u64,
        /// Rejection attempts before giving up [default: 100000]
        #[arg(long)]
        max_attempts: Option<u64>,
    },
    /// Coupled H against the directly conditioned reference law
    Claim2 {
        n: usize,
        a: usize,
        #[arg(value_name = "A")]
        big_a: usize,
        samples: usize,
        /// edge_count, chi, max_degree or triangle_count
        statistic: Statistic,
        seed: u64,
        /// Allowed relative excess on threshold events [default: 0.1]
        #[arg(long)]
        slack: Option<f64>,
    },
    /// Empirical distribution of chi(G(n, 1/2))
    ChiInterval { n: usize, samples: usize, seed: u64 },
    /// Rerun a manifest and compare every output hash
    Replay { manifest: PathBuf },
}

/// Defaults read from `--config`; flags and environment variables win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    out: Option<PathBuf>,
    format: Option<Format>,
    threads: Option<usize>,
    budget_ms: Option<u64>,
    cap: Option<u64>,
    enumerate_cap: Option<u64>,
    max_attempts: Option<u64>,
    slack: Option<f64>,
}

impl Config {
    fn load(path: Option<&Path>) -> Result<Config, Error> {
        match path {
            None => Ok(Config::default()),
            Some(p) => serde_json::from_slice(&std::fs::read(p)?)
                .map_err(|e| Error::Format(format!("config {}: {e}", p.display()))),
        }
    }
}

fn big(s: &str) -> Result<String, Error> {
    Ok(parse_biguint(s)?.to_string())
}

fn to_command(sub: Sub, cfg: &Config) -> Result<Command, Error> {
    Ok(match sub {
        Sub::Profile { n } => Command::Profile { n: big(&n)? },
        Sub::FindBand { c1, c2, start, cap } => Command::FindBand {
            c1,
            c2,
            start: big(&start)?,
            cap: cap.or(cfg.cap).unwrap_or(chromlab_core::asymptotics::DEFAULT_BAND_CAP),
        },
        Sub::Fgap { n } => Command::Fgap { n: big(&n)? },
        Sub::Ybound { n, big_a } => Command::Ybound { n: big(&n)?, big_a: big(&big_a)? },
        Sub::Ledger { c, n1, enumerate_cap } => Command::Ledger {
            c,
            n1_hint: big(&n1)?,
            enumerate_cap: enumerate_cap.or(cfg.enumerate_cap).unwrap_or(1_000_000),
        },
        Sub::PoissonShift { lambda, eps, set } => Command::PoissonShift { lambda, epsilon: eps, set },
        Sub::Sample { n, seed, dimacs } => Command::Sample { n, seed, dimacs },
        Sub::XkDist { n, k, samples, seed } => Command::XkDist { n, k, samples, seed },
        Sub::Couple { n, a, big_a, r, seed, max_attempts } => Command::Couple {
            n,
            a,
            big_a,
            r,
            seed,
            max_attempts: max_attempts.or(cfg.max_attempts).unwrap_or(100_000),
        },
        Sub::Claim2 { n, a, big_a, samples, statistic, seed, slack } => Command::Claim2 {
            n,
            a,
            big_a,
            samples,
            statistic,
            seed,
            slack: slack.or(cfg.slack).unwrap_or(0.1),
        },
        Sub::ChiInterval { n, samples, seed } => Command::ChiInterval { n, samples, seed },
        Sub::Replay { .. } => unreachable!("handled by the caller"),
    })
}

fn print(report: &serde_json::Value, table: Option<&Table>, format: Format) -> Result<(), Error> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(report)?),
        Format::Csv => {
            let bytes = match table {
                Some(t) => t.to_csv()?,
                None => Table::from_json_scalars(report).to_csv()?,
            };
            print!("{}", String::from_utf8_lossy(&bytes));
        }
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<bool, Error> {
    let cfg = Config::load(cli.config.as_deref())?;
    let format = cli.format.or(cfg.format).unwrap_or(Format::Json);
    if let Some(k) = cli.threads.or(cfg.threads) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| Error::Format(format!("cannot start {k} threads: {e}")))?;
    }
    let out = cli.out.or_else(|| cfg.out.clone());
    if let Sub::Replay { manifest } = &cli.cmd {
        let dir = out.unwrap_or_else(|| manifest.parent().unwrap_or(Path::new(".")).join("replay"));
        let rep = lab::replay(manifest, &dir)?;
        print(&serde_json::to_value(&rep)?, None, format)?;
        return Ok(rep.identical);
    }
    let opts = RunOptions {
        out: out.unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
        budget_ms: cli.budget_ms.or(cfg.budget_ms).unwrap_or(DEFAULT_BUDGET_MS),
    };
    let cmd = to_command(cli.cmd, &cfg)?;
    let res = lab::run(&cmd, &opts)?;
    print(&res.report, res.table.as_ref(), format)?;
    eprintln!("manifest: {}", res.manifest_path.display());
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("replay differs from the recorded outputs");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
