use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use covert_core::harness::acceptance::{run_acceptance, AcceptanceOptions, DEFAULT_SEED};
use covert_core::harness::{write_csv, write_outputs, Experiment, ExperimentConfig, PointResult};
use covert_core::{Error, Result};

/// Covert fraction estimation experiments.
#[derive(Debug, Parser)]
#[command(name = "covert-sim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment configuration file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed, overriding the config.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output path: CSV for run and sweep, JSON report for accept.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for trial execution.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a single configuration (any sweep section is ignored).
    Run,
    /// Run every grid point of the configured sweep.
    Sweep,
    /// Run an acceptance suite.
    Accept {
        /// Suite name, or "all".
        suite: String,
    },
}

enum Failure {
    Validation(Error),
    Acceptance,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Validation(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Acceptance) => ExitCode::from(2),
    }
}

fn dispatch(cli: &Cli) -> std::result::Result<(), Failure> {
    match &cli.command {
        Command::Run => {
            let mut config = load(cli)?;
            config.sweep = None;
            experiment(config)
        }
        Command::Sweep => {
            let config = load(cli)?;
            if config.sweep.is_none() {
                return Err(Error::InvalidConfiguration("config has no [sweep] section".into()).into());
            }
            experiment(config)
        }
        Command::Accept { suite } => accept(cli, suite),
    }
}

fn load(cli: &Cli) -> Result<ExperimentConfig> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::InvalidConfiguration("--config <path> is required".into()))?;
    let mut config = ExperimentConfig::load(path)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(threads) = cli.threads {
        config.threads = Some(threads);
    }
    if let Some(out) = &cli.out {
        config.output = Some(out.clone());
    }
    config.validate()?;
    Ok(config)
}

fn experiment(config: ExperimentConfig) -> std::result::Result<(), Failure> {
    let out = config.output.clone();
    let exp = Experiment::new(config)?;
    let points = exp.run_sweep()?;
    match out {
        Some(path) => {
            let written = write_outputs(&exp, &points, &path)?;
            for p in &points {
                eprintln!("{}", summary(&exp, p));
            }
            eprintln!("wrote {} and {}", written.csv.display(), written.meta.display());
            if let Some(plot) = written.plot {
                eprintln!("plot script {}", plot.display());
            }
        }
        None => {
            write_csv(&exp.rows(&points), std::io::stdout().lock())?;
            for p in &points {
                eprintln!("{}", summary(&exp, p));
            }
        }
    }
    Ok(())
}

fn summary(exp: &Experiment, p: &PointResult) -> String {
    let r = &p.report;
    let param = p.param.map(|v| format!("{v}: ")).unwrap_or_default();
    format!(
        "{param}{} {} on n={} (median degree {}): success {:.4}, output risk {:.4}, message risk {:.4}, total {:.4}",
        p.protocol.name(),
        p.mode,
        exp.net.n(),
        exp.stats.median_degree,
        r.success.value,
        r.output_risk.gated.value,
        r.message_risk_analytic,
        r.total_risk
    )
}

fn accept(cli: &Cli, suite: &str) -> std::result::Result<(), Failure> {
    let opts = AcceptanceOptions {
        seed: cli.seed.unwrap_or(DEFAULT_SEED),
        threads: cli.threads,
        ..AcceptanceOptions::default()
    };
    let report = run_acceptance(suite, &opts)?;
    for outcome in &report.outcomes {
        println!("{}", outcome.summary_line());
        print!("{}", outcome.details());
    }
    if let Some(path) = &cli.out {
        write_report(path, &report)?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Acceptance)
    }
}

fn write_report(path: &Path, report: &covert_core::harness::AcceptanceReport) -> Result<()> {
    let json = serde_json::to_string_pretty(report).map_err(|e| Error::InvalidInput(e.to_string()))?;
    std::fs::write(path, json).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
