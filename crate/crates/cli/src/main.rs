//! Batch front end: moments, term structures, risk measures, validation
//! suites and benchmarks from a TOML run configuration.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mgfm_core::quadrature::QuadConfig;

use commands::Settings;
use config::{load_config, RunConfig};
use error::CliError;
use output::Format;

#[derive(Debug, Parser)]
#[command(name = "mgfm", version, about = "Moments, tail risk and term structures from moment-generating functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<String>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Seed for simulation-based steps.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[arg(long, global = true)]
    abs_tol: Option<f64>,

    #[arg(long, global = true)]
    rel_tol: Option<f64>,

    /// Contour abscissa override.
    #[arg(long, global = true)]
    s: Option<f64>,

    /// Omit wall-time columns so that output is reproducible byte for byte.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Moments of one law for a grid of orders, shifts and kinds.
    Moment,
    /// Conditional moments of a dynamic model against the horizon.
    TermStructure,
    /// Quantiles and expected shortfall.
    Risk,
    /// Invariant suites; exits 4 if any check fails.
    Validate,
    /// Median timings of contour, density and simulation moments.
    Bench,
}

fn settings(cli: &Cli, cfg: &RunConfig) -> Result<Settings, CliError> {
    let mut quad = QuadConfig::default();
    if let Some(v) = cfg.quad.max_panels {
        quad.max_panels = v;
    }
    quad.abs_tol = cli.abs_tol.or(cfg.quad.abs_tol).unwrap_or(quad.abs_tol);
    quad.rel_tol = cli.rel_tol.or(cfg.quad.rel_tol).unwrap_or(quad.rel_tol);
    quad.validate()?;
    Ok(Settings {
        quad,
        s: cli.s.or(cfg.quad.s),
        seed: cli.seed.or(cfg.seed).unwrap_or(1),
        timing: !cli.no_timing,
    })
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    let cfg = match &cli.config {
        Some(path) => load_config(path)?,
        None => match cli.command {
            Command::Validate | Command::Bench => RunConfig {
                version: config::CONFIG_VERSION,
                ..RunConfig::default()
            },
            _ => return Err(CliError::Usage("--config is required for this command".into())),
        },
    };
    let st = settings(cli, &cfg)?;
    let format = match (cli.format, cfg.format.as_deref()) {
        (Some(f), _) => f,
        (None, Some("csv")) => Format::Csv,
        (None, Some("json")) => Format::Json,
        (None, Some(other)) => return Err(CliError::Usage(format!("unknown format {other:?}"))),
        (None, None) if matches!(cli.command, Command::Validate) => Format::Json,
        (None, None) => Format::Csv,
    };
    let output = cli.output.clone().or(cfg.output.clone());
    let report = match cli.command {
        Command::Moment => commands::moment_table(&cfg, &st)?,
        Command::TermStructure => commands::term_structure_table(&cfg, &st)?,
        Command::Risk => commands::risk_table(&cfg, &st)?,
        Command::Validate => commands::validate_table(&cfg, &st)?,
        Command::Bench => commands::bench_table(&cfg, &st)?,
    };
    report.write(format, output.as_deref())?;
    if report.passed == Some(false) {
        let failed = report
            .rows
            .iter()
            .filter(|r| r.contains(&output::Cell::Bool(false)))
            .count();
        return Err(CliError::Validation(format!("{failed} of {} checks failed", report.rows.len())));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", config::one_line(&e));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
