//! Command-line front end for the queue solver and simulator.
//!
//! Exit codes are a stable contract for scripting: 0 success (and a passing
//! comparison), 1 config error, 2 stability rejection, 3 numerical
//! degeneracy or a failed comparison. Log verbosity comes from `RUST_LOG`.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gqueue::config::{OutputFormat, RunConfig, SweepConfig};
use gqueue::report::{CompareArtifact, SimArtifact, SolveArtifact, SweepArtifact};
use gqueue::{compare, run_sweep, simulate, solve, Error};

#[derive(Parser)]
#[command(
    name = "gqueue",
    about = "Steady-state solver and simulator for batch-renewal queues with negative customers and disasters",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(value: FormatArg) -> Self {
        match value {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Path to the TOML config.
    #[arg(long)]
    config: PathBuf,
    /// Artifact destination; stdout when omitted and the config names no path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the config's output format.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the model analytically and emit the distribution table.
    Solve(CommonArgs),
    /// Run the event-driven simulation and emit the empirical table.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Solve and simulate, then emit the cross-validation verdict.
    Compare {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate the mean system size over a parameter grid.
    Sweep(CommonArgs),
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::InvalidParameter(_) | Error::UnsupportedOrder { .. } => 1,
        Error::Unstable { .. } => 2,
        _ => 3,
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Solve(common) => {
            let config = load_run_config(&common)?;
            let params = config.model_params()?;
            let dist = solve(&params)?;
            let artifact =
                SolveArtifact::build(&dist, config.solve.max_rows, config.solve.tail_cutoff);
            let (l_pre, l_arb) = dist.mean_system_size();
            log::info!(
                "solved: b={} L-={l_pre:.8} L={l_arb:.8} decay={:.8}",
                params.batch.max_size(),
                dist.tail_decay()
            );
            let text = match effective_format(&config, &common) {
                OutputFormat::Csv => artifact.to_csv(config.output.precision),
                OutputFormat::Json => artifact.to_json(config.output.precision),
            };
            write_artifact(&common, &config, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate { common, seed } => {
            let config = load_run_config(&common)?;
            let sim_config = config.sim_config(seed)?;
            let result = simulate(&sim_config)?;
            log::info!(
                "simulated {} replications: mean_pre={:.6} mean_arb={:.6}",
                result.replications,
                result.mean_pre,
                result.mean_arb
            );
            let artifact = SimArtifact { result: &result };
            let text = match effective_format(&config, &common) {
                OutputFormat::Csv => artifact.to_csv(config.output.precision),
                OutputFormat::Json => artifact.to_json(config.output.precision),
            };
            write_artifact(&common, &config, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare { common, seed } => {
            let config = load_run_config(&common)?;
            let params = config.model_params()?;
            let dist = solve(&params)?;
            let sim_config = config.sim_config(seed)?;
            let result = simulate(&sim_config)?;
            let report = compare(&dist, &result)?;
            log::info!(
                "comparison: tv_pre={:.5} tv_arb={:.5} pass={}",
                report.tv_prearrival,
                report.tv_timeavg,
                report.pass
            );
            let artifact = CompareArtifact { report: &report };
            let text = match effective_format(&config, &common) {
                OutputFormat::Csv => artifact.to_csv(config.output.precision),
                OutputFormat::Json => artifact.to_json(config.output.precision),
            };
            write_artifact(&common, &config, &text)?;
            if report.pass {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!(
                    "comparison failed: tv_pre={:.5} tv_arb={:.5} mean_pre {:.6} vs {:.6}",
                    report.tv_prearrival,
                    report.tv_timeavg,
                    report.mean_pre_analytic,
                    report.mean_pre_empirical
                );
                Ok(ExitCode::from(3))
            }
        }
        Command::Sweep(common) => {
            let text_cfg = read_file(&common.config)?;
            let config = SweepConfig::from_toml(&text_cfg)?;
            let rows = run_sweep(&config)?;
            let artifact = SweepArtifact { rows: &rows };
            let format = common
                .format
                .map(OutputFormat::from)
                .unwrap_or(config.output.format);
            let text = match format {
                OutputFormat::Csv => artifact.to_csv(config.output.precision),
                OutputFormat::Json => artifact.to_json(config.output.precision),
            };
            let path = common
                .out
                .clone()
                .or_else(|| config.output.path.clone().map(Into::into));
            write_text(path, &text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load_run_config(common: &CommonArgs) -> Result<RunConfig, Error> {
    RunConfig::from_toml(&read_file(&common.config)?)
}

fn read_file(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

fn effective_format(config: &RunConfig, common: &CommonArgs) -> OutputFormat {
    common
        .format
        .map(OutputFormat::from)
        .unwrap_or(config.output.format)
}

fn write_artifact(common: &CommonArgs, config: &RunConfig, text: &str) -> Result<(), Error> {
    let path = common
        .out
        .clone()
        .or_else(|| config.output.path.clone().map(Into::into));
    write_text(path, text)
}

fn write_text(path: Option<PathBuf>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(&p, text)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
