use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod grid;
mod report;
mod suites;
mod volume;

use report::{RunConfig, SuiteReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "screwcal",
    version,
    about = "Verification suites and volume experiments for screw-radial calibrations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub(crate) struct Common {
    /// Worker threads; defaults to the rayon default.
    #[arg(long, env = "SCREWCAL_THREADS")]
    pub threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a property suite and print a JSON report.
    Verify {
        /// One of algebra, bi-invariance, local-isometry, spacelike-lemma,
        /// calibration, warren, vorticity, optimal-s3, involutivity, intrinsic.
        suite: String,
        /// Sample count; each suite has its own default.
        #[arg(long)]
        samples: Option<usize>,
        /// Restrict to one curvature: -1, 0 or 1.
        #[arg(long, allow_negative_numbers = true)]
        kappa: Option<i32>,
        /// Screw constant for the suites that use one.
        #[arg(long)]
        c: Option<f64>,
        /// Override a tolerance, `name=value`; repeatable.
        #[arg(long = "tol", value_name = "NAME=VALUE")]
        tolerances: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Perturb a screw-radial domain and compare volumes.
    Volume(volume::VolumeArgs),
    /// Tabulate a radial quantity as CSV.
    Grid(grid::GridArgs),
}

fn parse_tolerances(raw: &[String]) -> Result<BTreeMap<String, f64>, CliError> {
    let mut map = BTreeMap::new();
    for item in raw {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("tolerance `{item}` is not NAME=VALUE")))?;
        let value: f64 = value
            .parse()
            .map_err(|_| CliError::Config(format!("tolerance `{item}` is not a number")))?;
        if !(value > 0.0 && value.is_finite()) {
            return Err(CliError::Config(format!(
                "tolerance `{name}` must be positive"
            )));
        }
        map.insert(name.to_string(), value);
    }
    Ok(map)
}

fn install_threads(threads: Option<usize>) -> Result<(), CliError> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(())
}

/// Writes `text` to `--out` or stdout.
pub(crate) fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Failed(e.to_string()))
        }
    }
}

pub(crate) fn to_json(value: &impl serde::Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Verify {
            suite,
            samples,
            kappa,
            c,
            tolerances,
            common,
        } => {
            install_threads(common.threads)?;
            if samples == Some(0) {
                return Err(CliError::Config("--samples must be positive".into()));
            }
            if !suites::SUITES.contains(&suite.as_str()) {
                return Err(CliError::Config(format!(
                    "unknown suite `{suite}`; expected one of {}",
                    suites::SUITES.join(", ")
                )));
            }
            let config = RunConfig {
                command: format!("verify {suite}"),
                c,
                kappa,
                seed: common.seed,
                samples,
                threads: common.threads,
                tolerances: parse_tolerances(&tolerances)?,
            };
            let checks = suites::run(&suite, &config)?;
            let report = SuiteReport::new(&suite, config, checks);
            emit(common.out.as_ref(), &to_json(&report))?;
            Ok(report.pass)
        }
        Command::Volume(args) => {
            install_threads(args.common.threads)?;
            volume::run(&args)
        }
        Command::Grid(args) => {
            install_threads(args.common.threads)?;
            grid::run(&args).map(|_| true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("screwcal: {e}");
            ExitCode::from(e.code())
        }
    }
}
