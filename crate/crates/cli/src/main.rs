//! `cluster-atomic`: batch front end over the engine.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use cluster_atomic::cluster::DEFAULT_CAP;
use cluster_atomic::grassmannian::DEFAULT_PRIME_BUDGET;
use cluster_atomic::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Mutate,
    Enumerate,
    Expand,
    Rep,
    Xcheck,
    VerifyLemma,
    VerifyAtomic,
}

#[derive(Debug, Parser)]
#[command(name = "cluster-atomic", version, about = "Exact cluster algebra engine and atomic-basis verifier")]
pub struct RunConfig {
    /// JSON file holding a `quiver` or `matrix`, plus optional `elements`
    /// and `exponents`.
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long, value_enum)]
    pub command: Command,

    /// Comma-separated 1-based mutation directions.
    #[arg(long, default_value = "")]
    pub walk: String,

    /// 1-based position in the seed reached by the walk.
    #[arg(long)]
    pub k: Option<usize>,

    #[arg(long, default_value_t = 3)]
    pub max_deg: u32,

    /// Maximum number of clusters to enumerate.
    #[arg(long, default_value_t = DEFAULT_CAP, value_parser = clap::value_parser!(usize))]
    pub cap: usize,

    /// Number of primes available to point-count interpolation.
    #[arg(long, default_value_t = DEFAULT_PRIME_BUDGET)]
    pub primes: usize,

    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub threads: Option<usize>,

    /// Random combinations checked by `verify-atomic` when the input lists
    /// no elements.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Report destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Why a run ended without a clean report.
#[derive(Debug)]
pub enum Failure {
    /// The report was produced but records a failed check.
    Verification(String),
    Invalid(String),
    Cap(usize),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Cap(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Verification(m) => write!(f, "verification failed: {m}"),
            Failure::Invalid(m) => write!(f, "invalid input: {m}"),
            Failure::Cap(c) => write!(f, "enumeration cap of {c} exceeded"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { cap } => Failure::Cap(cap),
            Error::InexactDivision
            | Error::InvariantViolation(_)
            | Error::InterpolationInconsistent { .. }
            | Error::RelationViolation(_) => Failure::Verification(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

fn configure_threads(threads: Option<usize>) -> Result<(), Failure> {
    match threads {
        Some(0) => Err(Failure::Invalid("--threads must be positive".into())),
        #[cfg(feature = "parallel")]
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::Invalid(e.to_string())),
        _ => Ok(()),
    }
}

fn emit(config: &RunConfig, report: &serde_json::Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(report).expect("reports serialize") + "\n";
    match &config.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(config: &RunConfig) -> Result<(), Failure> {
    if config.cap == 0 || config.primes == 0 {
        return Err(Failure::Invalid("--cap and --primes must be positive".into()));
    }
    configure_threads(config.threads)?;
    let doc = input::load(&config.input)?;
    let outcome = commands::dispatch(config, &doc)?;
    emit(config, &outcome.report)?;
    match outcome.failure {
        Some(msg) => Err(Failure::Verification(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let config = RunConfig::parse();
    match run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("cluster-atomic: {f}");
            ExitCode::from(f.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn engine_errors_map_to_exit_codes() {
        assert_eq!(Failure::from(Error::CapExceeded { cap: 5 }).code(), 3);
        assert_eq!(Failure::from(Error::InexactDivision).code(), 1);
        assert_eq!(Failure::from(Error::InvariantViolation("E != 0".into())).code(), 1);
        assert_eq!(Failure::from(Error::NotSkewSymmetric).code(), 2);
        assert_eq!(Failure::from(Error::IndexOutOfRange { index: 4, n: 2 }).code(), 2);
    }
}
