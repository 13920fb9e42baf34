//! Command line driver around `quill-core`.
//!
//! Five subcommands: `figure2` and `figure3` for the two canonical
//! comparisons, `sweep` for arbitrary bath sweeps from a JSON spec,
//! `validate` for the Monte Carlo campaign against the closed forms, and
//! `asymptote` for the dominant-bath ratio alone.
//!
//! Exit codes: 0 success, 1 bad usage or malformed input, 2 a validation
//! campaign that ran to completion but failed its statistical policy,
//! 3 I/O failure.

pub mod args;
pub mod figures;
pub mod grid;
pub mod svg;
pub mod sweep;
pub mod validate;

use quill_core::{Scenario, SourceKind};
use std::io;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn usage(msg: impl ToString) -> Self {
        CliError::Usage(msg.to_string())
    }

    pub fn validation(msg: impl ToString) -> Self {
        CliError::Validation(msg.to_string())
    }

    pub fn io(context: impl Into<String>, source: io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

/// Seed precedence: explicit flag, then the QUILL_SEED environment
/// variable (decimal u64), then 0.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("QUILL_SEED") {
        Ok(text) => text.trim().parse().map_err(|_| {
            CliError::usage(format!(
                "QUILL_SEED must be an unsigned 64-bit decimal integer, got {text:?}"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(std::env::VarError::NotUnicode(_)) => {
            Err(CliError::usage("QUILL_SEED is not valid UTF-8"))
        }
    }
}

pub fn run(cli: args::Cli) -> Result<(), CliError> {
    match &cli.command {
        args::Command::Figure2(a) => figures::cmd_figure2(a),
        args::Command::Figure3(a) => figures::cmd_figure3(a),
        args::Command::Sweep(a) => sweep::cmd_sweep(a),
        args::Command::Validate(a) => validate::cmd_validate(a),
        args::Command::Asymptote(a) => cmd_asymptote(a),
    }
}

/// Prints the large-bath SNR ratio for a twin-beam/thermal-beam pair at the
/// given operating point. The bath itself drops out of the limit, so the
/// scenarios carry none.
fn cmd_asymptote(a: &args::AsymptoteArgs) -> Result<(), CliError> {
    let twb = Scenario {
        source_kind: SourceKind::Twb,
        n: a.n_twb,
        m: a.m,
        n_beta: 0.0,
        m_beta: 0,
        eta: a.eta,
        eta_beta: 0.5,
        tau: 0.5,
        object_present: true,
        n_pix: 80,
    };
    let thb = Scenario {
        source_kind: SourceKind::Thb,
        n: a.n_thb,
        ..twb.clone()
    };
    for (label, scenario) in [("twb", &twb), ("thb", &thb)] {
        scenario
            .validate()
            .map_err(|e| CliError::usage(format!("{label}: {e}")))?;
    }
    let value = quill_core::asymptotic_ratio(&twb, &thb).map_err(CliError::usage)?;
    // f64's Display already prints the shortest digit string that round-trips.
    println!("{value}");
    Ok(())
}
