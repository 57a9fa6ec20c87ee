//! Command implementations behind the `dbr` binary.

pub mod bundle;
pub mod commands;
pub mod error;
pub mod render;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use derived_brackets::fixtures;

use crate::bundle::Bundle;
use crate::commands::{Outcome, Suite};
use crate::error::{CliError, CliResult};

pub const DEFAULT_ARITY: usize = 4;
/// Above this the permutation sums (7! terms per word) get slow.
pub const MAX_ARITY: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "dbr", version, about = "Higher derived brackets of split graded Lie algebras, computed exactly")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Include wall-clock milliseconds in the report (makes output vary).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Bundle file, or `fixture:NAME` for a shipped fixture.
    pub bundle: String,
    /// Highest arity computed (default: the bundle's max_arity, else 4).
    #[arg(long)]
    pub arity: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the algebra, splitting and derivation axioms.
    Validate {
        bundle: String,
    },
    /// Taylor coefficients of the brackets of one element or derivation.
    Brackets {
        #[command(flatten)]
        input: Input,
        /// Derivation, element or basis element name.
        #[arg(long)]
        source: String,
        /// Read the brackets off homotopy transfer; works when A is not a subalgebra.
        #[arg(long)]
        via_transfer: bool,
    },
    /// Run identity suites on the bundle and on seeded random fixtures.
    Check {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare transferred brackets with the closed forms.
    TransferCheck {
        #[command(flatten)]
        input: Input,
        /// Negate one Bernoulli number in the transfer route (fault injection).
        #[arg(long, hide = true)]
        flip_bernoulli: Option<usize>,
    },
    /// The cocone (or, with a second algebra, fiber product) structure.
    Cocone {
        #[command(flatten)]
        input: Input,
        /// Use the bundle's "second_algebra" as N instead of N = 0.
        #[arg(long)]
        with_second_algebra: bool,
    },
    /// The fiber model R_D and its morphism F_D into the cone.
    FiberModel {
        #[command(flatten)]
        input: Input,
    },
}

/// Reads a bundle from a path, or a shipped fixture for `fixture:NAME`.
pub fn load(spec: &str) -> CliResult<Bundle> {
    if let Some(name) = spec.strip_prefix("fixture:") {
        let f = fixtures::named(name).map_err(|_| CliError::Io {
            path: spec.into(),
            message: format!("no shipped fixture {name:?}; known: {}", fixtures::NAMES.join(", ")),
        })?;
        let text = serde_json::to_string(&bundle::fixture_bundle(&f)).expect("plain data");
        return bundle::parse(&text, spec);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| CliError::Io { path: spec.into(), message: e.to_string() })?;
    bundle::parse(&text, spec)
}

/// What the binary prints, where, and its exit code.
#[derive(Debug)]
pub struct Rendered {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn arity(input: &Input, b: &Bundle, warnings: &mut Vec<String>) -> CliResult<usize> {
    let n = input.arity.or(b.max_arity).unwrap_or(DEFAULT_ARITY);
    if n == 0 {
        return Err(CliError::field("<command line>", "--arity", "must be at least 1"));
    }
    if n > MAX_ARITY {
        warnings.push(format!("arity {n} capped at {MAX_ARITY}: each word cell sums over up to {MAX_ARITY}! permutations"));
        return Ok(MAX_ARITY);
    }
    Ok(n)
}

fn dispatch(cli: &Cli, warnings: &mut Vec<String>) -> CliResult<Outcome> {
    match &cli.command {
        Command::Validate { bundle } => commands::validate(&load(bundle)?),
        Command::Brackets { input, source, via_transfer } => {
            let b = load(&input.bundle)?;
            commands::brackets(&b, source, arity(input, &b, warnings)?, *via_transfer)
        }
        Command::Check { input, suite, seed } => {
            let b = load(&input.bundle)?;
            commands::check(&b, *suite, arity(input, &b, warnings)?, *seed)
        }
        Command::TransferCheck { input, flip_bernoulli } => {
            let b = load(&input.bundle)?;
            commands::transfer_check(&b, arity(input, &b, warnings)?, *flip_bernoulli)
        }
        Command::Cocone { input, with_second_algebra } => {
            let b = load(&input.bundle)?;
            commands::cocone(&b, arity(input, &b, warnings)?, *with_second_algebra)
        }
        Command::FiberModel { input } => {
            let b = load(&input.bundle)?;
            commands::fiber_model(&b, arity(input, &b, warnings)?)
        }
    }
}

/// Runs a parsed command line.  Exit code 0 iff the report is ok, 1 for a
/// failing report, 2 for a diagnostic.
pub fn run(cli: &Cli) -> Rendered {
    let start = Instant::now();
    let mut warnings = Vec::new();
    let (body, code) = match dispatch(cli, &mut warnings) {
        Ok(mut out) => {
            for w in &warnings {
                out.report.note(w.clone());
            }
            out.report.sort();
            if cli.timing {
                out.report.timing_ms = Some(start.elapsed().as_millis() as u64);
            }
            let v = out.to_value();
            let body = match cli.format {
                Format::Json => serde_json::to_string_pretty(&v).expect("plain data") + "\n",
                Format::Text => render::text(&v),
            };
            (body, if out.report.ok { 0 } else { 1 })
        }
        Err(e) => (
            match cli.format {
                Format::Json => e.to_json() + "\n",
                Format::Text => format!("error: {e}\n"),
            },
            2,
        ),
    };
    let mut stderr: String = warnings.iter().map(|w| format!("warning: {w}\n")).collect();
    let stdout = match &cli.output {
        None => body,
        Some(path) => match std::fs::write(path, &body) {
            Ok(()) => String::new(),
            Err(e) => {
                let err = CliError::Io { path: path.display().to_string(), message: e.to_string() };
                stderr.push_str(&format!("error: {err}\n"));
                return Rendered { stdout: String::new(), stderr, code: 2 };
            }
        },
    };
    Rendered { stdout, stderr, code }
}
