use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use super::commands::{cmd_analyze, cmd_closure, cmd_gen_corpus, cmd_similarize};
use super::document::{to_json, write_atomic, ToleranceOverrides};
use super::{CliError, ExitCode};
use crate::corpus::{CorpusKind, CorpusRequest};

#[derive(Debug, Parser)]
#[command(name = "semigroup-isoform", version, about = "Closures, structure and partial-isometry similarity of matrix semigroups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiplicative closure of the input matrices.
    Closure(InputArgs),
    /// Irreducibility and conditions (ii) and (iii) on the closure.
    Analyze(InputArgs),
    /// Analysis plus the similarity to partial isometries.
    Similarize(InputArgs),
    /// Write a corpus instance.
    GenCorpus(CorpusArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Output path; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub eq_tol: Option<f64>,
    #[arg(long)]
    pub spec_tol: Option<f64>,
    #[arg(long)]
    pub rank_tol: Option<f64>,
    /// Maximum number of closure elements.
    #[arg(long)]
    pub cap: Option<usize>,
}

impl InputArgs {
    fn overrides(&self) -> ToleranceOverrides {
        ToleranceOverrides {
            eq_tol: self.eq_tol,
            spec_tol: self.spec_tol,
            rank_tol: self.rank_tol,
            cap: self.cap,
        }
    }
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// s0, s1, example26 or conjugated-s1.
    #[arg(long)]
    pub kind: String,
    /// Number of blocks.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Block group: trivial, c2, c3, c4, c6, c8, dihedral8, quaternion8.
    #[arg(long, default_value = "trivial")]
    pub group: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rotation angle for example26.
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Generator depth for example26.
    #[arg(long, default_value_t = 0)]
    pub depth: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn emit<T: Serialize>(doc: &T, output: Option<&PathBuf>) -> Result<(), CliError> {
    let text = to_json(doc)?;
    match output {
        Some(p) => write_atomic(p, &text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::new(ExitCode::Parse, format!("cannot write output: {e}"))),
    }
}

fn dispatch(cli: &Cli) -> Result<ExitCode, CliError> {
    match &cli.command {
        Command::Closure(a) => {
            emit(&cmd_closure(&a.input, a.overrides())?, a.output.as_ref())?;
            Ok(ExitCode::Success)
        }
        Command::Analyze(a) => {
            emit(&cmd_analyze(&a.input, a.overrides())?, a.output.as_ref())?;
            Ok(ExitCode::Success)
        }
        Command::Similarize(a) => {
            let doc = cmd_similarize(&a.input, a.overrides())?;
            emit(&doc, a.output.as_ref())?;
            if let Some(f) = &doc.failure {
                eprintln!("similarize failed: {}", f.message);
            }
            Ok(doc.exit_code())
        }
        Command::GenCorpus(a) => {
            let kind: CorpusKind = a
                .kind
                .parse()
                .map_err(|e: crate::Error| CliError::new(ExitCode::Parse, e.to_string()))?;
            let req = CorpusRequest {
                kind,
                m: a.m,
                group: a.group.clone(),
                t: a.t,
                depth: a.depth,
                seed: a.seed,
            };
            emit(&cmd_gen_corpus(&req)?, a.output.as_ref())?;
            Ok(ExitCode::Success)
        }
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code.code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.code.code()
        }
    }
}
