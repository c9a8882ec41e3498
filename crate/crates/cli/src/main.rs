//! `lambdac`: check, normalize, compare and interpret terms of the
//! computational lambda calculus, run law suites and rewrite substitution
//! words.
//!
//! Exit codes: 0 success (proved, passed), 1 refuted or failed,
//! 2 unknown, 3 usage, input or parse error.

mod commands;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lambdac::theory::DEFAULT_FUEL;

use crate::output::{Output, Status};

#[derive(Parser, Debug)]
#[command(name = "lambdac", version, about = "Tools for the untyped computational lambda calculus")]
struct Cli {
    /// `text` for people, `json` for one JSON record per line.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Args, Debug)]
pub struct TermInput {
    /// Term file with `func f/2`, `proc p/1` and `def name ctx(x y) = term` items (`-` for stdin).
    pub file: PathBuf,
    /// Extra signature file of `func`/`proc` declarations.
    #[arg(long)]
    pub sig: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that every definition in a term file is well formed.
    Check {
        #[command(flatten)]
        input: TermInput,
    },
    /// Normalize definitions with the let rules, and beta when enabled.
    Norm {
        #[command(flatten)]
        input: TermInput,
        /// Only these definitions (repeatable); all by default.
        #[arg(long = "def")]
        defs: Vec<String>,
        #[arg(long, env = "LAMBDAC_FUEL", default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        #[arg(long, value_enum, default_value_t = Switch::On)]
        beta: Switch,
    },
    /// Decide equality of two definitions: proved, refuted by a model, or unknown.
    Eq {
        #[command(flatten)]
        input: TermInput,
        left: String,
        right: String,
        #[arg(long, env = "LAMBDAC_FUEL", default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        /// Models searched for a separating assignment: built-in ids or JSON files.
        #[arg(long, value_delimiter = ',', default_value = "maybe2,writer2,powerset2")]
        models: Vec<String>,
        /// Random symbol assignments tried per model.
        #[arg(long, default_value_t = 200)]
        tries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Interpret a definition in a finite model or in the term model.
    Interp {
        #[command(flatten)]
        input: TermInput,
        def: String,
        /// Built-in id such as `maybe2`, a JSON model file, or `term`.
        #[arg(long, default_value = "maybe2")]
        model: String,
        /// Evaluate at these atoms only (comma separated).
        #[arg(long, value_delimiter = ',')]
        args: Vec<String>,
    },
    /// Run law suites against a model, the term model, or the adjunction.
    Laws {
        #[arg(value_enum)]
        target: LawTarget,
        /// Built-in id or JSON model file (`term` selects the term model for `adjunction`).
        #[arg(long, default_value = "maybe2")]
        model: String,
        /// Signature file for the term model.
        #[arg(long)]
        sig: Option<PathBuf>,
        /// Largest arity quantified over.
        #[arg(long, default_value_t = 2)]
        cap: usize,
        /// Sample this many instances per law instead of enumerating.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "LAMBDAC_FUEL", default_value_t = DEFAULT_FUEL)]
        fuel: usize,
    },
    /// Normalize or compare substitution words.
    Word {
        #[command(subcommand)]
        action: WordCommand,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LawTarget {
    Model,
    TermModel,
    Adjunction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Symmetric,
    Cartesian,
}

#[derive(Subcommand, Debug)]
pub enum WordCommand {
    /// Rewrite a word file to normal form.
    Norm {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Compare two word files over the same operad.
    Eq {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Collapse a word into 1 to an element and expand it again.
    Roundtrip {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    let out = Output::new(cli.format == Format::Json);
    let result = match cli.command {
        Command::Check { input } => commands::check(&out, &input),
        Command::Norm { input, defs, fuel, beta } => commands::norm(&out, &input, &defs, fuel, beta == Switch::On),
        Command::Eq {
            input,
            left,
            right,
            fuel,
            models,
            tries,
            seed,
        } => commands::eq(&out, &input, &left, &right, fuel, &models, tries, seed),
        Command::Interp { input, def, model, args } => commands::interp(&out, &input, &def, &model, &args),
        Command::Laws {
            target,
            model,
            sig,
            cap,
            samples,
            seed,
            fuel,
        } => commands::laws(&out, target, &model, sig.as_deref(), cap, samples, seed, fuel),
        Command::Word { action } => commands::word(&out, action),
    };
    match result {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            out.error(&e);
            ExitCode::from(Status::Usage.code())
        }
    }
}
