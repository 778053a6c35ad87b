//! Command-line front end: argument parsing, dispatch, and exit codes.
//!
//! Exit codes: 0 for success or a positive answer, 1 for a negative answer
//! (`no`, a failed check, an oracle mismatch), 2 for usage and parse errors,
//! 3 when a resource budget is exhausted, 4 for structural errors.

mod commands;
mod input;

pub use input::FormulaFile;

use clap::{Args, Parser, Subcommand};
use mwmso::structures::StructureSpec;
use mwmso::{Budget, Error};
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "mwmso", version, about = "Multi-weighted automata and multi-weighted MSO logic")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Valuation structure: ratio, twocost(p), disp(n), omega-ratio, energy(e1,...)
    #[arg(long, global = true, value_parser = parse_structure)]
    pub structure: Option<StructureSpec>,
    /// Longest word considered by enumerating commands
    #[arg(long, global = true)]
    pub max_len: Option<usize>,
    /// Largest automaton any construction may build [default: 65536]
    #[arg(long, global = true)]
    pub budget_states: Option<usize>,
    /// Largest total count of a multiset coefficient [default: 16777216]
    #[arg(long, global = true)]
    pub budget_count: Option<u64>,
    /// Machine-readable output
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized commands
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Alphabet letters separated by commas or spaces
    #[arg(long, global = true)]
    pub alphabet: Option<String>,
}

impl Global {
    pub fn budget(&self) -> Budget {
        let d = Budget::default();
        Budget {
            max_states: self.budget_states.unwrap_or(d.max_states),
            max_count: self.budget_count.unwrap_or(d.max_count),
        }
    }
}

fn parse_structure(text: &str) -> Result<StructureSpec, String> {
    text.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a formula on a word
    Eval {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        word: String,
        /// Free-variable assignment, e.g. `x=0, X={1,2}`
        #[arg(long)]
        assign: Option<String>,
    },
    /// Compile a restricted formula into an automaton (JSON on stdout)
    Compile {
        #[arg(long)]
        formula: PathBuf,
        /// Also write Graphviz output to this file
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Print intermediate steps on stderr
        #[arg(long)]
        trace: bool,
    },
    /// Multiset behavior and value of an automaton on a word
    Behavior {
        #[arg(long)]
        automaton: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Print a sentence equivalent to an automaton
    ToFormula {
        #[arg(long)]
        automaton: PathBuf,
    },
    /// Classify a formula and report syntactic restrictions
    Check {
        #[arg(long)]
        formula: PathBuf,
    },
    /// Is there a word with ratio value at least nu?
    EmptyGeq {
        #[arg(long)]
        automaton: PathBuf,
        #[arg(long)]
        nu: String,
    },
    /// Is there a word with two-cost value at most nu?
    EmptyLeq {
        #[arg(long)]
        automaton: PathBuf,
        #[arg(long)]
        nu: String,
    },
    /// Evaluate a Muller automaton on a lasso word `u(v)^w`
    OmegaEval {
        #[arg(long)]
        automaton: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Compare compiled automaton and formula on all words up to --max-len
    Oracle {
        #[arg(long)]
        formula: PathBuf,
    },
    /// Check the structure axioms on random samples
    ValidateStructure {
        /// Number of random samples
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
}

/// What a command produced.
pub struct Report {
    pub text: String,
    pub json: serde_json::Value,
    pub code: i32,
    pub warnings: Vec<String>,
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_input() {
        2
    } else if e.is_resource() {
        3
    } else {
        4
    }
}

/// Runs the tool on `args` (including the program name), writing results to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match commands::dispatch(&cli) {
        Ok(report) => {
            for w in &report.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            let body = if cli.global.json {
                serde_json::to_string_pretty(&report.json).expect("reports serialize")
            } else {
                report.text
            };
            let _ = writeln!(out, "{body}");
            report.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
