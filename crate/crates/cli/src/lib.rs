//! Command-line front end: argument model, dispatch and output rendering.
//!
//! [`execute`] runs one invocation in-process and returns the exit code
//! with both output streams, so tests need not spawn the binary.

pub mod commands;
pub mod error;
pub mod fixtures;
pub mod input;
pub mod render;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ql_bridge_core::contextuality::Mode;
use ql_bridge_core::language::Fragment;
use serde_json::Value;

pub use error::{CliError, Kind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(
    name = "ql-bridge",
    version,
    about = "Quantum logic, classical semantics and contextuality toolkit"
)]
pub struct Cli {
    /// Output format; tables are a flattened view of the JSON.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Numerical tolerance override for Hilbert-space and probability checks.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Search or enumeration budget override.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Progress notes on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FragmentArg {
    Auto,
    Basic,
    Contextual,
}

impl FragmentArg {
    pub fn fragment(self) -> Option<Fragment> {
        match self {
            FragmentArg::Auto => None,
            FragmentArg::Basic => Some(Fragment::Basic),
            FragmentArg::Contextual => Some(Fragment::Contextual),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a formula against a signature and report its fragment.
    Parse {
        formula: String,
        /// Model or signature document supplying the identifiers.
        source: String,
        #[arg(long, value_enum, default_value_t = FragmentArg::Auto)]
        fragment: FragmentArg,
    },
    /// Extension, measure and certain truth of a formula in a model.
    Eval {
        formula: String,
        model: String,
        #[arg(long, value_enum, default_value_t = FragmentArg::Auto)]
        fragment: FragmentArg,
    },
    /// Logical and physical preorders between two formulas.
    Preorder { a: String, b: String, model: String },
    /// Concrete logic of verifiable formulas, from a model or a Hilbert export.
    ConcreteLogic(ConcreteLogicArgs),
    /// Orthomodularity and distributivity diagnostics of a finite lattice.
    LatticeCheck {
        file: String,
        /// Second lattice to test for order isomorphism.
        #[arg(long)]
        compare: Option<String>,
    },
    /// Born probabilities of named states on named projections.
    Born {
        file: String,
        #[arg(long = "state")]
        states: Vec<String>,
        #[arg(long = "projection")]
        projections: Vec<String>,
    },
    /// Justification of an assertive formula over a Hilbert document.
    PragmaticEval {
        file: String,
        formula: String,
        /// Second formula for the pragmatic preorder.
        #[arg(long)]
        compare: Option<String>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Ortho structure of the pragmatic fragment generated by bound atoms.
    PragmaticStructure {
        file: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Projection names to bind (default: all declared).
        #[arg(long, value_delimiter = ',')]
        atoms: Vec<String>,
    },
    /// Probability computations on mu-contextual models.
    #[command(subcommand)]
    Prob(ProbCommand),
    /// Observable constraint systems.
    #[command(subcommand)]
    Ks(KsCommand),
}

#[derive(Debug, Args)]
pub struct ConcreteLogicArgs {
    /// Classical model document.
    #[arg(required_unless_present = "hilbert", conflicts_with = "hilbert")]
    pub model: Option<String>,
    /// Export this Hilbert document and compare with its lattice.
    #[arg(long)]
    pub hilbert: Option<String>,
    /// Candidate formulas (default: every property and its negation).
    #[arg(long = "formula")]
    pub formulas: Vec<String>,
    /// Formulas declared verifiable regardless of the elementary test.
    #[arg(long = "verifiable")]
    pub verifiable: Vec<String>,
}

/// A model argument, with the grid used when it must be synthesized.
#[derive(Debug, Args)]
pub struct ModelArg {
    /// Mu-context model or Hilbert document.
    pub model: String,
    #[arg(long, default_value_t = 1000)]
    pub resolution: usize,
}

#[derive(Debug, Subcommand)]
pub enum ProbCommand {
    /// Classical conditional probability of A given B.
    Cond {
        a: String,
        b: String,
        #[command(flatten)]
        model: ModelArg,
    },
    /// Mean conditional probability over procedures, with testability.
    Mean {
        a: String,
        b: String,
        #[command(flatten)]
        model: ModelArg,
    },
    /// Q-probabilities, or a generalized-measure check with --lattice.
    Q {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long = "state")]
        states: Vec<String>,
        #[arg(long = "property")]
        properties: Vec<String>,
        /// Measure lattice specification to check.
        #[arg(long)]
        lattice: Option<String>,
    },
    /// Conditional Q-probability of E after a successful F measurement.
    CondQ {
        #[arg(long)]
        e: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        state: String,
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, value_enum, default_value_t = DrawArg::Independent)]
        draw: DrawArg,
        /// Collapse all contexts into one before computing.
        #[arg(long)]
        collapse: bool,
    },
    /// Synthesize a mu-context model from a Hilbert document.
    Synthesize {
        file: String,
        #[arg(long, default_value_t = 1000)]
        resolution: usize,
        /// Skip post-measurement states.
        #[arg(long)]
        no_closure: bool,
        #[arg(long)]
        max_states: Option<usize>,
        /// Write the full model document here; stdout carries a summary.
        #[arg(long)]
        model_out: Option<std::path::PathBuf>,
    },
    /// Monte Carlo estimate of the mean conditional probability.
    Sample {
        a: String,
        b: String,
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DrawArg {
    Independent,
    Shared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Mcp,
    Mgp,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Mcp => Mode::Mcp,
            ModeArg::Mgp => Mode::Mgp,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum KsCommand {
    /// Solve a system under the chosen assumption.
    Solve {
        instance: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Mcp)]
        mode: ModeArg,
        /// Brute-force audit even when a solution is found.
        #[arg(long)]
        audit: bool,
    },
    /// Both modes and a classification.
    Report { instance: String },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// What a handler produced: a document and a possibly nonzero status.
pub struct Outcome {
    pub value: Value,
    pub status: Option<Kind>,
}

impl Outcome {
    pub fn ok(value: Value) -> Self {
        Outcome {
            value,
            status: None,
        }
    }
}

pub fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Table => render::table(value),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn execute<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                Kind::Input.code()
            } else {
                0
            };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), text)
            } else {
                (text, String::new())
            };
            return Execution {
                code,
                stdout,
                stderr,
            };
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> Execution {
    let mut stderr = String::new();
    if cli.verbose > 0 {
        stderr.push_str(&format!("ql-bridge: {:?}\n", cli.command));
    }
    match commands::dispatch(cli) {
        Ok(out) => {
            let code = out.status.map_or(0, Kind::code);
            if let Some(kind) = out.status {
                stderr.push_str(&format!("ql-bridge: {}\n", kind.name()));
            }
            Execution {
                code,
                stdout: render(&out.value, cli.format),
                stderr,
            }
        }
        Err(e) => {
            stderr.push_str(&format!("ql-bridge: {e}\n"));
            let stdout = e
                .report
                .as_ref()
                .map(|r| render(r, cli.format))
                .unwrap_or_default();
            Execution {
                code: e.kind.code(),
                stdout,
                stderr,
            }
        }
    }
}
