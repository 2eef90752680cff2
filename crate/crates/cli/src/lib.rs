//! `ibx`: a workbench for iterated bijections.
//!
//! [`run`] parses an argument vector, dispatches to a subcommand and returns
//! a [`RunReport`]; the binary prints it and exits with its code.

use std::fmt::Display;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

mod automata;
mod circuits;
mod graphs;
mod intervals;
mod verify;

#[derive(Debug, Parser)]
#[command(name = "ibx", version, about = "Iterated bijections: circuits, reductions, automata and interval exchanges")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for block-parallel automaton steps.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print the full run report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reversible circuits (.rc).
    #[command(subcommand)]
    Circuit(CircuitCmd),
    /// Reversible lifts of classical circuits (.cc).
    #[command(subcommand)]
    Lift(LiftCmd),
    /// Reductions compiled to a single iterated bijection.
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Connected-leaf walks on max-degree-2 graphs.
    #[command(subcommand)]
    Leaf(LeafCmd),
    /// Second Hamiltonian cycles in cubic graphs.
    #[command(subcommand)]
    Lollipop(LollipopCmd),
    /// Block cellular automata.
    #[command(subcommand)]
    Ca(CaCmd),
    /// Piecewise linear bijections (.plb).
    #[command(subcommand)]
    Plb(PlbCmd),
    /// Integer interval exchanges (.iet).
    #[command(subcommand)]
    Iet(IetCmd),
    /// Cross-module oracle suites.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Debug, Subcommand)]
enum CircuitCmd {
    Eval {
        #[arg(long)]
        file: String,
        /// Input assignment, most significant wire first.
        #[arg(long)]
        input: String,
    },
    /// Prints the inverse circuit, or applies it to `--input`.
    Invert {
        #[arg(long)]
        file: String,
        #[arg(long)]
        input: Option<String>,
    },
    Iterate {
        #[arg(long)]
        file: String,
        #[arg(long)]
        n: BigUint,
        #[arg(long)]
        input: String,
    },
    /// Parity, cycle type and order of the circuit's permutation.
    Parity {
        #[arg(long)]
        file: String,
    },
}

#[derive(Debug, Subcommand)]
enum LiftCmd {
    Bennett {
        #[arg(long)]
        file: String,
        #[arg(long)]
        input: Option<String>,
    },
    Jms {
        #[arg(long)]
        forward: String,
        #[arg(long)]
        inverse: String,
        #[arg(long)]
        input: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum ReduceCmd {
    /// Computes f(x) by iterating the summation map.
    Summation {
        #[arg(long)]
        file: String,
        #[arg(long)]
        input: String,
        #[command(flatten)]
        check: CheckFlag,
    },
    /// Computes f^(n)(x) with the two-hand clock.
    Clock {
        #[arg(long)]
        file: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        input: String,
        #[command(flatten)]
        check: CheckFlag,
    },
    /// Evaluates an oracle circuit through one iterated bijection.
    Oracle {
        #[arg(long)]
        file: String,
        /// The oracle bijection as a reversible circuit.
        #[arg(long)]
        oracle: String,
        #[arg(long)]
        input: String,
        #[command(flatten)]
        check: CheckFlag,
    },
}

#[derive(Debug, Args)]
struct CheckFlag {
    /// Also check the compiled map exhaustively (at most 24 bits).
    #[arg(long)]
    check: bool,
}

#[derive(Debug, Subcommand)]
enum LeafCmd {
    /// Walks from leaf `v` to the other end of its path.
    Walk {
        #[arg(long)]
        file: String,
        #[arg(long)]
        v: u64,
    },
    /// Finds the far leaf by iterating the compiled bijection 2^k times.
    Compile {
        #[arg(long)]
        file: String,
        #[arg(long)]
        v: u64,
        #[command(flatten)]
        check: CheckFlag,
    },
}

#[derive(Debug, Subcommand)]
enum LollipopCmd {
    /// A second Hamiltonian cycle through `--edge`.
    SecondCycle {
        #[arg(long)]
        file: String,
        #[arg(long, value_parser = parse_edge)]
        edge: (usize, usize),
        /// Starting cycle as comma-separated vertices; found by search if absent.
        #[arg(long, value_delimiter = ',')]
        cycle: Option<Vec<usize>>,
        /// Start the walk from the other end of the edge.
        #[arg(long)]
        reverse: bool,
    },
    /// Hamiltonian cycles through each edge, or through `--edge`.
    Count {
        #[arg(long)]
        file: String,
        #[arg(long, value_parser = parse_edge)]
        edge: Option<(usize, usize)>,
    },
}

#[derive(Debug, Subcommand)]
enum CaCmd {
    BbmRun {
        #[arg(long)]
        file: String,
        #[arg(long)]
        steps: u64,
        /// Print every intermediate grid.
        #[arg(long)]
        trace: bool,
    },
    BbmReverse {
        #[arg(long)]
        file: String,
        #[arg(long)]
        steps: u64,
    },
    /// Runs a helical grid through the one-dimensional automaton.
    DimreduxRun {
        #[arg(long)]
        file: String,
        #[arg(long)]
        steps: u64,
        /// Use a seeded random Margolus rule instead of the billiard-ball rule.
        #[arg(long)]
        random_rule: bool,
    },
    /// Compares the ring with direct simulation on random grids.
    DimreduxVerify {
        #[arg(long, default_value_t = 4)]
        c: usize,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, default_value_t = 50)]
        steps: u64,
        /// Random rules tried besides the billiard-ball rule.
        #[arg(long, default_value_t = 5)]
        rules: usize,
    },
    StrobeDemo {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long, default_value_t = 8)]
        len: usize,
    },
}

#[derive(Debug, Subcommand)]
enum PlbCmd {
    Validate {
        #[arg(long)]
        file: String,
    },
    Apply {
        #[arg(long)]
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        x: BigInt,
        #[arg(long)]
        inverse: bool,
    },
    Iterate {
        #[arg(long)]
        file: String,
        #[arg(long)]
        n: BigUint,
        #[arg(long, allow_hyphen_values = true)]
        x: BigInt,
    },
    /// Lifts a sequence of maps on one domain into a single map.
    Compose {
        #[arg(long = "file", required = true)]
        files: Vec<String>,
        #[arg(long)]
        x: Option<BigInt>,
    },
    Riffle {
        #[arg(long)]
        n: BigInt,
        /// Also print the order of the shuffle.
        #[arg(long)]
        order: bool,
    },
    /// Rotates the low `m` bits of each `k`-bit value.
    Rotate {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
    },
    FromCircuit {
        #[arg(long)]
        file: String,
    },
}

#[derive(Debug, Subcommand)]
enum IetCmd {
    Build {
        #[arg(long)]
        file: String,
        /// List triangles, gluings and coordinates.
        #[arg(long)]
        dump: bool,
    },
    Solve {
        #[arg(long)]
        file: String,
        #[arg(long)]
        i: u64,
        #[arg(long)]
        n: BigUint,
    },
    /// Distinct gaps of the rotation x -> x + c mod N.
    ThreeGap {
        #[arg(long = "big-n")]
        big_n: u64,
        #[arg(long)]
        c: u64,
        /// Prefix length; the worst prefix is reported if absent.
        #[arg(long)]
        n: Option<u64>,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyCmd {
    All {
        /// Run only the named suites.
        #[arg(long)]
        only: Vec<String>,
    },
}

fn parse_edge(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected `u,v`")?;
    let p = |t: &str| t.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((p(a)?, p(b)?))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Invalid(_) => 1,
        }
    }
}

pub(crate) type CliResult<T> = Result<T, CliError>;

pub(crate) trait OrInvalid<T> {
    fn or_invalid(self) -> CliResult<T>;
    fn or_usage(self) -> CliResult<T>;
}

impl<T, E: Display> OrInvalid<T> for Result<T, E> {
    fn or_invalid(self) -> CliResult<T> {
        self.map_err(|e| CliError::Invalid(e.to_string()))
    }

    fn or_usage(self) -> CliResult<T> {
        self.map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// What a subcommand produced.
#[derive(Debug, Default)]
pub(crate) struct Output {
    pub text: String,
    pub data: Value,
    pub steps: Option<String>,
}

impl Output {
    pub fn new(text: impl Into<String>, data: Value) -> Self {
        Output {
            text: text.into(),
            data,
            steps: None,
        }
    }

    pub fn steps(mut self, n: impl ToString) -> Self {
        self.steps = Some(n.to_string());
        self
    }
}

/// Per-run state: the seed and every file read so far.
pub(crate) struct Ctx {
    pub seed: u64,
    inputs: Vec<InputDigest>,
}

impl Ctx {
    pub fn read(&mut self, path: &str) -> CliResult<String> {
        let bytes = std::fs::read(path).map_err(|e| CliError::Invalid(format!("{path}: {e}")))?;
        self.inputs.push(InputDigest {
            path: path.to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).map_err(|_| CliError::Invalid(format!("{path}: not UTF-8")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub output: Value,
    pub text: String,
    pub steps: Option<String>,
    pub wall_time_ms: f64,
    pub exit_code: i32,
    pub error: Option<String>,
    #[serde(skip)]
    pub json: bool,
}

impl RunReport {
    /// What the binary writes to standard output.
    pub fn stdout(&self) -> String {
        if self.json {
            serde_json::to_string_pretty(self).expect("report serializes") + "\n"
        } else {
            self.text.clone()
        }
    }
}

pub fn run<I, T>(argv: I) -> RunReport
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let start = Instant::now();
    let mut report = RunReport {
        command: argv.clone(),
        inputs: Vec::new(),
        output: Value::Null,
        text: String::new(),
        steps: None,
        wall_time_ms: 0.0,
        exit_code: 0,
        error: None,
        json: false,
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                report.exit_code = 2;
                report.error = Some(e.render().to_string());
            } else {
                report.text = e.render().to_string();
            }
            return report;
        }
    };
    report.json = cli.json;
    let mut ctx = Ctx {
        seed: cli.seed,
        inputs: Vec::new(),
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command, &mut ctx)),
            Err(e) => Err(CliError::Usage(e.to_string())),
        },
        None => dispatch(cli.command, &mut ctx),
    };
    report.inputs = ctx.inputs;
    match result {
        Ok(out) => {
            report.text = out.text;
            report.output = out.data;
            report.steps = out.steps;
        }
        Err(e) => {
            report.exit_code = e.exit_code();
            report.error = Some(e.to_string());
        }
    }
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    report
}

fn dispatch(cmd: Command, ctx: &mut Ctx) -> CliResult<Output> {
    match cmd {
        Command::Circuit(c) => circuits::circuit(c, ctx),
        Command::Lift(c) => circuits::lift(c, ctx),
        Command::Reduce(c) => circuits::reduce(c, ctx),
        Command::Leaf(c) => graphs::leaf(c, ctx),
        Command::Lollipop(c) => graphs::lollipop(c, ctx),
        Command::Ca(c) => automata::ca(c, ctx),
        Command::Plb(c) => intervals::plb(c, ctx),
        Command::Iet(c) => intervals::iet(c, ctx),
        Command::Verify(VerifyCmd::All { only }) => verify::all(ctx.seed, &only),
    }
}
