use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use oscent::oracle::{quadrature_entropy, QuadratureConfig};
use oscent::sweep::{sweep, Family};
use oscent::verify::verify_grid;
use oscent::{Error, Evaluator, Execution, Precision, StateSpec};

mod output;

use output::{Format, OutputRecord, Sink, SweepRecord, VerifyRecord};

/// Exact Shannon entropies of D-dimensional harmonic oscillator states.
#[derive(Parser, Debug)]
#[command(name = "oscent", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Entropies and energy of a single state.
    Compute(ComputeArgs),
    /// Position entropy against dimension for a configuration family.
    Sweep(SweepArgs),
    /// Compare the closed form against numerical quadrature.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct ComputeArgs {
    /// Occupation numbers, one per dimension.
    #[arg(
        long,
        value_delimiter = ',',
        allow_negative_numbers = true,
        conflicts_with = "dims"
    )]
    ns: Option<Vec<i64>>,
    /// Number of dimensions for a uniform state.
    #[arg(long)]
    dims: Option<usize>,
    /// Occupation of every dimension when using --dims.
    #[arg(
        long,
        default_value_t = 0,
        requires = "dims",
        allow_negative_numbers = true
    )]
    fill: i64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Show the momentum entropy column.
    #[arg(long)]
    momentum: bool,
    /// Show the position + momentum sum column.
    #[arg(long)]
    sum: bool,
    /// Cross-check the position entropy by quadrature.
    #[arg(long)]
    oracle: bool,
    /// Largest accepted oracle delta.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Ground,
    OneExcited,
    AllButOne,
    AllOnes,
    All,
}

impl FamilyArg {
    fn families(self) -> Vec<Family> {
        match self {
            FamilyArg::Ground => vec![Family::Ground],
            FamilyArg::OneExcited => vec![Family::OneExcited],
            FamilyArg::AllButOne => vec![Family::AllButOne],
            FamilyArg::AllOnes => vec![Family::AllOnes],
            FamilyArg::All => Family::ALL.to_vec(),
        }
    }
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_enum, default_value_t = FamilyArg::All)]
    family: FamilyArg,
    #[arg(long, default_value_t = 15)]
    d_max: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 10)]
    n_max: u32,
    /// Oscillator strengths to check.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "1",
        allow_negative_numbers = true
    )]
    alpha: Vec<f64>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Relative tolerance of the quadrature; the absolute tolerance is a
    /// hundredth of it.
    #[arg(long, default_value_t = 1e-10)]
    oracle_tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

enum Failure {
    Core(Error),
    Io(io::Error),
    Tolerance(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Tolerance(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 3 })
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let evaluator = Evaluator::new(Precision::from_env()?);
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Compute(args) => compute(&evaluator, args, &mut out),
        Command::Sweep(args) => run_sweep(&evaluator, args, &mut out),
        Command::Verify(args) => verify(&evaluator, args, &mut out),
    }
}

fn occupation(n: i64) -> Result<u32, Error> {
    u32::try_from(n).map_err(|_| {
        Error::InvalidArgument(format!(
            "occupation numbers must be non-negative integers, got {n}"
        ))
    })
}

fn state_from(args: &ComputeArgs) -> Result<StateSpec, Error> {
    let ns = match (&args.ns, args.dims) {
        (Some(ns), _) => ns
            .iter()
            .map(|&n| occupation(n))
            .collect::<Result<Vec<_>, _>>()?,
        (None, Some(d)) => vec![occupation(args.fill)?; d],
        (None, None) => {
            return Err(Error::InvalidArgument(
                "one of --ns or --dims is required".into(),
            ))
        }
    };
    StateSpec::new(ns, args.alpha)
}

fn compute<W: Write>(evaluator: &Evaluator, args: ComputeArgs, out: &mut W) -> Result<(), Failure> {
    let state = state_from(&args)?;
    let report = evaluator.report(&state)?;
    let oracle = if args.oracle {
        Some(quadrature_entropy(&state, &QuadratureConfig::default())?.value)
    } else {
        None
    };
    let record = OutputRecord::new(&state, report, oracle);
    let mut sink = Sink::new(args.format, out);
    sink.compute(&record, args.momentum, args.sum)?;
    sink.finish()?;
    match record.oracle_delta {
        Some(d) if d.is_nan() || d > args.tol => Err(Failure::Tolerance(format!(
            "oracle delta {d:.3e} exceeds tolerance {:.3e}",
            args.tol
        ))),
        _ => Ok(()),
    }
}

fn run_sweep<W: Write>(evaluator: &Evaluator, args: SweepArgs, out: &mut W) -> Result<(), Failure> {
    let mut records = Vec::new();
    for family in args.family.families() {
        for row in sweep(
            evaluator,
            family,
            args.d_max,
            args.alpha,
            Execution::default(),
        )? {
            records.push(SweepRecord::new(family, &row));
        }
    }
    let mut sink = Sink::new(args.format, out);
    sink.sweep(&records)?;
    sink.finish()?;
    Ok(())
}

fn verify<W: Write>(evaluator: &Evaluator, args: VerifyArgs, out: &mut W) -> Result<(), Failure> {
    let cfg = QuadratureConfig {
        rel_tol: args.oracle_tol,
        abs_tol: args.oracle_tol * 1e-2,
        ..QuadratureConfig::default()
    };
    let rows = verify_grid(
        evaluator,
        args.n_max,
        &args.alpha,
        &cfg,
        Execution::default(),
    )?;
    let records: Vec<VerifyRecord> = rows
        .iter()
        .map(|r| VerifyRecord::new(r, args.tol))
        .collect();
    let mut sink = Sink::new(args.format, out);
    sink.verify(&records)?;
    sink.finish()?;
    let failed = records.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        return Err(Failure::Tolerance(format!(
            "{failed} of {} deltas exceed {:.3e}",
            records.len(),
            args.tol
        )));
    }
    Ok(())
}
