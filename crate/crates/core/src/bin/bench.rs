//! Benchmark command line.
//!
//! ```text
//! bench run --workload set-union --backend array-linear --size1 100000 \
//!     --size2 1000 [--density D] [--reps R] [--seed S] --out results.csv
//! bench sweep --grid default --out dir/ [--max-size N] [--reps R] [--seed S]
//! bench verify [--seed S]
//! ```
//!
//! Exit codes: 0 success, 1 usage error, 2 tripwire failure, 3 I/O failure.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use hinted_dict::bench::{
    default_grid, emit_csv, run_benchmark, verify_tripwire, BackendChoice, BenchConfig, Workload,
};

#[derive(Parser)]
#[command(name = "bench", about = "Hinted-dictionary benchmark harness", disable_version_flag = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Measure a single workload/backend configuration and append it to a CSV file.
    Run(RunArgs),
    /// Measure the whole default grid, one CSV per workload.
    Sweep(SweepArgs),
    /// Run the cross-backend agreement tripwire.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// set-union | set-intersect | vec-add | vec-mul | vec-inner
    #[arg(long)]
    workload: String,
    /// array-linear | array-binary | wbb | avl | unbalanced | baseline-stdmap
    /// | baseline-merge | array-persistent
    #[arg(long)]
    backend: String,
    #[arg(long)]
    size1: usize,
    #[arg(long)]
    size2: usize,
    /// Non-zero fraction for vector workloads (index range = size/density).
    #[arg(long, default_value_t = 1.0)]
    density: f64,
    #[arg(long, default_value_t = 10)]
    reps: u32,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Grid name; only "default" is defined.
    #[arg(long, default_value = "default")]
    grid: String,
    /// Directory receiving one CSV per workload.
    #[arg(long)]
    out: PathBuf,
    /// Skip grid points whose first operand exceeds this size.
    #[arg(long, default_value_t = 1_000_000)]
    max_size: usize,
    #[arg(long, default_value_t = 10)]
    reps: u32,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

const EXIT_USAGE: u8 = 1;
const EXIT_TRIPWIRE: u8 = 2;
const EXIT_IO: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            eprint!("{err}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match cli.command {
        Command::Run(args) => run(args),
        Command::Sweep(args) => sweep(args),
        Command::Verify(args) => verify(args),
    }
}

fn run(args: RunArgs) -> ExitCode {
    let workload: Workload = match args.workload.parse() {
        Ok(w) => w,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let backend: BackendChoice = match args.backend.parse() {
        Ok(b) => b,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let config = BenchConfig {
        workload,
        backend,
        size1: args.size1,
        size2: args.size2,
        density: args.density,
        repetitions: args.reps,
        seed: args.seed,
    };
    let record = match run_benchmark(&config) {
        Ok(record) => record,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    println!("{record}");
    if let Err(err) = emit_csv(std::slice::from_ref(&record), &args.out) {
        eprintln!("error: cannot write {}: {err}", args.out.display());
        return ExitCode::from(EXIT_IO);
    }
    ExitCode::SUCCESS
}

fn sweep(args: SweepArgs) -> ExitCode {
    if args.grid != "default" {
        eprintln!("error: unknown grid {:?} (only \"default\" is defined)", args.grid);
        return ExitCode::from(EXIT_USAGE);
    }
    let configs = default_grid(args.seed, args.reps, args.max_size);
    if configs.is_empty() {
        eprintln!("error: --max-size {} leaves the grid empty", args.max_size);
        return ExitCode::from(EXIT_USAGE);
    }
    if let Err(err) = std::fs::create_dir_all(&args.out) {
        eprintln!("error: cannot create {}: {err}", args.out.display());
        return ExitCode::from(EXIT_IO);
    }
    let total = configs.len();
    let mut by_workload: BTreeMap<String, Vec<hinted_dict::bench::BenchRecord>> = BTreeMap::new();
    for (i, config) in configs.iter().enumerate() {
        let record = match run_benchmark(config) {
            Ok(record) => record,
            Err(msg) => {
                eprintln!("error: {msg}");
                return ExitCode::from(EXIT_USAGE);
            }
        };
        by_workload.entry(config.workload.to_string()).or_default().push(record);
        if (i + 1) % 50 == 0 || i + 1 == total {
            eprintln!("sweep: {}/{} configurations", i + 1, total);
        }
    }
    for (workload, records) in &by_workload {
        let path = args.out.join(format!("{workload}.csv"));
        if let Err(err) = emit_csv(records, &path) {
            eprintln!("error: cannot write {}: {err}", path.display());
            return ExitCode::from(EXIT_IO);
        }
    }
    println!("wrote {} CSV files to {}", by_workload.len(), args.out.display());
    ExitCode::SUCCESS
}

fn verify(args: VerifyArgs) -> ExitCode {
    match verify_tripwire(args.seed) {
        Ok(summary) => {
            print!("{summary}");
            println!("verify: all backends agree");
            ExitCode::SUCCESS
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_TRIPWIRE)
        }
    }
}
