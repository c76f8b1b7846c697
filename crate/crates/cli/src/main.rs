use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use balanced_ga_cli::config::{self, RawOptions};
use balanced_ga_cli::{experiment, report, CliError};

/// Batch experiment runner for balanced crossover operators: steady-state
/// GA benchmarks on balanced Boolean functions, bent functions and binary
/// orthogonal arrays, with non-parametric operator comparison.
#[derive(Parser)]
#[command(name = "balanced-ga", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run R seeded GA runs per crossover operator and write a result CSV
    Run(RunArgs),
    /// Compare the best-fitness samples of two result CSVs
    Compare { file_a: PathBuf, file_b: PathBuf },
    /// Print per-operator five-number summaries of result CSVs
    Summary {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Problem family: bal-nl, bent or bin-oa
    #[arg(long)]
    problem: Option<String>,
    /// Problem size exponent: truth tables get 2^n entries, arrays 2^n rows
    #[arg(long)]
    n: Option<u32>,
    /// Number of array columns (bin-oa only)
    #[arg(long = "oa-cols")]
    oa_cols: Option<usize>,
    /// Array strength t (bin-oa only); the index is 2^n / 2^t
    #[arg(long = "oa-strength")]
    oa_strength: Option<usize>,
    /// Comma-separated operator codes among op,cb,cb-s,zl,zl-s,moo,moo-s
    /// (default: all seven)
    #[arg(long)]
    crossover: Option<String>,
    /// Population size (default 50)
    #[arg(long = "pop-size")]
    pop_size: Option<usize>,
    /// Tournament size (default 3)
    #[arg(long)]
    tournament: Option<usize>,
    /// Fitness-evaluation budget per run (default 500000)
    #[arg(long)]
    evals: Option<u64>,
    /// Mutation probability (default 0.7; 0.2 for bin-oa)
    #[arg(long = "mutation-prob")]
    mutation_prob: Option<f64>,
    /// Independent runs per operator (default 50)
    #[arg(long)]
    runs: Option<usize>,
    /// Master seed; per-run seeds are derived deterministically (default 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: BALANCED_GA_THREADS or the hardware count)
    #[arg(long)]
    threads: Option<usize>,
    /// Optional key=value configuration file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
}

impl RunArgs {
    fn into_options(self) -> Result<RawOptions, CliError> {
        let from_flags = RawOptions {
            problem: self.problem,
            n: self.n,
            oa_cols: self.oa_cols,
            oa_strength: self.oa_strength,
            crossover: self.crossover,
            pop_size: self.pop_size,
            tournament: self.tournament,
            evals: self.evals,
            mutation_prob: self.mutation_prob,
            runs: self.runs,
            seed: self.seed,
            out: self.out,
            threads: self.threads,
        };
        Ok(match self.config {
            Some(path) => from_flags.overlay(RawOptions::from_config_file(&path)?),
            None => from_flags,
        })
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => {
            let spec = config::resolve(args.into_options()?)?;
            experiment::run_experiment(&spec)
        }
        Command::Compare { file_a, file_b } => {
            let mut stdout = std::io::stdout().lock();
            report::compare(&file_a, &file_b, &mut stdout).map(|_| ())
        }
        Command::Summary { files } => {
            let mut stdout = std::io::stdout().lock();
            report::summary(&files, &mut stdout)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help/--version arrive as "errors" with successful exit.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
