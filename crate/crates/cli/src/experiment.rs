//! Batch execution of GA runs and the result CSV format.
//!
//! Every run gets a pre-assigned seed derived from the master seed and its
//! (operator, run) indices, so the output is byte-identical regardless of
//! how the runs are scheduled over the worker pool.

use std::io::Write;

use balanced_ga::engine::{derive_seed, run_ga, GaConfig, RunResult};
use rayon::prelude::*;

use crate::config::ExperimentSpec;
use crate::CliError;

/// Header of the result CSV.
pub const CSV_HEADER: &str =
    "problem,operator,run,seed,best_fitness,evals_to_best,success,best_genotype";

/// One data row of the result CSV.
#[derive(Debug, Clone)]
pub struct ExperimentRow {
    pub problem: String,
    pub operator: String,
    pub run: usize,
    pub result: RunResult,
}

impl ExperimentRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.problem,
            self.operator,
            self.run,
            self.result.run_seed,
            self.result.best_fitness,
            self.result.evaluations_to_best,
            self.result.success,
            self.result.genotype_hex()
        )
    }
}

/// Executes all runs of the experiment on a worker pool of `spec.threads`
/// threads and returns the rows in deterministic (operator, run) order.
pub fn execute(spec: &ExperimentSpec) -> Result<Vec<ExperimentRow>, CliError> {
    let jobs: Vec<(usize, usize)> = (0..spec.crossovers.len())
        .flat_map(|kind_idx| (0..spec.runs).map(move |run_idx| (kind_idx, run_idx)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.threads)
        .build()
        .map_err(|e| CliError::usage(format!("worker pool: {e}")))?;
    let problem_name = spec.problem.to_string();
    let rows = pool.install(|| {
        jobs.par_iter()
            .map(|&(kind_idx, run_idx)| {
                let crossover = spec.crossovers[kind_idx];
                let config = GaConfig {
                    problem: spec.problem,
                    crossover,
                    population_size: spec.population_size,
                    tournament_size: spec.tournament_size,
                    mutation_prob: spec.mutation_prob,
                    max_evaluations: spec.max_evaluations,
                    seed: derive_seed(spec.master_seed, kind_idx as u64, run_idx as u64),
                };
                let result = run_ga(&config).map_err(|e| CliError::usage(e.to_string()))?;
                Ok(ExperimentRow {
                    problem: problem_name.clone(),
                    operator: crossover.code().to_string(),
                    run: run_idx,
                    result,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()
    })?;
    Ok(rows)
}

pub fn write_csv(mut writer: impl Write, rows: &[ExperimentRow]) -> std::io::Result<()> {
    writeln!(writer, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(writer, "{}", row.to_csv_line())?;
    }
    Ok(())
}

/// Runs the experiment and writes the result CSV to the spec's output path.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<(), CliError> {
    let rows = execute(spec)?;
    let io_err = |e| CliError::io(&spec.output, e);
    let file = std::fs::File::create(&spec.output).map_err(io_err)?;
    let mut writer = std::io::BufWriter::new(file);
    write_csv(&mut writer, &rows).map_err(io_err)?;
    writer
        .into_inner()
        .map_err(|e| CliError::io(&spec.output, e.into_error()))?;
    eprintln!(
        "wrote {} rows ({} operators x {} runs) to {}",
        rows.len(),
        spec.crossovers.len(),
        spec.runs,
        spec.output.display()
    );
    Ok(())
}
