//! Reading result CSVs and producing the comparison and summary reports.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;

use balanced_ga::encodings::Bitstring;
use balanced_ga::engine::RunResult;
use balanced_ga::stats::{mann_whitney, summarize, SampleSummary, TestReport};

use crate::experiment::{ExperimentRow, CSV_HEADER};
use crate::CliError;

/// A parsed result CSV.
#[derive(Debug)]
pub struct ResultsFile {
    pub rows: Vec<ExperimentRow>,
    /// Distinct operator codes in first-appearance order.
    pub operators: Vec<String>,
}

impl ResultsFile {
    pub fn best_fitness(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.result.best_fitness).collect()
    }

    /// Label describing the file's operators, e.g. `moo` or `moo+op`.
    pub fn label(&self) -> String {
        self.operators.join("+")
    }
}

/// Reads a result CSV, validating the schema: the header must contain every
/// column written by the runner, in any order; extra columns are rejected.
pub fn read_results(path: &Path) -> Result<ResultsFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(CliError::usage(format!("{}: empty file", path.display())));
    };
    let columns: Vec<&str> = header.split(',').collect();
    let expected: Vec<&str> = CSV_HEADER.split(',').collect();
    let index_of = |name: &str| -> Result<usize, CliError> {
        columns
            .iter()
            .position(|c| *c == name)
            .ok_or_else(|| CliError::usage(format!("{}: missing column {name:?}", path.display())))
    };
    for column in &columns {
        if !expected.contains(column) {
            return Err(CliError::usage(format!(
                "{}: unknown column {column:?}",
                path.display()
            )));
        }
    }
    let idx_problem = index_of("problem")?;
    let idx_operator = index_of("operator")?;
    let idx_run = index_of("run")?;
    let idx_seed = index_of("seed")?;
    let idx_fitness = index_of("best_fitness")?;
    let idx_evals = index_of("evals_to_best")?;
    let idx_success = index_of("success")?;
    let idx_genotype = index_of("best_genotype")?;

    let mut rows = Vec::new();
    let mut operators = Vec::new();
    let mut seen = BTreeSet::new();
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != columns.len() {
            return Err(CliError::usage(format!(
                "{}:{}: expected {} fields, got {}",
                path.display(),
                lineno + 1,
                columns.len(),
                fields.len()
            )));
        }
        let parse_err = |what: &str, e: &dyn std::fmt::Display| {
            CliError::usage(format!(
                "{}:{}: bad {what}: {e}",
                path.display(),
                lineno + 1
            ))
        };
        let operator = fields[idx_operator].to_string();
        if seen.insert(operator.clone()) {
            operators.push(operator.clone());
        }
        let genotype: Vec<Bitstring> = if fields[idx_genotype].is_empty() {
            Vec::new()
        } else {
            fields[idx_genotype]
                .split(':')
                .map(|hex| {
                    Bitstring::from_hex(hex, hex.len() * 4)
                        .map_err(|e| parse_err("best_genotype", &e))
                })
                .collect::<Result<_, _>>()?
        };
        rows.push(ExperimentRow {
            problem: fields[idx_problem].to_string(),
            operator: operator.clone(),
            run: fields[idx_run].parse().map_err(|e| parse_err("run", &e))?,
            result: RunResult {
                best_fitness: fields[idx_fitness]
                    .parse()
                    .map_err(|e| parse_err("best_fitness", &e))?,
                best_genotype: genotype,
                evaluations_to_best: fields[idx_evals]
                    .parse()
                    .map_err(|e| parse_err("evals_to_best", &e))?,
                success: fields[idx_success]
                    .parse()
                    .map_err(|e| parse_err("success", &e))?,
                run_seed: fields[idx_seed]
                    .parse()
                    .map_err(|e| parse_err("seed", &e))?,
            },
        });
    }
    if rows.is_empty() {
        return Err(CliError::usage(format!("{}: no data rows", path.display())));
    }
    Ok(ResultsFile { rows, operators })
}

fn print_summary_line(
    writer: &mut impl Write,
    label: &str,
    s: &SampleSummary,
) -> std::io::Result<()> {
    writeln!(
        writer,
        "  {label}: n={} min={} q1={} median={} q3={} max={}",
        s.count, s.min, s.first_quartile, s.median, s.third_quartile, s.max
    )
}

/// Compares the best-fitness samples of two result files: prints both
/// five-number summaries, the test verdict, and a machine-readable CSV line
/// `operator_a,operator_b,u,p,significant`.
pub fn compare(
    path_a: &Path,
    path_b: &Path,
    writer: &mut impl Write,
) -> Result<TestReport, CliError> {
    let file_a = read_results(path_a)?;
    let file_b = read_results(path_b)?;
    let sample_a = file_a.best_fitness();
    let sample_b = file_b.best_fitness();
    let summary_a = summarize(&sample_a)?;
    let summary_b = summarize(&sample_b)?;
    let report = mann_whitney(&sample_a, &sample_b)?;

    let io_err = |e| CliError::io(path_a, e);
    writeln!(
        writer,
        "sample A = {} ({})",
        path_a.display(),
        file_a.label()
    )
    .map_err(io_err)?;
    print_summary_line(writer, "A", &summary_a).map_err(io_err)?;
    writeln!(
        writer,
        "sample B = {} ({})",
        path_b.display(),
        file_b.label()
    )
    .map_err(io_err)?;
    print_summary_line(writer, "B", &summary_b).map_err(io_err)?;
    writeln!(
        writer,
        "mann-whitney: U = {}, p = {:e}, significant at 0.01: {}",
        report.u_statistic, report.p_value, report.significant
    )
    .map_err(io_err)?;
    writeln!(writer, "operator_a,operator_b,u,p,significant").map_err(io_err)?;
    writeln!(
        writer,
        "{},{},{},{},{}",
        file_a.label(),
        file_b.label(),
        report.u_statistic,
        report.p_value,
        report.significant
    )
    .map_err(io_err)?;
    Ok(report)
}

/// Prints one five-number summary row per (problem, operator) cell of the
/// given result files: the data behind box plots.
pub fn summary(paths: &[impl AsRef<Path>], writer: &mut impl Write) -> Result<(), CliError> {
    writeln!(
        writer,
        "problem,operator,count,min,q1,median,q3,max,success_rate"
    )
    .map_err(|e| CliError::io("stdout", e))?;
    for path in paths {
        let path = path.as_ref();
        let file = read_results(path)?;
        let io_err = |e| CliError::io(path, e);
        let mut cells: Vec<(String, String)> = Vec::new();
        for row in &file.rows {
            let cell = (row.problem.clone(), row.operator.clone());
            if !cells.contains(&cell) {
                cells.push(cell);
            }
        }
        for (problem, operator) in cells {
            let group: Vec<&ExperimentRow> = file
                .rows
                .iter()
                .filter(|r| r.problem == problem && r.operator == operator)
                .collect();
            let fitness: Vec<f64> = group.iter().map(|r| r.result.best_fitness).collect();
            let s = summarize(&fitness)?;
            let successes = group.iter().filter(|r| r.result.success).count();
            let rate = 100.0 * successes as f64 / group.len() as f64;
            writeln!(
                writer,
                "{problem},{operator},{},{},{},{},{},{},{rate}",
                s.count, s.min, s.first_quartile, s.median, s.third_quartile, s.max
            )
            .map_err(io_err)?;
        }
    }
    Ok(())
}
