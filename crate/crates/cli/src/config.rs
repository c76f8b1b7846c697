//! Experiment configuration: command-line flags layered over an optional
//! `key=value` configuration file, resolved against per-problem defaults.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use balanced_ga::engine::ProblemSpec;
use balanced_ga::oa::OaParameters;
use balanced_ga::operators::CrossoverKind;

use crate::CliError;

/// Environment variable consulted for the default worker count when
/// `--threads` is not given.
pub const THREADS_ENV: &str = "BALANCED_GA_THREADS";

/// Benchmark protocol defaults.
pub const DEFAULT_POPULATION: usize = 50;
pub const DEFAULT_TOURNAMENT: usize = 3;
pub const DEFAULT_EVALUATIONS: u64 = 500_000;
pub const DEFAULT_RUNS: usize = 50;

/// Options as given by the user, before defaults are applied. `None` means
/// "not provided"; the command line is overlaid on the configuration file.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct RawOptions {
    pub problem: Option<String>,
    pub n: Option<u32>,
    pub oa_cols: Option<usize>,
    pub oa_strength: Option<usize>,
    pub crossover: Option<String>,
    pub pop_size: Option<usize>,
    pub tournament: Option<usize>,
    pub evals: Option<u64>,
    pub mutation_prob: Option<f64>,
    pub runs: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl RawOptions {
    /// Overlays `self` (higher precedence) on `fallback`.
    pub fn overlay(self, fallback: RawOptions) -> RawOptions {
        RawOptions {
            problem: self.problem.or(fallback.problem),
            n: self.n.or(fallback.n),
            oa_cols: self.oa_cols.or(fallback.oa_cols),
            oa_strength: self.oa_strength.or(fallback.oa_strength),
            crossover: self.crossover.or(fallback.crossover),
            pop_size: self.pop_size.or(fallback.pop_size),
            tournament: self.tournament.or(fallback.tournament),
            evals: self.evals.or(fallback.evals),
            mutation_prob: self.mutation_prob.or(fallback.mutation_prob),
            runs: self.runs.or(fallback.runs),
            seed: self.seed.or(fallback.seed),
            out: self.out.or(fallback.out),
            threads: self.threads.or(fallback.threads),
        }
    }

    /// Parses a configuration file of `key=value` lines. Keys match the
    /// long flag names; blank lines and `#` comments are ignored.
    pub fn from_config_file(path: &Path) -> Result<RawOptions, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut opts = RawOptions::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::usage(format!(
                    "{}:{}: expected key=value, got {line:?}",
                    path.display(),
                    lineno + 1
                )));
            };
            let key = key.trim();
            let value = value.trim();
            let bad = |e: &dyn std::fmt::Display| {
                CliError::usage(format!(
                    "{}:{}: invalid value for {key}: {e}",
                    path.display(),
                    lineno + 1
                ))
            };
            match key {
                "problem" => opts.problem = Some(value.to_string()),
                "n" => opts.n = Some(value.parse().map_err(|e| bad(&e))?),
                "oa-cols" => opts.oa_cols = Some(value.parse().map_err(|e| bad(&e))?),
                "oa-strength" => opts.oa_strength = Some(value.parse().map_err(|e| bad(&e))?),
                "crossover" => opts.crossover = Some(value.to_string()),
                "pop-size" => opts.pop_size = Some(value.parse().map_err(|e| bad(&e))?),
                "tournament" => opts.tournament = Some(value.parse().map_err(|e| bad(&e))?),
                "evals" => opts.evals = Some(value.parse().map_err(|e| bad(&e))?),
                "mutation-prob" => opts.mutation_prob = Some(value.parse().map_err(|e| bad(&e))?),
                "runs" => opts.runs = Some(value.parse().map_err(|e| bad(&e))?),
                "seed" => opts.seed = Some(value.parse().map_err(|e| bad(&e))?),
                "out" => opts.out = Some(PathBuf::from(value)),
                "threads" => opts.threads = Some(value.parse().map_err(|e| bad(&e))?),
                other => {
                    return Err(CliError::usage(format!(
                        "{}:{}: unknown key {other:?}",
                        path.display(),
                        lineno + 1
                    )))
                }
            }
        }
        Ok(opts)
    }
}

/// A fully resolved batch experiment: R independent runs for each listed
/// crossover operator on one problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub problem: ProblemSpec,
    pub crossovers: Vec<CrossoverKind>,
    pub runs: usize,
    pub population_size: usize,
    pub tournament_size: usize,
    pub mutation_prob: f64,
    pub max_evaluations: u64,
    pub master_seed: u64,
    pub output: PathBuf,
    pub threads: usize,
}

fn default_threads(explicit: Option<usize>) -> Result<usize, CliError> {
    if let Some(threads) = explicit {
        if threads == 0 {
            return Err(CliError::usage("--threads must be at least 1"));
        }
        return Ok(threads);
    }
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let threads: usize = value.parse().map_err(|e| {
            CliError::usage(format!(
                "{THREADS_ENV}={value:?} is not a thread count: {e}"
            ))
        })?;
        if threads == 0 {
            return Err(CliError::usage(format!("{THREADS_ENV} must be at least 1")));
        }
        return Ok(threads);
    }
    Ok(std::thread::available_parallelism()
        .map(usize::from)
        .unwrap_or(1))
}

/// Applies defaults and validates, producing a runnable experiment.
pub fn resolve(opts: RawOptions) -> Result<ExperimentSpec, CliError> {
    let problem_name = opts
        .problem
        .as_deref()
        .ok_or_else(|| CliError::usage("problem: required (bal-nl, bent or bin-oa)"))?;
    let n = || {
        opts.n
            .ok_or_else(|| CliError::usage(format!("n: required for problem {problem_name}")))
    };
    let problem = match problem_name {
        "bal-nl" => ProblemSpec::BalancedNonlinearity { n_vars: n()? },
        "bent" => ProblemSpec::Bent { n_vars: n()? },
        "bin-oa" => {
            let n_vars = n()?;
            if n_vars >= 24 {
                return Err(CliError::usage(format!("n: {n_vars} too large for bin-oa")));
            }
            let cols = opts
                .oa_cols
                .ok_or_else(|| CliError::usage("oa-cols: required for problem bin-oa"))?;
            let strength = opts
                .oa_strength
                .ok_or_else(|| CliError::usage("oa-strength: required for problem bin-oa"))?;
            ProblemSpec::BinaryOa(
                OaParameters::new(1usize << n_vars, cols, strength)
                    .map_err(|e| CliError::usage(format!("oa parameters: {e}")))?,
            )
        }
        other => {
            return Err(CliError::usage(format!(
                "problem: unknown family {other:?} (expected bal-nl, bent or bin-oa)"
            )))
        }
    };
    problem
        .validate()
        .map_err(|e| CliError::usage(format!("problem: {e}")))?;

    let crossovers: Vec<CrossoverKind> = match opts.crossover.as_deref() {
        None => CrossoverKind::ALL.to_vec(),
        Some(list) => list
            .split(',')
            .map(|code| {
                code.trim()
                    .parse::<CrossoverKind>()
                    .map_err(|e| CliError::usage(format!("crossover: {e}")))
            })
            .collect::<Result<_, _>>()?,
    };
    let mut seen = BTreeSet::new();
    for kind in &crossovers {
        if !seen.insert(kind.code()) {
            return Err(CliError::usage(format!(
                "crossover: operator {} listed twice",
                kind.code()
            )));
        }
    }

    let runs = opts.runs.unwrap_or(DEFAULT_RUNS);
    if runs == 0 {
        return Err(CliError::usage("runs: must be at least 1"));
    }
    // Benchmark defaults: 0.7 on the Boolean-function problems, 0.2 on arrays.
    let mutation_prob = opts.mutation_prob.unwrap_or(match problem {
        ProblemSpec::BinaryOa(_) => 0.2,
        _ => 0.7,
    });
    let output = opts
        .out
        .ok_or_else(|| CliError::usage("out: required output path for the result CSV"))?;

    let spec = ExperimentSpec {
        problem,
        crossovers,
        runs,
        population_size: opts.pop_size.unwrap_or(DEFAULT_POPULATION),
        tournament_size: opts.tournament.unwrap_or(DEFAULT_TOURNAMENT),
        mutation_prob,
        max_evaluations: opts.evals.unwrap_or(DEFAULT_EVALUATIONS),
        master_seed: opts.seed.unwrap_or(0),
        output,
        threads: default_threads(opts.threads)?,
    };

    // Sanity-check the scalar parameters through the engine's own
    // validation, using the first operator as representative.
    let probe = balanced_ga::engine::GaConfig {
        problem: spec.problem,
        crossover: spec.crossovers[0],
        population_size: spec.population_size,
        tournament_size: spec.tournament_size,
        mutation_prob: spec.mutation_prob,
        max_evaluations: spec.max_evaluations,
        seed: 0,
    };
    probe
        .validate()
        .map_err(|e| CliError::usage(e.to_string()))?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn minimal() -> RawOptions {
        RawOptions {
            problem: Some("bal-nl".into()),
            n: Some(6),
            out: Some(PathBuf::from("x.csv")),
            threads: Some(1),
            ..RawOptions::default()
        }
    }

    #[test]
    fn benchmark_defaults_are_applied() {
        let spec = resolve(minimal()).unwrap();
        assert_eq!(spec.population_size, 50);
        assert_eq!(spec.tournament_size, 3);
        assert_eq!(spec.max_evaluations, 500_000);
        assert_eq!(spec.runs, 50);
        assert_eq!(spec.mutation_prob, 0.7);
        assert_eq!(spec.master_seed, 0);
        assert_eq!(spec.crossovers.len(), 7);
    }

    #[test]
    fn oa_default_mutation_probability_is_two_tenths() {
        let opts = RawOptions {
            problem: Some("bin-oa".into()),
            n: Some(4),
            oa_cols: Some(8),
            oa_strength: Some(2),
            ..minimal()
        };
        let spec = resolve(opts).unwrap();
        assert_eq!(spec.mutation_prob, 0.2);
        assert_eq!(spec.problem.to_string(), "oa-16-8-2-4");
    }

    #[test]
    fn explicit_values_beat_defaults() {
        let opts = RawOptions {
            mutation_prob: Some(0.4),
            evals: Some(1000),
            runs: Some(3),
            crossover: Some("moo,op".into()),
            seed: Some(99),
            ..minimal()
        };
        let spec = resolve(opts).unwrap();
        assert_eq!(spec.mutation_prob, 0.4);
        assert_eq!(spec.max_evaluations, 1000);
        assert_eq!(spec.runs, 3);
        assert_eq!(spec.master_seed, 99);
        assert_eq!(
            spec.crossovers,
            vec![CrossoverKind::MAP_OF_ONES, CrossoverKind::ONE_POINT]
        );
    }

    #[test]
    fn usage_errors_name_the_offending_key() {
        let err = resolve(RawOptions::default()).unwrap_err();
        assert!(err.to_string().contains("problem"));

        let err = resolve(RawOptions {
            n: None,
            ..minimal()
        })
        .unwrap_err();
        assert!(err.to_string().contains("n:"));

        let err = resolve(RawOptions {
            crossover: Some("moo,quux".into()),
            ..minimal()
        })
        .unwrap_err();
        assert!(err.to_string().contains("crossover"));

        let err = resolve(RawOptions {
            crossover: Some("moo,moo".into()),
            ..minimal()
        })
        .unwrap_err();
        assert!(err.to_string().contains("twice"));

        let err = resolve(RawOptions {
            runs: Some(0),
            ..minimal()
        })
        .unwrap_err();
        assert!(err.to_string().contains("runs"));

        let err = resolve(RawOptions {
            out: None,
            ..minimal()
        })
        .unwrap_err();
        assert!(err.to_string().contains("out"));

        let err = resolve(RawOptions {
            problem: Some("bent".into()),
            n: Some(5),
            ..minimal()
        })
        .unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn config_file_parses_and_cli_overrides() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "# experiment").unwrap();
        writeln!(file, "problem = bal-nl").unwrap();
        writeln!(file, "n = 6").unwrap();
        writeln!(file, "evals = 1000").unwrap();
        writeln!(file, "out = from_file.csv").unwrap();
        let from_file = RawOptions::from_config_file(file.path()).unwrap();
        assert_eq!(from_file.evals, Some(1000));

        let cli = RawOptions {
            evals: Some(2000),
            threads: Some(1),
            ..RawOptions::default()
        };
        let spec = resolve(cli.overlay(from_file)).unwrap();
        assert_eq!(spec.max_evaluations, 2000);
        assert_eq!(spec.output, PathBuf::from("from_file.csv"));
    }

    #[test]
    fn config_file_errors() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "no equals sign").unwrap();
        assert!(RawOptions::from_config_file(file.path()).is_err());

        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "frobnicate = 3").unwrap();
        let err = RawOptions::from_config_file(file.path()).unwrap_err();
        assert!(err.to_string().contains("frobnicate"));

        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "evals = many").unwrap();
        assert!(RawOptions::from_config_file(file.path()).is_err());

        let missing = RawOptions::from_config_file(Path::new("/nonexistent/cfg")).unwrap_err();
        assert_eq!(missing.exit_code(), 2);
    }
}
