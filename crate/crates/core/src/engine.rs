//! Steady-state genetic algorithm: tournament selection, single-child
//! breeding, elitist random replacement and a fitness-evaluation budget.
//!
//! One iteration selects the best two of `t` randomly sampled individuals,
//! breeds a single child with the configured crossover (applied
//! independently per column for the array problem), mutates it (bit-flip
//! under one-point crossover, swap otherwise), evaluates it, and inserts it
//! over a uniformly random non-best individual only when its fitness is
//! strictly better than both parents'. Runs are deterministic given the
//! configuration seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boolfn::{bent_weight, covering_bound, fit_balanced_nl, fit_bent, TruthTable};
use crate::encodings::{random_balanced, BalancedBitstring, Bitstring};
use crate::oa::{fit_oa, CandidateOa, OaParameters};
use crate::operators::{
    balanced_cross, bit_flip_mutation, one_point_crossover, swap_mutation, CrossoverKind,
};
use crate::{Error, Result};

/// Whether larger or smaller fitness values are better.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Maximize,
    Minimize,
}

impl Orientation {
    /// True when `a` is strictly better than `b`.
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Orientation::Maximize => a > b,
            Orientation::Minimize => a < b,
        }
    }
}

/// The optimization problem a GA run is solving. Fitness values are kept in
/// the problem's natural units; minimization problems flip comparisons
/// through [`Orientation`] instead of negating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemSpec {
    /// Maximize the nonlinearity of a balanced Boolean function of
    /// `n_vars` variables.
    BalancedNonlinearity { n_vars: u32 },
    /// Search for a bent function of `n_vars` variables (even).
    Bent { n_vars: u32 },
    /// Search for a binary orthogonal array with the given parameters.
    BinaryOa(OaParameters),
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ProblemSpec::BalancedNonlinearity { n_vars } => {
                if n_vars == 0 || n_vars > 24 {
                    return Err(Error::InvalidConfig(format!(
                        "variable count {n_vars} out of supported range 1..=24"
                    )));
                }
            }
            ProblemSpec::Bent { n_vars } => {
                if n_vars == 0 || n_vars > 24 {
                    return Err(Error::InvalidConfig(format!(
                        "variable count {n_vars} out of supported range 1..=24"
                    )));
                }
                if n_vars % 2 != 0 {
                    return Err(Error::OddVariableCount(n_vars));
                }
            }
            ProblemSpec::BinaryOa(params) => {
                if params.rows() < 2 || params.rows() % 2 != 0 {
                    return Err(Error::InvalidConfig(format!(
                        "array row count {} must be even and at least 2",
                        params.rows()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of independent bitstring columns in a genotype.
    pub fn column_count(&self) -> usize {
        match self {
            ProblemSpec::BalancedNonlinearity { .. } | ProblemSpec::Bent { .. } => 1,
            ProblemSpec::BinaryOa(params) => params.columns(),
        }
    }

    /// Length of each genotype column.
    pub fn column_len(&self) -> usize {
        match *self {
            ProblemSpec::BalancedNonlinearity { n_vars } | ProblemSpec::Bent { n_vars } => {
                1 << n_vars
            }
            ProblemSpec::BinaryOa(params) => params.rows(),
        }
    }

    /// Target Hamming weight of each column under balanced operators.
    pub fn column_weight(&self) -> usize {
        match *self {
            ProblemSpec::BalancedNonlinearity { n_vars } => 1 << (n_vars - 1),
            ProblemSpec::Bent { n_vars } => {
                bent_weight(n_vars).expect("validated: even variable count")
            }
            ProblemSpec::BinaryOa(params) => params.rows() / 2,
        }
    }

    pub fn orientation(&self) -> Orientation {
        match self {
            ProblemSpec::BalancedNonlinearity { .. } | ProblemSpec::Bent { .. } => {
                Orientation::Maximize
            }
            ProblemSpec::BinaryOa(_) => Orientation::Minimize,
        }
    }

    /// Evaluates the fitness of a genotype. The unbalancedness penalty is
    /// included only when `penalized` is set (one-point crossover).
    pub fn evaluate(&self, columns: &[Bitstring], penalized: bool) -> Result<f64> {
        match self {
            ProblemSpec::BalancedNonlinearity { .. } => {
                let [table] = columns else {
                    return Err(Error::DimensionMismatch("expected one column".into()));
                };
                let f = TruthTable::new(table.clone())?;
                Ok(fit_balanced_nl(&f, penalized) as f64)
            }
            ProblemSpec::Bent { .. } => {
                let [table] = columns else {
                    return Err(Error::DimensionMismatch("expected one column".into()));
                };
                let f = TruthTable::new(table.clone())?;
                Ok(fit_bent(&f, penalized)? as f64)
            }
            ProblemSpec::BinaryOa(params) => {
                let a = CandidateOa::new(columns.to_vec())?;
                fit_oa(&a, params, penalized)
            }
        }
    }

    /// Fitness value counted as success, where one is known: the proved
    /// optima 26 (n=6) and 56 (n=7) plus the best known value 116 (n=8) for
    /// the balanced-nonlinearity problem, the covering bound for bent
    /// functions, and zero deviation for arrays.
    pub fn optimum_fitness(&self) -> Option<f64> {
        match *self {
            ProblemSpec::BalancedNonlinearity { n_vars } => match n_vars {
                6 => Some(26.0),
                7 => Some(56.0),
                8 => Some(116.0),
                _ => None,
            },
            ProblemSpec::Bent { n_vars } => {
                Some(covering_bound(n_vars).expect("validated: even variable count") as f64)
            }
            ProblemSpec::BinaryOa(_) => Some(0.0),
        }
    }

    /// Success predicate on a best fitness value.
    pub fn is_success(&self, fitness: f64) -> bool {
        match self.optimum_fitness() {
            None => false,
            Some(target) => match self.orientation() {
                Orientation::Maximize => fitness >= target,
                Orientation::Minimize => fitness <= target,
            },
        }
    }
}

impl std::fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            ProblemSpec::BalancedNonlinearity { n_vars } => write!(f, "bal-nl-{n_vars}"),
            ProblemSpec::Bent { n_vars } => write!(f, "bent-{n_vars}"),
            ProblemSpec::BinaryOa(p) => write!(
                f,
                "oa-{}-{}-{}-{}",
                p.rows(),
                p.columns(),
                p.strength(),
                p.index()
            ),
        }
    }
}

/// Full parameterization of one GA run.
#[derive(Debug, Clone)]
pub struct GaConfig {
    pub problem: ProblemSpec,
    pub crossover: CrossoverKind,
    pub population_size: usize,
    pub tournament_size: usize,
    pub mutation_prob: f64,
    pub max_evaluations: u64,
    pub seed: u64,
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        self.problem.validate()?;
        if self.tournament_size < 2 {
            return Err(Error::InvalidConfig(format!(
                "tournament size {} must be at least 2",
                self.tournament_size
            )));
        }
        if self.population_size < self.tournament_size {
            return Err(Error::InvalidConfig(format!(
                "population size {} smaller than tournament size {}",
                self.population_size, self.tournament_size
            )));
        }
        if !(0.0..=1.0).contains(&self.mutation_prob) {
            return Err(Error::InvalidConfig(format!(
                "mutation probability {} not in [0, 1]",
                self.mutation_prob
            )));
        }
        Ok(())
    }

    /// The unbalancedness penalty applies only under one-point crossover.
    pub fn penalized(&self) -> bool {
        !self.crossover.is_balanced()
    }
}

/// One population member with its cached fitness. The fitness is assigned
/// at creation and the genotype is never modified, so it cannot go stale.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub columns: Vec<Bitstring>,
    pub fitness: f64,
}

/// Outcome record of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub best_fitness: f64,
    pub best_genotype: Vec<Bitstring>,
    /// Evaluation count at which the best-ever fitness was first reached.
    pub evaluations_to_best: u64,
    pub success: bool,
    pub run_seed: u64,
}

impl RunResult {
    /// Hex serialization of the genotype: one hex string per column, joined
    /// with `:` for multi-column genotypes.
    pub fn genotype_hex(&self) -> String {
        self.best_genotype
            .iter()
            .map(Bitstring::to_hex)
            .collect::<Vec<_>>()
            .join(":")
    }
}

/// Derives an independent stream seed from a master seed and two indices
/// (splitmix64 steps). Used to give every run of an experiment its own
/// deterministic random stream.
pub fn derive_seed(master: u64, lane: u64, index: u64) -> u64 {
    fn splitmix64(mut x: u64) -> u64 {
        x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
        x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        x ^ (x >> 31)
    }
    let mut state = splitmix64(master ^ 0x6A09_E667_F3BC_C908);
    state = splitmix64(state ^ lane);
    splitmix64(state ^ index)
}

/// Creates and evaluates the initial population. Under one-point crossover
/// the chromosomes are uniformly random bitstrings; under balanced
/// operators every column is sampled with the counter scheme at the
/// problem's target weight. Columns are generated independently.
pub fn init_population(config: &GaConfig, rng: &mut impl Rng) -> Result<Vec<Individual>> {
    let problem = &config.problem;
    let penalized = config.penalized();
    let mut population = Vec::with_capacity(config.population_size);
    for _ in 0..config.population_size {
        let columns: Vec<Bitstring> = (0..problem.column_count())
            .map(|_| {
                if config.crossover.is_balanced() {
                    random_balanced(problem.column_len(), problem.column_weight(), rng).into_bits()
                } else {
                    Bitstring::random(problem.column_len(), rng)
                }
            })
            .collect();
        let fitness = problem.evaluate(&columns, penalized)?;
        population.push(Individual { columns, fitness });
    }
    Ok(population)
}

/// Deterministic tournament selection: samples `tournament_size`
/// individuals without replacement and returns the indices of the two best,
/// ties broken uniformly at random.
pub fn tournament_select(
    population: &[Individual],
    tournament_size: usize,
    orientation: Orientation,
    rng: &mut impl Rng,
) -> (usize, usize) {
    let mut picks = rand::seq::index::sample(rng, population.len(), tournament_size).into_vec();
    // A shuffle before the stable sort makes tie-breaking uniform.
    picks.shuffle(rng);
    picks.sort_by(|&a, &b| match orientation {
        Orientation::Maximize => population[b].fitness.total_cmp(&population[a].fitness),
        Orientation::Minimize => population[a].fitness.total_cmp(&population[b].fitness),
    });
    (picks[0], picks[1])
}

/// Breeds one child genotype. Balanced operators recombine column by column
/// through their own encodings and use swap mutation; one-point crossover
/// makes a single cut across the whole concatenated chromosome (the classic
/// operator) and uses bit-flip mutation. Mutation is always applied
/// separately per column.
fn breed(
    config: &GaConfig,
    parent1: &Individual,
    parent2: &Individual,
    rng: &mut impl Rng,
) -> Result<Vec<Bitstring>> {
    if config.crossover.is_balanced() {
        let weight = config.problem.column_weight();
        parent1
            .columns
            .iter()
            .zip(&parent2.columns)
            .map(|(c1, c2)| {
                let b1 = BalancedBitstring::with_weight(c1.clone(), weight)?;
                let b2 = BalancedBitstring::with_weight(c2.clone(), weight)?;
                let child = balanced_cross(config.crossover, &b1, &b2, rng)?;
                Ok(swap_mutation(child, config.mutation_prob, rng).into_bits())
            })
            .collect()
    } else {
        let flatten = |ind: &Individual| {
            Bitstring::new(ind.columns.iter().flat_map(Bitstring::iter).collect())
        };
        let child = one_point_crossover(&flatten(parent1), &flatten(parent2), rng)?;
        let len = config.problem.column_len();
        Ok((0..config.problem.column_count())
            .map(|c| {
                let column = Bitstring::new((0..len).map(|i| child.get(c * len + i)).collect());
                bit_flip_mutation(column, config.mutation_prob, rng)
            })
            .collect())
    }
}

/// What one steady-state iteration did.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub parents: (usize, usize),
    pub parent_fitness: (f64, f64),
    pub child_fitness: f64,
    /// Population slot the child was written to, if it was accepted.
    pub replaced: Option<usize>,
}

/// A steady-state GA run in progress.
pub struct GaRun {
    config: GaConfig,
    rng: ChaCha8Rng,
    population: Vec<Individual>,
    evaluations: u64,
    best_ever: Individual,
    best_ever_at: u64,
}

impl GaRun {
    /// Initializes the population; the evaluation counter starts at the
    /// population size.
    pub fn new(config: GaConfig) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let population = init_population(&config, &mut rng)?;
        let orientation = config.problem.orientation();
        let mut best_idx = 0;
        for i in 1..population.len() {
            if orientation.better(population[i].fitness, population[best_idx].fitness) {
                best_idx = i;
            }
        }
        let evaluations = population.len() as u64;
        let best_ever = population[best_idx].clone();
        Ok(GaRun {
            config,
            rng,
            population,
            evaluations,
            // The initial individuals are evaluated in order, so the best
            // of them first appeared at evaluation index best_idx + 1.
            best_ever_at: best_idx as u64 + 1,
            best_ever,
        })
    }

    pub fn config(&self) -> &GaConfig {
        &self.config
    }

    pub fn population(&self) -> &[Individual] {
        &self.population
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn best_ever(&self) -> &Individual {
        &self.best_ever
    }

    /// Index of the current population best (lowest index on ties); this
    /// individual is shielded from replacement.
    fn best_index(&self) -> usize {
        let orientation = self.config.problem.orientation();
        let mut best = 0;
        for i in 1..self.population.len() {
            if orientation.better(self.population[i].fitness, self.population[best].fitness) {
                best = i;
            }
        }
        best
    }

    /// One steady-state iteration: selection, breeding, evaluation, and
    /// elitist random replacement. The child enters the population only if
    /// its fitness is strictly better than both parents'; the current
    /// population best is never the replacement victim. Each step costs
    /// exactly one fitness evaluation.
    pub fn step(&mut self) -> StepOutcome {
        let orientation = self.config.problem.orientation();
        let (i1, i2) = tournament_select(
            &self.population,
            self.config.tournament_size,
            orientation,
            &mut self.rng,
        );
        let columns = breed(
            &self.config,
            &self.population[i1],
            &self.population[i2],
            &mut self.rng,
        )
        .expect("population satisfies the operator preconditions");
        let child_fitness = self
            .config
            .problem
            .evaluate(&columns, self.config.penalized())
            .expect("bred genotype matches the problem dimensions");
        self.evaluations += 1;

        if orientation.better(child_fitness, self.best_ever.fitness) {
            self.best_ever = Individual {
                columns: columns.clone(),
                fitness: child_fitness,
            };
            self.best_ever_at = self.evaluations;
        }

        let f1 = self.population[i1].fitness;
        let f2 = self.population[i2].fitness;
        let replaced =
            if orientation.better(child_fitness, f1) && orientation.better(child_fitness, f2) {
                let best = self.best_index();
                let mut victim = self.rng.gen_range(0..self.population.len() - 1);
                if victim >= best {
                    victim += 1;
                }
                self.population[victim] = Individual {
                    columns,
                    fitness: child_fitness,
                };
                Some(victim)
            } else {
                None
            };

        StepOutcome {
            parents: (i1, i2),
            parent_fitness: (f1, f2),
            child_fitness,
            replaced,
        }
    }

    /// Steps until the evaluation budget is exhausted and reports the
    /// best-ever individual (discarded children included).
    pub fn run(mut self) -> RunResult {
        while self.evaluations < self.config.max_evaluations {
            self.step();
        }
        self.into_result()
    }

    pub fn into_result(self) -> RunResult {
        let success = self.config.problem.is_success(self.best_ever.fitness);
        RunResult {
            best_fitness: self.best_ever.fitness,
            best_genotype: self.best_ever.columns,
            evaluations_to_best: self.best_ever_at,
            success,
            run_seed: self.config.seed,
        }
    }
}

/// Runs one full GA with the given configuration. Deterministic: equal
/// configurations (seed included) produce identical results.
pub fn run_ga(config: &GaConfig) -> Result<RunResult> {
    Ok(GaRun::new(config.clone())?.run())
}
