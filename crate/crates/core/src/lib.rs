//! Weight-preserving ("balanced") crossover operators for genetic algorithms,
//! together with the machinery needed to benchmark them: fixed-Hamming-weight
//! encodings, fitness kernels for three combinatorial problems (highly
//! nonlinear balanced Boolean functions, bent functions, binary orthogonal
//! arrays), a steady-state GA engine with seeded deterministic runs, and the
//! non-parametric statistics used to compare operator performance.
//!
//! The crate is organized by concern:
//!
//! - [`encodings`]: balanced bitstrings and their two alternative genotype
//!   encodings (zero-lengths runs, map of ones), plus sampling utilities.
//! - [`operators`]: one-point crossover, the three balanced crossovers with
//!   their shuffled variants, and the two mutation schemes.
//! - [`boolfn`]: truth tables, the fast Walsh transform, nonlinearity and the
//!   Boolean-function fitness functions.
//! - [`oa`]: binary orthogonal-array verification and the deviation-based
//!   fitness function.
//! - [`engine`]: the steady-state GA loop (tournament selection, elitist
//!   random replacement, evaluation budget).
//! - [`stats`]: five-number summaries and the Mann-Whitney-Wilcoxon test.

pub mod boolfn;
pub mod encodings;
pub mod engine;
mod error;
pub mod oa;
pub mod operators;
pub mod stats;

pub use error::{Error, Result};
