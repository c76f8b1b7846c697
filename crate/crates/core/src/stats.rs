//! Result summarization and the Mann-Whitney-Wilcoxon two-sample test used
//! to compare crossover operators.
//!
//! The test is two-sided: the alternative is that a value from one sample is
//! more likely to exceed a value from the other than vice versa. For small
//! tie-free samples the p-value comes from exact enumeration of rank
//! assignments; otherwise from the normal approximation with tie-corrected
//! variance and a continuity correction.

use statrs::function::erf::erfc;

use crate::engine::RunResult;
use crate::{Error, Result};

/// Significance level used throughout operator comparisons.
pub const SIGNIFICANCE_LEVEL: f64 = 0.01;

/// Largest `min(|a|, |b|)` for which the exact p-value branch is used on
/// tie-free samples.
const EXACT_LIMIT: usize = 8;

/// Five-number summary of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSummary {
    pub median: f64,
    pub min: f64,
    pub max: f64,
    pub first_quartile: f64,
    pub third_quartile: f64,
    pub count: usize,
}

/// Outcome of one Mann-Whitney-Wilcoxon comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestReport {
    /// U statistic of the first sample.
    pub u_statistic: f64,
    /// Two-sided p-value.
    pub p_value: f64,
    /// `p_value < 0.01`.
    pub significant: bool,
}

/// Runs the two-sided Mann-Whitney-Wilcoxon test on two samples of
/// best-fitness values. Ranks use midranks for ties; when both samples are
/// tie-free and the smaller one has at most eight elements the p-value is
/// exact, otherwise the tie-corrected normal approximation with continuity
/// correction is used. Two samples with all values identical report
/// `U = |a||b|/2` and `p = 1`.
pub fn mann_whitney(a: &[f64], b: &[f64]) -> Result<TestReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let n1 = a.len();
    let n2 = b.len();
    let mut pooled: Vec<(f64, bool)> = a
        .iter()
        .map(|&v| (v, true))
        .chain(b.iter().map(|&v| (v, false)))
        .collect();
    pooled.sort_by(|x, y| x.0.total_cmp(&y.0));

    let total = pooled.len();
    let mut rank_sum_a = 0.0;
    let mut tie_term = 0.0;
    let mut has_ties = false;
    let mut i = 0;
    while i < total {
        let mut j = i + 1;
        while j < total && pooled[j].0 == pooled[i].0 {
            j += 1;
        }
        let span = j - i;
        if span > 1 {
            has_ties = true;
            let s = span as f64;
            tie_term += s * s * s - s;
        }
        let midrank = (i + 1 + j) as f64 / 2.0;
        for entry in &pooled[i..j] {
            if entry.1 {
                rank_sum_a += midrank;
            }
        }
        i = j;
    }

    let u_a = rank_sum_a - (n1 * (n1 + 1)) as f64 / 2.0;
    let p_value = if !has_ties && n1.min(n2) <= EXACT_LIMIT {
        exact_two_sided_p(n1, n2, u_a as u64)
    } else {
        normal_two_sided_p(n1, n2, u_a, tie_term)
    };
    Ok(TestReport {
        u_statistic: u_a,
        p_value,
        significant: p_value < SIGNIFICANCE_LEVEL,
    })
}

/// Number of ways to choose `n1` of the ranks `1..=n` with each possible
/// rank sum, by dynamic programming. Index: `ways[j][s]`.
fn rank_sum_counts(n: usize, n1: usize) -> Vec<Vec<u128>> {
    let max_sum = (n + n - n1 + 1) * n1 / 2;
    let mut ways = vec![vec![0u128; max_sum + 1]; n1 + 1];
    ways[0][0] = 1;
    for rank in 1..=n {
        for j in (1..=n1.min(rank)).rev() {
            for s in (rank..=max_sum).rev() {
                ways[j][s] += ways[j - 1][s - rank];
            }
        }
    }
    ways
}

/// Exact two-sided p-value for a tie-free observation: twice the smaller
/// tail of the exact U distribution, capped at 1.
pub(crate) fn exact_two_sided_p(n1: usize, n2: usize, u_observed: u64) -> f64 {
    let ways = rank_sum_counts(n1 + n2, n1);
    let offset = n1 * (n1 + 1) / 2;
    let counts = &ways[n1];
    let total: u128 = counts.iter().sum();
    let u_of = |s: usize| (s - offset) as u64;
    let mut le = 0u128;
    let mut ge = 0u128;
    for (s, &c) in counts.iter().enumerate().skip(offset) {
        let u = u_of(s);
        if u <= u_observed {
            le += c;
        }
        if u >= u_observed {
            ge += c;
        }
    }
    let tail = le.min(ge) as f64 / total as f64;
    (2.0 * tail).min(1.0)
}

/// Normal-approximation two-sided p-value with tie-corrected variance and a
/// 0.5 continuity correction. Degenerate samples (zero variance) report 1.
pub(crate) fn normal_two_sided_p(n1: usize, n2: usize, u_a: f64, tie_term: f64) -> f64 {
    let n = (n1 + n2) as f64;
    let n1n2 = (n1 * n2) as f64;
    let variance = n1n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if variance <= 0.0 {
        return 1.0;
    }
    let mean = n1n2 / 2.0;
    let z = ((u_a - mean).abs() - 0.5).max(0.0) / variance.sqrt();
    erfc(z / std::f64::consts::SQRT_2).clamp(0.0, 1.0)
}

/// Linear-interpolation quantile ("type 7") on sorted data.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Five-number summary: median and quartiles by linear interpolation on the
/// sorted sample; min and max are the raw extremes.
pub fn summarize(sample: &[f64]) -> Result<SampleSummary> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(SampleSummary {
        median: quantile_sorted(&sorted, 0.5),
        min: sorted[0],
        max: sorted[sorted.len() - 1],
        first_quartile: quantile_sorted(&sorted, 0.25),
        third_quartile: quantile_sorted(&sorted, 0.75),
        count: sorted.len(),
    })
}

/// Percentage of successful runs.
pub fn success_rate(results: &[RunResult]) -> Result<f64> {
    if results.is_empty() {
        return Err(Error::EmptySample);
    }
    let successes = results.iter().filter(|r| r.success).count();
    Ok(100.0 * successes as f64 / results.len() as f64)
}
