//! Binary orthogonal-array verification and the deviation-based fitness
//! function for the array-search problem.
//!
//! An `OA(N, k, t, lambda)` is an `N x k` binary matrix in which every
//! `N x t` column-submatrix contains each binary `t`-tuple exactly `lambda`
//! times, with `lambda = N / 2^t`. Candidates are stored column-wise, each
//! column being the truth table of one Boolean function.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::encodings::Bitstring;
use crate::{Error, Result};

/// Parameters `(N, k, t, lambda)` of a binary orthogonal array. The index
/// is always derived as `lambda = N / 2^t`, which must be exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OaParameters {
    rows: usize,
    columns: usize,
    strength: usize,
    index: usize,
}

impl OaParameters {
    pub fn new(rows: usize, columns: usize, strength: usize) -> Result<Self> {
        if strength > columns {
            return Err(Error::BadOaParameters(format!(
                "strength {strength} exceeds column count {columns}"
            )));
        }
        if columns == 0 || rows == 0 {
            return Err(Error::BadOaParameters("empty array".into()));
        }
        if strength >= usize::BITS as usize {
            return Err(Error::BadOaParameters(format!(
                "strength {strength} too large"
            )));
        }
        let block = 1usize << strength;
        if !rows.is_multiple_of(block) {
            return Err(Error::BadOaParameters(format!(
                "row count {rows} is not divisible by 2^{strength}"
            )));
        }
        Ok(OaParameters {
            rows,
            columns,
            strength,
            index: rows / block,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn strength(&self) -> usize {
        self.strength
    }

    /// The index `lambda = N / 2^t`.
    pub fn index(&self) -> usize {
        self.index
    }
}

/// A candidate array, stored as `k` column bitstrings of equal length `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateOa {
    columns: Vec<Bitstring>,
}

impl CandidateOa {
    pub fn new(columns: Vec<Bitstring>) -> Result<Self> {
        let rows = match columns.first() {
            Some(c) => c.len(),
            None => return Err(Error::DimensionMismatch("no columns".into())),
        };
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch(format!(
                "column of length {} in an array of {} rows",
                bad.len(),
                rows
            )));
        }
        Ok(CandidateOa { columns })
    }

    /// Builds a candidate from row strings (the fixture orientation).
    pub fn from_rows(rows: &[Bitstring]) -> Result<Self> {
        let width = match rows.first() {
            Some(r) => r.len(),
            None => return Err(Error::DimensionMismatch("no rows".into())),
        };
        if width == 0 {
            return Err(Error::DimensionMismatch("empty rows".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != width) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} in an array of {} columns",
                bad.len(),
                width
            )));
        }
        let columns = (0..width)
            .map(|c| Bitstring::new(rows.iter().map(|r| r.get(c)).collect()))
            .collect();
        Ok(CandidateOa { columns })
    }

    pub fn rows(&self) -> usize {
        self.columns[0].len()
    }

    pub fn column_count(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Bitstring] {
        &self.columns
    }

    fn check_params(&self, params: &OaParameters) -> Result<()> {
        if self.rows() != params.rows() || self.column_count() != params.columns() {
            return Err(Error::DimensionMismatch(format!(
                "array is {}x{}, parameters say {}x{}",
                self.rows(),
                self.column_count(),
                params.rows(),
                params.columns()
            )));
        }
        Ok(())
    }
}

/// Calls `f` on every size-`t` subset of `0..k`, in lexicographic order.
fn for_each_subset(k: usize, t: usize, mut f: impl FnMut(&[usize])) {
    if t > k {
        return;
    }
    let mut subset: Vec<usize> = (0..t).collect();
    loop {
        f(&subset);
        // Advance to the next subset in lexicographic order.
        let mut i = t;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if subset[i] != i + k - t {
                break;
            }
            if i == 0 {
                return;
            }
        }
        subset[i] += 1;
        for j in i + 1..t {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// Tuple counts for the submatrix restricted to `subset`, as a dense
/// `2^t`-entry table; the first column of the subset is the most significant
/// bit of the tuple value.
fn tuple_counts(a: &CandidateOa, subset: &[usize]) -> Vec<usize> {
    let t = subset.len();
    let mut counts = vec![0usize; 1 << t];
    for row in 0..a.rows() {
        let mut value = 0usize;
        for &col in subset {
            value = (value << 1) | a.columns()[col].get(row) as usize;
        }
        counts[value] += 1;
    }
    counts
}

/// Euclidean deviation of the submatrix on the given 0-based column subset:
/// the root of the summed squared per-tuple deviations from `lambda`. Zero
/// exactly when every tuple occurs `lambda` times.
pub fn euclidean_deviation(a: &CandidateOa, subset: &[usize], lambda: usize) -> Result<f64> {
    let mut seen = vec![false; a.column_count()];
    for &col in subset {
        if col >= a.column_count() {
            return Err(Error::BadColumnSubset(format!(
                "column {col} out of range 0..{}",
                a.column_count()
            )));
        }
        if seen[col] {
            return Err(Error::BadColumnSubset(format!("repeated column {col}")));
        }
        seen[col] = true;
    }
    let counts = tuple_counts(a, subset);
    let sum: f64 = counts
        .iter()
        .map(|&c| {
            let d = lambda as f64 - c as f64;
            d * d
        })
        .sum();
    Ok(sum.sqrt())
}

/// Unbalancedness penalty: the summed deviation of every column's weight
/// from `N / 2`. Zero for arrays whose columns are all balanced.
pub fn unbalancedness(a: &CandidateOa) -> usize {
    let half = a.rows() / 2;
    a.columns().iter().map(|c| half.abs_diff(c.weight())).sum()
}

/// Fitness of a candidate array (minimization): the sum of the Euclidean
/// deviations of all `C(k, t)` column subsets, plus the unbalancedness
/// penalty when `penalized` is set. The fitness is zero exactly when the
/// candidate is an `OA(N, k, t, lambda)`; the penalty is dropped under
/// balanced crossover operators, which keep every column balanced.
pub fn fit_oa(a: &CandidateOa, params: &OaParameters, penalized: bool) -> Result<f64> {
    a.check_params(params)?;
    let mut total = 0.0;
    for_each_subset(params.columns(), params.strength(), |subset| {
        let counts = tuple_counts(a, subset);
        let sum: f64 = counts
            .iter()
            .map(|&c| {
                let d = params.index() as f64 - c as f64;
                d * d
            })
            .sum();
        total += sum.sqrt();
    });
    if penalized {
        total += unbalancedness(a) as f64;
    }
    Ok(total)
}

/// Direct check of the defining property: every `N x t` submatrix must
/// contain every binary `t`-tuple exactly `lambda` times. Implemented
/// independently of [`fit_oa`] (hash-map tuple counting over row slices) so
/// the two can serve as cross-checks.
pub fn is_orthogonal_array(a: &CandidateOa, params: &OaParameters) -> Result<bool> {
    a.check_params(params)?;
    let t = params.strength();
    let expected = 1usize << t;
    let mut ok = true;
    for_each_subset(params.columns(), t, |subset| {
        if !ok {
            return;
        }
        let mut counts: HashMap<Vec<bool>, usize> = HashMap::new();
        for row in 0..a.rows() {
            let tuple: Vec<bool> = subset.iter().map(|&c| a.columns()[c].get(row)).collect();
            *counts.entry(tuple).or_insert(0) += 1;
        }
        if counts.len() != expected || counts.values().any(|&c| c != params.index()) {
            ok = false;
        }
    });
    Ok(ok)
}

/// Reads an array fixture: a header line `N k t lambda` followed by `N`
/// rows of `k` characters `0`/`1`.
pub fn read_oa_fixture(reader: impl BufRead) -> Result<(CandidateOa, OaParameters)> {
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty fixture".into()))??;
    let fields: Vec<usize> = header
        .split_whitespace()
        .map(|f| {
            f.parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad header field {f:?}: {e}")))
        })
        .collect::<Result<_>>()?;
    let &[rows, columns, strength, lambda] = fields.as_slice() else {
        return Err(Error::Parse(format!(
            "header must be \"N k t lambda\", got {header:?}"
        )));
    };
    let params = OaParameters::new(rows, columns, strength)?;
    if params.index() != lambda {
        return Err(Error::BadOaParameters(format!(
            "declared index {lambda} but N/2^t = {}",
            params.index()
        )));
    }
    let mut row_strings = Vec::with_capacity(rows);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        row_strings.push(line.trim().parse::<Bitstring>()?);
    }
    if row_strings.len() != rows {
        return Err(Error::Parse(format!(
            "expected {rows} rows, found {}",
            row_strings.len()
        )));
    }
    let candidate = CandidateOa::from_rows(&row_strings)?;
    candidate.check_params(&params)?;
    Ok((candidate, params))
}

/// Writes an array in the fixture format accepted by [`read_oa_fixture`].
pub fn write_oa_fixture(
    mut writer: impl Write,
    a: &CandidateOa,
    params: &OaParameters,
) -> Result<()> {
    a.check_params(params)?;
    writeln!(
        writer,
        "{} {} {} {}",
        params.rows(),
        params.columns(),
        params.strength(),
        params.index()
    )?;
    for row in 0..a.rows() {
        for col in 0..a.column_count() {
            write!(writer, "{}", a.columns()[col].get(row) as u8)?;
        }
        writeln!(writer)?;
    }
    Ok(())
}
