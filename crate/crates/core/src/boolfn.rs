//! Boolean-function machinery: truth tables, the Walsh transform,
//! nonlinearity and the fitness functions for the two Boolean-function
//! optimization problems.
//!
//! Bit-order convention: the truth-table entry at index `i` is the output
//! for the input vector whose first variable is the most significant bit of
//! `i` (lexicographic input order). The same convention indexes the
//! frequency vectors of the Walsh spectrum.

use crate::encodings::Bitstring;
use crate::{Error, Result};

/// Truth table of an `n`-variable Boolean function: a binary vector of
/// length `2^n` in lexicographic input order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    bits: Bitstring,
    n_vars: u32,
}

impl TruthTable {
    /// Wraps a bitstring whose length must be a power of two, at least 2.
    pub fn new(bits: Bitstring) -> Result<Self> {
        let len = bits.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::BadTableLength(len));
        }
        Ok(TruthTable {
            bits,
            n_vars: len.trailing_zeros(),
        })
    }

    /// Builds the table of `f` over all `2^n` inputs; the argument passed to
    /// `f` packs the input vector with variable 1 as the most significant
    /// bit.
    pub fn from_fn(n_vars: u32, f: impl Fn(usize) -> bool) -> Self {
        let bits: Vec<bool> = (0..1usize << n_vars).map(f).collect();
        TruthTable {
            bits: Bitstring::new(bits),
            n_vars,
        }
    }

    pub fn n_vars(&self) -> u32 {
        self.n_vars
    }

    /// Table length `2^n` (never below 2).
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &Bitstring {
        &self.bits
    }

    /// Hamming weight of the table.
    pub fn weight(&self) -> usize {
        self.bits.weight()
    }
}

/// Walsh spectrum of an `n`-variable function: the signed correlation of the
/// function with every linear function, indexed by frequency vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalshSpectrum {
    coefficients: Vec<i32>,
    n_vars: u32,
}

impl WalshSpectrum {
    pub fn coefficients(&self) -> &[i32] {
        &self.coefficients
    }

    pub fn n_vars(&self) -> u32 {
        self.n_vars
    }

    /// Spectral radius: the maximum absolute coefficient.
    pub fn max_abs(&self) -> i32 {
        self.coefficients.iter().map(|c| c.abs()).max().unwrap()
    }
}

/// Computes the Walsh spectrum with the in-place butterfly transform,
/// `O(n * 2^n)`. The result equals the direct double sum
/// `W(w) = sum_x (-1)^{f(x)} * (-1)^{w.x}` with `w.x` the mod-2 scalar
/// product.
pub fn walsh_transform(f: &TruthTable) -> WalshSpectrum {
    let mut buf: Vec<i32> = f.bits().iter().map(|b| if b { -1 } else { 1 }).collect();
    let mut half = 1usize;
    while half < buf.len() {
        for block in buf.chunks_exact_mut(half * 2) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let sum = *a + *b;
                let diff = *a - *b;
                *a = sum;
                *b = diff;
            }
        }
        half *= 2;
    }
    WalshSpectrum {
        coefficients: buf,
        n_vars: f.n_vars(),
    }
}

/// Nonlinearity: the minimum Hamming distance from the truth table to any
/// affine function, computed as `2^{n-1} - W_max / 2`.
pub fn nonlinearity(f: &TruthTable) -> i64 {
    let spectrum = walsh_transform(f);
    (1i64 << (f.n_vars() - 1)) - i64::from(spectrum.max_abs()) / 2
}

/// Fitness for the balanced high-nonlinearity problem (maximization):
/// nonlinearity, minus the unbalancedness penalty `|2^{n-1} - w_H|` when
/// `penalized` is set. The penalty is used only with crossover operators
/// that do not preserve the weight; balanced operators keep every candidate
/// balanced, making the penalty identically zero.
pub fn fit_balanced_nl(f: &TruthTable, penalized: bool) -> i64 {
    let nl = nonlinearity(f);
    if penalized {
        let half = 1i64 << (f.n_vars() - 1);
        nl - (half - f.weight() as i64).abs()
    } else {
        nl
    }
}

/// The nonlinearity upper bound `2^{n-1} - 2^{n/2-1}` attained exactly by
/// bent functions (`n` even).
pub fn covering_bound(n_vars: u32) -> Result<i64> {
    if n_vars == 0 || !n_vars.is_multiple_of(2) {
        return Err(Error::OddVariableCount(n_vars));
    }
    Ok((1i64 << (n_vars - 1)) - (1i64 << (n_vars / 2 - 1)))
}

/// Target Hamming weight of the bent-function search: bent functions have
/// weight `2^{n-1} - 2^{n/2-1}` (or its complement, which is excluded
/// without loss of generality).
pub fn bent_weight(n_vars: u32) -> Result<usize> {
    Ok(covering_bound(n_vars)? as usize)
}

/// Fitness for the bent-function problem (maximization): nonlinearity,
/// minus `|2^{n-1} - 2^{n/2-1} - w_H|` when `penalized` is set. The optimum
/// equals the covering bound.
pub fn fit_bent(f: &TruthTable, penalized: bool) -> Result<i64> {
    let n = f.n_vars();
    if !n.is_multiple_of(2) {
        return Err(Error::OddVariableCount(n));
    }
    let nl = nonlinearity(f);
    Ok(if penalized {
        let target = (1i64 << (n - 1)) - (1i64 << (n / 2 - 1));
        nl - (target - f.weight() as i64).abs()
    } else {
        nl
    })
}
