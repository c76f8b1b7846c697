//! Fixed-Hamming-weight bitstrings and their alternative genotype encodings.
//!
//! A weight-`k` bitstring of length `n` (an `(n, k)`-combination) can be
//! represented three ways:
//!
//! - as the plain binary vector ([`BalancedBitstring`]),
//! - as the lengths of the zero runs separating its ones
//!   ([`ZeroLengthsCoding`]),
//! - as the list of its one-positions ([`MapOfOnes`]).
//!
//! Positions are 1-based in documentation and in every external textual
//! format; the leftmost character of a serialized bitstring is position 1.

use num_bigint::BigUint;
use rand::Rng;
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// A plain binary vector. Carries no weight constraint; see
/// [`BalancedBitstring`] for the constrained form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bitstring(Vec<bool>);

impl Bitstring {
    pub fn new(bits: Vec<bool>) -> Self {
        Bitstring(bits)
    }

    /// All-zero string of length `n`.
    pub fn zeros(n: usize) -> Self {
        Bitstring(vec![false; n])
    }

    /// Uniformly random string: each bit drawn independently with
    /// probability 1/2.
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        Bitstring((0..n).map(|_| rng.gen_bool(0.5)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Bit at 0-based index `i`.
    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.0[i] = value;
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    /// Hexadecimal serialization, most significant nibble first: bit 1 of the
    /// string is the most significant bit of the first nibble. If the length
    /// is not a multiple of four the final nibble is zero-padded on the
    /// right.
    pub fn to_hex(&self) -> String {
        let mut out = String::with_capacity(self.0.len().div_ceil(4));
        for chunk in self.0.chunks(4) {
            let mut nibble = 0u8;
            for (i, &b) in chunk.iter().enumerate() {
                if b {
                    nibble |= 1 << (3 - i);
                }
            }
            out.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        out
    }

    /// Inverse of [`to_hex`](Self::to_hex) for a string of known length.
    pub fn from_hex(s: &str, len: usize) -> Result<Self> {
        if s.len() != len.div_ceil(4) {
            return Err(Error::Parse(format!(
                "hex string {s:?} has {} nibbles, expected {}",
                s.len(),
                len.div_ceil(4)
            )));
        }
        let mut bits = Vec::with_capacity(len);
        for c in s.chars() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("invalid hex digit {c:?}")))?;
            for i in 0..4 {
                if bits.len() < len {
                    bits.push(nibble & (1 << (3 - i)) != 0);
                } else if nibble & (1 << (3 - i)) != 0 {
                    return Err(Error::Parse(format!("nonzero padding in {s:?}")));
                }
            }
        }
        Ok(Bitstring(bits))
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Bitstring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("invalid bit character {c:?}"))),
            })
            .collect::<Result<Vec<bool>>>()
            .map(Bitstring)
    }
}

impl From<Vec<bool>> for Bitstring {
    fn from(bits: Vec<bool>) -> Self {
        Bitstring(bits)
    }
}

/// A bitstring with a fixed, known Hamming weight `k`.
///
/// The weight is established at construction and every operation in this
/// crate that produces a `BalancedBitstring` preserves it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BalancedBitstring {
    bits: Bitstring,
    weight: usize,
}

impl BalancedBitstring {
    /// Wraps a bitstring, taking its actual weight as the target weight.
    pub fn new(bits: Bitstring) -> Self {
        let weight = bits.weight();
        BalancedBitstring { bits, weight }
    }

    /// Wraps a bitstring, checking that its weight is exactly `k`.
    pub fn with_weight(bits: Bitstring, k: usize) -> Result<Self> {
        let actual = bits.weight();
        if actual != k {
            return Err(Error::WrongWeight {
                weight: k,
                expected: actual,
            });
        }
        Ok(BalancedBitstring { bits, weight: k })
    }

    pub fn n(&self) -> usize {
        self.bits.len()
    }

    /// The fixed Hamming weight `k`.
    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn bits(&self) -> &Bitstring {
        &self.bits
    }

    pub fn into_bits(self) -> Bitstring {
        self.bits
    }
}

impl fmt::Display for BalancedBitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.bits.fmt(f)
    }
}

/// Zero-lengths encoding of an `(n, k)`-combination: the `k + 1` lengths of
/// the runs of zeros before the first one, between consecutive ones, and
/// after the last one. The run lengths always sum to `n - k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroLengthsCoding {
    runs: Vec<usize>,
    n: usize,
    k: usize,
}

impl ZeroLengthsCoding {
    /// Validates that `runs` has `k + 1` entries summing to `n - k`.
    pub fn new(runs: Vec<usize>, n: usize, k: usize) -> Result<Self> {
        if runs.len() != k + 1 {
            return Err(Error::InvalidRunCount {
                got: runs.len(),
                expected: k + 1,
            });
        }
        let sum: usize = runs.iter().sum();
        if k > n || sum != n - k {
            return Err(Error::InvalidRunSum {
                sum,
                expected: n.saturating_sub(k),
            });
        }
        Ok(ZeroLengthsCoding { runs, n, k })
    }

    pub fn runs(&self) -> &[usize] {
        &self.runs
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Map-of-ones encoding of an `(n, k)`-combination: the support of the
/// bitstring as a vector of `k` pairwise-distinct 1-based positions. Order
/// is irrelevant for decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapOfOnes {
    positions: Vec<usize>,
    n: usize,
}

impl MapOfOnes {
    /// Validates that all positions are distinct and lie in `1..=n`.
    pub fn new(positions: Vec<usize>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        for &p in &positions {
            if p == 0 || p > n {
                return Err(Error::PositionOutOfRange {
                    position: p,
                    max: n,
                });
            }
            if seen[p] {
                return Err(Error::DuplicatePosition(p));
            }
            seen[p] = true;
        }
        Ok(MapOfOnes { positions, n })
    }

    /// 1-based one-positions, in the order they are stored.
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.positions.len()
    }

    pub(crate) fn into_positions(self) -> Vec<usize> {
        self.positions
    }
}

/// Encodes a balanced bitstring as the lengths of its zero runs.
pub fn encode_zero_lengths(x: &BalancedBitstring) -> ZeroLengthsCoding {
    let mut runs = Vec::with_capacity(x.weight() + 1);
    let mut current = 0usize;
    for b in x.bits().iter() {
        if b {
            runs.push(current);
            current = 0;
        } else {
            current += 1;
        }
    }
    runs.push(current);
    ZeroLengthsCoding {
        runs,
        n: x.n(),
        k: x.weight(),
    }
}

/// Decodes a zero-lengths coding back to the bitstring it represents.
///
/// Total on any [`ZeroLengthsCoding`]: malformed codings (run sum different
/// from `n - k`) are rejected by [`ZeroLengthsCoding::new`].
pub fn decode_zero_lengths(r: &ZeroLengthsCoding) -> BalancedBitstring {
    let mut bits = Vec::with_capacity(r.n());
    for (i, &run) in r.runs().iter().enumerate() {
        bits.extend(std::iter::repeat_n(false, run));
        if i < r.k() {
            bits.push(true);
        }
    }
    debug_assert_eq!(bits.len(), r.n());
    BalancedBitstring {
        bits: Bitstring(bits),
        weight: r.k(),
    }
}

/// Encodes a balanced bitstring as its support, in increasing position
/// order.
pub fn encode_map_of_ones(x: &BalancedBitstring) -> MapOfOnes {
    let positions = x
        .bits()
        .iter()
        .enumerate()
        .filter(|&(_, b)| b)
        .map(|(i, _)| i + 1)
        .collect();
    MapOfOnes {
        positions,
        n: x.n(),
    }
}

/// Decodes a map of ones back to its bitstring. Any permutation of the
/// positions decodes to the same string.
///
/// Total on any [`MapOfOnes`]: duplicate or out-of-range positions are
/// rejected by [`MapOfOnes::new`].
pub fn decode_map_of_ones(q: &MapOfOnes) -> BalancedBitstring {
    let mut bits = vec![false; q.n()];
    for &p in q.positions() {
        bits[p - 1] = true;
    }
    BalancedBitstring {
        bits: Bitstring(bits),
        weight: q.k(),
    }
}

/// Samples a weight-`k` bitstring of length `n` with the counter scheme:
/// each bit is drawn uniformly left to right while counting ones and zeros;
/// once `k` ones have been placed the remainder is filled with zeros, and
/// once `n - k` zeros have been placed the remainder is filled with ones.
///
/// The zeros counter makes the procedure total: without it a draw ending
/// short of `k` ones could not reach the target weight.
///
/// # Panics
///
/// Panics if `k > n`.
pub fn random_balanced(n: usize, k: usize, rng: &mut impl Rng) -> BalancedBitstring {
    assert!(k <= n, "weight {k} exceeds length {n}");
    let mut bits = vec![false; n];
    let mut ones = 0usize;
    let mut zeros = 0usize;
    for slot in bits.iter_mut() {
        if ones == k {
            *slot = false;
        } else if zeros == n - k {
            *slot = true;
        } else {
            let b = rng.gen_bool(0.5);
            *slot = b;
            if b {
                ones += 1;
            } else {
                zeros += 1;
            }
        }
    }
    BalancedBitstring {
        bits: Bitstring(bits),
        weight: k,
    }
}

/// Exact size of the search space of `(n, k)`-combinations: the binomial
/// coefficient C(n, k), as an arbitrary-precision integer. Returns zero when
/// `k > n`.
pub fn search_space_size(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}
