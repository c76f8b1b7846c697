//! Crossover and mutation operators.
//!
//! Three recombination operators guarantee that the offspring of two
//! weight-`k` parents is itself weight-`k`: [`counter_cross`] (scans the
//! binary vectors with ones/zeros counters), [`zero_lengths_cross`] (copies
//! zero-run lengths under a sum budget) and [`map_of_ones_cross`] (draws
//! one-positions from the parents' supports without duplication). Each has a
//! "left-to-right" form and a shuffled form ([`with_shuffle`]) that applies
//! a fresh random position permutation around the operator to cancel any
//! positional bias. Classic [`one_point_crossover`] is provided as the
//! unconstrained baseline.
//!
//! Every random decision is an independent fair coin (parent selection) or a
//! uniform index draw; callers supply the random stream.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::encodings::{
    decode_map_of_ones, decode_zero_lengths, encode_map_of_ones, encode_zero_lengths,
    BalancedBitstring, Bitstring, MapOfOnes, ZeroLengthsCoding,
};
use crate::{Error, Result};

/// The four crossover families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CrossoverOp {
    OnePoint,
    CounterBased,
    ZeroLengths,
    MapOfOnes,
}

/// A crossover operator selection: the family plus, for the three balanced
/// families, whether the shuffled variant is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CrossoverKind {
    op: CrossoverOp,
    shuffled: bool,
}

impl CrossoverKind {
    pub const ONE_POINT: Self = Self {
        op: CrossoverOp::OnePoint,
        shuffled: false,
    };
    pub const COUNTER_BASED: Self = Self {
        op: CrossoverOp::CounterBased,
        shuffled: false,
    };
    pub const COUNTER_BASED_SHUFFLED: Self = Self {
        op: CrossoverOp::CounterBased,
        shuffled: true,
    };
    pub const ZERO_LENGTHS: Self = Self {
        op: CrossoverOp::ZeroLengths,
        shuffled: false,
    };
    pub const ZERO_LENGTHS_SHUFFLED: Self = Self {
        op: CrossoverOp::ZeroLengths,
        shuffled: true,
    };
    pub const MAP_OF_ONES: Self = Self {
        op: CrossoverOp::MapOfOnes,
        shuffled: false,
    };
    pub const MAP_OF_ONES_SHUFFLED: Self = Self {
        op: CrossoverOp::MapOfOnes,
        shuffled: true,
    };

    /// All seven operator selections, in reporting order.
    pub const ALL: [Self; 7] = [
        Self::ONE_POINT,
        Self::COUNTER_BASED,
        Self::COUNTER_BASED_SHUFFLED,
        Self::ZERO_LENGTHS,
        Self::ZERO_LENGTHS_SHUFFLED,
        Self::MAP_OF_ONES,
        Self::MAP_OF_ONES_SHUFFLED,
    ];

    /// One-point crossover admits no shuffled variant.
    pub fn new(op: CrossoverOp, shuffled: bool) -> Result<Self> {
        if shuffled && op == CrossoverOp::OnePoint {
            return Err(Error::InvalidConfig(
                "one-point crossover has no shuffled variant".into(),
            ));
        }
        Ok(Self { op, shuffled })
    }

    pub fn op(&self) -> CrossoverOp {
        self.op
    }

    pub fn shuffled(&self) -> bool {
        self.shuffled
    }

    pub fn is_balanced(&self) -> bool {
        self.op != CrossoverOp::OnePoint
    }

    /// Short code used in configuration values and CSV output: `op`, `cb`,
    /// `zl`, `moo`, with a `-s` suffix for the shuffled variants.
    pub fn code(&self) -> &'static str {
        match (self.op, self.shuffled) {
            (CrossoverOp::OnePoint, _) => "op",
            (CrossoverOp::CounterBased, false) => "cb",
            (CrossoverOp::CounterBased, true) => "cb-s",
            (CrossoverOp::ZeroLengths, false) => "zl",
            (CrossoverOp::ZeroLengths, true) => "zl-s",
            (CrossoverOp::MapOfOnes, false) => "moo",
            (CrossoverOp::MapOfOnes, true) => "moo-s",
        }
    }
}

impl std::fmt::Display for CrossoverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

impl std::str::FromStr for CrossoverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .find(|kind| kind.code() == s)
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown crossover code {s:?}")))
    }
}

/// Deterministic core of one-point crossover: `cut` is the prefix length in
/// `1..n`; the first child takes its prefix from `p1`, the second from `p2`.
pub(crate) fn one_point_kernel(
    p1: &Bitstring,
    p2: &Bitstring,
    cut: usize,
    take_first: bool,
) -> Bitstring {
    let (head, tail) = if take_first { (p1, p2) } else { (p2, p1) };
    let bits = head
        .iter()
        .take(cut)
        .chain(tail.iter().skip(cut))
        .collect::<Vec<bool>>();
    Bitstring::new(bits)
}

/// Classic one-point crossover. A cut point is drawn uniformly from
/// `{1, ..., n-1}` and one of the two complementary children is returned
/// with equal probability. The result has no weight guarantee.
pub fn one_point_crossover(
    p1: &Bitstring,
    p2: &Bitstring,
    rng: &mut impl Rng,
) -> Result<Bitstring> {
    if p1.len() != p2.len() {
        return Err(Error::LengthMismatch {
            left: p1.len(),
            right: p2.len(),
        });
    }
    if p1.len() < 2 {
        return Err(Error::TooShort(p1.len()));
    }
    let cut = rng.gen_range(1..p1.len());
    let take_first = rng.gen_bool(0.5);
    Ok(one_point_kernel(p1, p2, cut, take_first))
}

/// Deterministic core of the counter-based crossover; `pick_first` supplies
/// the per-locus parent choice and is consulted only while neither counter
/// is saturated.
pub(crate) fn counter_cross_kernel(
    p1: &[bool],
    p2: &[bool],
    k: usize,
    mut pick_first: impl FnMut() -> bool,
) -> Vec<bool> {
    let n = p1.len();
    let mut child = vec![false; n];
    let mut ones = 0usize;
    let mut zeros = 0usize;
    for i in 0..n {
        if ones == k {
            child[i] = false;
        } else if zeros == n - k {
            child[i] = true;
        } else {
            let bit = if pick_first() { p1[i] } else { p2[i] };
            child[i] = bit;
            if bit {
                ones += 1;
            } else {
                zeros += 1;
            }
        }
    }
    child
}

/// Counter-based balanced crossover.
///
/// Scans positions left to right. While fewer than `k` ones and fewer than
/// `n - k` zeros have been emitted, the child copies the current bit of a
/// uniformly chosen parent and the matching counter is incremented; once a
/// counter saturates the remaining positions are filled with the
/// complementary value. The child always has weight exactly `k`.
pub fn counter_cross(
    p1: &BalancedBitstring,
    p2: &BalancedBitstring,
    rng: &mut impl Rng,
) -> Result<BalancedBitstring> {
    if p1.n() != p2.n() {
        return Err(Error::LengthMismatch {
            left: p1.n(),
            right: p2.n(),
        });
    }
    if p1.weight() != p2.weight() {
        return Err(Error::WeightMismatch {
            left: p1.weight(),
            right: p2.weight(),
        });
    }
    let bits = counter_cross_kernel(
        p1.bits().as_slice(),
        p2.bits().as_slice(),
        p1.weight(),
        || rng.gen_bool(0.5),
    );
    Ok(BalancedBitstring::new(Bitstring::new(bits)))
}

/// Deterministic core of the zero-lengths crossover.
pub(crate) fn zero_lengths_kernel(
    p1: &[usize],
    p2: &[usize],
    n: usize,
    k: usize,
    mut pick_first: impl FnMut() -> bool,
) -> Vec<usize> {
    let budget = n - k;
    let mut child = vec![0usize; k + 1];
    let mut sum_zeros = 0usize;
    for i in 0..k {
        if sum_zeros == budget {
            child[i] = 0;
        } else {
            let run = if pick_first() { p1[i] } else { p2[i] };
            if sum_zeros + run <= budget {
                child[i] = run;
                sum_zeros += run;
            } else {
                // Copy just enough zeros to reach the budget.
                child[i] = budget - sum_zeros;
                sum_zeros = budget;
            }
        }
    }
    child[k] = budget - sum_zeros;
    child
}

/// Zero-lengths balanced crossover.
///
/// Works on the zero-run-length encoding. For each of the first `k` entries
/// the run of a uniformly chosen parent is copied as long as the running sum
/// stays within `n - k`; a run that would overshoot is truncated to the
/// remaining budget, after which further entries are zero. The final entry
/// pads the sum to exactly `n - k`, so the child always encodes a valid
/// `(n, k)`-combination.
pub fn zero_lengths_cross(
    p1: &ZeroLengthsCoding,
    p2: &ZeroLengthsCoding,
    rng: &mut impl Rng,
) -> Result<ZeroLengthsCoding> {
    if p1.n() != p2.n() {
        return Err(Error::LengthMismatch {
            left: p1.n(),
            right: p2.n(),
        });
    }
    if p1.k() != p2.k() {
        return Err(Error::WeightMismatch {
            left: p1.k(),
            right: p2.k(),
        });
    }
    let runs = zero_lengths_kernel(p1.runs(), p2.runs(), p1.n(), p1.k(), || rng.gen_bool(0.5));
    ZeroLengthsCoding::new(runs, p1.n(), p1.k())
}

/// Choice supplier for the map-of-ones crossover, which interleaves parent
/// coins with index draws.
pub(crate) trait MooChoices {
    fn pick_first(&mut self) -> bool;
    /// Uniform index into the chosen parent's remaining entries.
    fn pick_index(&mut self, len: usize) -> usize;
}

struct RngChoices<'a, R: Rng>(&'a mut R);

impl<R: Rng> MooChoices for RngChoices<'_, R> {
    fn pick_first(&mut self) -> bool {
        self.0.gen_bool(0.5)
    }

    fn pick_index(&mut self, len: usize) -> usize {
        self.0.gen_range(0..len)
    }
}

/// Deterministic core of the map-of-ones crossover.
pub(crate) fn map_of_ones_kernel(
    mut p1: Vec<usize>,
    mut p2: Vec<usize>,
    n: usize,
    choices: &mut impl MooChoices,
) -> Vec<usize> {
    let k = p1.len();
    let mut in_p1 = vec![false; n + 1];
    for &p in &p1 {
        in_p1[p] = true;
    }
    let mut common = vec![false; n + 1];
    for &p in &p2 {
        if in_p1[p] {
            common[p] = true;
        }
    }
    // Position lists hold distinct values, so a value's index is unique;
    // sorted lists (the usual case, and removal keeps them sorted) can be
    // searched in logarithmic time.
    let sorted = p1.is_sorted() && p2.is_sorted();
    let mut child = Vec::with_capacity(k);
    for _ in 0..k {
        let (chosen, other) = if choices.pick_first() {
            (&mut p1, &mut p2)
        } else {
            (&mut p2, &mut p1)
        };
        let idx = choices.pick_index(chosen.len());
        let value = chosen.remove(idx);
        child.push(value);
        if common[value] {
            let pos = if sorted {
                other.binary_search(&value).ok()
            } else {
                other.iter().position(|&v| v == value)
            };
            let pos = pos.expect("common position still present in the other parent");
            other.remove(pos);
        }
    }
    child
}

/// Map-of-ones balanced crossover.
///
/// The parents are consumed as working copies of their position lists. At
/// each of `k` steps a parent is chosen uniformly, a uniformly random entry
/// of its remaining list is copied into the child and removed, and if that
/// position is common to both parents it is removed from the other parent as
/// well, so the child's positions stay pairwise distinct.
pub fn map_of_ones_cross(p1: MapOfOnes, p2: MapOfOnes, rng: &mut impl Rng) -> Result<MapOfOnes> {
    if p1.n() != p2.n() {
        return Err(Error::LengthMismatch {
            left: p1.n(),
            right: p2.n(),
        });
    }
    if p1.k() != p2.k() {
        return Err(Error::WeightMismatch {
            left: p1.k(),
            right: p2.k(),
        });
    }
    let n = p1.n();
    let positions = map_of_ones_kernel(
        p1.into_positions(),
        p2.into_positions(),
        n,
        &mut RngChoices(rng),
    );
    MapOfOnes::new(positions, n)
}

/// A permutation of the positions of a length-`n` bitstring, used by the
/// shuffled crossover variants. Indices are 0-based internally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionPermutation {
    forward: Vec<usize>,
}

impl PositionPermutation {
    /// Validates that `forward` is a bijection on `0..forward.len()`.
    pub fn new(forward: Vec<usize>) -> Result<Self> {
        let n = forward.len();
        let mut seen = vec![false; n];
        for &i in &forward {
            if i >= n || seen[i] {
                return Err(Error::InvalidConfig(format!("not a permutation of 0..{n}")));
            }
            seen[i] = true;
        }
        Ok(PositionPermutation { forward })
    }

    pub fn identity(n: usize) -> Self {
        PositionPermutation {
            forward: (0..n).collect(),
        }
    }

    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let mut forward: Vec<usize> = (0..n).collect();
        forward.shuffle(rng);
        PositionPermutation { forward }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// Permuted view: output bit `i` is input bit `forward[i]`.
    pub fn apply(&self, x: &Bitstring) -> Bitstring {
        Bitstring::new(self.forward.iter().map(|&j| x.get(j)).collect())
    }

    /// Inverse of [`apply`](Self::apply).
    pub fn unapply(&self, y: &Bitstring) -> Bitstring {
        let mut bits = vec![false; y.len()];
        for (i, &j) in self.forward.iter().enumerate() {
            bits[j] = y.get(i);
        }
        Bitstring::new(bits)
    }
}

/// Runs a balanced crossover in its plain left-to-right form, converting to
/// and from the operator's native encoding as needed.
pub fn left_to_right_cross(
    op: CrossoverOp,
    p1: &BalancedBitstring,
    p2: &BalancedBitstring,
    rng: &mut impl Rng,
) -> Result<BalancedBitstring> {
    match op {
        CrossoverOp::OnePoint => Err(Error::InvalidConfig(
            "one-point crossover is not a balanced operator".into(),
        )),
        CrossoverOp::CounterBased => counter_cross(p1, p2, rng),
        CrossoverOp::ZeroLengths => {
            let r1 = encode_zero_lengths(p1);
            let r2 = encode_zero_lengths(p2);
            Ok(decode_zero_lengths(&zero_lengths_cross(&r1, &r2, rng)?))
        }
        CrossoverOp::MapOfOnes => {
            let q1 = encode_map_of_ones(p1);
            let q2 = encode_map_of_ones(p2);
            Ok(decode_map_of_ones(&map_of_ones_cross(q1, q2, rng)?))
        }
    }
}

pub(crate) fn shuffle_cross_using(
    perm: &PositionPermutation,
    op: CrossoverOp,
    p1: &BalancedBitstring,
    p2: &BalancedBitstring,
    rng: &mut impl Rng,
) -> Result<BalancedBitstring> {
    let q1 = BalancedBitstring::new(perm.apply(p1.bits()));
    let q2 = BalancedBitstring::new(perm.apply(p2.bits()));
    let child = left_to_right_cross(op, &q1, &q2, rng)?;
    Ok(BalancedBitstring::new(perm.unapply(child.bits())))
}

/// Shuffled variant of a balanced crossover: a fresh uniform position
/// permutation is drawn on every invocation, both parents are permuted, the
/// left-to-right operator runs on the permuted strings, and the inverse
/// permutation is applied to the child. The weight-`k` guarantee carries
/// over unchanged.
pub fn with_shuffle(
    op: CrossoverOp,
    p1: &BalancedBitstring,
    p2: &BalancedBitstring,
    rng: &mut impl Rng,
) -> Result<BalancedBitstring> {
    if p1.n() != p2.n() {
        return Err(Error::LengthMismatch {
            left: p1.n(),
            right: p2.n(),
        });
    }
    let perm = PositionPermutation::random(p1.n(), rng);
    shuffle_cross_using(&perm, op, p1, p2, rng)
}

/// Dispatches a balanced crossover selection to its left-to-right or
/// shuffled form.
pub fn balanced_cross(
    kind: CrossoverKind,
    p1: &BalancedBitstring,
    p2: &BalancedBitstring,
    rng: &mut impl Rng,
) -> Result<BalancedBitstring> {
    if kind.shuffled() {
        with_shuffle(kind.op(), p1, p2, rng)
    } else {
        left_to_right_cross(kind.op(), p1, p2, rng)
    }
}

/// Swap mutation: with probability `p_m`, exchanges one uniformly chosen
/// one-position with one uniformly chosen zero-position, preserving the
/// Hamming weight. All-zero and all-one strings are returned unchanged (no
/// distinct pair exists).
pub fn swap_mutation(child: BalancedBitstring, p_m: f64, rng: &mut impl Rng) -> BalancedBitstring {
    let k = child.weight();
    let n = child.n();
    if k == 0 || k == n || !rng.gen_bool(p_m) {
        return child;
    }
    let one_target = rng.gen_range(0..k);
    let zero_target = rng.gen_range(0..n - k);
    let mut bits = child.into_bits();
    let mut ones_seen = 0usize;
    let mut zeros_seen = 0usize;
    let mut one_pos = None;
    let mut zero_pos = None;
    for i in 0..n {
        if bits.get(i) {
            if ones_seen == one_target {
                one_pos = Some(i);
            }
            ones_seen += 1;
        } else {
            if zeros_seen == zero_target {
                zero_pos = Some(i);
            }
            zeros_seen += 1;
        }
    }
    let (i, j) = (one_pos.unwrap(), zero_pos.unwrap());
    bits.set(i, false);
    bits.set(j, true);
    BalancedBitstring::new(bits)
}

/// Bit-flip mutation: with probability `p_m`, flips one uniformly chosen
/// bit; otherwise the child is returned unchanged.
pub fn bit_flip_mutation(child: Bitstring, p_m: f64, rng: &mut impl Rng) -> Bitstring {
    if child.is_empty() || !rng.gen_bool(p_m) {
        return child;
    }
    let mut bits = child;
    let i = rng.gen_range(0..bits.len());
    let flipped = !bits.get(i);
    bits.set(i, flipped);
    bits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::random_balanced;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn bs(s: &str) -> Bitstring {
        s.parse().unwrap()
    }

    fn bal(s: &str) -> BalancedBitstring {
        BalancedBitstring::new(bs(s))
    }

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn crossover_kind_codes_round_trip() {
        for kind in CrossoverKind::ALL {
            assert_eq!(kind.code().parse::<CrossoverKind>().unwrap(), kind);
        }
        assert!("xx".parse::<CrossoverKind>().is_err());
        assert!("op-s".parse::<CrossoverKind>().is_err());
        assert!(CrossoverKind::new(CrossoverOp::OnePoint, true).is_err());
        assert!(!CrossoverKind::ONE_POINT.is_balanced());
        assert!(CrossoverKind::MAP_OF_ONES_SHUFFLED.is_balanced());
    }

    #[test]
    fn one_point_kernel_examples() {
        assert_eq!(
            one_point_kernel(&bs("0000"), &bs("1111"), 2, true),
            bs("0011")
        );
        let x = bs("0110");
        assert_eq!(one_point_kernel(&x, &x, 1, true), x);
        assert_eq!(one_point_kernel(&x, &x, 3, false), x);
    }

    #[test]
    fn one_point_enumerates_six_children_for_complementary_parents() {
        // All cuts in {1,2,3} x both child choices for p1=1100, p2=0011.
        let p1 = bs("1100");
        let p2 = bs("0011");
        let mut expected = BTreeSet::new();
        for (cut, take_first, child) in [
            (1, true, "1011"),
            (1, false, "0100"),
            (2, true, "1111"),
            (2, false, "0000"),
            (3, true, "1101"),
            (3, false, "0010"),
        ] {
            assert_eq!(one_point_kernel(&p1, &p2, cut, take_first), bs(child));
            expected.insert(child.to_string());
        }
        assert_eq!(expected.len(), 6);
        // The random path only ever produces those six children, and with
        // 600 draws it produces all of them.
        let mut r = rng(42);
        let mut seen = BTreeSet::new();
        for _ in 0..600 {
            let child = one_point_crossover(&p1, &p2, &mut r).unwrap();
            seen.insert(child.to_string());
        }
        assert_eq!(seen, expected);
        // Weight is not always preserved: a weight-4 child is reachable.
        assert!(expected.contains("1111"));
    }

    #[test]
    fn one_point_rejects_bad_inputs() {
        let mut r = rng(0);
        assert!(matches!(
            one_point_crossover(&bs("01"), &bs("010"), &mut r),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            one_point_crossover(&bs("1"), &bs("0"), &mut r),
            Err(Error::TooShort(1))
        ));
    }

    /// Independent re-implementation of the counter-based pseudocode,
    /// consuming one scripted choice per undecided locus.
    fn counter_reference(p1: &[bool], p2: &[bool], k: usize, choices: &[bool]) -> Vec<bool> {
        let n = p1.len();
        let mut s = 0;
        let mut t = 0;
        let mut c = vec![false; n];
        let mut next = 0;
        for i in 0..n {
            if s == k {
                c[i] = false;
            } else if t == n - k {
                c[i] = true;
            } else {
                c[i] = if choices[next] { p1[i] } else { p2[i] };
                next += 1;
                if c[i] {
                    s += 1;
                } else {
                    t += 1;
                }
            }
        }
        c
    }

    fn scripted(choices: &[bool]) -> impl FnMut() -> bool + '_ {
        let mut it = choices.iter().copied();
        move || it.next().expect("script exhausted")
    }

    #[test]
    fn counter_cross_matches_reference_for_every_choice_sequence() {
        let mut r = rng(5);
        for n in 2..=6usize {
            for k in 0..=n {
                for _ in 0..20 {
                    let p1 = random_balanced(n, k, &mut r);
                    let p2 = random_balanced(n, k, &mut r);
                    for seq in 0u32..(1 << n) {
                        let choices: Vec<bool> = (0..n).map(|i| seq & (1 << i) != 0).collect();
                        let got = counter_cross_kernel(
                            p1.bits().as_slice(),
                            p2.bits().as_slice(),
                            k,
                            scripted(&choices),
                        );
                        let want = counter_reference(
                            p1.bits().as_slice(),
                            p2.bits().as_slice(),
                            k,
                            &choices,
                        );
                        assert_eq!(got, want);
                        assert_eq!(got.iter().filter(|&&b| b).count(), k);
                    }
                }
            }
        }
    }

    #[test]
    fn counter_cross_reaches_all_six_children() {
        // p1=1100, p2=0011: every weight-2 string of length 4 is reachable.
        let p1 = bal("1100");
        let p2 = bal("0011");
        let mut children = BTreeSet::new();
        for seq in 0u32..16 {
            let choices: Vec<bool> = (0..4).map(|i| seq & (1 << i) != 0).collect();
            let child = counter_cross_kernel(
                p1.bits().as_slice(),
                p2.bits().as_slice(),
                2,
                scripted(&choices),
            );
            children.insert(Bitstring::new(child).to_string());
        }
        let all_weight_two: BTreeSet<String> = ["1100", "0011", "1010", "1001", "0110", "0101"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(children, all_weight_two);
    }

    #[test]
    fn counter_cross_identical_parents_fixpoint() {
        let mut r = rng(1);
        for &(n, k) in &[(8, 4), (20, 7), (64, 32)] {
            let x = random_balanced(n, k, &mut r);
            for _ in 0..10 {
                assert_eq!(counter_cross(&x, &x, &mut r).unwrap(), x);
            }
        }
    }

    #[test]
    fn counter_cross_weight_guarantee_large() {
        let mut r = rng(2);
        let p1 = random_balanced(128, 64, &mut r);
        let p2 = random_balanced(128, 64, &mut r);
        for _ in 0..100 {
            assert_eq!(counter_cross(&p1, &p2, &mut r).unwrap().weight(), 64);
        }
    }

    #[test]
    fn counter_cross_rejects_mismatched_parents() {
        let mut r = rng(3);
        assert!(matches!(
            counter_cross(&bal("1100"), &bal("110100"), &mut r),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            counter_cross(&bal("1100"), &bal("1110"), &mut r),
            Err(Error::WeightMismatch { .. })
        ));
    }

    fn zl(runs: &[usize], n: usize, k: usize) -> ZeroLengthsCoding {
        ZeroLengthsCoding::new(runs.to_vec(), n, k).unwrap()
    }

    #[test]
    fn zero_lengths_identical_parents_fixpoint() {
        let mut r = rng(4);
        for &(n, k) in &[(8, 4), (16, 5), (64, 32)] {
            let x = random_balanced(n, k, &mut r);
            let coding = crate::encodings::encode_zero_lengths(&x);
            for _ in 0..10 {
                assert_eq!(
                    zero_lengths_cross(&coding, &coding, &mut r).unwrap(),
                    coding
                );
            }
        }
    }

    #[test]
    fn zero_lengths_forced_branches() {
        // p1 = (0,0,0,0,4), p2 = (4,0,0,0,0), n=8, k=4. The first parent
        // choice fully determines the child.
        let p1 = [0, 0, 0, 0, 4];
        let p2 = [4, 0, 0, 0, 0];
        // First coin picks p2: its run of 4 saturates the budget at once.
        let child = zero_lengths_kernel(&p1, &p2, 8, 4, scripted(&[false]));
        assert_eq!(child, vec![4, 0, 0, 0, 0]);
        // First coin picks p1: every later entry is 0 in both parents, so
        // the remaining coins are irrelevant and the tail pads with 4.
        for seq in 0u32..8 {
            let choices: Vec<bool> = std::iter::once(true)
                .chain((0..3).map(|i| seq & (1 << i) != 0))
                .collect();
            let child = zero_lengths_kernel(&p1, &p2, 8, 4, scripted(&choices));
            assert_eq!(child, vec![0, 0, 0, 0, 4]);
        }
    }

    #[test]
    fn zero_lengths_sum_invariant_random_parents() {
        let mut r = rng(6);
        for &(n, k) in &[(8, 4), (64, 32), (64, 28), (16, 8), (9, 2)] {
            for _ in 0..500 {
                let a = crate::encodings::encode_zero_lengths(&random_balanced(n, k, &mut r));
                let b = crate::encodings::encode_zero_lengths(&random_balanced(n, k, &mut r));
                let child = zero_lengths_cross(&a, &b, &mut r).unwrap();
                assert_eq!(child.runs().iter().sum::<usize>(), n - k);
                assert_eq!(child.runs().len(), k + 1);
            }
        }
    }

    #[test]
    fn zero_lengths_rejects_mismatched_parents() {
        let mut r = rng(7);
        assert!(zero_lengths_cross(&zl(&[0, 4], 5, 1), &zl(&[0, 3], 4, 1), &mut r).is_err());
        assert!(zero_lengths_cross(&zl(&[4, 0], 5, 1), &zl(&[1, 1, 1], 5, 2), &mut r).is_err());
    }

    /// Drives the map-of-ones kernel over every possible choice sequence,
    /// recursively branching on parent and index draws.
    fn enumerate_moo_children(p1: &[usize], p2: &[usize], n: usize) -> Vec<Vec<usize>> {
        fn recurse(
            script: &mut Vec<(bool, usize)>,
            depth: usize,
            p1: &[usize],
            p2: &[usize],
            n: usize,
            out: &mut Vec<Vec<usize>>,
        ) {
            if depth == p1.len() {
                struct ScriptedChoices {
                    steps: Vec<(bool, usize)>,
                    pos: usize,
                    pending: Option<usize>,
                }
                impl MooChoices for ScriptedChoices {
                    fn pick_first(&mut self) -> bool {
                        let (first, idx) = self.steps[self.pos];
                        self.pos += 1;
                        self.pending = Some(idx);
                        first
                    }
                    fn pick_index(&mut self, len: usize) -> usize {
                        let idx = self.pending.take().unwrap();
                        assert!(idx < len, "scripted index within remaining entries");
                        idx
                    }
                }
                let mut choices = ScriptedChoices {
                    steps: script.clone(),
                    pos: 0,
                    pending: None,
                };
                let child = map_of_ones_kernel(p1.to_vec(), p2.to_vec(), n, &mut choices);
                out.push(child);
                return;
            }
            // Replay the prefix to learn the current list lengths.
            let (mut l1, mut l2) = (p1.to_vec(), p2.to_vec());
            let mut common: Vec<usize> = p1.iter().filter(|v| p2.contains(v)).copied().collect();
            for &(first, idx) in script.iter() {
                let (chosen, other) = if first {
                    (&mut l1, &mut l2)
                } else {
                    (&mut l2, &mut l1)
                };
                let value = chosen.remove(idx);
                if common.contains(&value) {
                    common.retain(|&v| v != value);
                    other.retain(|&v| v != value);
                }
            }
            for first in [true, false] {
                let len = if first { l1.len() } else { l2.len() };
                for idx in 0..len {
                    script.push((first, idx));
                    recurse(script, depth + 1, p1, p2, n, out);
                    script.pop();
                }
            }
        }
        let mut out = Vec::new();
        recurse(&mut Vec::new(), 0, p1, p2, n, &mut out);
        out
    }

    #[test]
    fn map_of_ones_enumeration_distinct_positions() {
        // Disjoint parents: every reachable child is a 2-subset of {1..4},
        // and all six subsets are reachable.
        let children = enumerate_moo_children(&[1, 2], &[3, 4], 4);
        let mut subsets = BTreeSet::new();
        for child in &children {
            assert_eq!(child.len(), 2);
            let set: BTreeSet<usize> = child.iter().copied().collect();
            assert_eq!(set.len(), 2, "duplicate position in {child:?}");
            subsets.insert(set);
        }
        assert_eq!(subsets.len(), 6);

        // Overlapping parents keep distinctness too.
        for child in enumerate_moo_children(&[1, 2, 3], &[2, 3, 4], 4) {
            let set: BTreeSet<usize> = child.iter().copied().collect();
            assert_eq!(set.len(), 3, "duplicate position in {child:?}");
        }
    }

    #[test]
    fn map_of_ones_identical_parents_fixpoint() {
        let mut r = rng(8);
        let q = MapOfOnes::new(vec![2, 5, 6, 8], 8).unwrap();
        for _ in 0..50 {
            let child = map_of_ones_cross(q.clone(), q.clone(), &mut r).unwrap();
            let mut sorted = child.positions().to_vec();
            sorted.sort_unstable();
            assert_eq!(sorted, vec![2, 5, 6, 8]);
            assert_eq!(decode_map_of_ones(&child), decode_map_of_ones(&q));
        }
        // Order of the stored positions is irrelevant.
        let shuffled = MapOfOnes::new(vec![8, 2, 6, 5], 8).unwrap();
        let child = map_of_ones_cross(q.clone(), shuffled, &mut r).unwrap();
        assert_eq!(decode_map_of_ones(&child).bits(), &bs("01001101"));
    }

    #[test]
    fn map_of_ones_rejects_mismatched_parents() {
        let mut r = rng(9);
        let a = MapOfOnes::new(vec![1, 2], 4).unwrap();
        let b = MapOfOnes::new(vec![1, 2, 3], 4).unwrap();
        let c = MapOfOnes::new(vec![1, 2], 5).unwrap();
        assert!(map_of_ones_cross(a.clone(), b, &mut r).is_err());
        assert!(map_of_ones_cross(a, c, &mut r).is_err());
    }

    #[test]
    fn shuffle_identity_matches_left_to_right() {
        // With the identity permutation and the same random stream, the
        // shuffled path is bitwise identical to the plain operator.
        let mut seed_rng = rng(10);
        for op in [
            CrossoverOp::CounterBased,
            CrossoverOp::ZeroLengths,
            CrossoverOp::MapOfOnes,
        ] {
            for &(n, k) in &[(8, 4), (16, 8), (64, 28)] {
                let p1 = random_balanced(n, k, &mut seed_rng);
                let p2 = random_balanced(n, k, &mut seed_rng);
                for trial in 0..20u64 {
                    let mut r1 = rng(1000 + trial);
                    let mut r2 = rng(1000 + trial);
                    let direct = left_to_right_cross(op, &p1, &p2, &mut r1).unwrap();
                    let via_identity = shuffle_cross_using(
                        &PositionPermutation::identity(n),
                        op,
                        &p1,
                        &p2,
                        &mut r2,
                    )
                    .unwrap();
                    assert_eq!(direct, via_identity);
                }
            }
        }
    }

    #[test]
    fn shuffle_identical_parents_fixpoint() {
        let mut r = rng(11);
        let x = random_balanced(16, 8, &mut r);
        for _ in 0..50 {
            assert_eq!(
                with_shuffle(CrossoverOp::CounterBased, &x, &x, &mut r).unwrap(),
                x
            );
        }
    }

    #[test]
    fn shuffle_preserves_weight() {
        let mut r = rng(12);
        for op in [
            CrossoverOp::CounterBased,
            CrossoverOp::ZeroLengths,
            CrossoverOp::MapOfOnes,
        ] {
            for &(n, k) in &[(8, 4), (64, 32), (64, 28), (16, 8)] {
                for _ in 0..200 {
                    let p1 = random_balanced(n, k, &mut r);
                    let p2 = random_balanced(n, k, &mut r);
                    assert_eq!(with_shuffle(op, &p1, &p2, &mut r).unwrap().weight(), k);
                }
            }
        }
    }

    #[test]
    fn permutation_apply_unapply_inverse() {
        let mut r = rng(13);
        for n in [1usize, 2, 7, 32] {
            let perm = PositionPermutation::random(n, &mut r);
            let x = Bitstring::random(n, &mut r);
            assert_eq!(perm.unapply(&perm.apply(&x)), x);
        }
        assert!(PositionPermutation::new(vec![0, 0]).is_err());
        assert!(PositionPermutation::new(vec![1, 2]).is_err());
        assert!(PositionPermutation::new(vec![2, 0, 1]).is_ok());
    }

    #[test]
    fn balanced_cross_rejects_one_point() {
        let mut r = rng(14);
        let x = bal("1100");
        assert!(balanced_cross(CrossoverKind::ONE_POINT, &x, &x, &mut r).is_err());
    }

    #[test]
    fn swap_mutation_examples() {
        let mut r = rng(15);
        let x = bal("1100");
        assert_eq!(swap_mutation(x.clone(), 0.0, &mut r), x);
        assert_eq!(swap_mutation(bal("10"), 1.0, &mut r), bal("01"));
        // All-one and all-zero strings cannot be swapped.
        assert_eq!(swap_mutation(bal("111"), 1.0, &mut r), bal("111"));
        assert_eq!(swap_mutation(bal("000"), 1.0, &mut r), bal("000"));
    }

    #[test]
    fn swap_mutation_uniform_over_pairs() {
        // p_m = 1 on 1100: four equally likely outcomes.
        let mut r = rng(16);
        let mut counts = std::collections::BTreeMap::new();
        let trials = 40_000usize;
        for _ in 0..trials {
            let out = swap_mutation(bal("1100"), 1.0, &mut r).to_string();
            *counts.entry(out).or_insert(0usize) += 1;
        }
        let expected: BTreeSet<String> = ["0110", "0101", "1010", "1001"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(counts.keys().cloned().collect::<BTreeSet<_>>(), expected);
        for &c in counts.values() {
            let freq = c as f64 / trials as f64;
            assert!((freq - 0.25).abs() < 0.02, "frequency {freq} far from 1/4");
        }
    }

    #[test]
    fn swap_mutation_preserves_weight() {
        let mut r = rng(17);
        for _ in 0..1_000 {
            let x = random_balanced(31, 11, &mut r);
            assert_eq!(swap_mutation(x, 0.7, &mut r).weight(), 11);
        }
    }

    #[test]
    fn bit_flip_mutation_examples() {
        let mut r = rng(18);
        assert_eq!(bit_flip_mutation(bs("0110"), 0.0, &mut r), bs("0110"));
        assert_eq!(bit_flip_mutation(bs("0"), 1.0, &mut r), bs("1"));
        let mut seen = BTreeSet::new();
        let mut ones = 0usize;
        let trials = 10_000usize;
        for _ in 0..trials {
            let out = bit_flip_mutation(bs("00"), 1.0, &mut r).to_string();
            if out == "10" {
                ones += 1;
            }
            seen.insert(out);
        }
        assert_eq!(
            seen,
            ["10", "01"]
                .iter()
                .map(|s| s.to_string())
                .collect::<BTreeSet<_>>()
        );
        let freq = ones as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 0.03);
    }
}
