//! Sensitivity and block sensitivity.
//!
//! `block_sensitivity` works per input `X`: it lists the sensitive blocks,
//! prunes them to the minimal ones by deleting every proper superset of each
//! surviving block (ascending mask order visits subsets first), and then
//! packs disjoint minimal blocks with the memoized recursion
//! `theta(Q) = 1 + max_{B minimal, B ⊆ Q} theta(Q - B)` (0 when no minimal
//! block fits in `Q`).

use crate::error::{Error, Result};
use crate::restriction_lattice::{pow3, Digits};
use crate::truth_table::{full_mask, Block};
use crate::TruthTable;

/// Largest `n` accepted by [`oracle_block_sensitivity`].
pub const ORACLE_MAX_VARS: usize = 12;

/// Dense ordered set of block masks `1..2^n`.
struct MaskSet {
    words: Vec<u64>,
}

impl MaskSet {
    fn empty(n: usize) -> Self {
        Self {
            words: vec![0; (1usize << n).div_ceil(64)],
        }
    }

    #[inline]
    fn contains(&self, m: u32) -> bool {
        self.words[(m >> 6) as usize] >> (m & 63) & 1 == 1
    }

    #[inline]
    fn insert(&mut self, m: u32) {
        self.words[(m >> 6) as usize] |= 1 << (m & 63);
    }

    #[inline]
    fn remove(&mut self, m: u32) {
        self.words[(m >> 6) as usize] &= !(1 << (m & 63));
    }

    /// Smallest member strictly greater than `after`.
    fn next_after(&self, after: u32) -> Option<u32> {
        let start = after as usize + 1;
        let mut wi = start / 64;
        if wi >= self.words.len() {
            return None;
        }
        let mut w = self.words[wi] & (u64::MAX << (start % 64));
        loop {
            if w != 0 {
                return Some((wi * 64) as u32 + w.trailing_zeros());
            }
            wi += 1;
            if wi >= self.words.len() {
                return None;
            }
            w = self.words[wi];
        }
    }
}

/// How the recursion finds the minimal blocks contained in `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ThetaStrategy {
    /// Scan the input's minimal block list and mask-test each block.
    #[default]
    Scan,
    /// Materialize `L_S` for every nonempty `S` before recursing.
    MaterializedLists,
}

/// Minimal blocks per input code, each list in ascending mask order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalBlockSet {
    pub per_input: Vec<Vec<Block>>,
}

impl MinimalBlockSet {
    /// `sums[k-1] = sum_X m(X, k)`.
    pub fn size_counts(&self, n: usize) -> Vec<u64> {
        let mut sums = vec![0u64; n];
        for blocks in &self.per_input {
            for b in blocks {
                sums[b.len() - 1] += 1;
            }
        }
        sums
    }
}

fn sensitive_set(f: &TruthTable, x: u32) -> MaskSet {
    let n = f.n();
    let fx = f.get(x);
    let mut set = MaskSet::empty(n);
    for b in 1..(1u32 << n) {
        if f.get(x ^ b) != fx {
            set.insert(b);
        }
    }
    set
}

/// All nonempty `B` with `f(x) != f(x XOR B)`, ascending.
pub fn sensitive_blocks(f: &TruthTable, x: u32) -> Vec<Block> {
    let fx = f.get(x);
    (1..(1u32 << f.n()))
        .filter(|&b| f.get(x ^ b) != fx)
        .map(Block)
        .collect()
}

/// The sensitive blocks of `x` with no proper sensitive sub-block, ascending.
pub fn minimal_blocks(f: &TruthTable, x: u32) -> Vec<Block> {
    let full = f.full_mask();
    let mut set = sensitive_set(f, x);
    let mut out = Vec::new();
    let mut cur = 0u32;
    while let Some(b) = set.next_after(cur) {
        out.push(Block(b));
        // Remove every proper superset b | s, s a nonempty submask of !b.
        let rest = full & !b;
        let mut s = rest;
        while s != 0 {
            set.remove(b | s);
            s = (s - 1) & rest;
        }
        cur = b;
    }
    out
}

pub fn minimal_block_set(f: &TruthTable) -> MinimalBlockSet {
    MinimalBlockSet {
        per_input: (0..f.len() as u32).map(|x| minimal_blocks(f, x)).collect(),
    }
}

struct Theta<'a> {
    blocks: &'a [Block],
    lists: Option<Vec<Vec<u32>>>,
    memo: Vec<u8>,
}

const UNKNOWN: u8 = u8::MAX;

impl Theta<'_> {
    fn eval(&mut self, q: u32) -> u8 {
        let cached = self.memo[q as usize];
        if cached != UNKNOWN {
            return cached;
        }
        let mut best = 0u8;
        match &self.lists {
            Some(lists) => {
                for k in 0..lists[q as usize].len() {
                    let b = self.lists.as_ref().unwrap()[q as usize][k];
                    best = best.max(1 + self.eval(q & !b));
                }
            }
            None => {
                for k in 0..self.blocks.len() {
                    let b = self.blocks[k].mask();
                    if b & !q == 0 {
                        best = best.max(1 + self.eval(q & !b));
                    }
                }
            }
        }
        self.memo[q as usize] = best;
        best
    }
}

fn theta_root(n: usize, blocks: &[Block], strategy: ThetaStrategy) -> usize {
    let full = full_mask(n);
    let lists = match strategy {
        ThetaStrategy::Scan => None,
        ThetaStrategy::MaterializedLists => {
            let mut lists = vec![Vec::new(); 1usize << n];
            for b in blocks {
                let rest = full & !b.mask();
                let mut s = rest;
                loop {
                    lists[(b.mask() | s) as usize].push(b.mask());
                    if s == 0 {
                        break;
                    }
                    s = (s - 1) & rest;
                }
            }
            Some(lists)
        }
    };
    let mut th = Theta {
        blocks,
        lists,
        memo: vec![UNKNOWN; 1usize << n],
    };
    th.eval(full) as usize
}

/// `bs_x(f)`: the largest number of disjoint sensitive blocks at `x`.
pub fn block_sensitivity_at(f: &TruthTable, x: u32) -> usize {
    block_sensitivity_at_with(f, x, ThetaStrategy::Scan)
}

pub fn block_sensitivity_at_with(f: &TruthTable, x: u32, strategy: ThetaStrategy) -> usize {
    let blocks = minimal_blocks(f, x);
    theta_root(f.n(), &blocks, strategy)
}

/// `bs(f)`, the maximum of `bs_x(f)` over all inputs.
pub fn block_sensitivity(f: &TruthTable) -> usize {
    block_sensitivity_with(f, ThetaStrategy::Scan)
}

pub fn block_sensitivity_with(f: &TruthTable, strategy: ThetaStrategy) -> usize {
    // No input can exceed n, so stop early once it is reached.
    let mut best = 0;
    for x in 0..f.len() as u32 {
        best = best.max(block_sensitivity_at_with(f, x, strategy));
        if best == f.n() {
            break;
        }
    }
    best
}

/// `s(f)`: the largest number of sensitive single variables at any input.
pub fn sensitivity(f: &TruthTable) -> usize {
    let n = f.n();
    (0..f.len() as u32)
        .map(|x| (0..n).filter(|&i| f.get(x ^ (1 << i)) != f.get(x)).count())
        .max()
        .unwrap_or(0)
}

/// Block sensitivity by packing arbitrary sensitive blocks with a subset
/// DP, independent of the minimal-block machinery. `O(2^n 3^n)`.
pub fn oracle_block_sensitivity(f: &TruthTable) -> Result<usize> {
    let n = f.n();
    if n > ORACLE_MAX_VARS {
        return Err(Error::TooLarge {
            what: "block sensitivity oracle",
            n,
            max: ORACLE_MAX_VARS,
        });
    }
    let size = 1usize << n;
    let mut pack = vec![0u8; size];
    let mut best = 0u8;
    for x in 0..size as u32 {
        let sens = sensitive_set(f, x);
        pack[0] = 0;
        for q in 1..size as u32 {
            // Either the lowest variable of q is left uncovered, or it lies
            // in the block chosen for the packing.
            let low = q & q.wrapping_neg();
            let mut v = pack[(q ^ low) as usize];
            let rest = q ^ low;
            let mut s = rest;
            loop {
                let b = s | low;
                if sens.contains(b) {
                    v = v.max(1 + pack[(q ^ b) as usize]);
                }
                if s == 0 {
                    break;
                }
                s = (s - 1) & rest;
            }
            pack[q as usize] = v;
        }
        best = best.max(pack[size - 1]);
    }
    Ok(best as usize)
}

/// `sum_X m(X, k)` for `k = 1..=n`, with the corresponding upper bounds
/// `2^(n-k+1) C(n, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCensus {
    pub sums: Vec<u64>,
    pub bounds: Vec<u64>,
}

impl BlockCensus {
    pub fn within_bounds(&self) -> bool {
        self.sums.iter().zip(&self.bounds).all(|(s, b)| s <= b)
    }

    /// First `k` whose count exceeds its bound.
    pub fn first_violation(&self) -> Option<usize> {
        self.sums
            .iter()
            .zip(&self.bounds)
            .position(|(s, b)| s > b)
            .map(|i| i + 1)
    }
}

pub fn census_bounds(n: usize) -> Vec<u64> {
    (1..=n)
        .map(|k| (1u64 << (n - k + 1)) * binomial(n as u64, k as u64))
        .collect()
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Census of minimal blocks by size.
///
/// `B` is minimal on `X` exactly when, on the subcube through `X` spanned by
/// `B`, the function keeps the value `f(X)` everywhere except at the far
/// corner `X(B)`. So for `k >= 2` every `k`-dimensional subcube whose
/// restriction has exactly one odd point contributes one minimal block, and
/// each sensitive edge (`k = 1`) contributes two. Counting accepting points
/// over all `3^n` subcubes yields the census without per-input lists.
pub fn minimal_block_census(f: &TruthTable) -> BlockCensus {
    let n = f.n();
    let p3 = pow3(n);
    let total = p3[n];
    let mut ones = vec![0u32; total];
    let mut sums = vec![0u64; n];
    let mut d = Digits::zero(n);
    for t in 0..total {
        ones[t] = if d.free == 0 {
            f.get(d.ones) as u32
        } else {
            let i = d.free.trailing_zeros() as usize;
            ones[t - 2 * p3[i]] + ones[t - p3[i]]
        };
        let k = d.free.count_ones() as usize;
        if k == 1 {
            if ones[t] == 1 {
                sums[0] += 2;
            }
        } else if k >= 2 {
            let c = ones[t];
            if c == 1 || c == (1u32 << k) - 1 {
                sums[k - 1] += 1;
            }
        }
        if t + 1 < total {
            d.increment();
        }
    }
    BlockCensus {
        sums,
        bounds: census_bounds(n),
    }
}
