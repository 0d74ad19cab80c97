//! Symmetry and quasisymmetry (symmetry after negating some inputs).
//!
//! The linear-time test recurses over left restrictions: the node that has
//! fixed `x1..xz` merges the answers for `x(z+1) = 0` and `x(z+1) = 1`.
//! Each answer is a compact class of size `O(n - z)`:
//!
//! * a constant,
//! * `p XOR x(z+1) XOR ... XOR xn`, which is symmetric under every flip set,
//! * a generic profile with a flip mask, whose only other valid mask is the
//!   complement (any two non-complementary valid masks force one of the
//!   first two classes).

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::truth_table::{full_mask, Block};
use crate::TruthTable;

/// Largest `n` accepted by [`quasisymmetry_oracle`].
pub const ORACLE_MAX_VARS: usize = 14;

/// Output per Hamming weight after negating the inputs in `flip_mask`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymmetricProfile {
    pub values: Vec<bool>,
    pub flip_mask: Block,
}

impl SymmetricProfile {
    /// Rebuilds the function this profile describes on `values.len() - 1`
    /// variables.
    pub fn to_truth_table(&self) -> TruthTable {
        let n = self.values.len() - 1;
        let m = self.flip_mask.mask();
        TruthTable::from_fn(n, |x| self.values[(x ^ m).count_ones() as usize]).expect("n in range")
    }
}

/// Weight profile of a function that is symmetric as given.
pub fn weight_profile(f: &TruthTable) -> Option<Vec<bool>> {
    let mut values: Vec<Option<bool>> = vec![None; f.n() + 1];
    for x in 0..f.len() as u32 {
        let w = x.count_ones() as usize;
        let v = f.get(x);
        match values[w] {
            None => values[w] = Some(v),
            Some(u) if u != v => return None,
            _ => {}
        }
    }
    Some(values.into_iter().map(|v| v.unwrap()).collect())
}

pub fn is_symmetric(f: &TruthTable) -> Option<SymmetricProfile> {
    weight_profile(f).map(|values| SymmetricProfile {
        values,
        flip_mask: Block(0),
    })
}

/// Profile as bits: bit `w` is the value at weight `w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Class {
    Const(bool),
    /// `parity XOR (xor of all free variables)`; needs at least one variable.
    Xor(bool),
    /// Symmetric after flipping `mask`, with `profile` over weights `0..=k`.
    Generic {
        profile: u32,
        mask: u32,
    },
}

fn bit(p: u32, w: usize) -> bool {
    p >> w & 1 == 1
}

/// Profile of a class on `k` variables when `mask` is flipped; `None` if
/// the class is generic and `mask` is not one of its two masks.
fn profile_under(class: Class, k: usize, mask: u32, all: u32) -> Option<u32> {
    let weights = (1u32 << (k + 1)) - 1;
    match class {
        Class::Const(c) => Some(if c { weights } else { 0 }),
        Class::Xor(p) => {
            let start = p ^ (mask.count_ones() % 2 == 1);
            // alternate starting from `start` at weight 0
            let alt = 0xAAAA_AAAAu32 & weights;
            Some(if start { !alt & weights } else { alt })
        }
        Class::Generic { profile, mask: m } => {
            if mask == m {
                Some(profile)
            } else if mask == m ^ all {
                Some(reverse(profile, k))
            } else {
                None
            }
        }
    }
}

fn reverse(profile: u32, k: usize) -> u32 {
    (0..=k).fold(0, |acc, w| acc | ((profile >> w & 1) << (k - w)))
}

fn classify(profile: u32, k: usize, mask: u32) -> Class {
    let weights = (1u32 << (k + 1)) - 1;
    let alt = 0xAAAA_AAAAu32 & weights;
    if profile == 0 {
        Class::Const(false)
    } else if profile == weights {
        Class::Const(true)
    } else if profile == alt {
        Class::Xor(false)
    } else if profile == !alt & weights {
        Class::Xor(true)
    } else {
        Class::Generic { profile, mask }
    }
}

/// Merges the classes of `R|x=0` and `R|x=1`, both on the `k - 1`
/// variables `var+1..n` (bit positions `var+1..` of the masks), into the
/// class of `R` on `k` variables.
fn merge(lo: Class, hi: Class, var: usize, k: usize) -> Option<Class> {
    let n_rest = k - 1;
    let all_rest = full_mask(var + k) & !full_mask(var + 1);
    // Candidate masks for the remaining variables: the generic child's mask
    // (its complement only produces the complementary answer), or, when both
    // children are special, one mask of each parity.
    let candidates: Vec<u32> = match (lo, hi) {
        (Class::Generic { mask, .. }, _) | (_, Class::Generic { mask, .. }) => vec![mask],
        _ if n_rest == 0 => vec![0],
        _ => vec![0, 1 << (var + 1)],
    };
    for rest_mask in candidates {
        let (Some(p0), Some(p1)) = (
            profile_under(lo, n_rest, rest_mask, all_rest),
            profile_under(hi, n_rest, rest_mask, all_rest),
        ) else {
            continue;
        };
        // Not flipping x: R(0, y) = h(|y|), R(1, y) = h(|y| + 1).
        if (0..n_rest).all(|w| bit(p0, w + 1) == bit(p1, w)) {
            let h = p0 | (bit(p1, n_rest) as u32) << k;
            return Some(classify(h, k, rest_mask));
        }
        // Flipping x: R(0, y) = h(|y| + 1), R(1, y) = h(|y|).
        if (0..n_rest).all(|w| bit(p1, w + 1) == bit(p0, w)) {
            let h = p1 | (bit(p0, n_rest) as u32) << k;
            return Some(classify(h, k, rest_mask | 1 << var));
        }
    }
    None
}

struct Recursion<'a> {
    f: &'a TruthTable,
    n: usize,
    /// Merge invocations, exposed for work accounting.
    merges: u64,
}

impl Recursion<'_> {
    /// Class of the restriction fixing `x1..xz` to the low `z` bits of `v`.
    fn solve(&mut self, z: usize, v: u32) -> Option<Class> {
        if z == self.n {
            return Some(Class::Const(self.f.get(v)));
        }
        let lo = self.solve(z + 1, v)?;
        let hi = self.solve(z + 1, v | 1 << z)?;
        self.merges += 1;
        merge(lo, hi, z, self.n - z)
    }
}

/// Linear-time quasisymmetry test.
///
/// Constants and parity functions report the empty mask. Otherwise exactly
/// two complementary masks are valid, with mutually reversed profiles; the
/// one whose profile has value 0 at weight 0 is reported (the smaller mask
/// when both ends agree).
pub fn quasisymmetry(f: &TruthTable) -> Option<SymmetricProfile> {
    quasisymmetry_counted(f).0
}

/// As [`quasisymmetry`], also returning the number of merge steps taken.
pub fn quasisymmetry_counted(f: &TruthTable) -> (Option<SymmetricProfile>, u64) {
    let n = f.n();
    let mut rec = Recursion { f, n, merges: 0 };
    let class = rec.solve(0, 0);
    let all = full_mask(n);
    let weights = full_mask(n + 1);
    let out = class.map(|c| {
        let (profile, mask) = match c {
            Class::Const(v) => (if v { weights } else { 0 }, 0),
            Class::Xor(p) => {
                let alt = 0xAAAA_AAAAu32 & weights;
                (if p { !alt & weights } else { alt }, 0)
            }
            Class::Generic { profile, mask } => {
                // The two valid masks give reversed profiles: prefer the one
                // whose profile starts at 0, then the smaller mask.
                let (first, last) = (bit(profile, 0), bit(profile, n));
                let swap = if first != last {
                    first
                } else {
                    mask ^ all < mask
                };
                if swap {
                    (reverse(profile, n), mask ^ all)
                } else {
                    (profile, mask)
                }
            }
        };
        SymmetricProfile {
            values: (0..=n).map(|w| bit(profile, w)).collect(),
            flip_mask: Block(mask),
        }
    });
    (out, rec.merges)
}

/// Every flip mask that makes `f` symmetric, by testing all `2^n` masks.
pub fn quasisymmetry_oracle(f: &TruthTable) -> Result<BTreeSet<Block>> {
    let n = f.n();
    if n > ORACLE_MAX_VARS {
        return Err(Error::TooLarge {
            what: "quasisymmetry oracle",
            n,
            max: ORACLE_MAX_VARS,
        });
    }
    let mut out = BTreeSet::new();
    'mask: for mask in 0..(1u32 << n) {
        let mut values: [Option<bool>; 33] = [None; 33];
        for x in 0..f.len() as u32 {
            let w = (x ^ mask).count_ones() as usize;
            let v = f.get(x);
            match values[w] {
                None => values[w] = Some(v),
                Some(u) if u != v => continue 'mask,
                _ => {}
            }
        }
        out.insert(Block(mask));
    }
    Ok(out)
}
