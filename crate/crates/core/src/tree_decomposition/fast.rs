//! Codeword construction.
//!
//! Every restriction of `f` gets a codeword `(class, sign)`: the restriction
//! equals `sign XOR rep(class)`, where `rep` is a function over the free
//! variables that is 0 on their all-zero assignment. Class 0 is the constant
//! 0 function. Codewords for a free set `G` are built from the two
//! codewords of the restrictions obtained by fixing the lowest variable of
//! `G`, through one dictionary per free set, so two restrictions with the
//! same free set share a class exactly when they are equal up to negation.

use std::collections::HashMap;

use super::{canonicalize, check_no_dummies, DecompositionTree, Label};
use crate::error::{Error, Result};
use crate::restriction_lattice::{pow3, Digits};
use crate::truth_table::Block;
use crate::TruthTable;

/// Largest `n` accepted by [`decompose_fast`].
pub const MAX_FAST_VARS: usize = 16;

/// Codewords of all `3^n` restrictions of a function.
#[derive(Clone, Debug)]
pub struct CodewordTable {
    n: usize,
    class: Vec<u32>,
    sign: Vec<bool>,
    /// Per free set: a restriction (as its fixed ones mask) whose class is
    /// non-constant, and whether two different non-constant classes occur.
    witness: Vec<Option<u32>>,
    conflict: Vec<bool>,
}

impl CodewordTable {
    pub fn build(f: &TruthTable) -> Self {
        let n = f.n();
        let p3 = pow3(n);
        let total = p3[n];
        let mut class = vec![0u32; total];
        let mut sign = vec![false; total];
        let sets = 1usize << n;
        let mut witness: Vec<Option<u32>> = vec![None; sets];
        let mut seen_class = vec![0u32; sets];
        let mut conflict = vec![false; sets];
        let mut dicts: Vec<HashMap<(u32, u32, bool), u32>> = vec![HashMap::new(); sets];
        let mut d = Digits::zero(n);
        for t in 0..total {
            if d.free == 0 {
                sign[t] = f.get(d.ones);
            } else {
                let i = d.free.trailing_zeros() as usize;
                let (a, b) = (t - 2 * p3[i], t - p3[i]);
                let key = (class[a], class[b], sign[a] ^ sign[b]);
                sign[t] = sign[a];
                class[t] = if key == (0, 0, false) {
                    0
                } else {
                    let dict = &mut dicts[d.free as usize];
                    let next = dict.len() as u32 + 1;
                    *dict.entry(key).or_insert(next)
                };
                let c = class[t];
                let s = d.free as usize;
                if c != 0 {
                    match witness[s] {
                        None => {
                            witness[s] = Some(d.ones);
                            seen_class[s] = c;
                        }
                        Some(_) if seen_class[s] != c => conflict[s] = true,
                        Some(_) => {}
                    }
                }
            }
            if t + 1 < total {
                d.increment();
            }
        }
        Self {
            n,
            class,
            sign,
            witness,
            conflict,
        }
    }

    /// Codeword of the restriction with ternary code `t`.
    pub fn codeword(&self, t: usize) -> (u32, bool) {
        (self.class[t], self.sign[t])
    }

    pub fn is_constant(&self, t: usize) -> bool {
        self.class[t] == 0
    }

    /// `g` is separable iff all of its non-constant columns (restrictions
    /// with exactly `g` free) share one class.
    pub fn is_separable(&self, g: Block) -> bool {
        !self.conflict[g.mask() as usize]
    }

    /// Separable sets with between 2 and `n - 1` variables.
    pub fn separable_sets(&self) -> Vec<Block> {
        let n = self.n as u32;
        (0..(1u32 << n))
            .filter(|g| (2..n).contains(&g.count_ones()))
            .map(Block)
            .filter(|&g| self.is_separable(g))
            .collect()
    }

    /// Ones mask of a non-constant restriction with free set `g`.
    fn witness(&self, g: u32) -> Option<u32> {
        self.witness[g as usize]
    }
}

fn overlaps(a: u32, b: u32) -> bool {
    a & b != 0 && a & !b != 0 && b & !a != 0
}

/// Builds the decomposition from the separable sets that overlap no other
/// separable set. These form a laminar family; each vertex gets the
/// quotient of its function over its children, then [`canonicalize`]
/// relabels and merges.
pub fn decompose_fast(f: &TruthTable) -> Result<DecompositionTree> {
    check_no_dummies(f)?;
    let n = f.n();
    if n > MAX_FAST_VARS {
        return Err(Error::TooLarge {
            what: "codeword decomposition",
            n,
            max: MAX_FAST_VARS,
        });
    }
    if n == 0 {
        return Ok(DecompositionTree::constant(f.get(0)));
    }
    if n == 1 {
        let leaf = DecompositionTree::leaf(0);
        return Ok(if f.get(0) { leaf.negate() } else { leaf });
    }
    let table = CodewordTable::build(f);
    let separable: Vec<u32> = table.separable_sets().iter().map(|b| b.mask()).collect();
    let mut strong: Vec<u32> = separable
        .iter()
        .copied()
        .filter(|&a| !separable.iter().any(|&b| overlaps(a, b)))
        .collect();
    strong.extend((0..n).map(|i| 1u32 << i));
    let full = f.full_mask();
    strong.push(full);
    strong.sort_by_key(|s| (s.count_ones(), *s));

    // h_S(x) = f(base_S | x) for x inside S.
    let base = |s: u32| -> u32 {
        if s == full {
            0
        } else {
            table
                .witness(s)
                .expect("relevant set has a non-constant column")
        }
    };
    let mut built: Vec<Option<DecompositionTree>> = vec![None; strong.len()];
    for (idx, &s) in strong.iter().enumerate() {
        if s.count_ones() == 1 {
            built[idx] = Some(DecompositionTree::leaf(s.trailing_zeros() as usize));
            continue;
        }
        let below = |a: u32, b: u32| a & !b == 0 && a != b;
        let mut kids: Vec<usize> = (0..idx)
            .filter(|&j| below(strong[j], s))
            .filter(|&j| !(0..idx).any(|k| below(strong[j], strong[k]) && below(strong[k], s)))
            .collect();
        kids.sort_by_key(|&j| strong[j].trailing_zeros());
        // zero and one points of each child's function
        let points: Vec<[u32; 2]> = kids
            .iter()
            .map(|&j| {
                let c = strong[j];
                let b = if c.count_ones() == 1 { 0 } else { base(c) & !c };
                let v = |x: u32| {
                    if c.count_ones() == 1 {
                        x != 0
                    } else {
                        f.get(b | x)
                    }
                };
                let mut pts = [None, None];
                let mut sub = 0u32;
                loop {
                    pts[v(sub) as usize].get_or_insert(sub);
                    if pts[0].is_some() && pts[1].is_some() {
                        break;
                    }
                    sub = (sub | !c).wrapping_add(1) & c;
                    if sub == 0 {
                        break;
                    }
                }
                [
                    pts[0].expect("child not constant"),
                    pts[1].expect("child not constant"),
                ]
            })
            .collect();
        let bs = base(s) & !s;
        let quotient = TruthTable::from_fn(kids.len(), |y| {
            let x = points
                .iter()
                .enumerate()
                .fold(bs, |acc, (j, p)| acc | p[(y >> j & 1) as usize]);
            f.get(x)
        })
        .expect("arity in range");
        let children = kids.iter().map(|&j| built[j].take().unwrap()).collect();
        built[idx] = Some(DecompositionTree::node(Label::Gate(quotient), children));
    }
    let root = built.pop().unwrap().unwrap();
    canonicalize(&root)
}
