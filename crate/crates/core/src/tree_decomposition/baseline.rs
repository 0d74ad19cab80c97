//! Direct separability tests and the greedy construction built on them.

use super::{canonicalize, check_no_dummies, DecompositionTree, Label};
use crate::error::{Error, Result};
use crate::truth_table::{full_mask, Block};
use crate::TruthTable;

/// Largest `n` accepted by [`decompose_baseline`]; every subset is tested
/// at linear cost, so the work is `4^n`.
pub const MAX_BASELINE_VARS: usize = 12;

/// `f(X) = outer(inner(X|g), X|rest)`.
///
/// `inner` is over the variables of `g` in increasing order and is 0 at
/// the all-zero assignment. `outer` takes the remaining variables in
/// increasing order followed by one slot for the value of `inner`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub inner: TruthTable,
    pub outer: TruthTable,
}

/// Decides whether `g` can be the variable set of a vertex in some
/// distinct variable tree for `f`, and returns the split if so.
pub fn is_separable(f: &TruthTable, g: Block) -> Result<Option<Separation>> {
    let n = f.n();
    let k = g.len();
    if g.mask() & !f.full_mask() != 0 || k < 2 || k + 1 > n {
        return Err(Error::SetSizeOutOfRange {
            size: k,
            min: 2,
            max: n.saturating_sub(1),
        });
    }
    Ok(separate(f, g.mask()))
}

/// Enumerates the submasks of `mask` in the order of their compact index.
fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let count = 1u32 << mask.count_ones();
    let mut sub = 0u32;
    (0..count).map(move |_| {
        let cur = sub;
        sub = (sub | !mask).wrapping_add(1) & mask;
        cur
    })
}

fn separate(f: &TruthTable, g: u32) -> Option<Separation> {
    let rest = f.full_mask() & !g;
    let mut inner: Option<TruthTable> = None;
    // Column kinds: Some(c) constant c; None follows inner (sign stored apart).
    let mut columns: Vec<(Option<bool>, bool)> = Vec::with_capacity(1 << rest.count_ones());
    for r in submasks(rest) {
        let col = f.subfunction(rest, r);
        if let Some(c) = col.constant_value() {
            columns.push((Some(c), false));
            continue;
        }
        let sign = col.get(0);
        let col = if sign { col.complement() } else { col };
        match &inner {
            None => inner = Some(col),
            Some(h) if *h == col => {}
            Some(_) => return None,
        }
        columns.push((None, sign));
    }
    // Columns that are all constant admit any inner function.
    let k = g.count_ones() as usize;
    let inner = inner.unwrap_or_else(|| TruthTable::constant(k, false).expect("k in range"));
    let m = rest.count_ones() as usize;
    let outer = TruthTable::from_fn(m + 1, |y| {
        let slot = y >> m & 1 == 1;
        match columns[(y & full_mask(m)) as usize] {
            (Some(c), _) => c,
            (None, sign) => slot ^ sign,
        }
    })
    .expect("arity in range");
    Some(Separation { inner, outer })
}

/// Every separable set of `f` with between 2 and `n - 1` variables.
pub fn separable_sets(f: &TruthTable) -> Vec<Block> {
    let n = f.n();
    (0..=f.full_mask())
        .filter(|g| (2..n as u32).contains(&g.count_ones()))
        .filter(|&g| separate(f, g).is_some())
        .map(Block)
        .collect()
}

/// Builds the decomposition by repeatedly splitting off a smallest
/// separable set of the current quotient, then canonicalizing (which
/// merges associative chains and relabels AND/OR/XOR-like gates).
pub fn decompose_baseline(f: &TruthTable) -> Result<DecompositionTree> {
    check_no_dummies(f)?;
    if f.n() > MAX_BASELINE_VARS {
        return Err(Error::TooLarge {
            what: "baseline decomposition",
            n: f.n(),
            max: MAX_BASELINE_VARS,
        });
    }
    if f.n() == 0 {
        return Ok(DecompositionTree::constant(f.get(0)));
    }
    let mut items: Vec<DecompositionTree> = (0..f.n()).map(DecompositionTree::leaf).collect();
    let mut h = f.clone();
    'outer: loop {
        let m = items.len();
        if m == 1 {
            let leaf = items.pop().unwrap();
            return canonicalize(&if h.get(0) { leaf.negate() } else { leaf });
        }
        let mut sets: Vec<u32> = (0..=h.full_mask())
            .filter(|g| (2..m as u32).contains(&g.count_ones()))
            .collect();
        sets.sort_by_key(|g| (g.count_ones(), *g));
        for g in sets {
            if let Some(sep) = separate(&h, g) {
                let mut taken = Vec::new();
                let mut kept = Vec::new();
                for (j, item) in items.into_iter().enumerate() {
                    if g >> j & 1 == 1 {
                        taken.push(item);
                    } else {
                        kept.push(item);
                    }
                }
                kept.push(DecompositionTree::node(Label::Gate(sep.inner), taken));
                items = kept;
                h = sep.outer;
                continue 'outer;
            }
        }
        return canonicalize(&DecompositionTree::node(Label::Gate(h), items));
    }
}
