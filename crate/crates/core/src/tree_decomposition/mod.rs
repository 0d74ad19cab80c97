//! Tree decomposition: the unique (up to double negation) distinct-variable
//! tree for a function, in which every gate is prime except the
//! associative AND, OR and XOR vertices, which are kept whole.
//!
//! Two constructions are provided. [`decompose_baseline`] tests every
//! variable set for separability directly and builds the tree greedily from
//! the smallest separable sets, then merges associative chains.
//! [`decompose_fast`] assigns codewords to all `3^n` restrictions, reads the
//! separable sets off the codewords and keeps the ones that overlap no other
//! separable set. Both finish with [`canonicalize`].
//!
//! Canonical form: every non-root vertex computes, without its own flag, a
//! function that is 0 on the all-zero assignment of its variables. The
//! negation needed to recover the actual value is pushed into the parent:
//! gates absorb it into their table, XOR vertices into their parity, and
//! AND/OR vertices keep it as the child's flag (a negated literal). AND is
//! used when the vertex function has a single 1, OR when it has a single 0.
//! Only the root may carry a residual flag on XOR or gate labels.

mod baseline;
mod fast;
mod format;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::truth_table::Block;
use crate::TruthTable;

pub use baseline::{
    decompose_baseline, is_separable, separable_sets, Separation, MAX_BASELINE_VARS,
};
pub use fast::{decompose_fast, CodewordTable, MAX_FAST_VARS};

/// Vertex label.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    /// 0-based variable index.
    Leaf(usize),
    /// Only used as the root of a function with no relevant variables.
    Const(bool),
    /// Arbitrary gate; input `j` is child `j`.
    Gate(TruthTable),
    And,
    Or,
    Xor,
}

/// A distinct variable tree. `negated` negates the vertex output.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "format::JsonNode", into = "format::JsonNode")]
pub struct DecompositionTree {
    pub label: Label,
    pub negated: bool,
    pub children: Vec<DecompositionTree>,
}

impl Label {
    fn apply(&self, inputs: &[bool]) -> bool {
        match self {
            Label::Leaf(_) | Label::Const(_) => unreachable!("leaf labels take no inputs"),
            Label::Gate(t) => {
                let idx = inputs
                    .iter()
                    .enumerate()
                    .fold(0u32, |acc, (j, &b)| acc | (b as u32) << j);
                t.get(idx)
            }
            Label::And => inputs.iter().all(|&b| b),
            Label::Or => inputs.iter().any(|&b| b),
            Label::Xor => inputs.iter().fold(false, |acc, &b| acc ^ b),
        }
    }
}

impl DecompositionTree {
    pub fn leaf(var: usize) -> Self {
        Self {
            label: Label::Leaf(var),
            negated: false,
            children: Vec::new(),
        }
    }

    pub fn constant(value: bool) -> Self {
        Self {
            label: Label::Const(value),
            negated: false,
            children: Vec::new(),
        }
    }

    pub fn node(label: Label, children: Vec<DecompositionTree>) -> Self {
        Self {
            label,
            negated: false,
            children,
        }
    }

    pub fn negate(mut self) -> Self {
        self.negated = !self.negated;
        self
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.label, Label::Leaf(_))
    }

    /// `L(v)`: the variables below this vertex.
    pub fn vars(&self) -> Block {
        match self.label {
            Label::Leaf(i) => Block(1 << i),
            Label::Const(_) => Block(0),
            _ => Block(self.children.iter().fold(0, |m, c| m | c.vars().mask())),
        }
    }

    pub fn min_var(&self) -> usize {
        self.vars().min_var().unwrap_or(usize::MAX)
    }

    pub fn evaluate(&self, x: u32) -> bool {
        let v = match &self.label {
            Label::Leaf(i) => x >> i & 1 == 1,
            Label::Const(c) => *c,
            label => {
                let inputs: Vec<bool> = self.children.iter().map(|c| c.evaluate(x)).collect();
                label.apply(&inputs)
            }
        };
        v ^ self.negated
    }

    /// All vertices, parents before children.
    pub fn vertices(&self) -> Vec<&DecompositionTree> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            let v = out[i];
            out.extend(v.children.iter());
            i += 1;
        }
        out
    }

    /// Tabulates the represented function on `n` variables.
    pub fn to_truth_table(&self, n: usize) -> TruthTable {
        TruthTable::from_fn(n, |x| self.evaluate(x)).expect("n in range")
    }

    /// A trivial decomposition: one gate (or AND/OR/XOR) over leaves only.
    pub fn is_trivial(&self) -> bool {
        self.children.iter().all(|c| c.is_leaf())
    }

    /// Checks the distinct-variable-tree conditions: distinct leaves, at
    /// least two children per internal vertex, gate arity matching the
    /// child count and every gate depending on all of its inputs.
    pub fn validate(&self) -> Result<()> {
        let mut seen = 0u32;
        self.validate_rec(true, &mut seen)
    }

    fn validate_rec(&self, root: bool, seen: &mut u32) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedTree(m));
        match &self.label {
            Label::Leaf(i) => {
                if *i >= 32 || *seen >> i & 1 == 1 {
                    return bad(format!("variable x{} repeated or out of range", i + 1));
                }
                *seen |= 1 << i;
                if !self.children.is_empty() {
                    return bad("leaf with children".into());
                }
                Ok(())
            }
            Label::Const(_) => {
                if !root || !self.children.is_empty() {
                    return bad("constant vertex below the root".into());
                }
                Ok(())
            }
            label => {
                let k = self.children.len();
                if k < 2 {
                    return bad(format!("internal vertex with {k} children"));
                }
                if let Label::Gate(t) = label {
                    if t.n() != k {
                        return bad(format!("gate of arity {} over {k} children", t.n()));
                    }
                    if t.dummy_mask() != 0 {
                        return bad("gate ignores one of its inputs".into());
                    }
                }
                for c in &self.children {
                    c.validate_rec(false, seen)?;
                }
                Ok(())
            }
        }
    }
}

/// Evaluates `t` on input code `x`.
pub fn evaluate_tree(t: &DecompositionTree, x: u32) -> bool {
    t.evaluate(x)
}

fn is_xor_type(h: &TruthTable) -> bool {
    let base = h.get(0);
    (0..h.len() as u32).all(|y| h.get(y) == base ^ (y.count_ones() % 2 == 1))
}

/// `Some((point, value))` when `h` takes `value` at `point` only.
fn single_point(h: &TruthTable) -> Option<(u32, bool)> {
    let ones = h.count_ones();
    let len = h.len() as u64;
    let find = |v: bool| (0..len as u32).find(|&y| h.get(y) == v).unwrap();
    if ones == 1 {
        Some((find(true), true))
    } else if ones == len - 1 {
        Some((find(false), false))
    } else {
        None
    }
}

/// Labels a vertex from its function `h` over already-canonical children
/// (ordered by smallest variable), merging associative children.
fn build_vertex(mut h: TruthTable, children: Vec<DecompositionTree>) -> DecompositionTree {
    let k = children.len();
    if k >= 2 && is_xor_type(&h) {
        let negated = h.get(0);
        let mut out = Vec::with_capacity(k);
        for c in children {
            if c.label == Label::Xor {
                out.extend(c.children);
            } else {
                out.push(c);
            }
        }
        out.sort_by_key(|c| c.min_var());
        return DecompositionTree {
            label: Label::Xor,
            negated,
            children: out,
        };
    }
    if let Some((point, value)) = single_point(&h).filter(|_| k >= 2) {
        // value 1: AND of literals [y_j == a_j]; value 0: OR of [y_j != a_j].
        let (label, same) = if value {
            (Label::And, Label::Or)
        } else {
            (Label::Or, Label::And)
        };
        let mut out = Vec::with_capacity(k);
        for (j, mut c) in children.into_iter().enumerate() {
            let a = point >> j & 1 == 1;
            let positive = if value { a } else { !a };
            if positive && c.label == label {
                out.extend(c.children);
            } else if !positive && c.label == same {
                out.extend(c.children.into_iter().map(DecompositionTree::negate));
            } else {
                c.negated = !positive;
                out.push(c);
            }
        }
        out.sort_by_key(|c| c.min_var());
        return DecompositionTree {
            label,
            negated: false,
            children: out,
        };
    }
    let negated = h.get(0);
    if negated {
        h = h.complement();
    }
    DecompositionTree {
        label: Label::Gate(h),
        negated,
        children,
    }
}

fn canon_rec(node: &DecompositionTree, root: bool) -> (DecompositionTree, bool) {
    match &node.label {
        Label::Leaf(i) => (DecompositionTree::leaf(*i), node.negated),
        Label::Const(v) => (DecompositionTree::constant(*v ^ node.negated), false),
        label => {
            let parts: Vec<(DecompositionTree, bool)> =
                node.children.iter().map(|c| canon_rec(c, false)).collect();
            let k = parts.len();
            let h = TruthTable::from_fn(k, |y| {
                let inputs: Vec<bool> = (0..k).map(|j| (y >> j & 1 == 1) ^ parts[j].1).collect();
                node.negated ^ label.apply(&inputs)
            })
            .expect("arity in range");
            let mut order: Vec<usize> = (0..k).collect();
            order.sort_by_key(|&j| parts[j].0.min_var());
            let mut h = h.permute(&order);
            let mut slots: Vec<Option<DecompositionTree>> =
                parts.into_iter().map(|(t, _)| Some(t)).collect();
            let children: Vec<DecompositionTree> =
                order.iter().map(|&j| slots[j].take().unwrap()).collect();
            let sign = !root && h.get(0);
            if sign {
                h = h.complement();
            }
            (build_vertex(h, children), sign)
        }
    }
}

/// Normal form within a double-negation class (see the module docs).
/// Idempotent and value-preserving.
pub fn canonicalize(t: &DecompositionTree) -> Result<DecompositionTree> {
    t.validate()?;
    let (mut c, sign) = canon_rec(t, true);
    c.negated ^= sign;
    Ok(c)
}

/// Output of [`decompose`]: the tree over the relevant variables and the
/// 0-based indices of the dropped dummy variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub tree: DecompositionTree,
    pub dropped: Vec<usize>,
}

/// Which construction [`decompose`] runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    Baseline,
    #[default]
    Fast,
}

/// Decomposes any function: dummy variables are removed first (no
/// distinct variable tree can contain them) and listed in the result.
pub fn decompose(f: &TruthTable, method: Method) -> Decomposition {
    let dummies = f.dummy_mask();
    let dropped: Vec<usize> = Block(dummies).vars().collect();
    let kept: Vec<usize> = Block(f.full_mask() & !dummies).vars().collect();
    if kept.is_empty() {
        return Decomposition {
            tree: DecompositionTree::constant(f.get(0)),
            dropped,
        };
    }
    let reduced = f.subfunction(dummies, 0);
    let tree = match method {
        Method::Baseline => decompose_baseline(&reduced),
        Method::Fast => decompose_fast(&reduced),
    }
    .expect("dummy variables removed");
    Decomposition {
        tree: relabel(tree, &kept),
        dropped,
    }
}

fn relabel(mut t: DecompositionTree, map: &[usize]) -> DecompositionTree {
    if let Label::Leaf(i) = t.label {
        t.label = Label::Leaf(map[i]);
    }
    t.children = t.children.into_iter().map(|c| relabel(c, map)).collect();
    t
}

pub(crate) fn check_no_dummies(f: &TruthTable) -> Result<()> {
    match Block(f.dummy_mask()).min_var() {
        Some(v) => Err(Error::DummyVariable(v + 1)),
        None => Ok(()),
    }
}

/// Checks that `t` is a tree decomposition in canonical form: a valid
/// distinct variable tree whose gates are prime and not AND/OR/XOR-like,
/// with no AND (OR, XOR) vertex having a child that could be merged into
/// it, children ordered by smallest variable and flags only where the
/// canonical form allows them.
pub fn audit(t: &DecompositionTree) -> std::result::Result<(), String> {
    t.validate().map_err(|e| e.to_string())?;
    audit_rec(t, None)
}

fn audit_rec(t: &DecompositionTree, parent: Option<&Label>) -> std::result::Result<(), String> {
    let under_and_or = matches!(parent, Some(Label::And | Label::Or));
    if let Some(p) = parent.filter(|_| t.negated && !under_and_or) {
        return Err(format!("flag on a child of {p:?}"));
    }
    if t.children
        .windows(2)
        .any(|w| w[0].min_var() > w[1].min_var())
    {
        return Err("children out of order".into());
    }
    match &t.label {
        Label::Leaf(_) | Label::Const(_) => Ok(()),
        Label::Gate(h) => {
            if is_xor_type(h) {
                return Err("gate computes a parity".into());
            }
            if single_point(h).is_some() {
                return Err("gate is constant on all but one input".into());
            }
            if h.get(0) {
                return Err("gate table not normalized".into());
            }
            let inner = decompose_baseline(h).map_err(|e| e.to_string())?;
            if !inner.is_trivial() || !matches!(inner.label, Label::Gate(_)) {
                return Err(format!("gate {h} has a nontrivial decomposition"));
            }
            t.children
                .iter()
                .try_for_each(|c| audit_rec(c, Some(&t.label)))
        }
        Label::And | Label::Or => {
            if t.negated && parent.is_none() {
                return Err("AND/OR root carries a flag".into());
            }
            let (same, other) = if t.label == Label::And {
                (Label::And, Label::Or)
            } else {
                (Label::Or, Label::And)
            };
            for c in &t.children {
                if (c.label == same && !c.negated) || (c.label == other && c.negated) {
                    return Err(format!("{:?} child mergeable into {:?}", c.label, t.label));
                }
            }
            t.children
                .iter()
                .try_for_each(|c| audit_rec(c, Some(&t.label)))
        }
        Label::Xor => {
            if t.children.iter().any(|c| c.label == Label::Xor) {
                return Err("XOR child under XOR".into());
            }
            t.children
                .iter()
                .try_for_each(|c| audit_rec(c, Some(&t.label)))
        }
    }
}
