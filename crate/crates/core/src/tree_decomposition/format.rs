//! Text and JSON forms of trees.
//!
//! Text: `XOR(x1, AND(x2, NOT x3))`, constants `0` / `1`, arbitrary gates as
//! `GATE[<table key>](...)`, a `NOT ` prefix for each negation flag.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{DecompositionTree, Label};
use crate::error::{Error, Result};
use crate::truth_table::parse_truth_table;

impl fmt::Display for DecompositionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("NOT ")?;
        }
        let head = match &self.label {
            Label::Leaf(i) => return write!(f, "x{}", i + 1),
            Label::Const(v) => return write!(f, "{}", *v as u8),
            Label::Gate(t) => format!("GATE[{}]", t.canonical_key()),
            Label::And => "AND".into(),
            Label::Or => "OR".into(),
            Label::Xor => "XOR".into(),
        };
        write!(f, "{head}(")?;
        for (j, c) in self.children.iter().enumerate() {
            if j > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::TreeSyntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        self.skip_ws();
        if self.eat(token) {
            Ok(())
        } else {
            self.err(format!("expected {token:?}"))
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !pred(c))
            .unwrap_or(self.rest().len());
        self.pos += len;
        &self.src[start..start + len]
    }

    fn tree(&mut self) -> Result<DecompositionTree> {
        self.skip_ws();
        if self.rest().starts_with("NOT")
            && self.rest()[3..].starts_with(|c: char| c.is_whitespace() || c == '(')
        {
            self.pos += 3;
            return Ok(self.tree()?.negate());
        }
        let start = self.pos;
        let word = self.take_while(|c| c.is_ascii_alphanumeric());
        let label = match word {
            "0" => return Ok(DecompositionTree::constant(false)),
            "1" => return Ok(DecompositionTree::constant(true)),
            "AND" => Label::And,
            "OR" => Label::Or,
            "XOR" => Label::Xor,
            "GATE" => {
                self.expect("[")?;
                self.skip_ws();
                let key_pos = self.pos;
                let key = self.take_while(|c| c.is_ascii_alphanumeric());
                let table = parse_truth_table(key).map_err(|e| Error::TreeSyntax {
                    pos: key_pos,
                    msg: e.to_string(),
                })?;
                self.expect("]")?;
                Label::Gate(table)
            }
            w if w.starts_with('x') => match w[1..].parse::<usize>() {
                Ok(i) if i >= 1 => return Ok(DecompositionTree::leaf(i - 1)),
                _ => {
                    self.pos = start;
                    return self.err(format!("bad variable {w:?}"));
                }
            },
            _ => {
                self.pos = start;
                return self.err("expected a vertex");
            }
        };
        self.expect("(")?;
        let mut children = vec![self.tree()?];
        loop {
            self.skip_ws();
            if self.eat(")") {
                break;
            }
            self.expect(",")?;
            children.push(self.tree()?);
        }
        Ok(DecompositionTree::node(label, children))
    }
}

impl FromStr for DecompositionTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let t = p.tree()?;
        p.skip_ws();
        if p.pos != s.len() {
            return p.err("trailing input");
        }
        Ok(t)
    }
}

/// Serialized vertex. `var` is 1-based; `table` is a truth-table key.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub(super) struct JsonNode {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    var: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    table: Option<String>,
    #[serde(default)]
    negated: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    children: Vec<JsonNode>,
}

impl From<DecompositionTree> for JsonNode {
    fn from(t: DecompositionTree) -> Self {
        let (kind, var, value, table) = match &t.label {
            Label::Leaf(i) => ("leaf", Some(i + 1), None, None),
            Label::Const(v) => ("const", None, Some(*v), None),
            Label::Gate(h) => ("gate", None, None, Some(h.canonical_key())),
            Label::And => ("and", None, None, None),
            Label::Or => ("or", None, None, None),
            Label::Xor => ("xor", None, None, None),
        };
        JsonNode {
            kind: kind.into(),
            var,
            value,
            table,
            negated: t.negated,
            children: t.children.into_iter().map(JsonNode::from).collect(),
        }
    }
}

impl TryFrom<JsonNode> for DecompositionTree {
    type Error = String;

    fn try_from(j: JsonNode) -> std::result::Result<Self, String> {
        let label = match (j.kind.as_str(), j.var, j.value, &j.table) {
            ("leaf", Some(v), None, None) if v >= 1 => Label::Leaf(v - 1),
            ("const", None, Some(v), None) => Label::Const(v),
            ("gate", None, None, Some(key)) => {
                Label::Gate(parse_truth_table(key).map_err(|e| e.to_string())?)
            }
            ("and", None, None, None) => Label::And,
            ("or", None, None, None) => Label::Or,
            ("xor", None, None, None) => Label::Xor,
            _ => return Err(format!("bad vertex of kind {:?}", j.kind)),
        };
        let children = j
            .children
            .into_iter()
            .map(DecompositionTree::try_from)
            .collect::<std::result::Result<_, _>>()?;
        Ok(DecompositionTree {
            label,
            negated: j.negated,
            children,
        })
    }
}
