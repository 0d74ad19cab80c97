//! Composite algorithms: stages of unitaries and queries, each ending in a
//! full measurement, routed by decision points.
//!
//! Register layout for `n` variables and `m` qubits: the low
//! `ceil(log2 n)` bits of a basis index hold the query index `i`, the next
//! bit is the query target `b` and the remaining bits are workspace. A
//! query maps `|i, b, w>` to `|i, b XOR x_i, w>` and is the identity when
//! `i >= n`. Every stage starts from the all-zero basis state.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::TruthTable;

/// Measurement branches below this probability are dropped.
pub const BRANCH_CUTOFF: f64 = 1e-12;

/// Bits of the query index register.
pub fn index_bits(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Smallest register size for `n` variables: index, target and one
/// workspace qubit.
pub fn min_qubits(n: usize) -> usize {
    index_bits(n) + 2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StageOp {
    Matrix(String),
    Query,
}

impl Serialize for StageOp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            StageOp::Matrix(name) => s.serialize_str(name),
            StageOp::Query => s.serialize_str("Q"),
        }
    }
}

impl<'de> Deserialize<'de> for StageOp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        Ok(if name == "Q" {
            StageOp::Query
        } else {
            StageOp::Matrix(name)
        })
    }
}

/// Operations applied in order to the initial state; `"Q"` is a query and
/// any other string names a matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub ops: Vec<StageOp>,
}

impl Stage {
    pub fn queries(&self) -> usize {
        self.ops.iter().filter(|op| **op == StageOp::Query).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Return0,
    Return1,
    Continue,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionEntry {
    pub transcript: Vec<usize>,
    pub action: Action,
}

/// Lookup from transcripts (measurement outcomes of the stages run so far,
/// each masked by `outcome_mask`) to actions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionTable {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome_mask: Option<usize>,
    pub entries: Vec<DecisionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<Action>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompositeAlgorithm {
    pub m: usize,
    pub n: usize,
    pub matrices: BTreeMap<String, ComplexMatrix>,
    pub stages: Vec<Stage>,
    pub decision: DecisionTable,
}

/// Exact outcome statistics on one input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputOutcome {
    pub input: u32,
    pub p_return0: f64,
    pub p_return1: f64,
    pub expected_queries: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Score {
    /// Smallest probability, over inputs, of returning `f(x)`.
    pub min_success: f64,
    pub max_expected_queries: f64,
    pub worst_input: u32,
}

impl Score {
    /// Bounded error: correct with probability at least 2/3 everywhere.
    pub fn bounded_error(&self) -> bool {
        self.min_success >= 2.0 / 3.0
    }
}

/// Applies the query for input `x` to `v`.
pub(crate) fn apply_query(v: &mut [Complex64], x: u32, n: usize) {
    let ib = index_bits(n);
    let target = 1usize << ib;
    let index_mask = target - 1;
    for k in 0..v.len() {
        if k & target == 0 {
            let i = k & index_mask;
            if i < n && x >> i & 1 == 1 {
                v.swap(k, k | target);
            }
        }
    }
}

pub(crate) fn basis_zero(s: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); s];
    v[0] = Complex64::new(1.0, 0.0);
    v
}

impl CompositeAlgorithm {
    pub fn dim(&self) -> usize {
        1 << self.m
    }

    /// Checks dimensions, register size and matrix references.
    pub fn validate(&self) -> Result<()> {
        if self.m < min_qubits(self.n) {
            return Err(Error::Precondition(format!(
                "{} qubits cannot hold the query registers for n = {}",
                self.m, self.n
            )));
        }
        if self.stages.is_empty() {
            return Err(Error::Precondition("no stages".into()));
        }
        for (name, mat) in &self.matrices {
            if mat.dim() != self.dim() {
                return Err(Error::Format(format!(
                    "matrix {name} is {0}x{0}, the register needs {1}x{1}",
                    mat.dim(),
                    self.dim()
                )));
            }
        }
        for stage in &self.stages {
            for op in &stage.ops {
                if let StageOp::Matrix(name) = op {
                    if !self.matrices.contains_key(name) {
                        return Err(Error::Format(format!("unknown matrix {name:?}")));
                    }
                }
            }
        }
        Ok(())
    }

    fn run_stage(&self, stage: &Stage, x: u32) -> Vec<Complex64> {
        let mut v = basis_zero(self.dim());
        for op in &stage.ops {
            match op {
                StageOp::Query => apply_query(&mut v, x, self.n),
                StageOp::Matrix(name) => v = self.matrices[name].apply_unchecked(&v),
            }
        }
        v
    }
}

struct Router<'a> {
    alg: &'a CompositeAlgorithm,
    table: HashMap<&'a [usize], Action>,
    mask: usize,
}

impl Router<'_> {
    fn lookup(&self, transcript: &[usize]) -> Result<Action> {
        match self.table.get(transcript) {
            Some(&a) => Ok(a),
            None => self
                .alg
                .decision
                .default
                .ok_or_else(|| Error::MissingTranscript(transcript.to_vec())),
        }
    }

    fn walk(
        &self,
        x: u32,
        transcript: &mut Vec<usize>,
        prob: f64,
        queries: usize,
        out: &mut InputOutcome,
    ) -> Result<()> {
        let k = transcript.len();
        let stage = &self.alg.stages[k];
        let queries = queries + stage.queries();
        let state = self.alg.run_stage(stage, x);
        for (outcome, amp) in state.iter().enumerate() {
            let p = prob * amp.norm_sqr();
            if p < BRANCH_CUTOFF {
                continue;
            }
            transcript.push(outcome & self.mask);
            match self.lookup(transcript)? {
                Action::Return0 => {
                    out.p_return0 += p;
                    out.expected_queries += p * queries as f64;
                }
                Action::Return1 => {
                    out.p_return1 += p;
                    out.expected_queries += p * queries as f64;
                }
                Action::Continue => {
                    if k + 1 == self.alg.stages.len() {
                        return Err(Error::Precondition(format!(
                            "final decision point continues on {transcript:?}"
                        )));
                    }
                    self.walk(x, transcript, p, queries, out)?;
                }
            }
            transcript.pop();
        }
        Ok(())
    }
}

/// Exact outcome distribution of `alg` on every input of `f`, obtained by
/// enumerating all measurement branches.
pub fn simulate_composite(alg: &CompositeAlgorithm, f: &TruthTable) -> Result<Vec<InputOutcome>> {
    alg.validate()?;
    if f.n() != alg.n {
        return Err(Error::DimensionMismatch {
            expected: alg.n,
            got: f.n(),
        });
    }
    let router = Router {
        alg,
        table: alg
            .decision
            .entries
            .iter()
            .map(|e| (e.transcript.as_slice(), e.action))
            .collect(),
        mask: alg.decision.outcome_mask.unwrap_or(usize::MAX),
    };
    (0..f.len() as u32)
        .map(|x| {
            let mut out = InputOutcome {
                input: x,
                p_return0: 0.0,
                p_return1: 0.0,
                expected_queries: 0.0,
            };
            router.walk(x, &mut Vec::new(), 1.0, 0, &mut out)?;
            Ok(out)
        })
        .collect()
}

/// Worst-case correctness and worst-case expected query count.
pub fn score_algorithm(alg: &CompositeAlgorithm, f: &TruthTable) -> Result<Score> {
    let outcomes = simulate_composite(alg, f)?;
    let mut score = Score {
        min_success: f64::INFINITY,
        max_expected_queries: 0.0,
        worst_input: 0,
    };
    for o in &outcomes {
        let success = if f.get(o.input) {
            o.p_return1
        } else {
            o.p_return0
        };
        if success < score.min_success {
            score.min_success = success;
            score.worst_input = o.input;
        }
        score.max_expected_queries = score.max_expected_queries.max(o.expected_queries);
    }
    Ok(score)
}
