//! `enumerate`: sweeps every function of `n` variables (or a seeded random
//! sample), writes one record per function and summarizes the extremes.
//!
//! Workers claim chunks of function indices from a shared counter; the
//! calling thread is the only writer and emits chunks in index order, so
//! the output does not depend on the worker count.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::mpsc;

use clap::ValueEnum;
use qprops::basic_props::{self, MAX_DP_VARS};
use qprops::block_sensitivity::{self, minimal_block_census};
use qprops::quasisymmetry::{self, quasisymmetry_oracle};
use qprops::tree_decomposition::{audit, decompose, DecompositionTree, Method, MAX_BASELINE_VARS};
use qprops::{truth_table, Block, TruthTable};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analyze::{analyze_function, check_guards, AnalysisRecord, Prop, BS_MAX_VARS};
use crate::{open_output, print_json, write_json_line, CliError, CliResult};

/// Largest `n` swept exhaustively.
pub const MAX_EXHAUSTIVE_VARS: usize = 4;

const CHUNK: u64 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Check {
    /// Minimal sensitive blocks of size k number at most 2^(n-k+1) C(n,k)
    #[value(alias = "lemma2")]
    Census,
    /// s <= bs <= C <= D and deg <= D
    IneqChain,
    /// Both decomposition constructions give the same audited tree
    TreeUnique,
    /// The linear quasisymmetry test agrees with the mask oracle, and only
    /// parity, its negation and constants have two unrelated masks
    QuasisymUnique,
}

impl Check {
    fn name(self) -> &'static str {
        match self {
            Check::Census => "census",
            Check::IneqChain => "ineq-chain",
            Check::TreeUnique => "tree-unique",
            Check::QuasisymUnique => "quasisym-unique",
        }
    }

    fn max_vars(self) -> usize {
        match self {
            Check::Census => MAX_DP_VARS,
            Check::IneqChain => BS_MAX_VARS,
            Check::TreeUnique => MAX_BASELINE_VARS,
            Check::QuasisymUnique => quasisymmetry::ORACLE_MAX_VARS,
        }
    }

    /// A description of the violation, if `f` has one.
    fn violation(self, f: &TruthTable) -> Option<String> {
        match self {
            Check::Census => {
                let census = minimal_block_census(f);
                census.first_violation().map(|k| {
                    format!(
                        "{} minimal blocks of size {k}, bound {}",
                        census.sums[k - 1],
                        census.bounds[k - 1]
                    )
                })
            }
            Check::IneqChain => {
                let s = block_sensitivity::sensitivity(f);
                let bs = block_sensitivity::block_sensitivity(f);
                let basic_props::PropertyReport { d, c, deg } = basic_props::property_report(f);
                (!(s <= bs && bs <= c && c <= d && deg <= d))
                    .then(|| format!("s = {s}, bs = {bs}, C = {c}, D = {d}, deg = {deg}"))
            }
            Check::TreeUnique => tree_violation(f),
            Check::QuasisymUnique => quasisym_violation(f),
        }
    }
}

fn tree_violation(f: &TruthTable) -> Option<String> {
    let fast = decompose(f, Method::Fast);
    let base = decompose(f, Method::Baseline);
    if fast != base {
        return Some(format!(
            "fast {} differs from baseline {}",
            fast.tree, base.tree
        ));
    }
    if let Err(e) = audit(&fast.tree) {
        return Some(format!("{}: {e}", fast.tree));
    }
    if fast.tree.to_truth_table(f.n()) != *f {
        return Some(format!("{} does not compute the function", fast.tree));
    }
    let text = fast.tree.to_string();
    match text.parse::<DecompositionTree>() {
        Ok(t) if t == fast.tree => None,
        _ => Some(format!("{text} does not parse back to itself")),
    }
}

fn quasisym_violation(f: &TruthTable) -> Option<String> {
    let masks: BTreeSet<Block> = quasisymmetry_oracle(f).ok()?;
    let found = quasisymmetry::quasisymmetry(f);
    match &found {
        Some(p) if !masks.contains(&p.flip_mask) => {
            return Some(format!(
                "mask {:#x} is not symmetrizing",
                p.flip_mask.mask()
            ))
        }
        None if !masks.is_empty() => {
            return Some(format!("missed {} symmetrizing masks", masks.len()))
        }
        _ => {}
    }
    let full = f.full_mask();
    let unrelated = masks
        .iter()
        .any(|a| masks.iter().any(|b| a != b && a.mask() != b.mask() ^ full));
    let parity = TruthTable::from_fn(f.n(), |x| x.count_ones() % 2 == 1).expect("n in range");
    let special = f.is_constant() || *f == parity || *f == parity.complement();
    (unrelated && !special).then(|| format!("{} unrelated symmetrizing masks", masks.len()))
}

pub struct Request {
    pub n: usize,
    pub props: Vec<Prop>,
    pub checks: Vec<Check>,
    pub sample: Option<u64>,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Request {
    fn validate(&self) -> CliResult<u64> {
        if self.n == 0 || self.n > truth_table::MAX_VARS {
            return Err(CliError::Guard(format!(
                "n must lie in 1..={}, got {}",
                truth_table::MAX_VARS,
                self.n
            )));
        }
        check_guards(&self.props, self.n)?;
        for &c in &self.checks {
            if self.n > c.max_vars() {
                return Err(CliError::Guard(format!(
                    "check {} limited to n <= {}, got n = {}",
                    c.name(),
                    c.max_vars(),
                    self.n
                )));
            }
        }
        match self.sample {
            Some(m) => Ok(m),
            None if self.n <= MAX_EXHAUSTIVE_VARS => Ok(1u64 << (1u32 << self.n)),
            None => Err(CliError::Guard(format!(
                "exhaustive sweep limited to n <= {MAX_EXHAUSTIVE_VARS}, got n = {}; pass --sample",
                self.n
            ))),
        }
    }

    fn function(&self, i: u64) -> TruthTable {
        match self.sample {
            None => TruthTable::nth(self.n, i).expect("n validated"),
            Some(_) => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(i);
                TruthTable::random(self.n, &mut rng).expect("n validated")
            }
        }
    }
}

struct Outcome {
    record: AnalysisRecord,
    violations: Vec<(Check, String)>,
}

fn analyze_chunk(req: &Request, start: u64, end: u64) -> CliResult<Vec<Outcome>> {
    (start..end)
        .map(|i| {
            let f = req.function(i);
            let record = analyze_function(&f, &req.props)?;
            let violations = req
                .checks
                .iter()
                .filter_map(|&c| c.violation(&f).map(|v| (c, v)))
                .collect();
            Ok(Outcome { record, violations })
        })
        .collect()
}

#[derive(Serialize)]
struct Extreme {
    min: usize,
    min_function: String,
    max: usize,
    max_function: String,
}

#[derive(Serialize)]
struct Ratio {
    ratio: f64,
    bs: usize,
    s: usize,
    function: String,
}

#[derive(Serialize)]
struct FirstViolation {
    function: String,
    message: String,
}

#[derive(Serialize, Default)]
struct CheckSummary {
    checked: u64,
    violations: u64,
    first_violation: Option<FirstViolation>,
}

#[derive(Serialize)]
struct Summary {
    n: usize,
    functions: u64,
    sampled: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    extremes: BTreeMap<&'static str, Extreme>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_bs_over_s: Option<Ratio>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quasisymmetric: Option<u64>,
    checks: BTreeMap<&'static str, CheckSummary>,
}

impl Summary {
    fn add(&mut self, o: &Outcome) {
        let r = &o.record;
        self.functions += 1;
        let values = [
            ("d", r.d),
            ("c", r.c),
            ("deg", r.deg),
            ("s", r.s),
            ("bs", r.bs),
        ];
        for (name, v) in values {
            let Some(v) = v else { continue };
            let e = self.extremes.entry(name).or_insert_with(|| Extreme {
                min: v,
                min_function: r.function.clone(),
                max: v,
                max_function: r.function.clone(),
            });
            if v < e.min {
                e.min = v;
                e.min_function = r.function.clone();
            }
            if v > e.max {
                e.max = v;
                e.max_function = r.function.clone();
            }
        }
        if let (Some(bs), Some(s)) = (r.bs, r.s) {
            if s > 0 {
                let ratio = bs as f64 / s as f64;
                if self.max_bs_over_s.as_ref().is_none_or(|m| ratio > m.ratio) {
                    self.max_bs_over_s = Some(Ratio {
                        ratio,
                        bs,
                        s,
                        function: r.function.clone(),
                    });
                }
            }
        }
        if let Some(q) = r.quasisymmetric {
            *self.quasisymmetric.get_or_insert(0) += q as u64;
        }
        for summary in self.checks.values_mut() {
            summary.checked += 1;
        }
        for (c, message) in &o.violations {
            let summary = self.checks.entry(c.name()).or_default();
            summary.violations += 1;
            summary
                .first_violation
                .get_or_insert_with(|| FirstViolation {
                    function: r.function.clone(),
                    message: message.clone(),
                });
        }
    }
}

fn worker_count() -> usize {
    std::env::var("QPROPS_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()))
}

pub fn run(req: &Request) -> CliResult<()> {
    let total = req.validate()?;
    let chunks = total.div_ceil(CHUNK);
    let workers = (worker_count() as u64).min(chunks.max(1)) as usize;
    let mut summary = Summary {
        n: req.n,
        functions: 0,
        sampled: req.sample.is_some(),
        seed: req.sample.map(|_| req.seed),
        extremes: BTreeMap::new(),
        max_bs_over_s: None,
        quasisymmetric: None,
        checks: req
            .checks
            .iter()
            .map(|c| (c.name(), CheckSummary::default()))
            .collect(),
    };
    let mut w = open_output(req.out.as_deref())?;
    let next = AtomicU64::new(0);
    std::thread::scope(|scope| -> CliResult<()> {
        let (tx, rx) = mpsc::sync_channel::<(u64, CliResult<Vec<Outcome>>)>(2 * workers);
        for _ in 0..workers {
            let tx = tx.clone();
            let next = &next;
            scope.spawn(move || loop {
                let c = next.fetch_add(1, Ordering::Relaxed);
                if c >= chunks {
                    break;
                }
                let end = ((c + 1) * CHUNK).min(total);
                let res = analyze_chunk(req, c * CHUNK, end);
                let failed = res.is_err();
                // A closed channel means the writer gave up.
                if tx.send((c, res)).is_err() || failed {
                    break;
                }
            });
        }
        drop(tx);
        let mut pending = BTreeMap::new();
        let mut expected = 0u64;
        for (c, res) in rx {
            pending.insert(c, res);
            while let Some(res) = pending.remove(&expected) {
                for o in res? {
                    write_json_line(&mut *w, &o.record)?;
                    summary.add(&o);
                }
                expected += 1;
            }
        }
        Ok(())
    })?;
    w.flush()?;
    drop(w);
    if req.out.is_some() {
        print_json(&summary)?;
    } else {
        let text = serde_json::to_string(&summary).map_err(|e| CliError::Input(e.to_string()))?;
        eprintln!("{text}");
    }
    let failed: Vec<String> = summary
        .checks
        .iter()
        .filter(|(_, s)| s.violations > 0)
        .map(|(name, s)| format!("{name}: {} violations", s.violations))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Violation(failed.join("; ")))
    }
}
