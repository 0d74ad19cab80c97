//! `analyze`: one JSONL record per function.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use clap::ValueEnum;
use qprops::basic_props::{self, MAX_DP_VARS};
use qprops::tree_decomposition::{decompose, Method, MAX_FAST_VARS};
use qprops::{block_sensitivity, quasisymmetry, TruthTable};
use serde::{Deserialize, Serialize};

use crate::{open_output, parse_table, read_file, write_json_line, CliError, CliResult};

/// Largest `n` accepted for block sensitivity.
pub const BS_MAX_VARS: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Prop {
    D,
    C,
    Deg,
    S,
    Bs,
    Quasisym,
    Tree,
}

impl Prop {
    pub fn name(self) -> &'static str {
        match self {
            Prop::D => "d",
            Prop::C => "c",
            Prop::Deg => "deg",
            Prop::S => "s",
            Prop::Bs => "bs",
            Prop::Quasisym => "quasisym",
            Prop::Tree => "tree",
        }
    }

    fn max_vars(self) -> Option<usize> {
        match self {
            Prop::D | Prop::C | Prop::Deg => Some(MAX_DP_VARS),
            Prop::Bs => Some(BS_MAX_VARS),
            Prop::Tree => Some(MAX_FAST_VARS),
            Prop::S | Prop::Quasisym => None,
        }
    }
}

/// Rejects sizes beyond the guard of any requested property.
pub fn check_guards(props: &[Prop], n: usize) -> CliResult<()> {
    for &p in props {
        if let Some(max) = p.max_vars() {
            if n > max {
                return Err(CliError::Guard(format!(
                    "property {} limited to n <= {max}, got n = {n}",
                    p.name()
                )));
            }
        }
    }
    Ok(())
}

/// Properties of one function. Absent fields were not requested; timings
/// are wall-clock nanoseconds kept apart from the results.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    pub function: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deg: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quasisymmetric: Option<bool>,
    /// 1-based variables to negate to make the function symmetric.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quasisym_mask: Option<Vec<usize>>,
    /// Output per Hamming weight after that negation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quasisym_profile: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<String>,
    /// 1-based variables the function ignores, left out of the tree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dummy_vars: Option<Vec<usize>>,
    #[serde(default)]
    pub timing: BTreeMap<String, u64>,
}

fn timed<T>(timing: &mut BTreeMap<String, u64>, p: Prop, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let v = f();
    timing.insert(p.name().into(), start.elapsed().as_nanos() as u64);
    v
}

pub fn analyze_function(f: &TruthTable, props: &[Prop]) -> CliResult<AnalysisRecord> {
    check_guards(props, f.n())?;
    let mut props = props.to_vec();
    props.sort();
    props.dedup();
    let mut r = AnalysisRecord {
        function: f.canonical_key(),
        n: f.n(),
        ..Default::default()
    };
    let t = &mut r.timing;
    for p in props {
        match p {
            Prop::D => {
                r.d = Some(timed(t, p, || {
                    basic_props::deterministic_query_complexity(f)
                }))
            }
            Prop::C => r.c = Some(timed(t, p, || basic_props::certificate_complexity(f))),
            Prop::Deg => r.deg = Some(timed(t, p, || basic_props::degree(f))),
            Prop::S => r.s = Some(timed(t, p, || block_sensitivity::sensitivity(f))),
            Prop::Bs => r.bs = Some(timed(t, p, || block_sensitivity::block_sensitivity(f))),
            Prop::Quasisym => {
                let profile = timed(t, p, || quasisymmetry::quasisymmetry(f));
                r.quasisymmetric = Some(profile.is_some());
                if let Some(prof) = profile {
                    r.quasisym_mask = Some(prof.flip_mask.vars().map(|v| v + 1).collect());
                    r.quasisym_profile = Some(
                        prof.values
                            .iter()
                            .map(|&b| if b { '1' } else { '0' })
                            .collect(),
                    );
                }
            }
            Prop::Tree => {
                let dec = timed(t, p, || decompose(f, Method::Fast));
                r.tree = Some(dec.tree.to_string());
                r.dummy_vars = Some(dec.dropped.iter().map(|v| v + 1).collect());
            }
        }
    }
    Ok(r)
}

/// Tables named on the command line: the literal itself, or each
/// non-empty line of the file after `@` (`#` starts a comment).
fn tables(arg: &str) -> CliResult<Vec<TruthTable>> {
    match arg.strip_prefix('@') {
        Some(path) => read_file(Path::new(path))?
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(parse_table)
            .collect(),
        None => Ok(vec![parse_table(arg)?]),
    }
}

pub fn run(arg: &str, props: &[Prop], out: Option<&Path>) -> CliResult<()> {
    let fs = tables(arg)?;
    for f in &fs {
        check_guards(props, f.n())?;
    }
    let mut w = open_output(out)?;
    for f in &fs {
        write_json_line(&mut *w, &analyze_function(f, props)?)?;
    }
    w.flush()?;
    Ok(())
}
