//! Exhaustive search over single-stage algorithms on a declared grid of
//! matrices.
//!
//! A candidate algorithm is `U_0, Q, U_1, ..., Q, U_T` with every `U_j`
//! taken from a finite candidate set, followed by a measurement and a
//! table assigning a return value to each of the `s` outcomes. The grid
//! form takes as candidates all matrices whose real and imaginary parts
//! are multiples of `2^-bits` (optionally also `+-1/sqrt 2`) and whose
//! defect is below `1/(4s)`. This is a drastically reduced version of the
//! precision demanded for a complete search and is reported as such.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::budget::omega;
use super::composite::{
    apply_query, basis_zero, min_qubits, Action, CompositeAlgorithm, DecisionEntry, DecisionTable,
    Stage, StageOp,
};
use super::matrix::{dot, ComplexMatrix};
use crate::error::{Error, Result};
use crate::TruthTable;

/// Most grid matrices held in memory at once.
pub const MAX_GRID_CANDIDATES: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Entries are multiples of `2^-grid_bits`.
    pub grid_bits: u32,
    /// Restrict entries to real values.
    pub real_only: bool,
    /// Add `+-1/sqrt 2` to the allowed real and imaginary parts.
    pub augment_sqrt_half: bool,
    /// Accuracy of the correctness target `2/3 - epsilon`.
    pub epsilon: f64,
    /// Largest number of algorithm/table pairs to score.
    pub budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            grid_bits: 0,
            real_only: true,
            augment_sqrt_half: false,
            epsilon: 0.02,
            budget: 1 << 32,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    /// Smallest query count reaching `2/3 - epsilon`, if any up to `t_max`.
    pub t_star: Option<usize>,
    /// `t_star * sqrt(omega(epsilon))`.
    pub estimate: Option<f64>,
    /// Best worst-case success for each `T` searched, from 0.
    pub best_success: Vec<f64>,
    pub threshold: f64,
    pub candidates: usize,
    pub evaluated: u64,
    /// How the candidate set was produced.
    pub grid: Option<SearchOptions>,
    /// The best algorithm at `t_star` (or at the largest `T` searched).
    pub witness: Option<CompositeAlgorithm>,
}

fn grid_values(opts: &SearchOptions) -> Vec<f64> {
    let steps = 1i64 << opts.grid_bits;
    let mut v: Vec<f64> = (-steps..=steps).map(|a| a as f64 / steps as f64).collect();
    if opts.augment_sqrt_half {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        v.extend([h, -h]);
    }
    v.sort_by(f64::total_cmp);
    v
}

/// All grid matrices of dimension `s` with defect below `1/(4s)`, or the
/// number found so far once it exceeds `cap`.
pub fn grid_candidates(
    s: usize,
    opts: &SearchOptions,
    cap: usize,
) -> std::result::Result<Vec<ComplexMatrix>, usize> {
    let q = 1.0 / (4.0 * s as f64);
    let reals = grid_values(opts);
    let entries: Vec<Complex64> = if opts.real_only {
        reals.iter().map(|&r| Complex64::new(r, 0.0)).collect()
    } else {
        reals
            .iter()
            .flat_map(|&r| reals.iter().map(move |&i| Complex64::new(r, i)))
            .filter(|z| z.norm_sqr() <= 1.0 + q)
            .collect()
    };
    let mut rows = Vec::new();
    let mut row = Vec::with_capacity(s);
    unit_rows(&entries, s, q, 0.0, &mut row, &mut rows);
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(s);
    if orthogonal_sets(&rows, s, q, &mut chosen, &mut out, cap) {
        Ok(out)
    } else {
        Err(out.len())
    }
}

fn unit_rows(
    entries: &[Complex64],
    s: usize,
    q: f64,
    norm: f64,
    row: &mut Vec<Complex64>,
    out: &mut Vec<Vec<Complex64>>,
) {
    if row.len() == s {
        if (norm - 1.0).abs() < q {
            out.push(row.clone());
        }
        return;
    }
    for &z in entries {
        let next = norm + z.norm_sqr();
        if next >= 1.0 + q {
            continue;
        }
        row.push(z);
        unit_rows(entries, s, q, next, row, out);
        row.pop();
    }
}

/// Returns false once more than `cap` matrices have been produced.
fn orthogonal_sets(
    rows: &[Vec<Complex64>],
    s: usize,
    q: f64,
    chosen: &mut Vec<usize>,
    out: &mut Vec<ComplexMatrix>,
    cap: usize,
) -> bool {
    if chosen.len() == s {
        out.push(
            ComplexMatrix::from_rows(chosen.iter().map(|&r| rows[r].clone()).collect()).unwrap(),
        );
        return out.len() <= cap;
    }
    for r in 0..rows.len() {
        if chosen.iter().all(|&c| dot(&rows[c], &rows[r]).norm() < q) {
            chosen.push(r);
            let more = orthogonal_sets(rows, s, q, chosen, out, cap);
            chosen.pop();
            if !more {
                return false;
            }
        }
    }
    true
}

/// Searches single-stage algorithms on the grid described by `opts`.
pub fn sq_search(
    f: &TruthTable,
    m: usize,
    t_max: usize,
    opts: &SearchOptions,
) -> Result<SearchResult> {
    check_register(f, m)?;
    let s = 1usize << m;
    let tables = 2f64.powi(s as i32);
    let budget_cap = (opts.budget as f64 / tables).min(usize::MAX as f64 / 2.0) as usize;
    let cap = budget_cap.min(MAX_GRID_CANDIDATES);
    let candidates = grid_candidates(s, opts, cap).map_err(|found| {
        if cap < budget_cap {
            Error::TooLarge {
                what: "grid candidate count",
                n: found,
                max: MAX_GRID_CANDIDATES,
            }
        } else {
            Error::BudgetExceeded {
                required: found as f64 * tables,
                budget: opts.budget,
            }
        }
    })?;
    let mut result = sq_search_with_candidates(f, m, t_max, &candidates, opts)?;
    result.grid = Some(opts.clone());
    Ok(result)
}

fn check_register(f: &TruthTable, m: usize) -> Result<()> {
    if m < min_qubits(f.n()) {
        return Err(Error::Precondition(format!(
            "{m} qubits cannot hold the query registers for n = {}",
            f.n()
        )));
    }
    if m > 4 {
        return Err(Error::TooLarge {
            what: "algorithm search",
            n: m,
            max: 4,
        });
    }
    Ok(())
}

struct Searcher<'a> {
    f: &'a TruthTable,
    candidates: &'a [ComplexMatrix],
    s: usize,
    best: f64,
    best_choice: Option<(Vec<usize>, u32)>,
    evaluated: u64,
}

impl Searcher<'_> {
    /// `states[x]` is the state on input `x` after the chosen prefix.
    fn descend(&mut self, t: usize, choice: &mut Vec<usize>, states: &[Vec<Complex64>]) {
        if self.best >= 1.0 - 1e-12 {
            return;
        }
        for (ci, u) in self.candidates.iter().enumerate() {
            let mut next: Vec<Vec<Complex64>> =
                states.iter().map(|v| u.apply_unchecked(v)).collect();
            choice.push(ci);
            if choice.len() == t + 1 {
                self.finish(&next, choice);
            } else {
                for (x, v) in next.iter_mut().enumerate() {
                    apply_query(v, x as u32, self.f.n());
                }
                self.descend(t, choice, &next);
            }
            choice.pop();
            if self.best >= 1.0 - 1e-12 {
                return;
            }
        }
    }

    fn finish(&mut self, states: &[Vec<Complex64>], choice: &[usize]) {
        let probs: Vec<Vec<f64>> = states
            .iter()
            .map(|v| v.iter().map(|z| z.norm_sqr()).collect())
            .collect();
        for table in 0..(1u32 << self.s) {
            self.evaluated += 1;
            let success = probs
                .iter()
                .enumerate()
                .map(|(x, p)| {
                    let want = self.f.get(x as u32);
                    (0..self.s)
                        .filter(|&k| (table >> k & 1 == 1) == want)
                        .map(|k| p[k])
                        .sum::<f64>()
                })
                .fold(f64::INFINITY, f64::min);
            if success > self.best {
                self.best = success;
                self.best_choice = Some((choice.to_vec(), table));
            }
        }
    }
}

fn witness(
    f: &TruthTable,
    m: usize,
    candidates: &[ComplexMatrix],
    choice: &[usize],
    table: u32,
) -> CompositeAlgorithm {
    let s = 1usize << m;
    let mut matrices = BTreeMap::new();
    let mut ops = Vec::new();
    for (j, &c) in choice.iter().enumerate() {
        if j > 0 {
            ops.push(StageOp::Query);
        }
        let name = format!("U{j}");
        matrices.insert(name.clone(), candidates[c].clone());
        ops.push(StageOp::Matrix(name));
    }
    let entries = (0..s)
        .map(|k| DecisionEntry {
            transcript: vec![k],
            action: if table >> k & 1 == 1 {
                Action::Return1
            } else {
                Action::Return0
            },
        })
        .collect();
    CompositeAlgorithm {
        m,
        n: f.n(),
        matrices,
        stages: vec![Stage { ops }],
        decision: DecisionTable {
            outcome_mask: None,
            entries,
            default: None,
        },
    }
}

/// Searches single-stage algorithms built from an explicit candidate set.
/// Only `opts.epsilon` and `opts.budget` are used.
pub fn sq_search_with_candidates(
    f: &TruthTable,
    m: usize,
    t_max: usize,
    candidates: &[ComplexMatrix],
    opts: &SearchOptions,
) -> Result<SearchResult> {
    check_register(f, m)?;
    let s = 1usize << m;
    if let Some(bad) = candidates.iter().find(|c| c.dim() != s) {
        return Err(Error::DimensionMismatch {
            expected: s,
            got: bad.dim(),
        });
    }
    let threshold = 2.0 / 3.0 - opts.epsilon;
    let mut result = SearchResult {
        t_star: None,
        estimate: None,
        best_success: Vec::new(),
        threshold,
        candidates: candidates.len(),
        evaluated: 0,
        grid: None,
        witness: None,
    };
    for t in 0..=t_max {
        let required = (candidates.len() as f64).powi(t as i32 + 1) * 2f64.powi(s as i32);
        if required > opts.budget as f64 {
            return Err(Error::BudgetExceeded {
                required,
                budget: opts.budget,
            });
        }
        let mut searcher = Searcher {
            f,
            candidates,
            s,
            best: f64::NEG_INFINITY,
            best_choice: None,
            evaluated: 0,
        };
        let start = vec![basis_zero(s); f.len()];
        searcher.descend(t, &mut Vec::new(), &start);
        result.evaluated += searcher.evaluated;
        // Adding 0.0 turns -0.0 into 0.0.
        result.best_success.push(searcher.best + 0.0);
        if let Some((choice, table)) = &searcher.best_choice {
            result.witness = Some(witness(f, m, candidates, choice, *table));
        }
        if searcher.best >= threshold {
            result.t_star = Some(t);
            result.estimate = Some(t as f64 * omega(opts.epsilon).sqrt());
            break;
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::composite::score_algorithm;
    use crate::quantum::precision::defect;

    #[test]
    fn coarse_real_grid_is_signed_permutations() {
        let c = grid_candidates(2, &SearchOptions::default(), 1000).unwrap();
        assert_eq!(c.len(), 8);
        assert!(c.iter().all(|u| defect(u) == 0.0));
    }

    #[test]
    fn single_variable_needs_one_query() {
        let f: TruthTable = "01".parse().unwrap();
        let r = sq_search(&f, 2, 2, &SearchOptions::default()).unwrap();
        assert_eq!(r.t_star, Some(1));
        assert_eq!(r.best_success.len(), 2);
        assert!(r.best_success[0] <= 0.5 + 1e-12);
        let w = r.witness.unwrap();
        assert!(score_algorithm(&w, &f).unwrap().min_success >= 1.0 - 1e-12);
    }

    #[test]
    fn identity_only_finds_nothing() {
        let f: TruthTable = "0110".parse().unwrap();
        let id = [ComplexMatrix::identity(8)];
        let r = sq_search_with_candidates(&f, 3, 2, &id, &SearchOptions::default()).unwrap();
        assert_eq!(r.t_star, None);
        assert!(r.best_success.iter().all(|&p| p < 2.0 / 3.0));
    }

    #[test]
    fn budget_reported() {
        let f: TruthTable = "01".parse().unwrap();
        let opts = SearchOptions {
            budget: 100,
            ..SearchOptions::default()
        };
        match sq_search(&f, 2, 1, &opts) {
            Err(Error::BudgetExceeded { required, budget }) => {
                assert_eq!(budget, 100);
                assert!(required > 100.0);
            }
            other => panic!("{other:?}"),
        }
    }
}
