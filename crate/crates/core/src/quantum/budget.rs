//! Precision needed to search space-bounded quantum algorithms exhaustively.

use serde::{Deserialize, Serialize};

use super::precision::REPAIR_CONSTANT;
use crate::error::{Error, Result};

/// Largest admissible correctness accuracy.
pub const MAX_EPSILON: f64 = 0.0268;

/// Derived precision parameters for `m` qubits and `n` variables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionBudget {
    pub m: usize,
    pub n: usize,
    /// Query bound used for the error-buildup check (`T = n`).
    pub t: usize,
    pub epsilon: f64,
    pub inv_lambda: f64,
    /// Tolerated `L_max` error per matrix.
    pub lambda: f64,
    /// `1 / (lambda 2^m)`.
    pub c: f64,
    /// Whether `c > T/2`.
    pub c_exceeds_half_t: bool,
    /// `L_2` error of the final states.
    pub big_delta: f64,
    /// Whether `epsilon <= 2 Delta`.
    pub epsilon_within_two_delta: bool,
    /// Defect allowed when generating almost-unitary matrices,
    /// `lambda / (4.91 sqrt(s))`.
    pub q_generate: f64,
    /// `max[lambda/(9.82 s), lambda^(1/2)/(2.22 s^(3/4))]`.
    pub delta: f64,
    /// Whether `delta` above meets `2 delta sqrt(s) + delta^2 s <= q_generate`.
    pub delta_sufficient: bool,
    /// Largest `delta` meeting that inequality (positive root).
    pub delta_exact: f64,
    /// `ceil(log2(1/delta_exact))`.
    pub bits_per_entry: u32,
    /// Bits for one `m`-qubit algorithm with `n` queries: `(n + 1)`
    /// matrices of `4^m` complex entries at two reals each.
    pub spec_bits: u64,
    pub omega: f64,
    pub sqrt_omega: f64,
}

/// `22/9 + (4/3) eps - 8 eps^2`.
pub fn omega(epsilon: f64) -> f64 {
    22.0 / 9.0 + 4.0 / 3.0 * epsilon - 8.0 * epsilon * epsilon
}

/// Expected number of runs of a `p`-correct answerer until one answer
/// has appeared twice: two runs if the first two agree, three otherwise.
pub fn repetition_expectation(p: f64) -> f64 {
    let agree = p * p + (1.0 - p) * (1.0 - p);
    2.0 * agree + 3.0 * (1.0 - agree)
}

/// Probability that the majority of three independent `p`-correct runs is
/// correct, which is what repeating until an answer repeats returns.
pub fn repetition_success(p: f64) -> f64 {
    p * p * (3.0 - 2.0 * p)
}

pub fn precision_budget(m: usize, n: usize, epsilon: f64) -> Result<PrecisionBudget> {
    if !(epsilon > 0.0 && epsilon <= MAX_EPSILON) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    if n == 0 || (m as f64) < (n as f64).log2() + 2.0 {
        return Err(Error::Precondition(format!(
            "m = {m} below log2(n) + 2 for n = {n}"
        )));
    }
    let s = (1u64 << m) as f64;
    let nf = n as f64;
    let half_m = 2f64.powf(m as f64 / 2.0);
    let inv_lambda = half_m * nf * (2.0 / epsilon + 1.0);
    let lambda = 1.0 / inv_lambda;
    let c = 1.0 / (lambda * s);
    let big_delta = 2.0 * nf / (half_m * (2.0 / (s * lambda) - nf));
    let q_generate = lambda / (REPAIR_CONSTANT * s.sqrt());
    let delta = f64::max(
        lambda / (2.0 * REPAIR_CONSTANT * s),
        lambda.sqrt() / (2.22 * s.powf(0.75)),
    );
    let growth = |d: f64| 2.0 * d * s.sqrt() + d * d * s;
    let delta_exact = ((1.0 + q_generate).sqrt() - 1.0) / s.sqrt();
    let bits_per_entry = (1.0 / delta_exact).log2().ceil() as u32;
    let spec_bits = (n as u64 + 1) * (1u64 << (2 * m)) * 2 * bits_per_entry as u64;
    let w = omega(epsilon);
    Ok(PrecisionBudget {
        m,
        n,
        t: n,
        epsilon,
        inv_lambda,
        lambda,
        c,
        c_exceeds_half_t: c > nf / 2.0,
        big_delta,
        epsilon_within_two_delta: epsilon <= 2.0 * big_delta,
        q_generate,
        delta,
        delta_sufficient: growth(delta) <= q_generate,
        delta_exact,
        bits_per_entry,
        spec_bits,
        omega: w,
        sqrt_omega: w.sqrt(),
    })
}
