//! Limited-precision unitary matrices and space-bounded quantum query
//! algorithms: almost-unitary repair and truncation, error buildup in
//! products, the precision needed for an exhaustive search, an exact
//! simulator for composite algorithms and a small search driver.

mod budget;
mod composite;
mod matrix;
mod precision;
mod search;

pub use budget::{
    omega, precision_budget, repetition_expectation, repetition_success, PrecisionBudget,
    MAX_EPSILON,
};
pub use composite::{
    index_bits, min_qubits, score_algorithm, simulate_composite, Action, CompositeAlgorithm,
    DecisionEntry, DecisionTable, InputOutcome, Score, Stage, StageOp, BRANCH_CUTOFF,
};
pub use matrix::{dot, l2_norm, ComplexMatrix};
pub use num_complex::Complex64;
pub use precision::{
    check_propagation, defect, is_unitary, propagation_bound, repair_bound, repair_to_unitary,
    truncate_matrix, truncation_bound, AlmostUnitaryCert, REPAIR_CONSTANT, UNITARY_TOLERANCE,
};
pub use search::{
    grid_candidates, sq_search, sq_search_with_candidates, SearchOptions, SearchResult,
    MAX_GRID_CANDIDATES,
};
