//! Query-complexity properties of Boolean functions given as truth tables,
//! plus a small toolkit for limited-precision unitary matrices and
//! space-bounded quantum query algorithms.

pub mod basic_props;
pub mod block_sensitivity;
pub mod error;
pub mod quantum;
pub mod quasisymmetry;
mod restriction_lattice;
pub mod tree_decomposition;
pub mod truth_table;

pub use error::{Error, Result};
pub use truth_table::{flip_block, parse_truth_table, Block, Restriction, TruthTable, VariableSet};
