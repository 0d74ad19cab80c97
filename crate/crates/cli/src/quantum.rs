//! `quantum`: matrix repair, precision budgets, exact scoring of composite
//! algorithms and the small-space search.

use std::path::{Path, PathBuf};

use clap::Subcommand;
use qprops::quantum::{
    defect, precision_budget, repair_bound, repair_to_unitary, score_algorithm, simulate_composite,
    sq_search, ComplexMatrix, CompositeAlgorithm, InputOutcome, Score, SearchOptions,
};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::{parse_table, print_json, read_file, CliError, CliResult};

#[derive(Subcommand)]
pub enum QuantumCommand {
    /// Replace an almost-unitary matrix by a nearby unitary one
    Repair {
        /// JSON matrix `{"s": .., "re": [[..], ..], "im": [[..], ..]}` by rows
        matrix: PathBuf,
        /// Defect bound the input is promised to meet
        #[arg(long)]
        q: f64,
    },
    /// Precision needed to search all `m`-qubit algorithms on `n` bits
    Budget {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
    },
    /// Score a composite algorithm exactly on every input
    Verify {
        /// JSON composite algorithm
        algorithm: PathBuf,
        /// Truth table of the function it should compute
        #[arg(long)]
        function: String,
    },
    /// Smallest query count of a single-stage algorithm over a grid
    Search {
        table: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        tmax: usize,
        /// Entries are multiples of 2^-B
        #[arg(long, default_value_t = 0)]
        grid_bits: u32,
        /// Allow complex entries
        #[arg(long)]
        complex: bool,
        /// Also allow entries +-1/sqrt(2)
        #[arg(long)]
        sqrt_half: bool,
        #[arg(long, default_value_t = 0.02)]
        eps: f64,
        /// Largest number of algorithm/table pairs to score
        #[arg(long, default_value_t = 1 << 32)]
        budget: u64,
    },
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read_file(path)?)
        .map_err(|e| CliError::Input(format!("malformed {}: {e}", path.display())))
}

#[derive(Serialize)]
struct RepairReport {
    s: usize,
    q: f64,
    input_defect: f64,
    output_defect: f64,
    /// Largest entrywise distance between input and output.
    distance: f64,
    bound: f64,
    within_bound: bool,
    matrix: ComplexMatrix,
}

#[derive(Serialize)]
struct VerifyReport {
    score: Score,
    bounded_error: bool,
    outcomes: Vec<InputOutcome>,
}

pub fn run(cmd: QuantumCommand) -> CliResult<()> {
    match cmd {
        QuantumCommand::Repair { matrix, q } => {
            let a: ComplexMatrix = read_json(&matrix)?;
            let u = repair_to_unitary(&a, q)?;
            let distance = a.max_distance(&u)?;
            let bound = repair_bound(a.dim(), q);
            print_json(&RepairReport {
                s: a.dim(),
                q,
                input_defect: defect(&a),
                output_defect: defect(&u),
                distance,
                bound,
                within_bound: distance <= bound,
                matrix: u,
            })
        }
        QuantumCommand::Budget { m, n, eps } => print_json(&precision_budget(m, n, eps)?),
        QuantumCommand::Verify {
            algorithm,
            function,
        } => {
            let alg: CompositeAlgorithm = read_json(&algorithm)?;
            let f = parse_table(&function)?;
            let score = score_algorithm(&alg, &f)?;
            print_json(&VerifyReport {
                bounded_error: score.bounded_error(),
                score,
                outcomes: simulate_composite(&alg, &f)?,
            })
        }
        QuantumCommand::Search {
            table,
            m,
            tmax,
            grid_bits,
            complex,
            sqrt_half,
            eps,
            budget,
        } => {
            let f = parse_table(&table)?;
            let opts = SearchOptions {
                grid_bits,
                real_only: !complex,
                augment_sqrt_half: sqrt_half,
                epsilon: eps,
                budget,
            };
            print_json(&sq_search(&f, m, tmax, &opts)?)
        }
    }
}
