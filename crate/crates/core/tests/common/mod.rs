//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use qprops::quantum::{
    Action, Complex64, ComplexMatrix, CompositeAlgorithm, DecisionEntry, DecisionTable, Stage,
    StageOp,
};
use qprops::TruthTable;
use rand::Rng;
use rand_distr::StandardNormal;

/// Haar-like random unitary: Gaussian rows, then modified Gram-Schmidt.
pub fn random_unitary<R: Rng>(s: usize, rng: &mut R) -> ComplexMatrix {
    let mut rows: Vec<Vec<Complex64>> = (0..s)
        .map(|_| {
            (0..s)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect()
        })
        .collect();
    for i in 0..s {
        for j in 0..i {
            let c = qprops::quantum::dot(&rows[i], &rows[j]);
            let rj = rows[j].clone();
            for (z, b) in rows[i].iter_mut().zip(&rj) {
                *z -= c * b;
            }
        }
        let norm = qprops::quantum::l2_norm(&rows[i]);
        rows[i].iter_mut().for_each(|z| *z /= norm);
    }
    ComplexMatrix::from_rows(rows).unwrap()
}

/// Complex number of modulus `r` and random phase.
pub fn random_phase<R: Rng>(r: f64, rng: &mut R) -> Complex64 {
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

pub fn random_unit_vector<R: Rng>(s: usize, rng: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..s)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = qprops::quantum::l2_norm(&v);
    v.into_iter().map(|z| z / norm).collect()
}

fn table(mask: Option<usize>, entries: &[(&[usize], Action)]) -> DecisionTable {
    DecisionTable {
        outcome_mask: mask,
        entries: entries
            .iter()
            .map(|(t, a)| DecisionEntry {
                transcript: t.to_vec(),
                action: *a,
            })
            .collect(),
        default: None,
    }
}

fn stage(ops: &[&str]) -> Stage {
    Stage {
        ops: ops
            .iter()
            .map(|&o| {
                if o == "Q" {
                    StageOp::Query
                } else {
                    StageOp::Matrix(o.into())
                }
            })
            .collect(),
    }
}

/// One-query parity of two bits on three qubits (index, target,
/// workspace): index in `|+>`, target in `|->`, query, Hadamard on the
/// index, read the index bit.
pub fn deutsch_xor2() -> CompositeAlgorithm {
    let m = 3;
    let h = ComplexMatrix::hadamard();
    let x = ComplexMatrix::pauli_x();
    let prep = ComplexMatrix::on_qubit(m, 0, &h)
        .mul(&ComplexMatrix::on_qubit(m, 1, &h))
        .unwrap()
        .mul(&ComplexMatrix::on_qubit(m, 1, &x))
        .unwrap();
    let matrices = BTreeMap::from([
        ("PREP".to_string(), prep),
        ("H0".to_string(), ComplexMatrix::on_qubit(m, 0, &h)),
    ]);
    CompositeAlgorithm {
        m,
        n: 2,
        matrices,
        stages: vec![stage(&["PREP", "Q", "H0"])],
        decision: table(Some(1), &[(&[0], Action::Return0), (&[1], Action::Return1)]),
    }
}

/// AND of two bits as a classical decision tree: query `x1`, stop on 0,
/// otherwise query `x2` in a second stage and return it.
pub fn classical_and2() -> CompositeAlgorithm {
    let m = 3;
    let matrices = BTreeMap::from([(
        "X0".to_string(),
        ComplexMatrix::on_qubit(m, 0, &ComplexMatrix::pauli_x()),
    )]);
    CompositeAlgorithm {
        m,
        n: 2,
        matrices,
        stages: vec![stage(&["Q"]), stage(&["X0", "Q"])],
        decision: table(
            None,
            &[
                (&[0], Action::Return0),
                (&[2], Action::Continue),
                (&[2, 1], Action::Return0),
                (&[2, 3], Action::Return1),
            ],
        ),
    }
}

/// Symmetric after flipping `mask`, with a random weight profile.
pub fn planted_quasisymmetric<R: Rng>(n: usize, rng: &mut R) -> TruthTable {
    let profile: Vec<bool> = (0..=n).map(|_| rng.gen()).collect();
    let mask = rng.gen::<u32>() & qprops::truth_table::full_mask(n);
    TruthTable::from_fn(n, |x| profile[(x ^ mask).count_ones() as usize]).unwrap()
}
