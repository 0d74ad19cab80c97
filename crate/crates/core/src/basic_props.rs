//! Deterministic query complexity, certificate complexity and degree by
//! dynamic programming over all `3^n` restrictions.
//!
//! Memory is one flat table of `3^n` entries per property, so these are
//! practical up to roughly `n = 16`.

use serde::{Deserialize, Serialize};

use crate::restriction_lattice::{constancy, pow3, Digits, FREE};
use crate::TruthTable;

/// Largest `n` for which the `3^n` tables are allocated by the CLI.
pub const MAX_DP_VARS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub d: usize,
    pub c: usize,
    pub deg: usize,
}

pub fn property_report(f: &TruthTable) -> PropertyReport {
    PropertyReport {
        d: deterministic_query_complexity(f),
        c: certificate_complexity(f),
        deg: degree(f),
    }
}

/// `D(f)`: the minimum depth of a decision tree computing `f`.
pub fn deterministic_query_complexity(f: &TruthTable) -> usize {
    let n = f.n();
    let p3 = pow3(n);
    let total = p3[n];
    let cs = constancy(f, &p3);
    let mut depth = vec![0u8; total];
    let mut d = Digits::zero(n);
    for t in 0..total {
        if cs[t] == FREE {
            let mut best = u8::MAX;
            let mut free = d.free;
            while free != 0 {
                let i = free.trailing_zeros() as usize;
                free &= free - 1;
                let v = 1 + depth[t - 2 * p3[i]].max(depth[t - p3[i]]);
                best = best.min(v);
            }
            depth[t] = best;
        }
        if t + 1 < total {
            d.increment();
        }
    }
    depth[total - 1] as usize
}

/// `C(f)`: the largest, over inputs, of the smallest number of fixed bits
/// that force the value of `f`.
pub fn certificate_complexity(f: &TruthTable) -> usize {
    let n = f.n();
    let p3 = pow3(n);
    let total = p3[n];
    let cs = constancy(f, &p3);
    const NONE: u8 = u8::MAX;
    // best[t]: fewest fixed variables among constant restrictions that
    // generalize t (free a superset of t's free variables, agree elsewhere).
    let mut best = vec![NONE; total];
    let mut d = Digits::top(n);
    let mut worst = 0u8;
    for t in (0..total).rev() {
        if cs[t] != FREE {
            let mut b = (n - d.free.count_ones() as usize) as u8;
            let mut fixed = !d.free & f.full_mask();
            while fixed != 0 {
                let i = fixed.trailing_zeros() as usize;
                fixed &= fixed - 1;
                let up = t + (2 - d.digits[i] as usize) * p3[i];
                b = b.min(best[up]);
            }
            best[t] = b;
            if d.free == 0 {
                worst = worst.max(b);
            }
        }
        if t > 0 {
            d.decrement();
        }
    }
    worst as usize
}

/// `deg(f)`: the size of the largest restriction whose numbers of odd-
/// and even-parity accepting inputs differ.
pub fn degree(f: &TruthTable) -> usize {
    let n = f.n();
    let p3 = pow3(n);
    let total = p3[n];
    // signed[t] = (# even-weight 1-inputs) - (# odd-weight 1-inputs), weight
    // taken over the free variables of t.
    let mut signed = vec![0i32; total];
    let mut d = Digits::zero(n);
    let mut deg = 0usize;
    for t in 0..total {
        signed[t] = if d.free == 0 {
            f.get(d.ones) as i32
        } else {
            let i = d.free.trailing_zeros() as usize;
            signed[t - 2 * p3[i]] - signed[t - p3[i]]
        };
        if signed[t] != 0 {
            deg = deg.max(d.free.count_ones() as usize);
        }
        if t + 1 < total {
            d.increment();
        }
    }
    deg
}

/// Coefficients of the unique multilinear polynomial agreeing with `f`,
/// indexed by monomial support mask.
pub fn multilinear_coefficients(f: &TruthTable) -> Vec<i64> {
    let len = f.len();
    let mut a: Vec<i64> = (0..len as u32).map(|x| f.get(x) as i64).collect();
    for i in 0..f.n() {
        let bit = 1usize << i;
        for s in 0..len {
            if s & bit != 0 {
                a[s] -= a[s ^ bit];
            }
        }
    }
    a
}

/// Degree read off the subset Möbius transform.
pub fn degree_oracle(f: &TruthTable) -> usize {
    multilinear_coefficients(f)
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(s, _)| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tt(s: &str) -> TruthTable {
        s.parse().unwrap()
    }

    fn mux3() -> TruthTable {
        TruthTable::from_fn(3, |x| {
            if x & 1 == 1 {
                x >> 1 & 1 == 1
            } else {
                x >> 2 & 1 == 1
            }
        })
        .unwrap()
    }

    #[derive(Clone)]
    enum Tree {
        Leaf(bool),
        Node(usize, Box<Tree>, Box<Tree>),
    }

    impl Tree {
        fn eval(&self, x: u32) -> bool {
            match self {
                Tree::Leaf(v) => *v,
                Tree::Node(i, a, b) => {
                    if x >> i & 1 == 0 {
                        a.eval(x)
                    } else {
                        b.eval(x)
                    }
                }
            }
        }
    }

    fn all_trees(n: usize, depth: usize) -> Vec<Tree> {
        let mut out = vec![Tree::Leaf(false), Tree::Leaf(true)];
        if depth > 0 {
            let sub = all_trees(n, depth - 1);
            for i in 0..n {
                for a in &sub {
                    for b in &sub {
                        out.push(Tree::Node(i, Box::new(a.clone()), Box::new(b.clone())));
                    }
                }
            }
        }
        out
    }

    fn computes(t: &Tree, f: &TruthTable) -> bool {
        (0..f.len() as u32).all(|x| t.eval(x) == f.get(x))
    }

    fn brute_certificate(f: &TruthTable) -> usize {
        let full = f.full_mask();
        (0..f.len() as u32)
            .map(|x| {
                (0..=full)
                    .filter(|&s| {
                        (0..=full)
                            .filter(|y| (y ^ x) & s == 0)
                            .all(|y| f.get(y) == f.get(x))
                    })
                    .map(|s| s.count_ones() as usize)
                    .min()
                    .unwrap()
            })
            .max()
            .unwrap()
    }

    #[test]
    fn decision_tree_examples() {
        assert_eq!(deterministic_query_complexity(&tt("00000001")), 3);
        assert_eq!(deterministic_query_complexity(&tt("00000000")), 0);
        // depth-2 trees exist for MUX3, depth-1 trees don't
        let m = mux3();
        assert!(!all_trees(3, 1).iter().any(|t| computes(t, &m)));
        assert!(all_trees(3, 2).iter().any(|t| computes(t, &m)));
        assert_eq!(deterministic_query_complexity(&m), 2);
    }

    #[test]
    fn decision_tree_depth_matches_tree_enumeration_n2() {
        let trees: Vec<Vec<Tree>> = (0..=2).map(|d| all_trees(2, d)).collect();
        for idx in 0..16 {
            let f = TruthTable::nth(2, idx).unwrap();
            let brute = (0..=2)
                .find(|&d| trees[d].iter().any(|t| computes(t, &f)))
                .unwrap();
            assert_eq!(deterministic_query_complexity(&f), brute, "{f:?}");
        }
    }

    #[test]
    fn certificate_examples() {
        let or3 = tt("01111111");
        assert_eq!(brute_certificate(&or3), 3);
        assert_eq!(certificate_complexity(&or3), 3);
        let x1 = TruthTable::from_fn(3, |x| x & 1 == 1).unwrap();
        assert_eq!(certificate_complexity(&x1), 1);
        assert_eq!(brute_certificate(&mux3()), 2);
        assert_eq!(certificate_complexity(&mux3()), 2);
        assert_eq!(certificate_complexity(&tt("0000")), 0);
    }

    #[test]
    fn certificate_matches_brute_force_n3() {
        for idx in 0..256 {
            let f = TruthTable::nth(3, idx).unwrap();
            assert_eq!(certificate_complexity(&f), brute_certificate(&f), "{f:?}");
        }
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree(&tt("0001")), 2);
        assert_eq!(degree_oracle(&tt("0001")), 2);
        assert_eq!(degree(&tt("01101001")), 3);
        assert_eq!(degree_oracle(&tt("01101001")), 3);
        assert_eq!(degree(&tt("1111")), 0);
        assert_eq!(degree_oracle(&tt("0111")), 2);
    }

    #[test]
    fn known_expansions() {
        assert_eq!(multilinear_coefficients(&tt("0001")), vec![0, 0, 0, 1]);
        assert_eq!(multilinear_coefficients(&tt("0111")), vec![0, 1, 1, -1]);
    }

    #[test]
    fn degree_agrees_with_oracle_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 4..=6 {
            for _ in 0..200 {
                let f = TruthTable::random(n, &mut rng).unwrap();
                assert_eq!(degree(&f), degree_oracle(&f));
            }
        }
    }

    #[test]
    fn symmetric_functions_have_full_depth() {
        for n in 1..=4usize {
            for profile in 0..(1u32 << (n + 1)) {
                let f = TruthTable::from_fn(n, |x| profile >> x.count_ones() & 1 == 1).unwrap();
                let d = deterministic_query_complexity(&f);
                if f.is_constant() {
                    assert_eq!(d, 0);
                } else {
                    assert_eq!(d, n, "profile {profile:b}");
                }
            }
        }
    }

    #[test]
    fn invariant_under_symmetries() {
        use rand::seq::SliceRandom;
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.gen_range(1..=6);
            let f = TruthTable::random(n, &mut rng).unwrap();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let mask = rng.gen::<u32>() & f.full_mask();
            let mut g = f.permute(&perm).flip_inputs(mask);
            if rng.gen() {
                g = g.complement();
            }
            assert_eq!(property_report(&f), property_report(&g));
        }
    }
}
