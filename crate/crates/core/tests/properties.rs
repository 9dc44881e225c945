use bnsl_core::decomposition::{generate_subproblems, ReconstructionTally, Strategy as Reconstruction};
use bnsl_core::encoder::{build_from_scores, hamiltonian_terms, scores_from_fn, Role, VariableIndexMap};
use bnsl_core::solvers::{complete_assignment, decode_solution, edge_bits};
use bnsl_core::Structure;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random DAG on `n` nodes: edges only go forward in a shuffled order.
fn dag(n: usize) -> impl Strategy<Value = Structure> {
    (
        Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
        proptest::collection::vec(proptest::bool::weighted(0.4), n * n),
    )
        .prop_map(move |(order, coins)| {
            let mut g = Structure::empty(n);
            for a in 0..n {
                for b in a + 1..n {
                    if coins[a * n + b] {
                        g.set_edge(order[a], order[b], true).unwrap();
                    }
                }
            }
            g
        })
}

fn random_dag(n: usize, rng: &mut ChaCha8Rng) -> Structure {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut g = Structure::empty(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.4) {
                g.set_edge(order[a], order[b], true).unwrap();
            }
        }
    }
    g
}

fn binomial(n: usize, k: usize) -> u32 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64) as u32
}

fn sized_dag() -> impl Strategy<Value = Structure> {
    (3usize..8).prop_flat_map(dag)
}

proptest! {
    #[test]
    fn index_roles_round_trip(n in 3usize..12) {
        let index = VariableIndexMap::new(n).unwrap();
        for (i, role) in index.roles().enumerate() {
            let back = match role {
                Role::Edge { from, to } => index.edge(from, to),
                Role::Slack { node, bit } => index.slack(node, bit),
                Role::Order { first, second } => index.order(first, second),
            };
            prop_assert_eq!(back, i);
        }
    }

    #[test]
    fn edge_bits_round_trip(g in sized_dag()) {
        let index = VariableIndexMap::new(g.n()).unwrap();
        let x = complete_assignment(&edge_bits(&g, &index).unwrap(), &index).unwrap();
        prop_assert_eq!(decode_solution(&x, &index).unwrap(), g);
    }

    #[test]
    fn completed_dag_pays_no_cycle_penalty(g in sized_dag()) {
        let n = g.n();
        let scores = scores_from_fn(n, |v, ps| -(v as f64) - ps.len() as f64).unwrap();
        let q = build_from_scores(scores, 1.0).unwrap();
        let x = complete_assignment(&edge_bits(&g, &q.index).unwrap(), &q.index).unwrap();
        let terms = hamiltonian_terms(&q, &x).unwrap();
        prop_assert_eq!(terms.cycle(), 0.0);
        // the in-degree term vanishes exactly when no node exceeds two parents
        let bounded = (0..n).all(|i| g.in_degree(i) <= 2);
        prop_assert_eq!(terms.max == 0.0, bounded);
    }

    #[test]
    fn strategy2_edges_are_a_subset_of_strategy1(
        (n, k, seed) in (4usize..8).prop_flat_map(|n| (Just(n), 3..=n, any::<u64>()))
    ) {
        let subproblems = generate_subproblems(n, k).unwrap();
        let mut tally = ReconstructionTally::new(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for indices in &subproblems {
            tally.add(indices, &random_dag(k, &mut rng)).unwrap();
        }
        let s1 = tally.reconstruct(Reconstruction::MajorityCount);
        let s2 = tally.reconstruct(Reconstruction::CountMinusAbsence);
        for (i, j) in s2.edges() {
            prop_assert!(s1.has_edge(i, j));
        }
        for g in [&s1, &s2] {
            for (i, j) in g.edges() {
                prop_assert!(!g.has_edge(j, i));
            }
        }
        // every pair is covered by C(n−2, k−2) subproblems
        let per_pair = binomial(n - 2, k - 2);
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                prop_assert_eq!(tally.count(i, j) + tally.absence(i, j), per_pair);
            }
        }
    }
}
