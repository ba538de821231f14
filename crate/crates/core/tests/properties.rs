//! Cross-module invariants checked over randomized inputs.

use bnsl::model::{is_acyclic, parameter_count, Dag, Genome};
use bnsl::nsga2::{dominates_objectives, fast_non_dominated_sort, Individual};
use bnsl::synth::random_dag;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn seeded_dag(n: usize, density: f64, seed: u64) -> Dag {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_dag(n, density, &mut rng)
}

proptest! {
    /// decode(encode(d)) reproduces the edge set of any DAG.
    #[test]
    fn genome_round_trip(n in 2usize..9, seed in any::<u64>()) {
        let dag = seeded_dag(n, 0.5, seed);
        let genome = Genome::encode(&dag);
        prop_assert_eq!(genome.decode_unchecked(), dag.edges().to_vec());
    }

    /// Repair always yields an acyclic subset of the decoded edges.
    #[test]
    fn repair_output_is_acyclic_subset(
        n in 2usize..7,
        bits in proptest::collection::vec(any::<bool>(), 0..42),
        seed in any::<u64>(),
    ) {
        let len = n * (n - 1);
        let mut padded = bits;
        padded.resize(len, false);
        let genome = Genome::new(n, padded).unwrap();
        let decoded = genome.decode_unchecked();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dag = genome.repair_cycles(&mut rng);
        prop_assert!(is_acyclic(n, dag.edges()));
        for e in dag.edges() {
            prop_assert!(decoded.contains(e));
        }
    }

    /// Relabeling nodes by topological position makes every edge point from
    /// a lower to a higher position (a strictly lower-triangular adjacency
    /// matrix when rows index children).
    #[test]
    fn topological_relabeling_is_triangular(n in 2usize..10, seed in any::<u64>()) {
        let dag = seeded_dag(n, 0.4, seed);
        let order = dag.topological_order().unwrap();
        let mut position = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        for &(p, c) in dag.edges() {
            prop_assert!(position[p] < position[c]);
        }
    }

    /// The empty graph has one free parameter less than each variable's
    /// arity, summed.
    #[test]
    fn empty_graph_parameter_count(arities in proptest::collection::vec(2usize..5, 1..10)) {
        let n = arities.len();
        let expected: usize = arities.iter().map(|a| a - 1).sum();
        prop_assert_eq!(parameter_count(&Dag::empty(n), &arities), expected);
    }

    /// Non-dominated sorting agrees with a brute-force peel-off on random
    /// objective sets.
    #[test]
    fn sorting_matches_brute_force(
        objectives in proptest::collection::vec((-50.0f64..0.0, 0usize..15), 1..40)
    ) {
        let mut population: Vec<Individual> = objectives
            .iter()
            .map(|&(ll, arcs)| Individual {
                genome: Genome::zeros(2),
                dag: Dag::empty(2),
                log_likelihood: ll,
                arcs,
                rank: None,
                crowding: None,
            })
            .collect();
        let fronts = fast_non_dominated_sort(&mut population).unwrap();

        let mut remaining: Vec<usize> = (0..objectives.len()).collect();
        let mut expected = Vec::new();
        while !remaining.is_empty() {
            let front: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&i| {
                    !remaining.iter().any(|&j| {
                        j != i && dominates_objectives(objectives[j], objectives[i])
                    })
                })
                .collect();
            remaining.retain(|i| !front.contains(i));
            expected.push(front);
        }
        prop_assert_eq!(fronts, expected);
    }
}
