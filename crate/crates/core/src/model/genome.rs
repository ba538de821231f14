//! Bitstring genomes: linearized adjacency matrices with the diagonal skipped.
//!
//! Bit position `p` maps to the off-diagonal cell in row-major order:
//! row = p / (n-1), and the column index skips the diagonal entry. A genome
//! may encode a cyclic graph; [`Genome::repair_cycles`] turns it into a
//! [`Dag`] by deleting one random edge per detected cycle.

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::dag::Dag;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Genome {
    n: usize,
    bits: Vec<bool>,
}

impl Genome {
    /// Wraps a bit vector, checking that its length is exactly n(n-1).
    pub fn new(n: usize, bits: Vec<bool>) -> Result<Self> {
        let expected = n * n.saturating_sub(1);
        if bits.len() != expected {
            return Err(Error::GenomeLength { expected, actual: bits.len() });
        }
        Ok(Self { n, bits })
    }

    /// All-zero genome (empty graph).
    pub fn zeros(n: usize) -> Self {
        Self { n, bits: vec![false; n * n.saturating_sub(1)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn bit(&self, position: usize) -> bool {
        self.bits[position]
    }

    pub fn set_bit(&mut self, position: usize, value: bool) {
        self.bits[position] = value;
    }

    pub fn flip_bit(&mut self, position: usize) {
        self.bits[position] = !self.bits[position];
    }

    /// Maps a bit position to its (parent, child) pair.
    pub fn edge_at(n: usize, position: usize) -> (usize, usize) {
        let row = position / (n - 1);
        let k = position % (n - 1);
        let col = if k < row { k } else { k + 1 };
        (row, col)
    }

    /// Maps a (parent, child) pair to its bit position.
    pub fn position_of(n: usize, parent: usize, child: usize) -> usize {
        let k = if child < parent { child } else { child - 1 };
        parent * (n - 1) + k
    }

    /// Encodes a DAG; `decode_unchecked(encode(d))` equals `d.edges()`.
    pub fn encode(dag: &Dag) -> Genome {
        let mut genome = Genome::zeros(dag.n());
        for &(p, c) in dag.edges() {
            let pos = Self::position_of(dag.n(), p, c);
            genome.bits[pos] = true;
        }
        genome
    }

    /// Decodes the raw edge set without any acyclicity guarantee, sorted by
    /// (parent, child).
    pub fn decode_unchecked(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .bits
            .iter()
            .enumerate()
            .filter(|&(_, &b)| b)
            .map(|(p, _)| Self::edge_at(self.n, p))
            .collect();
        edges.sort_unstable();
        edges
    }

    /// Correction procedure: while the decoded graph contains a cycle, remove
    /// one edge chosen uniformly at random among the edges of the first
    /// cycle found (deterministic DFS from the lowest node). Acyclic inputs
    /// come back unchanged; the result's edges are always a subset of the
    /// decoded edge set.
    pub fn repair_cycles<R: Rng + ?Sized>(&self, rng: &mut R) -> Dag {
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (p, c) in self.decode_unchecked() {
            children[p].push(c);
        }
        while let Some(cycle) = find_cycle(self.n, &children) {
            let (p, c) = cycle[rng.gen_range(0..cycle.len())];
            let at = children[p].iter().position(|&x| x == c).expect("edge in cycle");
            children[p].remove(at);
        }
        let edges = children
            .iter()
            .enumerate()
            .flat_map(|(p, cs)| cs.iter().map(move |&c| (p, c)));
        Dag::new(self.n, edges).expect("repair yields an acyclic graph")
    }
}

/// Finds one directed cycle and returns its edges in traversal order, or
/// `None` if the graph is acyclic. DFS roots are visited in ascending index
/// order, so the detected cycle is deterministic for a given graph.
fn find_cycle(n: usize, children: &[Vec<usize>]) -> Option<Vec<(usize, usize)>> {
    const WHITE: u8 = 0;
    const GRAY: u8 = 1;
    const BLACK: u8 = 2;

    fn dfs(
        u: usize,
        children: &[Vec<usize>],
        color: &mut [u8],
        path: &mut Vec<usize>,
    ) -> Option<Vec<(usize, usize)>> {
        color[u] = GRAY;
        path.push(u);
        for &v in &children[u] {
            if color[v] == GRAY {
                let start = path.iter().position(|&x| x == v).expect("gray node on path");
                let mut edges: Vec<(usize, usize)> =
                    path[start..].windows(2).map(|w| (w[0], w[1])).collect();
                edges.push((u, v));
                return Some(edges);
            }
            if color[v] == WHITE {
                if let Some(cycle) = dfs(v, children, color, path) {
                    return Some(cycle);
                }
            }
        }
        path.pop();
        color[u] = BLACK;
        None
    }

    let mut color = vec![WHITE; n];
    let mut path = Vec::new();
    for root in 0..n {
        if color[root] == WHITE {
            if let Some(cycle) = dfs(root, children, &mut color, &mut path) {
                return Some(cycle);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::dag::is_acyclic;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn position_mapping_n3() {
        // Position order for n=3: (0,1),(0,2),(1,0),(1,2),(2,0),(2,1).
        let expected = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];
        for (p, &pair) in expected.iter().enumerate() {
            assert_eq!(Genome::edge_at(3, p), pair);
            assert_eq!(Genome::position_of(3, pair.0, pair.1), p);
        }
    }

    #[test]
    fn encode_smallest_case() {
        let dag = Dag::new(2, [(0, 1)]).unwrap();
        assert_eq!(Genome::encode(&dag).bits(), &[true, false]);
        assert_eq!(Genome::zeros(2).decode_unchecked(), Vec::<(usize, usize)>::new());
    }

    #[test]
    fn encode_n3_example() {
        let dag = Dag::new(3, [(0, 2), (2, 1)]).unwrap();
        assert_eq!(
            Genome::encode(&dag).bits(),
            &[false, true, false, false, false, true]
        );
    }

    #[test]
    fn length_is_checked() {
        assert!(matches!(
            Genome::new(3, vec![false; 5]),
            Err(Error::GenomeLength { expected: 6, actual: 5 })
        ));
        assert!(Genome::new(3, vec![false; 6]).is_ok());
    }

    #[test]
    fn repair_keeps_acyclic_input_unchanged() {
        let dag = Dag::new(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let genome = Genome::encode(&dag);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(genome.repair_cycles(&mut rng).edges(), dag.edges());
    }

    #[test]
    fn repair_two_cycle_is_a_fair_coin() {
        let genome = Genome::new(2, vec![true, true]).unwrap();
        let trials = 10_000;
        let mut kept_forward = 0usize;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..trials {
            let dag = genome.repair_cycles(&mut rng);
            assert_eq!(dag.edge_count(), 1);
            if dag.has_edge(0, 1) {
                kept_forward += 1;
            }
        }
        let frequency = kept_forward as f64 / trials as f64;
        assert!((frequency - 0.5).abs() < 0.02, "forward kept with frequency {frequency}");
    }

    #[test]
    fn repair_of_full_genome_is_acyclic_subset() {
        let n = 3;
        let full = Genome::new(n, vec![true; n * (n - 1)]).unwrap();
        let all_edges = full.decode_unchecked();
        for seed in 0..200 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let dag = full.repair_cycles(&mut rng);
            assert!(is_acyclic(n, dag.edges()));
            for e in dag.edges() {
                assert!(all_edges.contains(e));
            }
        }
    }

    #[test]
    fn repair_is_deterministic_given_rng_state() {
        let n = 6;
        let genome = Genome::new(n, vec![true; n * (n - 1)]).unwrap();
        let a = genome.repair_cycles(&mut ChaCha8Rng::seed_from_u64(3));
        let b = genome.repair_cycles(&mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
    }
}
