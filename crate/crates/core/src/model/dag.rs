//! Directed acyclic graphs over `n` labeled nodes.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// A directed acyclic graph over nodes `0..n`.
///
/// Acyclicity and the absence of self-loops are established at construction
/// and hold for the lifetime of the value; all accessors are read-only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    n: usize,
    /// Sorted lexicographically by (parent, child), deduplicated.
    edges: Vec<(usize, usize)>,
    /// Per node, ascending.
    parents: Vec<Vec<usize>>,
    /// Per node, ascending.
    children: Vec<Vec<usize>>,
}

impl Dag {
    /// Builds a DAG from an edge set, rejecting self-loops, out-of-range
    /// indices and cycles. Duplicate edges are collapsed.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut edges: Vec<(usize, usize)> = edges.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();
        for &(p, c) in &edges {
            if p == c || p >= n || c >= n {
                return Err(Error::InvalidEdge(p, c));
            }
        }
        if kahn_order(n, &edges).is_none() {
            return Err(Error::CycleDetected);
        }
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for &(p, c) in &edges {
            parents[c].push(p);
            children[p].push(c);
        }
        for list in parents.iter_mut().chain(children.iter_mut()) {
            list.sort_unstable();
        }
        Ok(Self { n, edges, parents, children })
    }

    /// The graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Self { n, edges: Vec::new(), parents: vec![Vec::new(); n], children: vec![Vec::new(); n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges sorted by (parent, child).
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, parent: usize, child: usize) -> bool {
        self.edges.binary_search(&(parent, child)).is_ok()
    }

    /// Parents of `node`, ascending.
    pub fn parents_of(&self, node: usize) -> &[usize] {
        &self.parents[node]
    }

    /// Children of `node`, ascending.
    pub fn children_of(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    /// Topological order with parents before children; ties among ready nodes
    /// are broken by ascending node index, so the result is deterministic.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        kahn_order(self.n, &self.edges).ok_or(Error::CycleDetected)
    }

    /// True iff a directed path `from -> ... -> to` exists. `skip` removes a
    /// single edge from consideration, which is what an edge-reversal
    /// validity check needs.
    pub fn has_path(&self, from: usize, to: usize, skip: Option<(usize, usize)>) -> bool {
        if from == to {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![from];
        while let Some(u) = stack.pop() {
            if std::mem::replace(&mut seen[u], true) {
                continue;
            }
            for &v in &self.children[u] {
                if skip == Some((u, v)) {
                    continue;
                }
                if v == to {
                    return true;
                }
                if !seen[v] {
                    stack.push(v);
                }
            }
        }
        false
    }

    /// Copy with one edge added; fails if the edge is invalid or creates a cycle.
    pub fn with_edge_added(&self, parent: usize, child: usize) -> Result<Dag> {
        let mut edges = self.edges.clone();
        edges.push((parent, child));
        Dag::new(self.n, edges)
    }

    /// Copy with one edge removed; the edge must exist.
    pub fn with_edge_removed(&self, parent: usize, child: usize) -> Result<Dag> {
        if !self.has_edge(parent, child) {
            return Err(Error::InvalidEdge(parent, child));
        }
        let edges = self.edges.iter().copied().filter(|&e| e != (parent, child));
        Dag::new(self.n, edges)
    }

    /// Copy with one edge reversed; fails if the reversal creates a cycle.
    pub fn with_edge_reversed(&self, parent: usize, child: usize) -> Result<Dag> {
        if !self.has_edge(parent, child) {
            return Err(Error::InvalidEdge(parent, child));
        }
        let edges = self
            .edges
            .iter()
            .copied()
            .map(|e| if e == (parent, child) { (child, parent) } else { e });
        Dag::new(self.n, edges)
    }
}

/// True iff the edge set over `n` nodes admits a topological order covering
/// all nodes. Total on well-formed input (indices < n, no self-loops).
pub fn is_acyclic(n: usize, edges: &[(usize, usize)]) -> bool {
    kahn_order(n, edges).is_some()
}

/// Number of free parameters of the factorized model:
/// sum over nodes of (arity - 1) * product of parent arities.
pub fn parameter_count(dag: &Dag, arities: &[usize]) -> usize {
    (0..dag.n())
        .map(|i| {
            let rows: usize = dag.parents_of(i).iter().map(|&p| arities[p]).product();
            (arities[i] - 1) * rows
        })
        .sum()
}

/// Kahn's algorithm with a min-heap over ready nodes; returns `None` when a
/// cycle prevents a complete order.
fn kahn_order(n: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut indegree = vec![0usize; n];
    let mut children = vec![Vec::new(); n];
    for &(p, c) in edges {
        indegree[c] += 1;
        children[p].push(c);
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&i| indegree[i] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(u)) = ready.pop() {
        order.push(u);
        for &c in &children[u] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.push(Reverse(c));
            }
        }
    }
    (order.len() == n).then_some(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn acyclicity_examples() {
        assert!(is_acyclic(2, &[]));
        assert!(!is_acyclic(2, &[(0, 1), (1, 0)]));
        assert!(!is_acyclic(4, &[(0, 1), (1, 2), (2, 3), (3, 1)]));
        assert!(is_acyclic(4, &[(0, 1), (1, 2), (2, 3)]));
    }

    #[test]
    fn construction_rejects_invalid_input() {
        assert!(matches!(Dag::new(3, [(0, 0)]), Err(Error::InvalidEdge(0, 0))));
        assert!(matches!(Dag::new(3, [(0, 3)]), Err(Error::InvalidEdge(0, 3))));
        assert!(matches!(Dag::new(2, [(0, 1), (1, 0)]), Err(Error::CycleDetected)));
    }

    #[test]
    fn topological_order_examples() {
        let chain = Dag::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(chain.topological_order().unwrap(), vec![0, 1, 2]);

        let isolated = Dag::empty(3);
        assert_eq!(isolated.topological_order().unwrap(), vec![0, 1, 2]);

        // Both 1 and 2 are ready initially; index tie-break puts 1 first.
        let fork = Dag::new(3, [(2, 0), (1, 0)]).unwrap();
        assert_eq!(fork.topological_order().unwrap(), vec![1, 2, 0]);
    }

    #[test]
    fn topological_order_puts_parents_first() {
        let dag = Dag::new(5, [(4, 2), (2, 0), (3, 0), (1, 3)]).unwrap();
        let order = dag.topological_order().unwrap();
        let position: Vec<usize> = {
            let mut pos = vec![0; 5];
            for (i, &v) in order.iter().enumerate() {
                pos[v] = i;
            }
            pos
        };
        for &(p, c) in dag.edges() {
            assert!(position[p] < position[c], "edge ({p},{c}) violates order {order:?}");
        }
    }

    #[test]
    fn parameter_count_examples() {
        let arities = vec![2; 15];
        assert_eq!(parameter_count(&Dag::empty(15), &arities), 15);

        // Chain of 15 binary variables: 1 root parameter + 14 * 2.
        let chain = Dag::new(15, (0..14).map(|i| (i, i + 1))).unwrap();
        assert_eq!(parameter_count(&chain, &arities), 29);

        // A node with 2 binary parents contributes (2-1)*4 = 4.
        let collider = Dag::new(3, [(0, 2), (1, 2)]).unwrap();
        assert_eq!(parameter_count(&collider, &vec![2, 2, 2]), 1 + 1 + 4);
    }

    #[test]
    fn parent_and_child_accessors() {
        let dag = Dag::new(4, [(0, 2), (1, 2), (2, 3)]).unwrap();
        assert_eq!(dag.parents_of(2), &[0, 1]);
        assert_eq!(dag.children_of(2), &[3]);
        assert!(dag.has_edge(0, 2));
        assert!(!dag.has_edge(2, 0));
        assert_eq!(dag.edge_count(), 3);
    }

    #[test]
    fn path_queries_respect_skip() {
        let dag = Dag::new(3, [(0, 1), (1, 2)]).unwrap();
        assert!(dag.has_path(0, 2, None));
        assert!(!dag.has_path(2, 0, None));
        assert!(!dag.has_path(0, 2, Some((0, 1))));
    }

    #[test]
    fn edge_edit_helpers() {
        let chain = Dag::new(3, [(0, 1), (1, 2)]).unwrap();
        assert!(chain.with_edge_added(2, 0).is_err());
        assert_eq!(chain.with_edge_added(0, 2).unwrap().edge_count(), 3);
        assert_eq!(chain.with_edge_removed(0, 1).unwrap().edge_count(), 1);
        let reversed = chain.with_edge_reversed(1, 2).unwrap();
        assert!(reversed.has_edge(2, 1));

        let triangle = Dag::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        // Reversing 0->1 keeps acyclicity; reversing 0->2 makes 2->0->1->2.
        assert!(triangle.with_edge_reversed(0, 1).is_ok());
        assert!(triangle.with_edge_reversed(0, 2).is_err());
    }
}
