//! Synthetic ground truth and data generation: random DAGs at a target
//! density, random CPTs, ancestral sampling and bit-flip noise.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BayesianNetwork, Cpt, Dag, Dataset};

/// One cell of the benchmark grid.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub n: usize,
    /// Per-pair edge probability over the n(n-1)/2 order-respecting pairs.
    pub density: f64,
    pub m: usize,
    /// Per-cell flip probability on binary observations.
    pub noise: f64,
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("n must be >= 1".into()));
        }
        if self.m == 0 {
            return Err(Error::Config("m must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(Error::Config(format!("density {} outside [0, 1]", self.density)));
        }
        if !(0.0..=1.0).contains(&self.noise) {
            return Err(Error::Config(format!("noise {} outside [0, 1]", self.noise)));
        }
        Ok(())
    }
}

/// Draws a uniformly random topological order, then includes each of the
/// n(n-1)/2 order-respecting pairs independently with probability `density`.
/// The result is acyclic by construction; the expected edge count is
/// density * n(n-1)/2.
pub fn random_dag<R: Rng + ?Sized>(n: usize, density: f64, rng: &mut R) -> Dag {
    assert!((0.0..=1.0).contains(&density), "density outside [0, 1]");
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if rng.gen_bool(density) {
                edges.push((order[a], order[b]));
            }
        }
    }
    Dag::new(n, edges).expect("order-respecting edges are acyclic")
}

/// Samples every CPT row from the flat Dirichlet over the node's
/// categories (independent standard exponentials, normalized).
pub fn random_cpts<R: Rng + ?Sized>(dag: &Dag, arities: &[usize], rng: &mut R) -> BayesianNetwork {
    random_cpts_skewed(dag, arities, 0.0, rng)
}

/// Like [`random_cpts`], but each row is raised elementwise to the power
/// `1 + skew` and renormalized, pushing rows toward deterministic ones.
/// `skew = 0` is the flat Dirichlet.
pub fn random_cpts_skewed<R: Rng + ?Sized>(
    dag: &Dag,
    arities: &[usize],
    skew: f64,
    rng: &mut R,
) -> BayesianNetwork {
    assert!(skew >= 0.0, "skew must be >= 0");
    assert_eq!(dag.n(), arities.len(), "arity count must match node count");
    let mut cpts = Vec::with_capacity(dag.n());
    for node in 0..dag.n() {
        let parents = dag.parents_of(node).to_vec();
        let parent_arities: Vec<usize> = parents.iter().map(|&p| arities[p]).collect();
        let n_configs: usize = parent_arities.iter().product();
        let arity = arities[node];
        let mut rows = Vec::with_capacity(n_configs);
        for _ in 0..n_configs {
            let mut row: Vec<f64> = (0..arity)
                .map(|_| {
                    let u: f64 = rng.gen();
                    -(1.0 - u).ln()
                })
                .collect();
            if skew > 0.0 {
                for v in &mut row {
                    *v = v.powf(1.0 + skew);
                }
            }
            let sum: f64 = row.iter().sum();
            if sum > 0.0 {
                for v in &mut row {
                    *v /= sum;
                }
            } else {
                row = vec![1.0 / arity as f64; arity];
            }
            rows.push(row);
        }
        cpts.push(Cpt::new(node, parents, parent_arities, rows).expect("rows normalized"));
    }
    BayesianNetwork::new(dag.clone(), cpts).expect("CPTs built from the DAG's parent sets")
}

/// Ancestral sampling: nodes are visited in topological order and each value
/// is drawn from the CPT row selected by the already-drawn parent values.
/// Samples are i.i.d.; the rng is consumed one draw per (sample, node) in
/// sample-major order.
pub fn forward_sample<R: Rng + ?Sized>(bn: &BayesianNetwork, m: usize, rng: &mut R) -> Dataset {
    let n = bn.n();
    let order = bn.dag().topological_order().expect("network DAG is acyclic");
    let arities = bn.arities();
    let mut cells = vec![0u8; m * n];
    let mut parent_values = Vec::new();
    for sample in 0..m {
        let row = &mut cells[sample * n..(sample + 1) * n];
        for &node in &order {
            let cpt = bn.cpt(node);
            parent_values.clear();
            parent_values.extend(cpt.parents().iter().map(|&p| row[p]));
            let probabilities = cpt.row_for(&parent_values);
            let u: f64 = rng.gen();
            let mut cumulative = 0.0;
            let mut value = probabilities.len() - 1;
            for (k, &p) in probabilities.iter().enumerate() {
                cumulative += p;
                if u < cumulative {
                    value = k;
                    break;
                }
            }
            row[node] = value as u8;
        }
    }
    Dataset::from_parts_unchecked(arities, cells)
}

/// Flips each cell of a binary dataset independently with probability
/// `epsilon`, leaving the input untouched. Exactly one rng draw is consumed
/// per cell in row-major order regardless of `epsilon`.
pub fn inject_noise<R: Rng + ?Sized>(
    data: &Dataset,
    epsilon: f64,
    rng: &mut R,
) -> Result<Dataset> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidValue(format!("epsilon {epsilon} outside [0, 1]")));
    }
    if let Some(j) = data.arities().iter().position(|&a| a != 2) {
        return Err(Error::NonBinaryVariable(j));
    }
    let cells = data
        .cells()
        .iter()
        .map(|&v| {
            let u: f64 = rng.gen();
            if u < epsilon {
                1 - v
            } else {
                v
            }
        })
        .collect();
    Ok(Dataset::from_parts_unchecked(data.arities().to_vec(), cells))
}
