//! Maximum-likelihood parameter fitting and likelihood-based structure
//! scores.
//!
//! The log-likelihood of a structure is computed with ML-fitted parameters
//! under the 0*ln(0) = 0 convention, so it is always finite and nonpositive.
//! Regularized scores subtract an AIC or BIC penalty whose model-size term
//! can be either the free-parameter count or the edge count.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{parameter_count, BayesianNetwork, Cpt, Dag, Dataset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreKind {
    Aic,
    Bic,
}

impl std::fmt::Display for ScoreKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScoreKind::Aic => write!(f, "aic"),
            ScoreKind::Bic => write!(f, "bic"),
        }
    }
}

impl std::str::FromStr for ScoreKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "aic" => Ok(ScoreKind::Aic),
            "bic" => Ok(ScoreKind::Bic),
            other => Err(Error::Config(format!("unknown score kind {other:?}"))),
        }
    }
}

/// Which model-size measure feeds the penalty term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Complexity {
    Parameters,
    Edges,
}

impl std::fmt::Display for Complexity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Complexity::Parameters => write!(f, "parameters"),
            Complexity::Edges => write!(f, "edges"),
        }
    }
}

impl std::str::FromStr for Complexity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "parameters" => Ok(Complexity::Parameters),
            "edges" => Ok(Complexity::Edges),
            other => Err(Error::Config(format!("unknown complexity measure {other:?}"))),
        }
    }
}

fn check_dims(dag: &Dag, data: &Dataset) -> Result<()> {
    if dag.n() != data.n() {
        return Err(Error::DimensionMismatch(format!(
            "DAG has {} nodes, dataset has {} variables",
            dag.n(),
            data.n()
        )));
    }
    Ok(())
}

/// Joint counts of (parent configuration, child value) for one family.
/// Configuration indices are mixed radix with the first parent most
/// significant, matching [`Cpt::row_index`].
fn family_counts(data: &Dataset, node: usize, parents: &[usize]) -> (Vec<u64>, usize, usize) {
    let arity = data.arity(node);
    let n_configs: usize = parents.iter().map(|&p| data.arity(p)).product();
    let mut counts = vec![0u64; n_configs * arity];
    for sample in 0..data.m() {
        let mut config = 0usize;
        for &p in parents {
            config = config * data.arity(p) + data.value(sample, p) as usize;
        }
        counts[config * arity + data.value(sample, node) as usize] += 1;
    }
    (counts, n_configs, arity)
}

/// Log-likelihood contribution of one node given a parent set, with
/// ML-fitted parameters folded in: sum over configurations and values of
/// c * ln(c / total).
pub fn family_log_likelihood(data: &Dataset, node: usize, parents: &[usize]) -> f64 {
    let (counts, n_configs, arity) = family_counts(data, node, parents);
    let mut ll = 0.0;
    for config in 0..n_configs {
        let slice = &counts[config * arity..(config + 1) * arity];
        let total: u64 = slice.iter().sum();
        if total == 0 {
            continue;
        }
        let ln_total = (total as f64).ln();
        for &c in slice {
            if c > 0 {
                ll += c as f64 * ((c as f64).ln() - ln_total);
            }
        }
    }
    ll
}

/// Empirical conditional frequencies for every node. Parent configurations
/// never observed get a uniform row.
pub fn fit_ml_parameters(dag: &Dag, data: &Dataset) -> Result<BayesianNetwork> {
    fit_parameters(dag, data, 0.0)
}

/// Like [`fit_ml_parameters`] but adds `pseudocount` to every cell before
/// normalizing. `pseudocount = 0` reproduces the pure ML estimate.
pub fn fit_parameters(dag: &Dag, data: &Dataset, pseudocount: f64) -> Result<BayesianNetwork> {
    check_dims(dag, data)?;
    if pseudocount < 0.0 || !pseudocount.is_finite() {
        return Err(Error::InvalidValue("pseudocount must be finite and >= 0".into()));
    }
    let mut cpts = Vec::with_capacity(dag.n());
    for node in 0..dag.n() {
        let parents = dag.parents_of(node).to_vec();
        let parent_arities: Vec<usize> = parents.iter().map(|&p| data.arity(p)).collect();
        let (counts, n_configs, arity) = family_counts(data, node, &parents);
        let mut rows = Vec::with_capacity(n_configs);
        for config in 0..n_configs {
            let slice = &counts[config * arity..(config + 1) * arity];
            let total: f64 = slice.iter().sum::<u64>() as f64 + pseudocount * arity as f64;
            let row: Vec<f64> = if total == 0.0 {
                vec![1.0 / arity as f64; arity]
            } else {
                slice.iter().map(|&c| (c as f64 + pseudocount) / total).collect()
            };
            rows.push(row);
        }
        cpts.push(Cpt::new(node, parents, parent_arities, rows)?);
    }
    BayesianNetwork::new(dag.clone(), cpts)
}

/// Log-likelihood of the dataset under the structure with ML-fitted
/// parameters. Always finite and <= 0.
pub fn log_likelihood(dag: &Dag, data: &Dataset) -> Result<f64> {
    check_dims(dag, data)?;
    Ok((0..dag.n())
        .map(|node| family_log_likelihood(data, node, dag.parents_of(node)))
        .sum())
}

fn penalty(kind: ScoreKind, size: f64, m: usize) -> f64 {
    match kind {
        ScoreKind::Aic => size,
        ScoreKind::Bic => size / 2.0 * (m as f64).ln(),
    }
}

/// Regularized score LL - R(G), where the model size |G| is the
/// free-parameter count or the edge count, and the BIC factor uses the
/// natural log of the sample count.
pub fn regularized_score(
    dag: &Dag,
    data: &Dataset,
    kind: ScoreKind,
    complexity: Complexity,
) -> Result<f64> {
    let ll = log_likelihood(dag, data)?;
    let size = match complexity {
        Complexity::Parameters => parameter_count(dag, data.arities()) as f64,
        Complexity::Edges => dag.edge_count() as f64,
    };
    Ok(ll - penalty(kind, size, data.m()))
}

/// Memoized per-family regularized scores. Both AIC and BIC decompose over
/// families for either complexity measure, so a whole-graph score is the sum
/// of family scores, and a local move re-scores only the touched families.
pub struct FamilyScoreCache<'a> {
    data: &'a Dataset,
    kind: ScoreKind,
    complexity: Complexity,
    entries: HashMap<(usize, Vec<usize>), f64>,
}

impl<'a> FamilyScoreCache<'a> {
    pub fn new(data: &'a Dataset, kind: ScoreKind, complexity: Complexity) -> Self {
        Self { data, kind, complexity, entries: HashMap::new() }
    }

    /// Regularized score contribution of `node` given `parents` (ascending).
    pub fn family_score(&mut self, node: usize, parents: &[usize]) -> f64 {
        debug_assert!(parents.windows(2).all(|w| w[0] < w[1]));
        if let Some(&score) = self.entries.get(&(node, parents.to_vec())) {
            return score;
        }
        let ll = family_log_likelihood(self.data, node, parents);
        let size = match self.complexity {
            Complexity::Parameters => {
                let configs: usize = parents.iter().map(|&p| self.data.arity(p)).product();
                ((self.data.arity(node) - 1) * configs) as f64
            }
            Complexity::Edges => parents.len() as f64,
        };
        let score = ll - penalty(self.kind, size, self.data.m());
        self.entries.insert((node, parents.to_vec()), score);
        score
    }

    /// Whole-graph score as the sum of family scores.
    pub fn dag_score(&mut self, dag: &Dag) -> f64 {
        (0..dag.n())
            .map(|node| self.family_score(node, &dag.parents_of(node).to_vec()))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{forward_sample, random_cpts, random_dag};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn single_column(values: &[u8]) -> Dataset {
        Dataset::from_rows(vec![2], &values.iter().map(|&v| vec![v]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn fit_single_variable() {
        let bn = fit_ml_parameters(&Dag::empty(1), &single_column(&[1, 1, 1, 1])).unwrap();
        assert_eq!(bn.cpt(0).rows(), &[vec![0.0, 1.0]]);

        let bn = fit_ml_parameters(&Dag::empty(1), &single_column(&[1, 1, 0, 0])).unwrap();
        assert_eq!(bn.cpt(0).rows(), &[vec![0.5, 0.5]]);
    }

    #[test]
    fn fit_two_node_family() {
        let dag = Dag::new(2, [(0, 1)]).unwrap();
        let data = Dataset::binary(&[vec![0, 0], vec![0, 0], vec![1, 1]]).unwrap();
        let bn = fit_ml_parameters(&dag, &data).unwrap();
        assert_eq!(bn.cpt(1).row_for(&[0]), &[1.0, 0.0]);
        assert_eq!(bn.cpt(1).row_for(&[1]), &[0.0, 1.0]);
    }

    #[test]
    fn fit_unobserved_configuration_is_uniform() {
        let dag = Dag::new(2, [(0, 1)]).unwrap();
        // Parent value 1 never occurs.
        let data = Dataset::binary(&[vec![0, 0], vec![0, 1]]).unwrap();
        let bn = fit_ml_parameters(&dag, &data).unwrap();
        assert_eq!(bn.cpt(1).row_for(&[1]), &[0.5, 0.5]);
    }

    #[test]
    fn fit_with_pseudocount() {
        let bn = fit_parameters(&Dag::empty(1), &single_column(&[1, 1, 1, 1]), 1.0).unwrap();
        assert_eq!(bn.cpt(0).rows(), &[vec![1.0 / 6.0, 5.0 / 6.0]]);
        assert!(fit_parameters(&Dag::empty(1), &single_column(&[1]), -0.5).is_err());
    }

    #[test]
    fn log_likelihood_examples() {
        let data = single_column(&[1, 1, 1, 1]);
        assert_eq!(log_likelihood(&Dag::empty(1), &data).unwrap(), 0.0);

        let data = single_column(&[1, 1, 0, 0]);
        let ll = log_likelihood(&Dag::empty(1), &data).unwrap();
        assert!((ll - 4.0 * 0.5f64.ln()).abs() < 1e-12, "got {ll}");
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let data = single_column(&[0, 1]);
        assert!(log_likelihood(&Dag::empty(2), &data).is_err());
        assert!(fit_ml_parameters(&Dag::empty(2), &data).is_err());
        assert!(regularized_score(&Dag::empty(2), &data, ScoreKind::Aic, Complexity::Edges)
            .is_err());
    }

    /// Independent oracle: fit the CPTs, then walk every sample multiplying
    /// conditional probabilities in log space.
    fn per_sample_oracle(dag: &Dag, data: &Dataset) -> f64 {
        let bn = fit_ml_parameters(dag, data).unwrap();
        let mut total = 0.0;
        for sample in 0..data.m() {
            for node in 0..data.n() {
                let cpt = bn.cpt(node);
                let parent_values: Vec<u8> =
                    cpt.parents().iter().map(|&p| data.value(sample, p)).collect();
                let p = cpt.row_for(&parent_values)[data.value(sample, node) as usize];
                total += p.ln();
            }
        }
        total
    }

    #[test]
    fn log_likelihood_matches_per_sample_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let truth = random_dag(6, 0.4, &mut rng);
            let bn = random_cpts(&truth, &[2; 6], &mut rng);
            let data = forward_sample(&bn, 80, &mut rng);
            let candidate = random_dag(6, 0.3, &mut rng);
            let fast = log_likelihood(&candidate, &data).unwrap();
            let slow = per_sample_oracle(&candidate, &data);
            assert!((fast - slow).abs() < 1e-9, "fast {fast} vs oracle {slow}");
            assert!(fast <= 1e-12);
        }
    }

    #[test]
    fn regularized_score_examples() {
        // BIC with m = 1 equals the plain log-likelihood.
        let data = single_column(&[1]);
        let dag = Dag::empty(1);
        let ll = log_likelihood(&dag, &data).unwrap();
        let bic = regularized_score(&dag, &data, ScoreKind::Bic, Complexity::Parameters).unwrap();
        assert_eq!(bic, ll);

        // AIC with 15 empty binary nodes: LL - 15.
        let rows: Vec<Vec<u8>> = (0..4).map(|r| vec![(r % 2) as u8; 15]).collect();
        let data = Dataset::binary(&rows).unwrap();
        let dag = Dag::empty(15);
        let ll = log_likelihood(&dag, &data).unwrap();
        let aic = regularized_score(&dag, &data, ScoreKind::Aic, Complexity::Parameters).unwrap();
        assert!((aic - (ll - 15.0)).abs() < 1e-12);

        // BIC on the 15-node chain with m = 100: LL - (29/2) ln 100.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let chain = Dag::new(15, (0..14).map(|i| (i, i + 1))).unwrap();
        let bn = random_cpts(&chain, &[2; 15], &mut rng);
        let data = forward_sample(&bn, 100, &mut rng);
        let ll = log_likelihood(&chain, &data).unwrap();
        let bic =
            regularized_score(&chain, &data, ScoreKind::Bic, Complexity::Parameters).unwrap();
        assert!((bic - (ll - 14.5 * 100f64.ln())).abs() < 1e-9);

        // Edge-count complexity switches the size measure.
        let aic_edges =
            regularized_score(&chain, &data, ScoreKind::Aic, Complexity::Edges).unwrap();
        assert!((aic_edges - (ll - 14.0)).abs() < 1e-9);
    }

    #[test]
    fn adding_an_edge_never_reduces_likelihood() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut checked = 0;
        while checked < 100 {
            let truth = random_dag(5, 0.4, &mut rng);
            let bn = random_cpts(&truth, &[2; 5], &mut rng);
            let data = forward_sample(&bn, 40, &mut rng);
            let g = random_dag(5, 0.3, &mut rng);
            let p = rng.gen_range(0..5);
            let c = rng.gen_range(0..5);
            if p == c || g.has_edge(p, c) || g.has_path(c, p, None) {
                continue;
            }
            let larger = g.with_edge_added(p, c).unwrap();
            let before = log_likelihood(&g, &data).unwrap();
            let after = log_likelihood(&larger, &data).unwrap();
            assert!(after >= before - 1e-9, "adding ({p},{c}): {before} -> {after}");
            checked += 1;
        }
    }

    #[test]
    fn score_decomposes_over_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let truth = random_dag(6, 0.5, &mut rng);
        let bn = random_cpts(&truth, &[2; 6], &mut rng);
        let data = forward_sample(&bn, 60, &mut rng);
        let g = random_dag(6, 0.4, &mut rng);

        let total = log_likelihood(&g, &data).unwrap();
        let by_family: f64 =
            (0..6).map(|i| family_log_likelihood(&data, i, g.parents_of(i))).sum();
        assert!((total - by_family).abs() < 1e-9);

        // Removing one node's incoming edge changes only that node's term.
        if let Some(&(p, c)) = g.edges().first() {
            let smaller = g.with_edge_removed(p, c).unwrap();
            for node in 0..6 {
                if node == c {
                    continue;
                }
                let a = family_log_likelihood(&data, node, g.parents_of(node));
                let b = family_log_likelihood(&data, node, smaller.parents_of(node));
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn cache_matches_uncached_scores() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let truth = random_dag(6, 0.4, &mut rng);
        let bn = random_cpts(&truth, &[2; 6], &mut rng);
        let data = forward_sample(&bn, 50, &mut rng);

        for kind in [ScoreKind::Aic, ScoreKind::Bic] {
            for complexity in [Complexity::Parameters, Complexity::Edges] {
                let mut cache = FamilyScoreCache::new(&data, kind, complexity);
                for _ in 0..10 {
                    let g = random_dag(6, 0.5, &mut rng);
                    let direct = regularized_score(&g, &data, kind, complexity).unwrap();
                    let cached = cache.dag_score(&g);
                    let again = cache.dag_score(&g);
                    assert!((direct - cached).abs() < 1e-9);
                    assert_eq!(cached, again);
                }
                assert!(!cache.is_empty());
            }
        }
    }

    #[test]
    fn regularized_never_exceeds_plain_likelihood() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let truth = random_dag(5, 0.5, &mut rng);
        let bn = random_cpts(&truth, &[2; 5], &mut rng);
        let data = forward_sample(&bn, 30, &mut rng);
        for _ in 0..20 {
            let g = random_dag(5, 0.5, &mut rng);
            let ll = log_likelihood(&g, &data).unwrap();
            for complexity in [Complexity::Parameters, Complexity::Edges] {
                let aic = regularized_score(&g, &data, ScoreKind::Aic, complexity).unwrap();
                let bic = regularized_score(&g, &data, ScoreKind::Bic, complexity).unwrap();
                assert!(aic <= ll);
                assert!(bic <= ll + 1e-12);
            }
        }
    }

    #[test]
    fn parse_kind_and_complexity() {
        assert_eq!("bic".parse::<ScoreKind>().unwrap(), ScoreKind::Bic);
        assert_eq!("AIC".parse::<ScoreKind>().unwrap(), ScoreKind::Aic);
        assert!("abc".parse::<ScoreKind>().is_err());
        assert_eq!("edges".parse::<Complexity>().unwrap(), Complexity::Edges);
        assert!("size".parse::<Complexity>().is_err());
    }
}
