//! Structural comparison against a ground-truth DAG and Pareto-front
//! summarization.
//!
//! Edge comparison is direction-sensitive: an edge learned in the reversed
//! direction counts as one false positive plus one false negative. An
//! undirected (skeleton) comparison is available as an option.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Dag;
use crate::nsga2::{dominates_objectives, Individual, ParetoFront};

/// Counts over all ordered node pairs (i, j), i != j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralConfusion {
    pub true_pos: usize,
    pub false_pos: usize,
    pub true_neg: usize,
    pub false_neg: usize,
}

impl StructuralConfusion {
    pub fn total(&self) -> usize {
        self.true_pos + self.false_pos + self.true_neg + self.false_neg
    }

    /// Precision, recall (= sensitivity) and specificity; a 0/0 ratio is
    /// `None`, distinct from 0, and aggregation skips it.
    pub fn metrics(&self) -> ConfusionMetrics {
        let ratio = |num: usize, den: usize| {
            if den == 0 {
                None
            } else {
                Some(num as f64 / den as f64)
            }
        };
        ConfusionMetrics {
            precision: ratio(self.true_pos, self.true_pos + self.false_pos),
            recall: ratio(self.true_pos, self.true_pos + self.false_neg),
            specificity: ratio(self.true_neg, self.true_neg + self.false_pos),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMetrics {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub specificity: Option<f64>,
}

/// Direction-sensitive confusion counts of `learned` against `truth`.
pub fn structural_confusion(learned: &Dag, truth: &Dag) -> Result<StructuralConfusion> {
    if learned.n() != truth.n() {
        return Err(Error::DimensionMismatch(format!(
            "learned graph has {} nodes, truth has {}",
            learned.n(),
            truth.n()
        )));
    }
    let mut confusion =
        StructuralConfusion { true_pos: 0, false_pos: 0, true_neg: 0, false_neg: 0 };
    let n = learned.n();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            match (learned.has_edge(i, j), truth.has_edge(i, j)) {
                (true, true) => confusion.true_pos += 1,
                (true, false) => confusion.false_pos += 1,
                (false, true) => confusion.false_neg += 1,
                (false, false) => confusion.true_neg += 1,
            }
        }
    }
    Ok(confusion)
}

/// Skeleton variant: compares unordered adjacency over the n(n-1)/2 pairs,
/// ignoring orientation.
pub fn skeleton_confusion(learned: &Dag, truth: &Dag) -> Result<StructuralConfusion> {
    if learned.n() != truth.n() {
        return Err(Error::DimensionMismatch(format!(
            "learned graph has {} nodes, truth has {}",
            learned.n(),
            truth.n()
        )));
    }
    let mut confusion =
        StructuralConfusion { true_pos: 0, false_pos: 0, true_neg: 0, false_neg: 0 };
    let n = learned.n();
    for i in 0..n {
        for j in (i + 1)..n {
            let in_learned = learned.has_edge(i, j) || learned.has_edge(j, i);
            let in_truth = truth.has_edge(i, j) || truth.has_edge(j, i);
            match (in_learned, in_truth) {
                (true, true) => confusion.true_pos += 1,
                (true, false) => confusion.false_pos += 1,
                (false, true) => confusion.false_neg += 1,
                (false, false) => confusion.true_neg += 1,
            }
        }
    }
    Ok(confusion)
}

pub const SUMMARY_SLOTS: [&str; 5] = ["min", "q1", "median", "q3", "max"];

/// Five representatives of a front at the quantile positions of its
/// log-likelihood ordering.
#[derive(Debug, Clone)]
pub struct FrontSummary {
    /// min, Q1, median, Q3, max by log-likelihood; duplicates appear when
    /// the front has fewer than five members.
    pub representatives: Vec<Individual>,
}

/// Sorts the front by ascending log-likelihood and picks the members at
/// positions round(q * (k-1)) for q in {0, 1/4, 1/2, 3/4, 1}.
pub fn front_summary(front: &ParetoFront) -> Result<FrontSummary> {
    if front.is_empty() {
        return Err(Error::EmptyFront);
    }
    let mut ordered: Vec<&Individual> = front.members().iter().collect();
    ordered.sort_by(|a, b| {
        a.log_likelihood
            .partial_cmp(&b.log_likelihood)
            .unwrap_or(Ordering::Equal)
            .then(a.arcs.cmp(&b.arcs))
    });
    let k = ordered.len();
    let representatives = [0.0, 0.25, 0.5, 0.75, 1.0]
        .iter()
        .map(|q| {
            let index = (q * (k - 1) as f64).round() as usize;
            ordered[index].clone()
        })
        .collect();
    Ok(FrontSummary { representatives })
}

/// True iff some front member strictly dominates the baseline objective
/// point (log-likelihood, arcs).
pub fn front_dominates_point(front: &ParetoFront, baseline: (f64, usize)) -> bool {
    front.members().iter().any(|m| dominates_objectives(m.objectives(), baseline))
}

/// Mean and standard deviation of the defined values in a sequence of
/// optional observations, plus how many were skipped as undefined.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: f64,
    /// Sample standard deviation (0 for fewer than two values).
    pub std: f64,
    pub count: usize,
    pub excluded: usize,
}

pub fn aggregate(values: impl IntoIterator<Item = Option<f64>>) -> Option<Aggregate> {
    let mut kept = Vec::new();
    let mut excluded = 0usize;
    for v in values {
        match v {
            Some(x) => kept.push(x),
            None => excluded += 1,
        }
    }
    if kept.is_empty() {
        return None;
    }
    let count = kept.len();
    let mean = kept.iter().sum::<f64>() / count as f64;
    let std = if count >= 2 {
        let var = kept.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64;
        var.sqrt()
    } else {
        0.0
    };
    Some(Aggregate { mean, std, count, excluded })
}
