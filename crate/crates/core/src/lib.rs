//! Structure learning for discrete Bayesian networks.
//!
//! Two learners over the same likelihood machinery:
//!
//! * [`nsga2`] — multi-objective search (NSGA-II) that maximizes the
//!   log-likelihood of a candidate structure while minimizing its arc count,
//!   returning a Pareto front instead of a single regularized optimum.
//! * [`hillclimb`] — greedy hill climbing on AIC- or BIC-regularized
//!   likelihood, the classic single-objective baseline.
//!
//! The [`synth`] module generates ground-truth networks and sampled
//! datasets (with optional bit-flip noise), [`metrics`] compares learned
//! structures against the ground truth, and [`harness`] orchestrates the
//! full scenario grid with seeded, reproducible repetitions.

pub mod error;
pub mod harness;
pub mod hillclimb;
pub mod metrics;
pub mod model;
pub mod nsga2;
pub mod score;
pub mod synth;

pub use error::{Error, Result};
pub use model::{BayesianNetwork, Cpt, Dag, Dataset, Genome};
