//! Core model types: DAGs, bitstring genomes, datasets and parameterized
//! networks.

mod dag;
mod dataset;
mod genome;
mod network;

pub use dag::{is_acyclic, parameter_count, Dag};
pub use dataset::Dataset;
pub use genome::Genome;
pub use network::{
    read_network_json, to_dot, write_dag_json, write_network_json, BayesianNetwork, Cpt,
};
