//! Conditional probability tables and full Bayesian networks, plus the JSON
//! and DOT file formats.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::dag::Dag;

const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// The conditional distribution of one node given each joint configuration
/// of its parents.
///
/// Row `i` corresponds to the parent configuration whose mixed-radix index is
/// `i`, with the first parent as the most significant digit. A node without
/// parents has exactly one row.
#[derive(Debug, Clone, PartialEq)]
pub struct Cpt {
    node: usize,
    parents: Vec<usize>,
    parent_arities: Vec<usize>,
    rows: Vec<Vec<f64>>,
}

impl Cpt {
    pub fn new(
        node: usize,
        parents: Vec<usize>,
        parent_arities: Vec<usize>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if parents.len() != parent_arities.len() {
            return Err(Error::DimensionMismatch(format!(
                "node {node}: {} parents but {} parent arities",
                parents.len(),
                parent_arities.len()
            )));
        }
        let expected_rows: usize = parent_arities.iter().product();
        if rows.len() != expected_rows {
            return Err(Error::DimensionMismatch(format!(
                "node {node}: {} rows, expected {expected_rows}",
                rows.len()
            )));
        }
        let arity = rows.first().map(|r| r.len()).unwrap_or(0);
        if arity < 2 {
            return Err(Error::InvalidValue(format!("node {node}: arity < 2")));
        }
        for row in &rows {
            if row.len() != arity {
                return Err(Error::DimensionMismatch(format!(
                    "node {node}: ragged probability rows"
                )));
            }
            if row.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
                return Err(Error::InvalidValue(format!(
                    "node {node}: negative or non-finite probability"
                )));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(Error::InvalidValue(format!(
                    "node {node}: probability row sums to {sum}"
                )));
            }
        }
        Ok(Self { node, parents, parent_arities, rows })
    }

    pub fn node(&self) -> usize {
        self.node
    }

    /// Parent indices in the table's digit order (ascending by construction
    /// everywhere in this crate).
    pub fn parents(&self) -> &[usize] {
        &self.parents
    }

    pub fn arity(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Mixed-radix row index for concrete parent values, first parent most
    /// significant.
    pub fn row_index(&self, parent_values: &[u8]) -> usize {
        debug_assert_eq!(parent_values.len(), self.parents.len());
        parent_values
            .iter()
            .zip(&self.parent_arities)
            .fold(0usize, |acc, (&v, &a)| acc * a + v as usize)
    }

    /// The probability vector for one parent configuration.
    pub fn row_for(&self, parent_values: &[u8]) -> &[f64] {
        &self.rows[self.row_index(parent_values)]
    }
}

/// A DAG plus one CPT per node.
#[derive(Debug, Clone, PartialEq)]
pub struct BayesianNetwork {
    dag: Dag,
    cpts: Vec<Cpt>,
}

impl BayesianNetwork {
    /// Validates that `cpts[i]` describes node `i` with exactly the parents
    /// the DAG declares, in the same (ascending) order.
    pub fn new(dag: Dag, cpts: Vec<Cpt>) -> Result<Self> {
        if cpts.len() != dag.n() {
            return Err(Error::DimensionMismatch(format!(
                "{} CPTs for {} nodes",
                cpts.len(),
                dag.n()
            )));
        }
        for (i, cpt) in cpts.iter().enumerate() {
            if cpt.node() != i {
                return Err(Error::InvalidValue(format!(
                    "CPT at slot {i} describes node {}",
                    cpt.node()
                )));
            }
            if cpt.parents() != dag.parents_of(i) {
                return Err(Error::InvalidValue(format!(
                    "CPT parent set {:?} differs from DAG parents {:?} for node {i}",
                    cpt.parents(),
                    dag.parents_of(i)
                )));
            }
        }
        Ok(Self { dag, cpts })
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn n(&self) -> usize {
        self.dag.n()
    }

    pub fn cpt(&self, node: usize) -> &Cpt {
        &self.cpts[node]
    }

    pub fn cpts(&self) -> &[Cpt] {
        &self.cpts
    }

    pub fn arities(&self) -> Vec<usize> {
        self.cpts.iter().map(|c| c.arity()).collect()
    }
}

/// On-disk network document: `{"n", "arities", "edges", "cpts"?}`.
#[derive(Debug, Serialize, Deserialize)]
struct NetworkFile {
    n: usize,
    arities: Vec<usize>,
    edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cpts: Option<Vec<CptFile>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CptFile {
    node: usize,
    parents: Vec<usize>,
    table: Vec<Vec<f64>>,
}

/// Writes a structure-only network document.
pub fn write_dag_json<W: Write>(writer: W, dag: &Dag, arities: &[usize]) -> Result<()> {
    let file = NetworkFile {
        n: dag.n(),
        arities: arities.to_vec(),
        edges: dag.edges().to_vec(),
        cpts: None,
    };
    serde_json::to_writer_pretty(writer, &file)?;
    Ok(())
}

/// Writes a full network document including parameters.
pub fn write_network_json<W: Write>(writer: W, bn: &BayesianNetwork) -> Result<()> {
    let file = NetworkFile {
        n: bn.n(),
        arities: bn.arities(),
        edges: bn.dag().edges().to_vec(),
        cpts: Some(
            bn.cpts()
                .iter()
                .map(|c| CptFile {
                    node: c.node(),
                    parents: c.parents().to_vec(),
                    table: c.rows().to_vec(),
                })
                .collect(),
        ),
    };
    serde_json::to_writer_pretty(writer, &file)?;
    Ok(())
}

/// Reads a network document; the CPT block is optional.
pub fn read_network_json<R: Read>(reader: R) -> Result<(Dag, Vec<usize>, Option<Vec<Cpt>>)> {
    let file: NetworkFile = serde_json::from_reader(reader)?;
    if file.arities.len() != file.n {
        return Err(Error::DimensionMismatch(format!(
            "{} arities for n = {}",
            file.arities.len(),
            file.n
        )));
    }
    let dag = Dag::new(file.n, file.edges)?;
    let cpts = match file.cpts {
        None => None,
        Some(raw) => {
            let mut cpts = Vec::with_capacity(raw.len());
            for c in raw {
                if c.node >= file.n {
                    return Err(Error::InvalidValue(format!("CPT for unknown node {}", c.node)));
                }
                let parent_arities = c.parents.iter().map(|&p| file.arities[p]).collect();
                cpts.push(Cpt::new(c.node, c.parents, parent_arities, c.table)?);
            }
            cpts.sort_by_key(|c| c.node());
            Some(cpts)
        }
    };
    Ok((dag, file.arities, cpts))
}

/// GraphViz rendering with nodes labeled `V1..Vn`.
pub fn to_dot(dag: &Dag) -> String {
    let mut out = String::from("digraph bn {\n");
    for i in 0..dag.n() {
        out.push_str(&format!("  V{};\n", i + 1));
    }
    for &(p, c) in dag.edges() {
        out.push_str(&format!("  V{} -> V{};\n", p + 1, c + 1));
    }
    out.push_str("}\n");
    out
}
