//! Discrete observation matrices.

use std::io::{Read, Write};

use crate::error::{Error, Result};

/// An `m x n` matrix of category indices with a per-variable arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    m: usize,
    n: usize,
    arities: Vec<usize>,
    /// Row-major sample values; `cells[r * n + c]` is variable `c` of sample `r`.
    cells: Vec<u8>,
}

impl Dataset {
    pub fn new(arities: Vec<usize>, cells: Vec<u8>) -> Result<Self> {
        let n = arities.len();
        if n == 0 {
            return Err(Error::InvalidValue("dataset needs at least one variable".into()));
        }
        if let Some(j) = arities.iter().position(|&a| a < 2) {
            return Err(Error::InvalidValue(format!("variable {j} has arity < 2")));
        }
        if cells.is_empty() || cells.len() % n != 0 {
            return Err(Error::DimensionMismatch(format!(
                "cell count {} is not a positive multiple of n = {n}",
                cells.len()
            )));
        }
        let m = cells.len() / n;
        for (i, &v) in cells.iter().enumerate() {
            let j = i % n;
            if (v as usize) >= arities[j] {
                return Err(Error::InvalidValue(format!(
                    "value {v} out of range for variable {j} (arity {})",
                    arities[j]
                )));
            }
        }
        Ok(Self { m, n, arities, cells })
    }

    pub fn from_rows(arities: Vec<usize>, rows: &[Vec<u8>]) -> Result<Self> {
        let n = arities.len();
        let mut cells = Vec::with_capacity(rows.len() * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row has {} cells, expected {n}",
                    row.len()
                )));
            }
            cells.extend_from_slice(row);
        }
        Self::new(arities, cells)
    }

    /// All-binary dataset; every arity is 2.
    pub fn binary(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.first().map(|r| r.len()).unwrap_or(0);
        Self::from_rows(vec![2; n], rows)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn arity(&self, variable: usize) -> usize {
        self.arities[variable]
    }

    pub fn is_binary(&self) -> bool {
        self.arities.iter().all(|&a| a == 2)
    }

    pub fn value(&self, sample: usize, variable: usize) -> u8 {
        self.cells[sample * self.n + variable]
    }

    pub fn row(&self, sample: usize) -> &[u8] {
        &self.cells[sample * self.n..(sample + 1) * self.n]
    }

    pub(crate) fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub(crate) fn from_parts_unchecked(arities: Vec<usize>, cells: Vec<u8>) -> Self {
        let n = arities.len();
        Self { m: cells.len() / n, n, arities, cells }
    }

    /// Writes `V1,...,Vn` header plus one row per sample.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record((1..=self.n).map(|j| format!("V{j}")))?;
        for r in 0..self.m {
            out.write_record(self.row(r).iter().map(|v| v.to_string()))?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a CSV produced by [`Dataset::write_csv`]. Arities are inferred
    /// per column as `max(observed + 1, 2)`.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut input = csv::Reader::from_reader(reader);
        let n = input.headers()?.len();
        if n == 0 {
            return Err(Error::InvalidValue("CSV has no columns".into()));
        }
        let mut cells: Vec<u8> = Vec::new();
        for record in input.records() {
            let record = record?;
            if record.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "CSV row has {} cells, expected {n}",
                    record.len()
                )));
            }
            for field in record.iter() {
                let v: u8 = field
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidValue(format!("non-integer cell {field:?}")))?;
                cells.push(v);
            }
        }
        if cells.is_empty() {
            return Err(Error::InvalidValue("CSV has no data rows".into()));
        }
        let mut arities = vec![2usize; n];
        for (i, &v) in cells.iter().enumerate() {
            let j = i % n;
            arities[j] = arities[j].max(v as usize + 1);
        }
        Self::new(arities, cells)
    }
}
