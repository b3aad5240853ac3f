//! Probability mass functions on finite alphabets.

use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};

/// Probabilities at or below this are treated as impossible symbols by the
/// typicality tests.
pub const ZERO_PROB: f64 = 1e-12;

pub fn check_pmf(p: &[f64], tol: f64) -> Result<()> {
    if p.is_empty() {
        return usage("empty pmf");
    }
    if let Some(bad) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return usage(format!("pmf entry {bad} is negative or not finite"));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > tol {
        return usage(format!("pmf sums to {total}, not 1"));
    }
    Ok(())
}

/// Joint pmf on `A × B`, row-major with `a` as the row index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct JointPmf {
    rows: usize,
    cols: usize,
    probs: Vec<f64>,
}

impl TryFrom<Vec<Vec<f64>>> for JointPmf {
    type Error = Error;

    fn try_from(table: Vec<Vec<f64>>) -> Result<Self> {
        JointPmf::from_table(&table)
    }
}

impl From<JointPmf> for Vec<Vec<f64>> {
    fn from(p: JointPmf) -> Self {
        p.probs.chunks(p.cols).map(<[f64]>::to_vec).collect()
    }
}

impl JointPmf {
    pub const TOLERANCE: f64 = 1e-9;

    pub fn new(rows: usize, cols: usize, probs: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || probs.len() != rows * cols {
            return usage(format!(
                "{} probabilities for a {rows}x{cols} joint pmf",
                probs.len()
            ));
        }
        check_pmf(&probs, Self::TOLERANCE)?;
        Ok(JointPmf { rows, cols, probs })
    }

    pub fn from_table(table: &[Vec<f64>]) -> Result<Self> {
        let cols = table.first().map_or(0, Vec::len);
        if table.iter().any(|r| r.len() != cols) {
            return usage("ragged pmf table");
        }
        JointPmf::new(table.len(), cols, table.concat())
    }

    /// `p_A(a) p_B(b)`.
    pub fn product(pa: &[f64], pb: &[f64]) -> Result<Self> {
        check_pmf(pa, Self::TOLERANCE)?;
        check_pmf(pb, Self::TOLERANCE)?;
        let probs = pa
            .iter()
            .flat_map(|&x| pb.iter().map(move |&y| x * y))
            .collect();
        JointPmf::new(pa.len(), pb.len(), probs)
    }

    /// Joint pmf of `(A, B)` with `A ~ marginal` and `B = A` (identity
    /// embedding of an input alphabet into itself).
    pub fn diagonal(marginal: &[f64]) -> Result<Self> {
        check_pmf(marginal, Self::TOLERANCE)?;
        let k = marginal.len();
        let mut probs = vec![0.0; k * k];
        for (a, &p) in marginal.iter().enumerate() {
            probs[a * k + a] = p;
        }
        JointPmf::new(k, k, probs)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.probs[a * self.cols + b]
    }

    pub fn row_marginal(&self) -> Vec<f64> {
        self.probs.chunks(self.cols).map(|r| r.iter().sum()).collect()
    }

    pub fn col_marginal(&self) -> Vec<f64> {
        (0..self.cols)
            .map(|b| (0..self.rows).map(|a| self.get(a, b)).sum())
            .collect()
    }

    /// `p(b | a)`; rows with zero mass are replaced by the uniform law, which
    /// never affects any quantity weighted by `p(a)`.
    pub fn conditional_row(&self, a: usize) -> Vec<f64> {
        let row = &self.probs[a * self.cols..(a + 1) * self.cols];
        let mass: f64 = row.iter().sum();
        if mass <= 0.0 {
            vec![1.0 / self.cols as f64; self.cols]
        } else {
            row.iter().map(|x| x / mass).collect()
        }
    }

    pub fn transpose(&self) -> JointPmf {
        let probs = (0..self.cols)
            .flat_map(|b| (0..self.rows).map(move |a| (a, b)))
            .map(|(a, b)| self.get(a, b))
            .collect();
        JointPmf {
            rows: self.cols,
            cols: self.rows,
            probs,
        }
    }
}
