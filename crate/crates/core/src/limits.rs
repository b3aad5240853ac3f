use serde::{Deserialize, Serialize};

use crate::error::{resource, Result};

/// Numerical tolerances used when validating quantum objects.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub herm: f64,
    pub psd: f64,
    pub trace: f64,
    pub povm: f64,
    pub pmf: f64,
    /// Trace-distance threshold for treating two channel outputs as equal.
    pub eq: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances::uniform(1e-9)
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Tolerances {
            herm: tol,
            psd: tol,
            trace: tol,
            povm: tol,
            pmf: tol,
            eq: tol,
        }
    }
}

/// Work budgets. `max_dim` bounds the Hilbert-space dimension of any n-fold
/// tensor power; `max_enum` bounds every exhaustive enumeration (codebook
/// terms, coset members, typical sequences, grid points); `max_coset`
/// bounds the candidate list of one maximum-likelihood syndrome decode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub max_dim: usize,
    pub max_enum: usize,
    pub max_coset: usize,
    pub tol: Tolerances,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_dim: 1 << 14,
            max_enum: 1 << 16,
            max_coset: 1 << 22,
            tol: Tolerances::default(),
        }
    }
}

impl Limits {
    /// `d^n`, or a resource error if it exceeds `max_dim`.
    pub fn tensor_dim(&self, d: usize, n: usize) -> Result<usize> {
        match checked_power(d, n) {
            Some(dim) if dim <= self.max_dim => Ok(dim),
            _ => resource(format!(
                "dimension {d}^{n} exceeds the budget of {}",
                self.max_dim
            )),
        }
    }

    /// `base^exp`, or a resource error if it exceeds `max_enum`.
    pub fn enumeration(&self, base: usize, exp: usize, what: &str) -> Result<usize> {
        match checked_power(base, exp) {
            Some(c) if c <= self.max_enum => Ok(c),
            _ => resource(format!(
                "enumerating {base}^{exp} {what} exceeds the budget of {}",
                self.max_enum
            )),
        }
    }

    pub fn check_count(&self, count: usize, what: &str) -> Result<()> {
        if count > self.max_enum {
            return resource(format!(
                "{count} {what} exceed the budget of {}",
                self.max_enum
            ));
        }
        Ok(())
    }
}

fn checked_power(base: usize, exp: usize) -> Option<usize> {
    (0..exp).try_fold(1usize, |acc, _| acc.checked_mul(base))
}
