//! Entropies, message-sum rates and the decision procedures built on them.
//!
//! All entropies are in bits.

mod embedding;
mod example1;
mod optimize;

pub use embedding::{
    function_reconstructibility_check, EmbeddingChoice, EmbeddingSpec, EmbeddingWitness, PerFieldResult,
    ReconstructibilityReport,
};
pub use example1::{
    example1_analysis, example1_structured_rate, find_example1_witness, Example1Mode, Example1Params,
    Example1Report, Example1SourceModel, Example1Witness, WitnessGrid, WitnessSearch,
};
pub use optimize::{
    maximize_on_interval, optimize_message_sum_rate, unstructured_condition, IntervalMaximum, OptimizerTrace,
    RateGrid, UnstructuredReport,
};

pub use crate::typicality::{classical_typical_set, Conditioning};

use serde::{Deserialize, Serialize};

use crate::channels::{induced_sum_ensemble, CqMac};
use crate::error::{usage, Result};
use crate::pmf::{check_pmf, JointPmf};
use crate::quantum::holevo_information;

/// Margin a strict inequality must clear before a verdict counts it as true.
pub const STRICT_MARGIN: f64 = 1e-9;

/// `H(p) = −Σ p log2 p` for a validated pmf.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    check_pmf(p, 1e-9)?;
    Ok(entropy_unchecked(p))
}

pub(crate) fn entropy_unchecked(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum::<f64>().max(0.0)
}

fn check_unit(x: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        usage(format!("{what} = {x} outside [0, 1]"))
    }
}

/// Binary entropy `h_b(p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    check_unit(p, "p")?;
    Ok(hb(p))
}

pub(crate) fn hb(p: f64) -> f64 {
    entropy_unchecked(&[p, 1.0 - p])
}

/// `a * b = a(1 − b) + b(1 − a)`, the crossover probability of two
/// cascaded binary flips.
pub fn binary_convolution(a: f64, b: f64) -> Result<f64> {
    check_unit(a, "a")?;
    check_unit(b, "b")?;
    Ok(conv(a, b))
}

pub(crate) fn conv(a: f64, b: f64) -> f64 {
    a * (1.0 - b) + b * (1.0 - a)
}

/// Every term of the message-sum rate `min{H(V1), H(V2)} − H(U) + χ({p_U; ρ_u})`
/// at one auxiliary input structure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub q: u32,
    pub h_v1: f64,
    pub h_v2: f64,
    pub h_u: f64,
    pub chi_u: f64,
    pub rate: f64,
    pub p_v1x1: JointPmf,
    pub p_v2x2: JointPmf,
    /// Present when the report is the result of an optimization.
    pub optimizer: Option<OptimizerTrace>,
}

impl RateReport {
    /// `R − (min{H(V1), H(V2)} − H(U) + χ)`, zero up to rounding.
    pub fn consistency_defect(&self) -> f64 {
        (self.rate - (self.h_v1.min(self.h_v2) - self.h_u + self.chi_u)).abs()
    }
}

/// Exact message-sum rate of the auxiliary structure `(p_{V1X1}, p_{V2X2})`
/// over `F_q` on `mac`.
pub fn message_sum_rate(mac: &CqMac, q: u32, p_v1x1: &JointPmf, p_v2x2: &JointPmf) -> Result<RateReport> {
    let induced = induced_sum_ensemble(mac, q, p_v1x1, p_v2x2)?;
    let h_v1 = entropy_unchecked(induced.p_v1());
    let h_v2 = entropy_unchecked(induced.p_v2());
    let h_u = entropy_unchecked(induced.p_u());
    let chi_u = holevo_information(&induced.ensemble());
    Ok(RateReport {
        q,
        h_v1,
        h_v2,
        h_u,
        chi_u,
        rate: h_v1.min(h_v2) - h_u + chi_u,
        p_v1x1: p_v1x1.clone(),
        p_v2x2: p_v2x2.clone(),
        optimizer: None,
    })
}
