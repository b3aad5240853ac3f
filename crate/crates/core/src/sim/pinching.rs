//! Numerical check of the pinching bound
//! `tr(Π_ρ Π_{a^n} Π_ρ ρ_{b^n}) ≥ 1 − exp(−nλδ²)` on jointly typical pairs.

use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};
use crate::limits::Limits;
use crate::pmf::JointPmf;
use crate::quantum::linalg::kron_apply;
use crate::quantum::{
    unconditional_projector, CMatrix, ConditionalProjectors, CqEnsemble, DensityOperator, ProductProjector,
};
use crate::typicality::{counts_typical, for_each_composition, is_jointly_typical};

/// Smallest pinched trace over the jointly typical pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PinchingReport {
    pub n: usize,
    pub delta: f64,
    /// `None` when `T_{δ/4}(p_AB)` is empty at this `n`.
    pub min_trace: Option<f64>,
    pub argmin: Option<(Vec<usize>, Vec<usize>)>,
    /// Number of joint types evaluated. The trace is invariant under
    /// simultaneous permutation of `(a^n, b^n)`, so one pair per joint type
    /// covers the whole typical set.
    pub types_evaluated: usize,
}

/// Projectors and per-letter states of one pinching instance.
pub struct PinchingSetup {
    p_ab: JointPmf,
    states: Vec<DensityOperator>,
    pi_rho: ProductProjector,
    conditional: ConditionalProjectors,
    n: usize,
    delta: f64,
}

impl PinchingSetup {
    /// `ρ_a = Σ_b p(b|a) ρ_b`, `ρ = Σ_b p_B(b) ρ_b`, with `Π_ρ` and the
    /// conditional projectors of `{p_A, ρ_a}` at radius `δ`.
    pub fn new(p_ab: &JointPmf, states: &[DensityOperator], n: usize, delta: f64, limits: &Limits) -> Result<Self> {
        if states.len() != p_ab.cols() {
            return usage(format!(
                "{} states for a B alphabet of size {}",
                states.len(),
                p_ab.cols()
            ));
        }
        if n == 0 || delta <= 0.0 {
            return usage("pinching needs n ≥ 1 and δ > 0");
        }
        let d = states.first().map_or(0, DensityOperator::dim);
        if states.iter().any(|s| s.dim() != d) {
            return usage("states have different dimensions");
        }
        limits.tensor_dim(d, n)?;
        let refs: Vec<&DensityOperator> = states.iter().collect();
        let rho_a = (0..p_ab.rows())
            .map(|a| DensityOperator::mixture(&p_ab.conditional_row(a), &refs))
            .collect::<Result<Vec<_>>>()?;
        let ensemble_a = CqEnsemble::new(p_ab.row_marginal(), rho_a, &limits.tol)?;
        let rho = DensityOperator::mixture(&p_ab.col_marginal(), &refs)?;
        Ok(PinchingSetup {
            p_ab: p_ab.clone(),
            states: states.to_vec(),
            pi_rho: unconditional_projector(&rho, n, delta, limits)?,
            conditional: ConditionalProjectors::new(&ensemble_a, delta),
            n,
            delta,
        })
    }

    /// `tr(Π_ρ Π_{a^n} Π_ρ ρ_{b^n})` for a pair in `T_{δ/4}(p_AB)`.
    pub fn trace(&self, a: &[usize], b: &[usize], limits: &Limits) -> Result<f64> {
        if a.len() != self.n || b.len() != self.n {
            return usage(format!("sequences must have length {}", self.n));
        }
        if !is_jointly_typical(a, b, &self.p_ab, self.delta / 4.0) {
            return usage("pair is not jointly δ/4-typical");
        }
        let pi_a = self.conditional.projector(a, limits)?;
        let g = self.pi_rho.apply_columns(&pi_a.columns());
        let site_states: Vec<&CMatrix> = b.iter().map(|&bt| self.states[bt].matrix()).collect();
        let mut total = 0.0;
        for j in 0..g.ncols() {
            let col = g.column(j).into_owned();
            total += col.dotc(&kron_apply(&site_states, &col)).re;
        }
        Ok(total)
    }
}

/// Minimum pinched trace over `T_{δ/4}(p_AB)`.
pub fn pinching_check(
    p_ab: &JointPmf,
    states: &[DensityOperator],
    n: usize,
    delta: f64,
    limits: &Limits,
) -> Result<PinchingReport> {
    let setup = PinchingSetup::new(p_ab, states, n, delta, limits)?;
    let cols = p_ab.cols();
    let mut types = Vec::new();
    let mut overflow = false;
    for_each_composition(n, p_ab.rows() * cols, &mut |counts| {
        if counts_typical(counts, n, p_ab.probs(), delta / 4.0) {
            if types.len() >= limits.max_enum {
                overflow = true;
            } else {
                types.push(counts.to_vec());
            }
        }
    });
    if overflow {
        return crate::error::resource(format!("more than {} joint types", limits.max_enum));
    }
    let mut best: Option<(f64, Vec<usize>, Vec<usize>)> = None;
    for counts in &types {
        let mut a = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        for (cell, &c) in counts.iter().enumerate() {
            a.extend(std::iter::repeat_n(cell / cols, c));
            b.extend(std::iter::repeat_n(cell % cols, c));
        }
        let t = setup.trace(&a, &b, limits)?;
        if best.as_ref().is_none_or(|(m, _, _)| t < *m) {
            best = Some((t, a, b));
        }
    }
    Ok(PinchingReport {
        n,
        delta,
        min_trace: best.as_ref().map(|(t, _, _)| *t),
        argmin: best.map(|(_, a, b)| (a, b)),
        types_evaluated: types.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::linalg::{kron_all, trace_product};

    #[test]
    fn identical_pure_states_keep_all_trace() {
        let s = DensityOperator::pure_qubit_with_overlap(0.6).unwrap();
        let p = JointPmf::from_table(&[vec![0.25, 0.25], vec![0.25, 0.25]]).unwrap();
        for n in [4, 8] {
            let r = pinching_check(&p, &[s.clone(), s.clone()], n, 0.25, &Limits::default()).unwrap();
            assert!((r.min_trace.unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn trace_matches_dense_computation() {
        let s0 = DensityOperator::diagonal(&[0.9, 0.1]).unwrap();
        let s1 = DensityOperator::pure_qubit_with_overlap(0.8).unwrap();
        let p = JointPmf::from_table(&[vec![0.5, 0.0], vec![0.25, 0.25]]).unwrap();
        let limits = Limits::default();
        let setup = PinchingSetup::new(&p, &[s0.clone(), s1.clone()], 4, 1.0, &limits).unwrap();
        let a = [0, 0, 1, 1];
        let b = [0, 0, 0, 1];
        let fast = setup.trace(&a, &b, &limits).unwrap();
        let pi_rho = setup.pi_rho.to_dense();
        let pi_a = setup.conditional.projector(&a, &limits).unwrap().to_dense();
        let states = [&s0, &s1];
        let rho_b = kron_all(&b.iter().map(|&x| states[x].matrix()).collect::<Vec<_>>());
        let dense = trace_product(&(&pi_rho * &pi_a * &pi_rho), &rho_b).re;
        assert!((fast - dense).abs() < 1e-12);
    }

    #[test]
    fn atypical_pairs_are_refused() {
        let s = DensityOperator::maximally_mixed(2).unwrap();
        let p = JointPmf::from_table(&[vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        let limits = Limits::default();
        let setup = PinchingSetup::new(&p, &[s.clone(), s], 4, 0.25, &limits).unwrap();
        assert!(setup.trace(&[0, 0, 1, 1], &[0, 1, 0, 1], &limits).is_err());
        assert!(setup.trace(&[0, 0, 1, 1], &[0, 0, 1, 1], &limits).is_ok());
    }

    #[test]
    fn representative_choice_does_not_matter() {
        let s0 = DensityOperator::diagonal(&[0.8, 0.2]).unwrap();
        let s1 = DensityOperator::pure_qubit_with_overlap(0.3).unwrap();
        let p = JointPmf::from_table(&[vec![0.5, 0.25], vec![0.0, 0.25]]).unwrap();
        let limits = Limits::default();
        let setup = PinchingSetup::new(&p, &[s0, s1], 4, 0.5, &limits).unwrap();
        let t1 = setup.trace(&[0, 0, 0, 1], &[0, 0, 1, 1], &limits).unwrap();
        let t2 = setup.trace(&[1, 0, 0, 0], &[1, 1, 0, 0], &limits).unwrap();
        assert!((t1 - t2).abs() < 1e-12);
    }
}
