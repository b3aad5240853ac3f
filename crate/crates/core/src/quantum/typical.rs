//! Typical and conditional typical projectors.
//!
//! Both kinds are diagonal in a product basis: the unconditional projector
//! of ρ uses ρ's eigenbasis at every site, the conditional projector of
//! `v^n` uses the eigenbasis of `ρ_{v_t}` at site `t`. A projector is kept
//! as the list of local bases plus the set of included basis sequences, so
//! it can be applied to vectors without forming a `d^n × d^n` matrix.

use crate::error::{usage, Result};
use crate::limits::Limits;
use crate::quantum::linalg::{kron_apply, CMatrix, CVector, ZERO};
use crate::quantum::{support_spectrum, CqEnsemble, DensityOperator, PsdOperator, Spectrum};
use crate::typicality::{counts_typical, for_each_sequence, is_typical};

/// Orthogonal projector `Σ_{y^n ∈ support} ⊗_t |b_{t,y_t}⟩⟨b_{t,y_t}|`.
#[derive(Debug, Clone)]
pub struct ProductProjector {
    local_dim: usize,
    bases: Vec<CMatrix>,
    /// Mixed-radix indices of the included basis sequences, site 0 most
    /// significant, ascending.
    support: Vec<usize>,
}

impl ProductProjector {
    pub fn n(&self) -> usize {
        self.bases.len()
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.n() as u32)
    }

    pub fn rank(&self) -> usize {
        self.support.len()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn bases(&self) -> &[CMatrix] {
        &self.bases
    }

    /// `⊗_t b_{t, y_t}` for the basis sequence with mixed-radix `index`.
    pub fn product_vector(&self, index: usize) -> CVector {
        let d = self.local_dim;
        let n = self.n();
        let mut digits = vec![0usize; n];
        let mut rest = index;
        for slot in digits.iter_mut().rev() {
            *slot = rest % d;
            rest /= d;
        }
        let mut v = CVector::from_element(1, crate::quantum::linalg::ONE);
        for (t, &y) in digits.iter().enumerate() {
            let col = self.bases[t].column(y);
            let mut next = CVector::zeros(v.len() * d);
            for (i, &a) in v.iter().enumerate() {
                for j in 0..d {
                    next[i * d + j] = a * col[j];
                }
            }
            v = next;
        }
        v
    }

    /// Orthonormal columns spanning the projector's range.
    pub fn columns(&self) -> CMatrix {
        let cols: Vec<CVector> = self.support.iter().map(|&i| self.product_vector(i)).collect();
        if cols.is_empty() {
            CMatrix::zeros(self.dim(), 0)
        } else {
            CMatrix::from_columns(&cols)
        }
    }

    pub fn to_dense(&self) -> CMatrix {
        let cols = self.columns();
        &cols * cols.adjoint()
    }

    /// `Π x` via the local bases.
    pub fn apply(&self, x: &CVector) -> CVector {
        if self.is_zero() {
            return CVector::zeros(x.len());
        }
        let adjoints: Vec<CMatrix> = self.bases.iter().map(|b| b.adjoint()).collect();
        let adj_refs: Vec<&CMatrix> = adjoints.iter().collect();
        let coeffs = kron_apply(&adj_refs, x);
        let mut masked = CVector::from_element(x.len(), ZERO);
        for &i in &self.support {
            masked[i] = coeffs[i];
        }
        let refs: Vec<&CMatrix> = self.bases.iter().collect();
        kron_apply(&refs, &masked)
    }

    /// `Π M`, column by column.
    pub fn apply_columns(&self, m: &CMatrix) -> CMatrix {
        if m.ncols() == 0 {
            return m.clone();
        }
        let cols: Vec<CVector> = (0..m.ncols())
            .map(|j| self.apply(&m.column(j).into_owned()))
            .collect();
        CMatrix::from_columns(&cols)
    }
}

fn sequence_index(seq: &[usize], d: usize) -> usize {
    seq.iter().fold(0, |acc, &y| acc * d + y)
}

/// Typical projector of `ρ^{⊗n}`: eigen-sequences whose empirical label
/// frequencies are within δ of ρ's eigenvalue distribution.
pub fn unconditional_projector(
    rho: &DensityOperator,
    n: usize,
    delta: f64,
    limits: &Limits,
) -> Result<ProductProjector> {
    let d = rho.dim();
    limits.tensor_dim(d, n)?;
    let spec = support_spectrum(rho);
    let mut support = Vec::new();
    for_each_sequence(d, n, |y| {
        if is_typical(y, &spec.values, delta) {
            support.push(sequence_index(y, d));
        }
    });
    Ok(ProductProjector {
        local_dim: d,
        bases: vec![spec.vectors; n],
        support,
    })
}

/// Spectra of an ensemble, reused across many conditional projectors.
#[derive(Debug, Clone)]
pub struct ConditionalProjectors {
    probs: Vec<f64>,
    spectra: Vec<Spectrum>,
    /// `p_V(v) λ_y(ρ_v)` on the pair alphabet, row-major in `v`.
    joint: Vec<f64>,
    local_dim: usize,
    delta: f64,
}

impl ConditionalProjectors {
    pub fn new(ensemble: &CqEnsemble, delta: f64) -> Self {
        let spectra: Vec<Spectrum> = ensemble.states().iter().map(support_spectrum).collect();
        let joint = ensemble
            .probs()
            .iter()
            .zip(&spectra)
            .flat_map(|(&p, s)| s.values.iter().map(move |&l| p * l))
            .collect();
        ConditionalProjectors {
            probs: ensemble.probs().to_vec(),
            spectra,
            joint,
            local_dim: ensemble.dim(),
            delta,
        }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Conditional typical projector of `labels`: the span of eigen-sequences
    /// `y^n` with `(v^n, y^n)` jointly δ-typical, and the zero projector when
    /// `v^n` itself is not δ-typical for `p_V`.
    pub fn projector(&self, labels: &[usize], limits: &Limits) -> Result<ProductProjector> {
        let d = self.local_dim;
        let n = labels.len();
        limits.tensor_dim(d, n)?;
        if let Some(&bad) = labels.iter().find(|&&v| v >= self.probs.len()) {
            return usage(format!("label {bad} outside the ensemble's label set"));
        }
        let bases = labels.iter().map(|&v| self.spectra[v].vectors.clone()).collect();
        let mut support = Vec::new();
        if is_typical(labels, &self.probs, self.delta) {
            let cells = self.joint.len();
            let mut counts = vec![0usize; cells];
            for_each_sequence(d, n, |y| {
                counts.iter_mut().for_each(|c| *c = 0);
                for (&v, &yt) in labels.iter().zip(y) {
                    counts[v * d + yt] += 1;
                }
                if counts_typical(&counts, n, &self.joint, self.delta) {
                    support.push(sequence_index(y, d));
                }
            });
        }
        Ok(ProductProjector {
            local_dim: d,
            bases,
            support,
        })
    }
}

/// What a typical projector is built from.
pub enum StateSource<'a> {
    State(&'a DensityOperator),
    /// Unconditional mode uses the ensemble's average state.
    Ensemble(&'a CqEnsemble),
}

pub enum TypicalMode<'a> {
    Unconditional,
    /// Conditional on a label sequence over the ensemble's labels.
    Conditional(&'a [usize]),
}

/// Dense typical projector on the `d^n`-dimensional space.
pub fn typical_projector(
    source: StateSource<'_>,
    n: usize,
    delta: f64,
    mode: TypicalMode<'_>,
    limits: &Limits,
) -> Result<PsdOperator> {
    if n == 0 {
        return usage("block length must be at least 1");
    }
    if delta < 0.0 {
        return usage("typicality radius must be nonnegative");
    }
    let projector = match (mode, source) {
        (TypicalMode::Unconditional, StateSource::State(rho)) => unconditional_projector(rho, n, delta, limits)?,
        (TypicalMode::Unconditional, StateSource::Ensemble(e)) => {
            unconditional_projector(&e.average_state(), n, delta, limits)?
        }
        (TypicalMode::Conditional(labels), StateSource::Ensemble(e)) => {
            if labels.len() != n {
                return usage(format!("label sequence has length {}, expected {n}", labels.len()));
            }
            ConditionalProjectors::new(e, delta).projector(labels, limits)?
        }
        (TypicalMode::Conditional(_), StateSource::State(_)) => {
            return usage("conditional typical projectors need an ensemble");
        }
    };
    Ok(PsdOperator::from_trusted(projector.to_dense()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Tolerances;
    use crate::quantum::linalg::c;
    use crate::quantum::tensor_states;

    fn plus() -> DensityOperator {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityOperator::pure(&[c(s), c(s)]).unwrap()
    }

    #[test]
    fn deterministic_spectrum_gives_rank_one() {
        let rho = DensityOperator::diagonal(&[1.0, 0.0]).unwrap();
        for n in 1..5 {
            for delta in [0.0, 0.2, 0.9] {
                let p = unconditional_projector(&rho, n, delta, &Limits::default()).unwrap();
                assert_eq!(p.support(), &[0]);
                let dense = p.to_dense();
                assert!((dense[(0, 0)] - c(1.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn maximally_mixed_wide_radius_is_identity() {
        let rho = DensityOperator::maximally_mixed(2).unwrap();
        let p = typical_projector(StateSource::State(&rho), 2, 0.5, TypicalMode::Unconditional, &Limits::default())
            .unwrap();
        assert!((p.matrix() - CMatrix::identity(4, 4)).norm() < 1e-12);
    }

    #[test]
    fn atypical_condition_gives_zero_projector() {
        let tol = Tolerances::default();
        let e = CqEnsemble::new(vec![0.5, 0.5], vec![plus(), DensityOperator::maximally_mixed(2).unwrap()], &tol)
            .unwrap();
        let p = typical_projector(
            StateSource::Ensemble(&e),
            4,
            0.1,
            TypicalMode::Conditional(&[0, 0, 0, 0]),
            &Limits::default(),
        )
        .unwrap();
        assert!(p.matrix().norm() == 0.0);
    }

    #[test]
    fn projector_commutes_with_tensor_power() {
        let tol = Tolerances::default();
        let rho = DensityOperator::new(
            CMatrix::from_row_slice(2, 2, &[c(0.7), num_complex::Complex64::new(0.1, 0.2), num_complex::Complex64::new(0.1, -0.2), c(0.3)]),
            &tol,
        )
        .unwrap();
        let p = typical_projector(StateSource::State(&rho), 3, 0.2, TypicalMode::Unconditional, &Limits::default())
            .unwrap();
        let power = tensor_states(&[&rho, &rho, &rho]).unwrap();
        let comm = p.matrix() * power.matrix() - power.matrix() * p.matrix();
        assert!(comm.norm() < 1e-9);
        let sq = p.matrix() * p.matrix();
        assert!((sq - p.matrix()).norm() < 1e-10);
    }

    #[test]
    fn apply_matches_dense() {
        let rho = plus();
        let mixed = DensityOperator::diagonal(&[0.6, 0.4]).unwrap();
        let e = CqEnsemble::new(vec![0.5, 0.5], vec![rho, mixed], &Tolerances::default()).unwrap();
        let factory = ConditionalProjectors::new(&e, 0.3);
        let p = factory.projector(&[0, 1, 1, 0], &Limits::default()).unwrap();
        let x = CVector::from_fn(16, |i, _| num_complex::Complex64::new(i as f64 * 0.1, 0.5 - i as f64 * 0.03));
        let dense = p.to_dense() * &x;
        assert!((dense - p.apply(&x)).norm() < 1e-12);
    }

    #[test]
    fn budget_is_enforced() {
        let limits = Limits { max_dim: 8, ..Limits::default() };
        let rho = DensityOperator::maximally_mixed(2).unwrap();
        assert!(unconditional_projector(&rho, 4, 0.1, &limits).is_err());
    }
}
