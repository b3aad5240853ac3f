//! Density-operator calculus: validated state and measurement types,
//! spectral decomposition, entropies, typical projectors and the
//! square-root measurement.

pub mod linalg;
mod measurement;
mod typical;

use serde::{Deserialize, Serialize};

use crate::error::{usage, validation, Result};
use crate::limits::Tolerances;
use crate::pmf::check_pmf;

pub use linalg::{CMatrix, CVector, Complex64};
pub use measurement::{psd_inverse_sqrt, square_root_povm, square_root_povm_factored};
pub use typical::{
    typical_projector, unconditional_projector, ConditionalProjectors, ProductProjector, StateSource,
    TypicalMode,
};

use linalg::{c, eigh, hermitian_part, hermiticity_defect, trace};

/// Eigenvalues at or below this are treated as outside the support when
/// building typical projectors.
pub const SUPPORT_TOL: f64 = 1e-12;

fn check_square(m: &CMatrix) -> Result<()> {
    if m.nrows() == 0 || m.nrows() != m.ncols() {
        return usage(format!("operator must be square and nonempty, got {}x{}", m.nrows(), m.ncols()));
    }
    Ok(())
}

fn check_hermitian_psd(m: &CMatrix, tol: &Tolerances) -> Result<Vec<f64>> {
    check_square(m)?;
    let defect = hermiticity_defect(m);
    if defect > tol.herm {
        return validation(format!("operator is not Hermitian (defect {defect:.3e})"));
    }
    let values = eigh(m).0;
    if let Some(&min) = values.last() {
        if min < -tol.psd {
            return validation(format!("operator has negative eigenvalue {min:.3e}"));
        }
    }
    Ok(values)
}

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    mat: CMatrix,
}

impl DensityOperator {
    pub fn new(mat: CMatrix, tol: &Tolerances) -> Result<Self> {
        check_hermitian_psd(&mat, tol)?;
        let tr = trace(&mat);
        if (tr - c(1.0)).norm() > tol.trace {
            return validation(format!("trace is {tr}, not 1"));
        }
        Ok(DensityOperator {
            mat: hermitian_part(&mat),
        })
    }

    /// Diagonal state with the given (validated) populations.
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        check_pmf(populations, Tolerances::default().pmf)?;
        let d = populations.len();
        let mat = CMatrix::from_fn(d, d, |i, j| if i == j { c(populations[i]) } else { c(0.0) });
        Ok(DensityOperator { mat })
    }

    /// `|ψ⟩⟨ψ|` for the normalized `amplitudes`.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if amplitudes.is_empty() || norm == 0.0 {
            return usage("pure state needs a nonzero vector");
        }
        let v = CVector::from_iterator(amplitudes.len(), amplitudes.iter().map(|z| z / norm));
        Ok(DensityOperator {
            mat: &v * v.adjoint(),
        })
    }

    /// `cos(φ)|0⟩ + sin(φ)|1⟩` with `|⟨0|ψ⟩| = overlap`.
    pub fn pure_qubit_with_overlap(overlap: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&overlap) {
            return usage(format!("overlap {overlap} outside [0, 1]"));
        }
        let s = (1.0 - overlap * overlap).max(0.0).sqrt();
        DensityOperator::pure(&[c(overlap), c(s)])
    }

    pub fn maximally_mixed(d: usize) -> Result<Self> {
        DensityOperator::diagonal(&vec![1.0 / d as f64; d])
    }

    /// Convex combination `Σ w_i ρ_i`.
    pub fn mixture(weights: &[f64], states: &[&DensityOperator]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return usage("mixture needs one weight per state");
        }
        check_pmf(weights, Tolerances::default().pmf)?;
        let d = states[0].dim();
        if states.iter().any(|s| s.dim() != d) {
            return usage("mixture of states with different dimensions");
        }
        let mut mat = CMatrix::zeros(d, d);
        for (&w, s) in weights.iter().zip(states) {
            if w != 0.0 {
                mat += s.matrix().map(|z| z * w);
            }
        }
        Ok(DensityOperator { mat })
    }

    /// Wraps a matrix that is a density operator by construction.
    pub(crate) fn from_trusted(mat: CMatrix) -> Self {
        DensityOperator {
            mat: hermitian_part(&mat),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn purity(&self) -> f64 {
        linalg::trace_product(&self.mat, &self.mat).re
    }

    pub fn as_psd(&self) -> PsdOperator {
        PsdOperator {
            mat: self.mat.clone(),
        }
    }
}

/// Hermitian positive semidefinite operator with unconstrained trace.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdOperator {
    mat: CMatrix,
}

impl PsdOperator {
    pub fn new(mat: CMatrix, tol: &Tolerances) -> Result<Self> {
        check_hermitian_psd(&mat, tol)?;
        Ok(PsdOperator {
            mat: hermitian_part(&mat),
        })
    }

    pub(crate) fn from_trusted(mat: CMatrix) -> Self {
        PsdOperator {
            mat: hermitian_part(&mat),
        }
    }

    pub fn identity(d: usize) -> Self {
        PsdOperator {
            mat: CMatrix::identity(d, d),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn min_eigenvalue(&self) -> f64 {
        eigh(&self.mat).0.last().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        eigh(&self.mat).0.first().copied().unwrap_or(0.0)
    }

    /// `tr(self · ρ)`.
    pub fn expectation(&self, rho: &CMatrix) -> f64 {
        linalg::trace_product(&self.mat, rho).re
    }
}

/// Outcome identifier of a POVM element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PovmLabel {
    Outcome(usize),
    Failure,
}

/// Positive operators resolving the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<PsdOperator>,
    labels: Vec<PovmLabel>,
}

impl Povm {
    pub fn new(elements: Vec<PsdOperator>, labels: Vec<PovmLabel>, tol: &Tolerances) -> Result<Self> {
        let povm = Povm::from_parts(elements, labels)?;
        povm.validate(tol)?;
        Ok(povm)
    }

    pub(crate) fn from_parts(elements: Vec<PsdOperator>, labels: Vec<PovmLabel>) -> Result<Self> {
        if elements.is_empty() || elements.len() != labels.len() {
            return usage("POVM needs one label per element");
        }
        let d = elements[0].dim();
        if elements.iter().any(|e| e.dim() != d) {
            return usage("POVM elements of different dimensions");
        }
        Ok(Povm { elements, labels })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn elements(&self) -> &[PsdOperator] {
        &self.elements
    }

    pub fn labels(&self) -> &[PovmLabel] {
        &self.labels
    }

    pub fn element(&self, label: PovmLabel) -> Option<&PsdOperator> {
        self.labels.iter().position(|&l| l == label).map(|i| &self.elements[i])
    }

    /// Spectral norm of `Σ elements − I`.
    pub fn completeness_error(&self) -> f64 {
        let d = self.dim();
        let mut total = CMatrix::zeros(d, d);
        for e in &self.elements {
            total += e.matrix();
        }
        total -= CMatrix::identity(d, d);
        linalg::spectral_norm_hermitian(&total)
    }

    /// Smallest eigenvalue over all elements.
    pub fn min_eigenvalue(&self) -> f64 {
        self.elements
            .iter()
            .map(PsdOperator::min_eigenvalue)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let min = self.min_eigenvalue();
        if min < -tol.psd {
            return validation(format!("POVM element has eigenvalue {min:.3e}"));
        }
        let err = self.completeness_error();
        if err > tol.povm {
            return validation(format!("POVM elements miss the identity by {err:.3e}"));
        }
        Ok(())
    }

    /// Outcome probabilities `tr(Λ_i ρ)` in element order.
    pub fn probabilities(&self, rho: &CMatrix) -> Vec<f64> {
        self.elements.iter().map(|e| e.expectation(rho)).collect()
    }
}

/// `{p_i, ρ_i}` with a common dimension.
#[derive(Debug, Clone)]
pub struct CqEnsemble {
    probs: Vec<f64>,
    states: Vec<DensityOperator>,
}

impl CqEnsemble {
    pub fn new(probs: Vec<f64>, states: Vec<DensityOperator>, tol: &Tolerances) -> Result<Self> {
        check_pmf(&probs, tol.pmf)?;
        if probs.len() != states.len() {
            return usage("ensemble needs one state per label");
        }
        let d = states[0].dim();
        if states.iter().any(|s| s.dim() != d) {
            return usage("ensemble states of different dimensions");
        }
        Ok(CqEnsemble { probs, states })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// `Σ p_i ρ_i`.
    pub fn average_state(&self) -> DensityOperator {
        let d = self.dim();
        let mut mat = CMatrix::zeros(d, d);
        for (&p, s) in self.probs.iter().zip(&self.states) {
            if p != 0.0 {
                mat += s.matrix().map(|z| z * p);
            }
        }
        DensityOperator::from_trusted(mat)
    }
}

/// Descending eigenvalues with orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Canonical spectral decomposition of a density operator.
///
/// Eigenvalues are clamped to `[0, 1]` and sorted descending. Eigenvalues
/// within 1e-9 of each other are treated as one degenerate eigenspace whose
/// basis is chosen independently of the solver; each eigenvector's first
/// non-negligible component is made real and positive, and ties are ordered
/// lexicographically (descending) on the canonicalized components.
pub fn spectral_decomposition(rho: &DensityOperator) -> Spectrum {
    let (values, vectors) = linalg::canonical_eigh(rho.matrix(), 1e-9);
    Spectrum {
        values: values.into_iter().map(|x| x.clamp(0.0, 1.0)).collect(),
        vectors,
    }
}

/// Spectrum with eigenvalues below [`SUPPORT_TOL`] set to exactly zero, used
/// as the eigenvalue distribution for typicality.
pub(crate) fn support_spectrum(rho: &DensityOperator) -> Spectrum {
    let mut s = spectral_decomposition(rho);
    for v in &mut s.values {
        if *v <= SUPPORT_TOL {
            *v = 0.0;
        }
    }
    s
}

/// `−Σ λ log2 λ` over a list of eigenvalues, with `0 log 0 = 0`.
pub fn entropy_of_eigenvalues(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    let values: Vec<f64> = eigh(rho.matrix()).0.into_iter().map(|x| x.max(0.0)).collect();
    entropy_of_eigenvalues(&values)
}

/// `χ = S(Σ p_i ρ_i) − Σ p_i S(ρ_i)` in bits, clamped at 0.
pub fn holevo_information(e: &CqEnsemble) -> f64 {
    let avg = von_neumann_entropy(&e.average_state());
    let cond: f64 = e
        .probs
        .iter()
        .zip(&e.states)
        .filter(|(&p, _)| p > 0.0)
        .map(|(&p, s)| p * von_neumann_entropy(s))
        .sum();
    (avg - cond).max(0.0)
}

/// Kronecker product of the listed operators, in order.
pub fn tensor_product(ops: &[&CMatrix]) -> Result<CMatrix> {
    if ops.is_empty() {
        return usage("tensor product of an empty list");
    }
    Ok(linalg::kron_all(ops))
}

/// `⊗_t states[t]` as a density operator.
pub fn tensor_states(states: &[&DensityOperator]) -> Result<DensityOperator> {
    let mats: Vec<&CMatrix> = states.iter().map(|s| s.matrix()).collect();
    Ok(DensityOperator { mat: tensor_product(&mats)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use linalg::ZERO;

    fn plus() -> DensityOperator {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityOperator::pure(&[c(s), c(s)]).unwrap()
    }

    fn ket0() -> DensityOperator {
        DensityOperator::diagonal(&[1.0, 0.0]).unwrap()
    }

    fn binary_entropy_oracle(p: f64) -> f64 {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }

    #[test]
    fn spectral_examples() {
        let s = spectral_decomposition(&DensityOperator::diagonal(&[0.7, 0.3]).unwrap());
        assert_eq!(s.values, vec![0.7, 0.3]);
        assert_eq!(s.vectors, CMatrix::identity(2, 2));
        let p = spectral_decomposition(&plus());
        assert!((p.values[0] - 1.0).abs() < 1e-12 && p.values[1].abs() < 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((p.vectors[(0, 0)] - c(s)).norm() < 1e-12);
        assert!((p.vectors[(1, 0)] - c(s)).norm() < 1e-12);
    }

    #[test]
    fn degenerate_spectrum_orders_standard_basis_first() {
        let s = spectral_decomposition(&DensityOperator::maximally_mixed(2).unwrap());
        assert_eq!(s.vectors, CMatrix::identity(2, 2));
    }

    #[test]
    fn validation_rejects_bad_operators() {
        let tol = Tolerances::default();
        let non_herm = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.1), ZERO, c(0.5)]);
        assert!(DensityOperator::new(non_herm, &tol).is_err());
        let negative = CMatrix::from_row_slice(2, 2, &[c(1.2), ZERO, ZERO, c(-0.2)]);
        assert!(DensityOperator::new(negative, &tol).is_err());
        let trace2 = CMatrix::identity(2, 2);
        assert!(DensityOperator::new(trace2.clone(), &tol).is_err());
        assert!(PsdOperator::new(trace2, &tol).is_ok());
    }

    #[test]
    fn entropy_examples() {
        assert!(von_neumann_entropy(&plus()).abs() < 1e-10);
        assert!((von_neumann_entropy(&DensityOperator::maximally_mixed(2).unwrap()) - 1.0).abs() < 1e-12);
        let s = von_neumann_entropy(&DensityOperator::diagonal(&[0.9, 0.1]).unwrap());
        assert!((s - binary_entropy_oracle(0.1)).abs() < 1e-12);
        assert!((s - 0.46900).abs() < 1e-5);
    }

    #[test]
    fn holevo_examples() {
        let tol = Tolerances::default();
        let same = CqEnsemble::new(vec![0.3, 0.7], vec![plus(), plus()], &tol).unwrap();
        assert!(holevo_information(&same).abs() < 1e-10);
        let basis: Vec<DensityOperator> = (0..3)
            .map(|i| {
                let mut p = [0.0; 3];
                p[i] = 1.0;
                DensityOperator::diagonal(&p).unwrap()
            })
            .collect();
        let ortho = CqEnsemble::new(vec![1.0 / 3.0; 3], basis, &tol).unwrap();
        assert!((holevo_information(&ortho) - 3f64.log2()).abs() < 1e-10);
        // Average of |0><0| and |+><+| has eigenvalues (1 ± 1/sqrt 2)/2.
        let e = CqEnsemble::new(vec![0.5, 0.5], vec![ket0(), plus()], &tol).unwrap();
        let lam = (1.0 + std::f64::consts::FRAC_1_SQRT_2) / 2.0;
        let oracle = binary_entropy_oracle(lam);
        assert!((holevo_information(&e) - oracle).abs() < 1e-10);
        assert!((oracle - 0.6009).abs() < 1e-4);
    }

    #[test]
    fn tensor_examples() {
        let a = ket0();
        let b = DensityOperator::diagonal(&[0.0, 1.0]).unwrap();
        let single = tensor_product(&[a.matrix()]).unwrap();
        assert_eq!(&single, a.matrix());
        let ab = tensor_product(&[a.matrix(), b.matrix()]).unwrap();
        let expect = DensityOperator::diagonal(&[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(&ab, expect.matrix());
        assert!(tensor_product(&[]).is_err());
    }
}
