//! Generalized inverse square roots and the square-root measurement.

use crate::error::{usage, validation, Result};
use crate::limits::Tolerances;
use crate::quantum::linalg::{eigh, CMatrix};
use crate::quantum::{Povm, PovmLabel, PsdOperator};

/// Eigenvalues at or below this are treated as the kernel of `T` when
/// forming `T^{-1/2}` inside the square-root measurement.
pub const PSEUDO_INVERSE_TOL: f64 = 1e-10;

/// `A^{-1/2}` on the support of `A` (eigenvalues above `tol`), zero on the
/// rest.
pub fn psd_inverse_sqrt(a: &PsdOperator, tol: f64) -> PsdOperator {
    PsdOperator::from_trusted(inverse_sqrt_matrix(a.matrix(), tol))
}

fn inverse_sqrt_matrix(a: &CMatrix, tol: f64) -> CMatrix {
    let (values, vectors) = eigh(a);
    let mut scaled = vectors.clone();
    for (k, &lam) in values.iter().enumerate() {
        let f = if lam > tol { lam.powf(-0.5) } else { 0.0 };
        scaled.column_mut(k).scale_mut(f);
    }
    &scaled * vectors.adjoint()
}

fn finish(dim: usize, elements: Vec<CMatrix>) -> Result<Povm> {
    let mut failure = CMatrix::identity(dim, dim);
    for e in &elements {
        failure -= e;
    }
    let count = elements.len();
    let mut ops: Vec<PsdOperator> = elements.into_iter().map(PsdOperator::from_trusted).collect();
    ops.push(PsdOperator::from_trusted(failure));
    let mut labels: Vec<PovmLabel> = (0..count).map(PovmLabel::Outcome).collect();
    labels.push(PovmLabel::Failure);
    Povm::from_parts(ops, labels)
}

/// Square-root measurement `Λ_i = T^{-1/2} γ_i T^{-1/2}`, `T = Σ_j γ_j`,
/// with the failure element `I − Σ_i Λ_i` appended last.
pub fn square_root_povm(gammas: &[PsdOperator], tol: &Tolerances) -> Result<Povm> {
    let Some(first) = gammas.first() else {
        return usage("square-root measurement of an empty list");
    };
    let d = first.dim();
    if gammas.iter().any(|g| g.dim() != d) {
        return usage("operators of different dimensions");
    }
    for (i, g) in gammas.iter().enumerate() {
        let top = g.max_eigenvalue();
        if top > 1.0 + tol.psd {
            return validation(format!("operator {i} exceeds the identity (eigenvalue {top:.6})"));
        }
    }
    let mut total = CMatrix::zeros(d, d);
    for g in gammas {
        total += g.matrix();
    }
    let s = inverse_sqrt_matrix(&total, PSEUDO_INVERSE_TOL);
    let elements = gammas.iter().map(|g| &s * g.matrix() * &s).collect();
    finish(d, elements)
}

/// Square-root measurement for operators given in factored form
/// `γ_i = K_i K_i†` (each `K_i` is `dim × r_i`, possibly with zero columns).
/// Costs `O(dim² Σ r_i)` plus one `dim³` eigen-decomposition instead of
/// `O(dim³)` per element. Callers guarantee `0 ≤ γ_i ≤ I`.
pub fn square_root_povm_factored(factors: &[CMatrix], dim: usize) -> Result<Povm> {
    if factors.is_empty() {
        return usage("square-root measurement of an empty list");
    }
    if factors.iter().any(|k| k.nrows() != dim) {
        return usage("factor with the wrong row dimension");
    }
    let mut total = CMatrix::zeros(dim, dim);
    for k in factors.iter().filter(|k| k.ncols() > 0) {
        total += k * k.adjoint();
    }
    let s = inverse_sqrt_matrix(&total, PSEUDO_INVERSE_TOL);
    let elements = factors
        .iter()
        .map(|k| {
            if k.ncols() == 0 {
                CMatrix::zeros(dim, dim)
            } else if k.ncols() > dim {
                let g = k * k.adjoint();
                &s * g * &s
            } else {
                let sk = &s * k;
                &sk * sk.adjoint()
            }
        })
        .collect();
    finish(dim, elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::linalg::{c, ZERO};
    use num_complex::Complex64;

    fn random_psd(d: usize, rank: usize, seed: u64) -> CMatrix {
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let k = CMatrix::from_fn(d, rank, |_, _| Complex64::new(next(), next()));
        &k * k.adjoint()
    }

    #[test]
    fn inverse_sqrt_examples() {
        let id = PsdOperator::identity(3);
        assert!((psd_inverse_sqrt(&id, 1e-12).matrix() - CMatrix::identity(3, 3)).norm() < 1e-14);
        let a = PsdOperator::from_trusted(CMatrix::from_row_slice(2, 2, &[c(4.0), ZERO, ZERO, ZERO]));
        let s = psd_inverse_sqrt(&a, 1e-12);
        let expect = CMatrix::from_row_slice(2, 2, &[c(0.5), ZERO, ZERO, ZERO]);
        assert!((s.matrix() - expect).norm() < 1e-14);
    }

    #[test]
    fn inverse_sqrt_sandwich_is_support_projector() {
        for seed in 0..10 {
            let a = random_psd(4, 2, seed);
            let s = psd_inverse_sqrt(&PsdOperator::from_trusted(a.clone()), 1e-12);
            let sandwich = s.matrix() * &a * s.matrix();
            // Independent support projector from a's own eigenvectors.
            let (vals, vecs) = eigh(&a);
            let mut proj = CMatrix::zeros(4, 4);
            for (k, &v) in vals.iter().enumerate() {
                if v > 1e-12 {
                    let col = vecs.column(k);
                    proj += col * col.adjoint();
                }
            }
            assert!((sandwich - proj).norm() < 1e-9);
        }
    }

    #[test]
    fn orthogonal_projectors_are_reproduced() {
        let p0 = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0), ZERO, ZERO]));
        let p1 = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ZERO, c(1.0), c(1.0)]));
        let gammas = [PsdOperator::from_trusted(p0.clone()), PsdOperator::from_trusted(p1.clone())];
        let povm = square_root_povm(&gammas, &Tolerances::default()).unwrap();
        assert!((povm.elements()[0].matrix() - p0).norm() < 1e-12);
        assert!((povm.elements()[1].matrix() - p1).norm() < 1e-12);
        assert!(povm.elements()[2].matrix().norm() < 1e-12);
        assert_eq!(povm.labels()[2], PovmLabel::Failure);
    }

    #[test]
    fn half_identity_becomes_identity() {
        let g = PsdOperator::from_trusted(CMatrix::identity(2, 2).map(|z| z * 0.5));
        let povm = square_root_povm(&[g], &Tolerances::default()).unwrap();
        assert!((povm.elements()[0].matrix() - CMatrix::identity(2, 2)).norm() < 1e-12);
        assert!(povm.elements()[1].matrix().norm() < 1e-12);
    }

    #[test]
    fn completeness_and_positivity_on_random_inputs() {
        let tol = Tolerances::default();
        for seed in 0..20 {
            let gammas: Vec<PsdOperator> = (0..3)
                .map(|i| {
                    let m = random_psd(4, 1 + (i + seed as usize) % 3, seed * 7 + i as u64);
                    let top = eigh(&m).0[0];
                    PsdOperator::from_trusted(m.map(|z| z / top))
                })
                .collect();
            let povm = square_root_povm(&gammas, &tol).unwrap();
            assert!(povm.completeness_error() < 1e-9);
            assert!(povm.min_eigenvalue() > -1e-9);
        }
    }

    #[test]
    fn factored_route_matches_dense_route() {
        let k1 = CMatrix::from_fn(4, 1, |i, _| c(i as f64 * 0.2));
        let k2 = CMatrix::from_fn(4, 2, |i, j| Complex64::new(0.1 * (i + j) as f64, 0.05 * j as f64));
        let g1 = PsdOperator::from_trusted(&k1 * k1.adjoint());
        let g2 = PsdOperator::from_trusted(&k2 * k2.adjoint());
        let dense = square_root_povm(&[g1, g2], &Tolerances::uniform(1.0)).unwrap();
        let fact = square_root_povm_factored(&[k1, k2], 4).unwrap();
        for (a, b) in dense.elements().iter().zip(fact.elements()) {
            assert!((a.matrix() - b.matrix()).norm() < 1e-10);
        }
    }

    #[test]
    fn rejects_operators_above_identity() {
        let g = PsdOperator::from_trusted(CMatrix::identity(2, 2).map(|z| z * 2.0));
        assert!(square_root_povm(&[g], &Tolerances::default()).is_err());
    }
}
