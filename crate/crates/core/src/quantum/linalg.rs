//! Dense complex helpers shared by the quantum modules.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
pub use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).map(|z| z * 0.5)
}

/// `max |m_ij − conj(m_ji)|`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let d = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in i..d {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn is_diagonal(m: &CMatrix) -> bool {
    let d = m.nrows();
    (0..d).all(|i| (0..d).all(|j| i == j || m[(i, j)] == ZERO))
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues in descending
/// order. Exactly diagonal inputs return the standard basis.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let d = m.nrows();
    let (values, vectors) = if is_diagonal(m) {
        ((0..d).map(|i| m[(i, i)].re).collect::<Vec<_>>(), CMatrix::identity(d, d))
    } else {
        let eig = SymmetricEigen::new(hermitian_part(m));
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..d).collect();
    // Stable sort keeps the diagonal fast path in standard-basis order on ties.
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let sorted_values = order.iter().map(|&i| values[i]).collect();
    let sorted_vectors = CMatrix::from_fn(d, d, |r, k| vectors[(r, order[k])]);
    (sorted_values, sorted_vectors)
}

pub fn eigenvalues(m: &CMatrix) -> Vec<f64> {
    eigh(m).0
}

/// Largest absolute eigenvalue of a Hermitian matrix.
pub fn spectral_norm_hermitian(m: &CMatrix) -> f64 {
    eigenvalues(m).into_iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    0.5 * eigenvalues(&(a - b)).iter().map(|x| x.abs()).sum::<f64>()
}

/// Multiplies by a unit phase so the first non-negligible component is real
/// and positive.
fn canonical_phase(v: &mut CVector) {
    if let Some(first) = v.iter().copied().find(|z| z.norm() > 1e-10) {
        let phase = first.conj() / first.norm();
        v.iter_mut().for_each(|z| *z *= phase);
    }
}

fn lexicographic_desc(a: &CVector, b: &CVector) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        let ord = y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

/// Deterministic orthonormal basis of the column span of `q` (orthonormal
/// columns): pivoted Gram–Schmidt on the projections of the standard basis
/// vectors, taking the longest residual first and the lowest index on ties.
fn canonical_span_basis(q: &CMatrix) -> Vec<CVector> {
    let d = q.nrows();
    let g = q.ncols();
    let projector = q * q.adjoint();
    let mut basis: Vec<CVector> = Vec::with_capacity(g);
    let mut used = vec![false; d];
    for _ in 0..g {
        let mut best: Option<(usize, f64, CVector)> = None;
        for e in (0..d).filter(|&e| !used[e]) {
            let mut w: CVector = projector.column(e).into_owned();
            for u in &basis {
                let overlap = u.dotc(&w);
                w -= u * overlap;
            }
            let norm = w.norm();
            if best.as_ref().is_none_or(|(_, bn, _)| norm > bn + 1e-12) {
                best = Some((e, norm, w));
            }
        }
        let (e, norm, w) = best.expect("span dimension exceeds ambient dimension");
        used[e] = true;
        basis.push(w / c(norm));
    }
    basis
}

/// Hermitian eigen-decomposition with a reproducible eigenvector choice:
/// eigenvalues descending; eigenvalues within `cluster_tol` of their
/// cluster head share the cluster mean and an eigenbasis that depends only
/// on the eigenspace; every vector phase-canonicalized; ties ordered by
/// descending lexicographic order of the vector components.
pub fn canonical_eigh(m: &CMatrix, cluster_tol: f64) -> (Vec<f64>, CMatrix) {
    let (values, vectors) = eigh(m);
    let d = values.len();
    let mut out_values = Vec::with_capacity(d);
    let mut out_vectors: Vec<CVector> = Vec::with_capacity(d);
    let mut i = 0;
    while i < d {
        let mut j = i + 1;
        while j < d && values[i] - values[j] <= cluster_tol {
            j += 1;
        }
        let mut cluster: Vec<CVector> = if j - i == 1 {
            vec![vectors.column(i).into_owned()]
        } else {
            canonical_span_basis(&vectors.columns(i, j - i).into_owned())
        };
        cluster.iter_mut().for_each(canonical_phase);
        cluster.sort_by(lexicographic_desc);
        let mean = values[i..j].iter().sum::<f64>() / (j - i) as f64;
        out_values.extend(std::iter::repeat_n(mean, j - i));
        out_vectors.extend(cluster);
        i = j;
    }
    (out_values, CMatrix::from_columns(&out_vectors))
}

/// `Σ_ij a_ij b_ji`.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let d = a.nrows();
    let mut acc = ZERO;
    for i in 0..d {
        for j in 0..d {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().copied().sum()
}

/// Kronecker product in listed order.
pub fn kron_all(ops: &[&CMatrix]) -> CMatrix {
    let mut it = ops.iter();
    let first = (*it.next().expect("nonempty operator list")).clone();
    it.fold(first, |acc, m| acc.kronecker(m))
}

/// `(⊗_t mats[t]) x` without forming the Kronecker product. Site 0 is the
/// most significant tensor factor; all sites share one local dimension.
pub fn kron_apply(mats: &[&CMatrix], x: &CVector) -> CVector {
    let n = mats.len();
    if n == 0 {
        return x.clone();
    }
    let d = mats[0].nrows();
    let total = x.len();
    debug_assert_eq!(Some(total), (0..n).try_fold(1usize, |a, _| a.checked_mul(d)));
    let mut cur = x.clone();
    let mut next = CVector::zeros(total);
    let mut right = total;
    for m in mats {
        right /= d;
        let block = d * right;
        for base_l in (0..total).step_by(block) {
            for r in 0..right {
                let base = base_l + r;
                for j in 0..d {
                    let mut acc = ZERO;
                    for i in 0..d {
                        acc += m[(j, i)] * cur[base + i * right];
                    }
                    next[base + j * right] = acc;
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    cur
}
