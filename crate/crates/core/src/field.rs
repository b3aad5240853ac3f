//! Exact arithmetic and linear algebra over prime fields F_q.
//!
//! Vectors over F_q are plain `Vec<u32>` slices carrying their modulus
//! alongside; [`FieldMatrix`] stores entries row-major. Everything is exact
//! integer arithmetic mod q.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};
use crate::rng;

pub fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= q as u64 {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn check_prime(q: u32) -> Result<()> {
    if is_prime(q) {
        Ok(())
    } else {
        usage(format!("field size {q} is not prime"))
    }
}

/// An element of F_q together with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldScalar {
    value: u32,
    modulus: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Neg,
    Inv,
}

impl FieldScalar {
    pub fn new(value: u32, modulus: u32) -> Result<Self> {
        check_prime(modulus)?;
        if value >= modulus {
            return usage(format!("{value} is not a residue mod {modulus}"));
        }
        Ok(FieldScalar { value, modulus })
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    fn same_field(self, other: FieldScalar) -> Result<()> {
        if self.modulus != other.modulus {
            return usage(format!(
                "modulus mismatch: F_{} vs F_{}",
                self.modulus, other.modulus
            ));
        }
        Ok(())
    }

    pub fn add(self, other: FieldScalar) -> Result<FieldScalar> {
        self.same_field(other)?;
        Ok(FieldScalar {
            value: add_mod(self.value, other.value, self.modulus),
            ..self
        })
    }

    pub fn mul(self, other: FieldScalar) -> Result<FieldScalar> {
        self.same_field(other)?;
        Ok(FieldScalar {
            value: mul_mod(self.value, other.value, self.modulus),
            ..self
        })
    }

    pub fn neg(self) -> FieldScalar {
        FieldScalar {
            value: neg_mod(self.value, self.modulus),
            ..self
        }
    }

    pub fn inv(self) -> Result<FieldScalar> {
        match inv_mod(self.value, self.modulus) {
            Some(value) => Ok(FieldScalar { value, ..self }),
            None => Err(Error::Domain(format!(
                "0 has no inverse in F_{}",
                self.modulus
            ))),
        }
    }
}

/// Binary and unary field operations. `b` is ignored for `Neg` and `Inv`.
pub fn field_arithmetic(a: FieldScalar, b: FieldScalar, op: FieldOp) -> Result<FieldScalar> {
    match op {
        FieldOp::Add => a.add(b),
        FieldOp::Mul => a.mul(b),
        FieldOp::Neg => {
            a.same_field(b)?;
            Ok(a.neg())
        }
        FieldOp::Inv => {
            a.same_field(b)?;
            a.inv()
        }
    }
}

#[inline]
pub(crate) fn add_mod(a: u32, b: u32, q: u32) -> u32 {
    ((a as u64 + b as u64) % q as u64) as u32
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32, q: u32) -> u32 {
    ((a as u64 * b as u64) % q as u64) as u32
}

#[inline]
pub(crate) fn neg_mod(a: u32, q: u32) -> u32 {
    (q - a % q) % q
}

pub(crate) fn inv_mod(a: u32, q: u32) -> Option<u32> {
    if a.is_multiple_of(q) {
        return None;
    }
    // Fermat: a^(q-2) for prime q.
    let (mut base, mut exp, mut acc) = (a as u64 % q as u64, q as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q as u64;
        }
        base = base * base % q as u64;
        exp >>= 1;
    }
    Some(acc as u32)
}

/// Coordinatewise sum of two vectors over F_q.
pub fn add_vectors(a: &[u32], b: &[u32], q: u32) -> Vec<u32> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| add_mod(x, y, q)).collect()
}

/// Big-endian digits of `index` in base `q`, `len` digits long. This is the
/// lexicographic enumeration order of F_q^len used throughout the crate.
pub fn index_to_vector(mut index: usize, len: usize, q: u32) -> Vec<u32> {
    let mut v = vec![0u32; len];
    for slot in v.iter_mut().rev() {
        *slot = (index % q as usize) as u32;
        index /= q as usize;
    }
    v
}

pub fn vector_to_index(v: &[u32], q: u32) -> usize {
    v.iter().fold(0usize, |acc, &d| acc * q as usize + d as usize)
}

/// `q^len` if it fits in `usize`.
pub fn checked_pow(q: u32, len: usize) -> Option<usize> {
    let mut acc = 1usize;
    for _ in 0..len {
        acc = acc.checked_mul(q as usize)?;
    }
    Some(acc)
}

/// Dense row-major matrix over F_q. Zero rows or columns are allowed, which
/// is how an empty inner generator (k = 0) is represented.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    q: u32,
    data: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    q: u32,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<u32>>,
}

impl From<FieldMatrix> for MatrixRepr {
    fn from(m: FieldMatrix) -> Self {
        MatrixRepr {
            q: m.q,
            rows: m.rows,
            cols: m.cols,
            entries: (0..m.rows).map(|i| m.row(i).to_vec()).collect(),
        }
    }
}

impl TryFrom<MatrixRepr> for FieldMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        if r.entries.len() != r.rows || r.entries.iter().any(|row| row.len() != r.cols) {
            return usage("matrix entries do not match declared shape");
        }
        FieldMatrix::new(r.rows, r.cols, r.q, r.entries.concat())
    }
}

impl FieldMatrix {
    pub fn new(rows: usize, cols: usize, q: u32, data: Vec<u32>) -> Result<Self> {
        check_prime(q)?;
        if data.len() != rows * cols {
            return usage(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            ));
        }
        if let Some(bad) = data.iter().find(|&&x| x >= q) {
            return usage(format!("entry {bad} is not a residue mod {q}"));
        }
        Ok(FieldMatrix { rows, cols, q, data })
    }

    pub fn zeros(rows: usize, cols: usize, q: u32) -> Result<Self> {
        FieldMatrix::new(rows, cols, q, vec![0; rows * cols])
    }

    pub fn identity(size: usize, q: u32) -> Result<Self> {
        let mut m = FieldMatrix::zeros(size, size, q)?;
        for i in 0..size {
            m.data[i * size + i] = 1;
        }
        Ok(m)
    }

    pub fn from_rows(q: u32, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return usage("ragged rows");
        }
        FieldMatrix::new(rows.len(), cols, q, rows.concat())
    }

    /// A 1×len matrix holding `v`.
    pub fn row_vector(q: u32, v: &[u32]) -> Result<Self> {
        FieldMatrix::new(1, v.len(), q, v.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u32 {
        self.q
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Exact product `self · other`.
    pub fn mul(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.q != other.q {
            return usage(format!("modulus mismatch: F_{} vs F_{}", self.q, other.q));
        }
        if self.cols != other.rows {
            return usage(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let mut out = vec![0u32; self.rows * other.cols];
        for i in 0..self.rows {
            let acc = &mut out[i * other.cols..(i + 1) * other.cols];
            for (t, &a) in self.row(i).iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (slot, &b) in acc.iter_mut().zip(other.row(t)) {
                    *slot = add_mod(*slot, mul_mod(a, b, self.q), self.q);
                }
            }
        }
        Ok(FieldMatrix {
            rows: self.rows,
            cols: other.cols,
            q: self.q,
            data: out,
        })
    }

    /// Row vector times matrix: `v · self`, with `v.len() == rows`.
    pub fn left_mul(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.rows {
            return usage(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            ));
        }
        Ok(self.left_mul_unchecked(v))
    }

    pub(crate) fn left_mul_unchecked(&self, v: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (slot, &b) in out.iter_mut().zip(self.row(i)) {
                *slot = add_mod(*slot, mul_mod(a, b, self.q), self.q);
            }
        }
        out
    }

    /// Matrix times column vector: `self · x`, with `x.len() == cols`.
    pub fn right_mul(&self, x: &[u32]) -> Result<Vec<u32>> {
        if x.len() != self.cols {
            return usage(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            ));
        }
        Ok(self.right_mul_unchecked(x))
    }

    pub(crate) fn right_mul_unchecked(&self, x: &[u32]) -> Vec<u32> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(0u64, |acc, (&a, &b)| acc + a as u64 * b as u64)
                    % self.q as u64
            })
            .map(|x| x as u32)
            .collect()
    }

    /// Reduced row echelon form; returns the matrix and its pivot columns.
    fn rref(&self) -> (Vec<u32>, Vec<usize>) {
        let (rows, cols, q) = (self.rows, self.cols, self.q);
        let mut m = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
                continue;
            };
            for j in 0..cols {
                m.swap(r * cols + j, p * cols + j);
            }
            let inv = inv_mod(m[r * cols + c], q).expect("nonzero pivot");
            for j in 0..cols {
                m[r * cols + j] = mul_mod(m[r * cols + j], inv, q);
            }
            for i in 0..rows {
                let f = m[i * cols + c];
                if i == r || f == 0 {
                    continue;
                }
                for j in 0..cols {
                    let sub = mul_mod(f, m[r * cols + j], q);
                    m[i * cols + j] = add_mod(m[i * cols + j], neg_mod(sub, q), q);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Solution set of `self · x = rhs` as a particular solution plus a
    /// kernel basis, or `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &[u32]) -> Result<Option<AffineSolution>> {
        if rhs.len() != self.rows {
            return usage(format!(
                "right-hand side of length {} for {} equations",
                rhs.len(),
                self.rows
            ));
        }
        let (rows, cols, q) = (self.rows, self.cols, self.q);
        let mut aug = Vec::with_capacity(rows * (cols + 1));
        for i in 0..rows {
            aug.extend_from_slice(self.row(i));
            aug.push(rhs[i] % q);
        }
        let augmented = FieldMatrix {
            rows,
            cols: cols + 1,
            q,
            data: aug,
        };
        let (m, pivots) = augmented.rref();
        if pivots.last() == Some(&cols) {
            return Ok(None);
        }
        let w = cols + 1;
        let mut particular = vec![0u32; cols];
        for (r, &c) in pivots.iter().enumerate() {
            particular[c] = m[r * w + cols];
        }
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        let kernel = free
            .iter()
            .map(|&f| {
                let mut v = vec![0u32; cols];
                v[f] = 1;
                for (r, &c) in pivots.iter().enumerate() {
                    v[c] = neg_mod(m[r * w + f], q);
                }
                v
            })
            .collect();
        Ok(Some(AffineSolution { particular, kernel }))
    }
}

/// `{particular + Σ c_i kernel_i : c ∈ F_q^dim}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<u32>,
    pub kernel: Vec<Vec<u32>>,
}

/// `v · m` for a 1×k row matrix `v` and a k×n matrix `m`.
pub fn mat_mul(v: &FieldMatrix, m: &FieldMatrix) -> Result<FieldMatrix> {
    v.mul(m)
}

/// Matrix with IID uniform entries over F_q, drawn from the ChaCha20
/// stream `(seed, MATRIX)` in row-major order.
pub fn uniform_random_matrix(rows: usize, cols: usize, q: u32, seed: u64) -> Result<FieldMatrix> {
    check_prime(q)?;
    if rows == 0 || cols == 0 {
        return usage("random matrices need at least one row and one column");
    }
    let mut rng = rng::stream_rng(seed, &[rng::tag::MATRIX]);
    random_matrix(&mut rng, rows, cols, q)
}

pub(crate) fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, q: u32) -> Result<FieldMatrix> {
    let data = (0..rows * cols).map(|_| rng.random_range(0..q)).collect();
    FieldMatrix::new(rows, cols, q, data)
}

pub(crate) fn random_vector<R: Rng>(rng: &mut R, len: usize, q: u32) -> Vec<u32> {
    (0..len).map(|_| rng.random_range(0..q)).collect()
}
