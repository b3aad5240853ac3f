//! Nested coset codes and coset representatives.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};
use crate::field::{add_vectors, check_prime, index_to_vector, random_matrix, random_vector, FieldMatrix};
use crate::limits::Limits;
use crate::rng::{stream_rng, tag};
use crate::typicality::is_typical_field;

/// `v^n(a, m) = a g_I ⊕ m g_{O/I} ⊕ b^n` over `F_q`, with `a ∈ F_q^k`
/// selecting a codeword inside the coset indexed by the message
/// `m ∈ F_q^l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestedCosetCode {
    q: u32,
    n: usize,
    g_inner: FieldMatrix,
    g_outer: FieldMatrix,
    bias: Vec<u32>,
}

impl NestedCosetCode {
    pub fn new(g_inner: FieldMatrix, g_outer: FieldMatrix, bias: Vec<u32>) -> Result<Self> {
        let q = g_inner.modulus();
        let n = bias.len();
        if g_outer.modulus() != q {
            return usage("generator matrices over different fields");
        }
        if g_inner.cols() != n || g_outer.cols() != n {
            return usage(format!(
                "generators have {} and {} columns for block length {n}",
                g_inner.cols(),
                g_outer.cols()
            ));
        }
        if n == 0 {
            return usage("block length must be at least 1");
        }
        if let Some(bad) = bias.iter().find(|&&b| b >= q) {
            return usage(format!("bias entry {bad} is not a residue mod {q}"));
        }
        Ok(NestedCosetCode {
            q,
            n,
            g_inner,
            g_outer,
            bias,
        })
    }

    /// Generators and bias with IID uniform entries drawn from `rng` in the
    /// order inner generator, outer generator, bias.
    pub fn random<R: Rng>(rng: &mut R, q: u32, n: usize, k: usize, l: usize) -> Result<Self> {
        check_prime(q)?;
        let g_inner = random_matrix(rng, k, n, q)?;
        let g_outer = random_matrix(rng, l, n, q)?;
        let bias = random_vector(rng, n, q);
        NestedCosetCode::new(g_inner, g_outer, bias)
    }

    /// Random code from `seed`, with the generators and the bias on the
    /// same streams a message-sum code of that seed uses for its shared
    /// generators and its first sender's bias.
    pub fn from_seed(seed: u64, q: u32, n: usize, k: usize, l: usize) -> Result<Self> {
        check_prime(q)?;
        let g_inner = random_matrix(&mut stream_rng(seed, &[tag::INNER_GENERATOR]), k, n, q)?;
        let g_outer = random_matrix(&mut stream_rng(seed, &[tag::OUTER_GENERATOR]), l, n, q)?;
        let bias = random_vector(&mut stream_rng(seed, &[tag::BIAS, 1]), n, q);
        NestedCosetCode::new(g_inner, g_outer, bias)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.g_inner.rows()
    }

    pub fn l(&self) -> usize {
        self.g_outer.rows()
    }

    pub fn g_inner(&self) -> &FieldMatrix {
        &self.g_inner
    }

    pub fn g_outer(&self) -> &FieldMatrix {
        &self.g_outer
    }

    pub fn bias(&self) -> &[u32] {
        &self.bias
    }

    /// Same generators with a different bias.
    pub fn with_bias(&self, bias: Vec<u32>) -> Result<Self> {
        NestedCosetCode::new(self.g_inner.clone(), self.g_outer.clone(), bias)
    }

    /// Number of messages `q^l`.
    pub fn message_count(&self) -> Option<usize> {
        crate::field::checked_pow(self.q, self.l())
    }

    pub fn codeword(&self, a: &[u32], m: &[u32]) -> Result<Vec<u32>> {
        if a.len() != self.k() || m.len() != self.l() {
            return usage(format!(
                "codeword index of lengths ({}, {}) for k = {}, l = {}",
                a.len(),
                m.len(),
                self.k(),
                self.l()
            ));
        }
        if a.iter().chain(m).any(|&x| x >= self.q) {
            return usage(format!("codeword index entries must be residues mod {}", self.q));
        }
        Ok(self.codeword_unchecked(a, m))
    }

    pub(crate) fn codeword_unchecked(&self, a: &[u32], m: &[u32]) -> Vec<u32> {
        let inner = self.g_inner.left_mul_unchecked(a);
        let outer = self.g_outer.left_mul_unchecked(m);
        let sum = add_vectors(&inner, &outer, self.q);
        add_vectors(&sum, &self.bias, self.q)
    }

    /// Codeword of inner index `a_index` and message index `m_index` in the
    /// big-endian enumeration of `F_q^k` and `F_q^l`.
    pub(crate) fn codeword_at(&self, a_index: usize, m_index: usize) -> Vec<u32> {
        let a = index_to_vector(a_index, self.k(), self.q);
        let m = index_to_vector(m_index, self.l(), self.q);
        self.codeword_unchecked(&a, &m)
    }
}

/// Per-message representatives `a_m` and coverage counts
/// `θ(m) = |{a : v^n(a, m) ∈ T_δ(p_V)}|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Representatives {
    /// `a_m` for every message in index order.
    pub choices: Vec<Vec<u32>>,
    pub coverage: Vec<usize>,
}

impl Representatives {
    /// Messages whose coset has no typical codeword.
    pub fn uncovered(&self) -> usize {
        self.coverage.iter().filter(|&&c| c == 0).count()
    }
}

/// Lexicographically smallest `a` with `v^n(a, m)` typical, or `0^k` when
/// the coset has no typical member.
pub fn choose_representatives(
    ncc: &NestedCosetCode,
    p_v: &[f64],
    delta: f64,
    limits: &Limits,
) -> Result<Representatives> {
    if p_v.len() != ncc.q() as usize {
        return usage(format!("p_V has {} entries, expected {}", p_v.len(), ncc.q()));
    }
    crate::pmf::check_pmf(p_v, limits.tol.pmf)?;
    if delta < 0.0 {
        return usage("typicality radius must be nonnegative");
    }
    let messages = limits.enumeration(ncc.q() as usize, ncc.l(), "messages")?;
    let inner = limits.enumeration(ncc.q() as usize, ncc.k(), "coset members")?;
    limits.check_count(messages.saturating_mul(inner), "codewords")?;
    let mut choices = Vec::with_capacity(messages);
    let mut coverage = Vec::with_capacity(messages);
    for m in 0..messages {
        let mut first = None;
        let mut count = 0;
        for a in 0..inner {
            if is_typical_field(&ncc.codeword_at(a, m), p_v, delta) {
                count += 1;
                first.get_or_insert(a);
            }
        }
        choices.push(index_to_vector(first.unwrap_or(0), ncc.k(), ncc.q()));
        coverage.push(count);
    }
    Ok(Representatives { choices, coverage })
}
