//! Körner–Marton linear source codes with maximum-likelihood coset
//! decoding.

use serde::{Deserialize, Serialize};

use crate::error::{resource, usage, Result};
use crate::field::{check_prime, random_matrix, FieldMatrix};
use crate::limits::Limits;
use crate::pmf::{check_pmf, ZERO_PROB};
use crate::rng::stream_rng;

/// Both encoders send `h s^n`; the decoder recovers `s_1^n ⊕ s_2^n` from
/// the sum of syndromes under the law `p_Z` of `S_1 ⊕ S_2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KmCode {
    h: FieldMatrix,
    p_z: Vec<f64>,
}

impl KmCode {
    pub fn new(h: FieldMatrix, p_z: Vec<f64>) -> Result<Self> {
        check_prime(h.modulus())?;
        if p_z.len() != h.modulus() as usize {
            return usage(format!(
                "p_Z has {} entries, expected {}",
                p_z.len(),
                h.modulus()
            ));
        }
        check_pmf(&p_z, 1e-9)?;
        if h.cols() == 0 {
            return usage("parity matrix needs at least one column");
        }
        Ok(KmCode { h, p_z })
    }

    /// Code with a uniform `l × n` parity matrix drawn from the stream
    /// named by `tags`. When `l ≥ n`, draws repeat until `h` has full
    /// column rank, so the syndrome map is injective.
    pub fn random(q: u32, n: usize, l: usize, p_z: Vec<f64>, seed: u64, tags: &[u64]) -> Result<Self> {
        check_prime(q)?;
        if n == 0 {
            return usage("parity matrix needs at least one column");
        }
        let mut rng = stream_rng(seed, tags);
        let h = loop {
            let h = random_matrix(&mut rng, l, n, q)?;
            if l < n || h.rank() == n {
                break h;
            }
        };
        KmCode::new(h, p_z)
    }

    pub fn q(&self) -> u32 {
        self.h.modulus()
    }

    pub fn n(&self) -> usize {
        self.h.cols()
    }

    pub fn l(&self) -> usize {
        self.h.rows()
    }

    pub fn parity(&self) -> &FieldMatrix {
        &self.h
    }

    pub fn p_z(&self) -> &[f64] {
        &self.p_z
    }

    pub fn encode(&self, s: &[u32]) -> Result<Vec<u32>> {
        if s.len() != self.n() {
            return usage(format!("source block of length {}, expected {}", s.len(), self.n()));
        }
        if s.iter().any(|&x| x >= self.q()) {
            return usage(format!("source symbols must be residues mod {}", self.q()));
        }
        Ok(self.h.right_mul_unchecked(s))
    }

    /// `log p_Z^n(z)` from symbol counts, so equal types give bitwise equal
    /// scores.
    fn log_likelihood(&self, counts: &[usize]) -> f64 {
        let mut total = 0.0;
        for (&c, &p) in counts.iter().zip(&self.p_z) {
            if c == 0 {
                continue;
            }
            if p <= ZERO_PROB {
                return f64::NEG_INFINITY;
            }
            total += c as f64 * p.ln();
        }
        total
    }

    /// Most likely `z` with `h z = syndrome`; among equally likely
    /// candidates the lexicographically smallest.
    pub fn decode_ml(&self, syndrome: &[u32], limits: &Limits) -> Result<Vec<u32>> {
        match self.decode_ml_if_reachable(syndrome, limits)? {
            Some(z) => Ok(z),
            None => usage("syndrome is outside the range of the parity matrix"),
        }
    }

    /// As [`KmCode::decode_ml`], with `None` for syndromes no source
    /// sequence produces (possible when `h` has rank below `l`).
    pub fn decode_ml_if_reachable(&self, syndrome: &[u32], limits: &Limits) -> Result<Option<Vec<u32>>> {
        if syndrome.len() != self.l() {
            return usage(format!("syndrome of length {}, expected {}", syndrome.len(), self.l()));
        }
        let q = self.q();
        let Some(solution) = self.h.solve(syndrome)? else {
            return Ok(None);
        };
        let dim = solution.kernel.len();
        match crate::field::checked_pow(q, dim) {
            Some(c) if c <= limits.max_coset => {}
            _ => {
                return resource(format!(
                    "ML decoding enumerates {q}^{dim} candidates, above the budget of {}",
                    limits.max_coset
                ))
            }
        }
        let n = self.n();
        let mut z = solution.particular.clone();
        let mut coeffs = vec![0u32; dim];
        let mut counts = vec![0usize; q as usize];
        let mut best = z.clone();
        let mut best_score = f64::NEG_INFINITY;
        let mut first = true;
        loop {
            counts.iter_mut().for_each(|c| *c = 0);
            for &x in &z {
                counts[x as usize] += 1;
            }
            let score = self.log_likelihood(&counts);
            let tie = (score - best_score).abs() <= 1e-12 * score.abs().max(1.0)
                || (score == f64::NEG_INFINITY && best_score == f64::NEG_INFINITY);
            if first || (score > best_score && !tie) || (tie && z < best) {
                best_score = score;
                best.copy_from_slice(&z);
                first = false;
            }
            // Odometer over the kernel coefficients: bumping c_i by one adds
            // kernel vector i (also across the wrap, since q·k_i = 0).
            let mut i = 0;
            loop {
                if i == dim {
                    debug_assert_eq!(best.len(), n);
                    return Ok(Some(best));
                }
                for (zt, &kt) in z.iter_mut().zip(&solution.kernel[i]) {
                    *zt = (*zt + kt) % q;
                }
                coeffs[i] += 1;
                if coeffs[i] < q {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
        }
    }
}
