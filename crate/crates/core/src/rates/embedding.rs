//! Embedding a function of two sources into a sum over a prime field.

use serde::{Deserialize, Serialize};

use crate::channels::{CqMac, SourcePair};
use crate::error::{usage, Result};
use crate::field::{check_prime, index_to_vector};
use crate::limits::Limits;
use crate::pmf::JointPmf;
use crate::rates::optimize::{optimize_message_sum_rate, RateGrid};
use crate::rates::{entropy_unchecked, RateReport, STRICT_MARGIN};

/// `f(s1, s2) = g(h1(s1) ⊕_q h2(s2))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingSpec {
    pub q: u32,
    pub h1: Vec<u32>,
    pub h2: Vec<u32>,
    pub g: Vec<usize>,
}

impl EmbeddingSpec {
    fn check_shape(&self, f: &[Vec<usize>]) -> Result<()> {
        check_prime(self.q)?;
        let cols = f.first().map_or(0, Vec::len);
        if self.h1.len() != f.len() || self.h2.len() != cols || self.g.len() != self.q as usize {
            return usage("embedding maps do not match the function table");
        }
        if self.h1.iter().chain(&self.h2).any(|&x| x >= self.q) {
            return usage(format!("embedding values must lie in F_{}", self.q));
        }
        Ok(())
    }

    /// Exhaustive check of the factorization over every source pair.
    pub fn factorizes(&self, f: &[Vec<usize>]) -> Result<bool> {
        self.check_shape(f)?;
        Ok(f.iter().enumerate().all(|(s1, row)| {
            row.iter()
                .enumerate()
                .all(|(s2, &value)| self.g[self.sum(s1, s2)] == value)
        }))
    }

    fn sum(&self, s1: usize, s2: usize) -> usize {
        ((self.h1[s1] + self.h2[s2]) % self.q) as usize
    }

    /// Law of `h1(S1) ⊕_q h2(S2)`.
    pub fn sum_pmf(&self, joint: &JointPmf) -> Vec<f64> {
        let mut p = vec![0.0; self.q as usize];
        for s1 in 0..joint.rows() {
            for s2 in 0..joint.cols() {
                p[self.sum(s1, s2)] += joint.get(s1, s2);
            }
        }
        p
    }
}

/// The embedding maps `h1, h2` together with the `g` they force, or `None`
/// when two pairs with different function values share a field sum.
fn derive_g(q: u32, h1: &[u32], h2: &[u32], f: &[Vec<usize>]) -> Option<EmbeddingSpec> {
    let mut g: Vec<Option<usize>> = vec![None; q as usize];
    for (s1, row) in f.iter().enumerate() {
        for (s2, &value) in row.iter().enumerate() {
            let u = ((h1[s1] + h2[s2]) % q) as usize;
            match g[u] {
                Some(existing) if existing != value => return None,
                _ => g[u] = Some(value),
            }
        }
    }
    Some(EmbeddingSpec {
        q,
        h1: h1.to_vec(),
        h2: h2.to_vec(),
        g: g.into_iter().map(|x| x.unwrap_or(0)).collect(),
    })
}

/// Candidate embeddings to test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingChoice {
    Given(Vec<EmbeddingSpec>),
    /// Every `(h1, h2)` over every prime `q ≤ max_q`.
    Search { max_q: u32 },
}

/// Outcome for one field size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerFieldResult {
    pub q: u32,
    pub embeddings_checked: usize,
    pub valid_embeddings: usize,
    /// The valid embedding with the smallest embedded-sum entropy.
    pub best_embedding: Option<EmbeddingSpec>,
    pub sum_entropy: Option<f64>,
    pub rate: Option<RateReport>,
    /// Optimized rate minus the embedded-sum entropy.
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingWitness {
    pub embedding: EmbeddingSpec,
    pub sum_entropy: f64,
    pub rate: RateReport,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructibilityReport {
    pub verdict: bool,
    pub reason: Option<String>,
    pub witness: Option<EmbeddingWitness>,
    pub per_field: Vec<PerFieldResult>,
}

fn check_function_table(source: &SourcePair, f: &[Vec<usize>]) -> Result<()> {
    if f.len() != source.alphabet1() || f.iter().any(|row| row.len() != source.alphabet2()) {
        return usage(format!(
            "function table must be {} × {}",
            source.alphabet1(),
            source.alphabet2()
        ));
    }
    Ok(())
}

/// Whether `f(S1, S2)` is reconstructible on `mac` by the structured scheme:
/// some embedding has `H(h1(S1) ⊕_q h2(S2))` strictly below the optimized
/// message-sum rate over `F_q`. The witness is the field with the largest
/// margin; ties go to the smallest `q`.
pub fn function_reconstructibility_check(
    source: &SourcePair,
    f: &[Vec<usize>],
    mac: &CqMac,
    embeddings: &EmbeddingChoice,
    grid: RateGrid,
    limits: &Limits,
) -> Result<ReconstructibilityReport> {
    check_function_table(source, f)?;
    let mut fields: Vec<(u32, Vec<EmbeddingSpec>, usize)> = Vec::new();
    match embeddings {
        EmbeddingChoice::Given(list) => {
            for spec in list {
                let valid = spec.factorizes(f)?;
                let entry = match fields.iter().position(|(q, _, _)| *q == spec.q) {
                    Some(i) => &mut fields[i],
                    None => {
                        fields.push((spec.q, Vec::new(), 0));
                        fields.last_mut().expect("just pushed")
                    }
                };
                entry.2 += 1;
                if valid {
                    entry.1.push(spec.clone());
                }
            }
            fields.sort_by_key(|(q, _, _)| *q);
        }
        EmbeddingChoice::Search { max_q } => {
            let (a1, a2) = (source.alphabet1(), source.alphabet2());
            for q in (2..=*max_q).filter(|&q| check_prime(q).is_ok()) {
                let n1 = limits.enumeration(q as usize, a1, "maps h1")?;
                let n2 = limits.enumeration(q as usize, a2, "maps h2")?;
                limits.check_count(n1.saturating_mul(n2), "embedding pairs")?;
                let mut valid = Vec::new();
                for i1 in 0..n1 {
                    let h1 = index_to_vector(i1, a1, q);
                    for i2 in 0..n2 {
                        if let Some(spec) = derive_g(q, &h1, &index_to_vector(i2, a2, q), f) {
                            valid.push(spec);
                        }
                    }
                }
                fields.push((q, valid, n1 * n2));
            }
        }
    }

    let mut per_field = Vec::with_capacity(fields.len());
    let mut witness: Option<EmbeddingWitness> = None;
    for (q, valid, checked) in fields {
        let mut result = PerFieldResult {
            q,
            embeddings_checked: checked,
            valid_embeddings: valid.len(),
            best_embedding: None,
            sum_entropy: None,
            rate: None,
            margin: None,
        };
        let best = valid
            .into_iter()
            .map(|spec| (entropy_unchecked(&spec.sum_pmf(source.joint())), spec))
            .fold(None::<(f64, EmbeddingSpec)>, |acc, cand| match acc {
                Some(a) if a.0 <= cand.0 => Some(a),
                _ => Some(cand),
            });
        if let Some((h, spec)) = best {
            let rate = optimize_message_sum_rate(mac, q, grid, limits)?;
            let margin = rate.rate - h;
            if margin > STRICT_MARGIN && witness.as_ref().is_none_or(|w| margin > w.margin) {
                witness = Some(EmbeddingWitness {
                    embedding: spec.clone(),
                    sum_entropy: h,
                    rate: rate.clone(),
                    margin,
                });
            }
            result.best_embedding = Some(spec);
            result.sum_entropy = Some(h);
            result.rate = Some(rate);
            result.margin = Some(margin);
        }
        per_field.push(result);
    }
    let any_valid = per_field.iter().any(|r| r.valid_embeddings > 0);
    let reason = match (&witness, any_valid) {
        (Some(_), _) => None,
        (None, false) => Some("no (h1,h2,g) factorization".to_string()),
        (None, true) => Some("embedded-sum entropy is not below the optimized rate".to_string()),
    };
    Ok(ReconstructibilityReport {
        verdict: witness.is_some(),
        reason,
        witness,
        per_field,
    })
}
