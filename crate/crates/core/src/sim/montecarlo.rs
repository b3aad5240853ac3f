//! Monte Carlo estimates over classical code and source randomness.

use rand::distr::{weighted::WeightedIndex, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::SourcePair;
use crate::coding::KmCode;
use crate::error::{usage, Result};
use crate::field::{add_vectors, check_prime, index_to_vector, random_matrix, random_vector};
use crate::limits::Limits;
use crate::pmf::check_pmf;
use crate::rng::{stream_rng, tag};
use crate::sim::result::SimResult;
use crate::typicality::is_typical_field;

/// Fraction of random `(g_I, b^n)` draws whose coset of `m = 0` has no
/// `p_V`-typical member. By the symmetry of the uniform bias every coset
/// has the same failure probability.
pub fn coset_coverage_probability(
    n: usize,
    k: usize,
    q: u32,
    p_v: &[f64],
    delta: f64,
    trials: usize,
    seed: u64,
    limits: &Limits,
) -> Result<SimResult> {
    check_prime(q)?;
    if p_v.len() != q as usize {
        return usage(format!("p_V has {} entries, expected {q}", p_v.len()));
    }
    check_pmf(p_v, limits.tol.pmf)?;
    if n == 0 || trials == 0 {
        return usage("coverage estimation needs n ≥ 1 and at least one trial");
    }
    let members = limits.enumeration(q as usize, k, "coset members")?;
    let failures: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream_rng(seed, &[tag::TRIAL, t as u64]);
            let g = random_matrix(&mut rng, k, n, q).expect("validated field and shape");
            let b = random_vector(&mut rng, n, q);
            let covered = (0..members).any(|a| {
                let word = add_vectors(&g.left_mul_unchecked(&index_to_vector(a, k, q)), &b, q);
                is_typical_field(&word, p_v, delta)
            });
            if covered {
                0.0
            } else {
                1.0
            }
        })
        .collect();
    Ok(SimResult::monte_carlo(&failures, n, None, seed))
}

/// Whether the parity matrix is drawn once or afresh for every trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityPolicy {
    Fixed,
    PerTrial,
}

/// Block error of Körner–Marton coding with maximum-likelihood decoding:
/// sample `(s_1^n, s_2^n) ~ W^n`, decode `h s_1^n ⊕ h s_2^n`, compare with
/// `s_1^n ⊕ s_2^n`.
pub fn km_error_monte_carlo(
    source: &SourcePair,
    q: u32,
    n: usize,
    l: usize,
    trials: usize,
    seed: u64,
    policy: ParityPolicy,
    limits: &Limits,
) -> Result<SimResult> {
    let p_z = source.sum_pmf(q)?;
    if n == 0 || trials == 0 {
        return usage("KM simulation needs n ≥ 1 and at least one trial");
    }
    let qs = q as usize;
    let cells = WeightedIndex::new(source.joint().probs())
        .map_err(|e| crate::Error::Validation(format!("source pmf: {e}")))?;
    let fixed = match policy {
        ParityPolicy::Fixed => Some(KmCode::random(q, n, l, p_z.clone(), seed, &[tag::PARITY])?),
        ParityPolicy::PerTrial => None,
    };
    let outcomes: Vec<Result<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let km = match &fixed {
                Some(km) => km.clone(),
                None => KmCode::random(q, n, l, p_z.clone(), seed, &[tag::PARITY, t as u64])?,
            };
            let mut rng = stream_rng(seed, &[tag::SOURCE, t as u64]);
            let (s1, s2): (Vec<u32>, Vec<u32>) = (0..n)
                .map(|_| {
                    let c = cells.sample(&mut rng);
                    ((c / qs) as u32, (c % qs) as u32)
                })
                .unzip();
            let syndrome = add_vectors(&km.encode(&s1)?, &km.encode(&s2)?, q);
            let z_hat = km.decode_ml(&syndrome, limits)?;
            Ok(if z_hat == add_vectors(&s1, &s2, q) { 0.0 } else { 1.0 })
        })
        .collect();
    let errors = outcomes.into_iter().collect::<Result<Vec<f64>>>()?;
    let rate = l as f64 * (q as f64).log2() / n as f64;
    Ok(SimResult::monte_carlo(&errors, n, Some(rate), seed))
}
