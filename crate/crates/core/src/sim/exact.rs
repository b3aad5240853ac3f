//! Exact error probabilities of point-to-point, message-sum and
//! end-to-end function-computation codes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{CqMac, CqPtp, SourcePair};
use crate::coding::{KmCode, MacSumCode, PtpCodebook};
use crate::error::{usage, Result};
use crate::field::{add_vectors, index_to_vector, vector_to_index};
use crate::limits::Limits;
use crate::pmf::check_pmf;
use crate::quantum::linalg::{kron_all, trace_product};
use crate::quantum::{CMatrix, DensityOperator, Povm, PovmLabel};
use crate::rng::{stream_rng, tag};
use crate::sim::result::SimResult;

fn rate(l: usize, q: u32, n: usize) -> f64 {
    l as f64 * (q as f64).log2() / n as f64
}

fn product_state(states: &[&DensityOperator]) -> CMatrix {
    let mats: Vec<&CMatrix> = states.iter().map(|s| s.matrix()).collect();
    kron_all(&mats)
}

fn check_decoder(povm: &Povm, messages: usize, dim: usize) -> Result<()> {
    if povm.len() != messages + 1 || povm.dim() != dim {
        return usage(format!(
            "decoder has {} outcomes on dimension {}, expected {} on {}",
            povm.len(),
            povm.dim(),
            messages + 1,
            dim
        ));
    }
    if povm.labels().last() != Some(&PovmLabel::Failure) {
        return usage("decoder must end with its failure outcome");
    }
    Ok(())
}

/// `q^{-l} Σ_m [1 − tr(Λ_m ρ^{⊗n}_{x(m)})]`; the failure outcome always
/// counts as an error.
pub fn exact_ptp_error(codebook: &PtpCodebook, povm: &Povm, ptp: &CqPtp, limits: &Limits) -> Result<SimResult> {
    let ncc = &codebook.ncc;
    let messages = codebook.message_count();
    let dim = limits.tensor_dim(ptp.dim(), ncc.n())?;
    check_decoder(povm, messages, dim)?;
    if ptp.inputs() != ncc.q() as usize {
        return usage("channel inputs do not match the code's field");
    }
    let success: Vec<f64> = (0..messages)
        .into_par_iter()
        .map(|m| {
            let x = codebook.transmitted(m);
            let states: Vec<&DensityOperator> = x.iter().map(|&xt| ptp.state(xt as usize)).collect();
            trace_product(povm.elements()[m].matrix(), &product_state(&states)).re
        })
        .collect();
    let error = 1.0 - success.iter().sum::<f64>() / messages as f64;
    Ok(SimResult::exact(error, ncc.n(), Some(rate(ncc.l(), ncc.q(), ncc.n()))))
}

/// `P(decoder outputs m_1 ⊕ m_2 | m_1, m_2)` for every message pair,
/// row-major in `m_1`.
pub fn mac_sum_success_table(code: &MacSumCode, mac: &CqMac, limits: &Limits) -> Result<Vec<f64>> {
    let spec = code.spec();
    let q = spec.q();
    let messages = spec.message_count();
    let dim = limits.tensor_dim(mac.dim(), spec.n())?;
    check_decoder(code.povm(), messages, dim)?;
    limits.check_count(messages.saturating_mul(messages), "message pairs")?;
    if spec.inputs1.iter().flatten().any(|&x| x >= mac.inputs1())
        || spec.inputs2.iter().flatten().any(|&x| x >= mac.inputs2())
    {
        return usage("code inputs do not match the channel alphabets");
    }
    let l = spec.l();
    Ok((0..messages * messages)
        .into_par_iter()
        .map(|pair| {
            let (m1, m2) = (pair / messages, pair % messages);
            let states: Vec<&DensityOperator> = spec.inputs1[m1]
                .iter()
                .zip(&spec.inputs2[m2])
                .map(|(&a, &b)| mac.state(a, b))
                .collect();
            let sum = add_vectors(&index_to_vector(m1, l, q), &index_to_vector(m2, l, q), q);
            let target = vector_to_index(&sum, q);
            trace_product(code.povm().elements()[target].matrix(), &product_state(&states)).re
        })
        .collect())
}

/// `1 − Σ p_{M1}(m_1) p_{M2}(m_2) tr(Λ_{m_1 ⊕ m_2} ρ^{⊗n}_{x_1(m_1) x_2(m_2)})`.
pub fn exact_mac_sum_error(
    code: &MacSumCode,
    p_m1: &[f64],
    p_m2: &[f64],
    mac: &CqMac,
    limits: &Limits,
) -> Result<SimResult> {
    let spec = code.spec();
    let messages = spec.message_count();
    if p_m1.len() != messages || p_m2.len() != messages {
        return usage(format!("message pmfs must have {messages} entries"));
    }
    check_pmf(p_m1, limits.tol.pmf)?;
    check_pmf(p_m2, limits.tol.pmf)?;
    let table = mac_sum_success_table(code, mac, limits)?;
    let mut success = 0.0;
    for m1 in 0..messages {
        for m2 in 0..messages {
            success += p_m1[m1] * p_m2[m2] * table[m1 * messages + m2];
        }
    }
    Ok(SimResult::exact(1.0 - success, spec.n(), Some(rate(spec.l(), spec.q(), spec.n()))))
}

/// How [`end_to_end_function_error`] averages over the sources.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMode {
    Exact,
    MonteCarlo { trials: usize, seed: u64 },
}

/// Error of the two-stage scheme: each sender transmits its Körner–Marton
/// syndrome `h s_j^n` with the message-sum code, and the receiver applies
/// the syndrome decoder to the decoded message sum. A trial succeeds when
/// the output equals `s_1^n ⊕ s_2^n`.
///
/// Monte Carlo mode samples source pairs and averages the exact conditional
/// success probability of each pair.
pub fn end_to_end_function_error(
    km1: &KmCode,
    km2: &KmCode,
    code: &MacSumCode,
    mac: &CqMac,
    source: &SourcePair,
    mode: EvalMode,
    limits: &Limits,
) -> Result<SimResult> {
    if km1.parity() != km2.parity() {
        return usage("both senders must use the same parity matrix");
    }
    let km = km1;
    let spec = code.spec();
    let q = km.q();
    if spec.q() != q || spec.l() != km.l() {
        return usage(format!(
            "syndromes live in F_{}^{} but the channel code carries F_{}^{}",
            q,
            km.l(),
            spec.q(),
            spec.l()
        ));
    }
    let qs = q as usize;
    if source.alphabet1() != qs || source.alphabet2() != qs {
        return usage(format!("sources must be over F_{q}"));
    }
    let messages = spec.message_count();
    let table = mac_sum_success_table(code, mac, limits)?;
    // Sums of reachable syndromes are reachable, so unreachable entries
    // are never looked up.
    let decoded: Vec<Option<Vec<u32>>> = (0..messages)
        .map(|m| km.decode_ml_if_reachable(&index_to_vector(m, km.l(), q), limits))
        .collect::<Result<_>>()?;
    let n = km.n();
    let value = |s1: &[u32], s2: &[u32]| -> f64 {
        let m1 = vector_to_index(&km.parity().right_mul_unchecked(s1), q);
        let m2 = vector_to_index(&km.parity().right_mul_unchecked(s2), q);
        let sum = add_vectors(&index_to_vector(m1, km.l(), q), &index_to_vector(m2, km.l(), q), q);
        if decoded[vector_to_index(&sum, q)].as_deref() == Some(&add_vectors(s1, s2, q)[..]) {
            table[m1 * messages + m2]
        } else {
            0.0
        }
    };
    let joint = source.joint();
    let rate = Some(rate(km.l(), q, spec.n()));
    match mode {
        EvalMode::Exact => {
            let blocks = limits.enumeration(qs, n, "source blocks")?;
            limits.check_count(blocks.saturating_mul(blocks), "source block pairs")?;
            let success: f64 = (0..blocks * blocks)
                .into_par_iter()
                .map(|pair| {
                    let s1 = index_to_vector(pair / blocks, n, q);
                    let s2 = index_to_vector(pair % blocks, n, q);
                    let w: f64 = s1.iter().zip(&s2).map(|(&a, &b)| joint.get(a as usize, b as usize)).product();
                    if w == 0.0 {
                        0.0
                    } else {
                        w * value(&s1, &s2)
                    }
                })
                .collect::<Vec<f64>>()
                .iter()
                .sum();
            Ok(SimResult::exact(1.0 - success, n, rate))
        }
        EvalMode::MonteCarlo { trials, seed } => {
            let cells = rand::distr::weighted::WeightedIndex::new(joint.probs())
                .map_err(|e| crate::Error::Validation(format!("source pmf: {e}")))?;
            let errors: Vec<f64> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    use rand::distr::Distribution;
                    let mut rng = stream_rng(seed, &[tag::SOURCE, t as u64]);
                    let (s1, s2): (Vec<u32>, Vec<u32>) = (0..n)
                        .map(|_| {
                            let c = cells.sample(&mut rng);
                            ((c / qs) as u32, (c % qs) as u32)
                        })
                        .unzip();
                    1.0 - value(&s1, &s2)
                })
                .collect();
            Ok(SimResult::monte_carlo(&errors, n, rate, seed))
        }
    }
}
