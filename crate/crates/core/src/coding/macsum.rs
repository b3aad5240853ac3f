//! Two-sender code whose receiver decodes the field sum of the messages.
//!
//! Both senders use nested coset codes with common generators and private
//! biases. Sender `j` maps message `m_j` to `v_j^n(a_{j,m_j}, m_j)` and then
//! to a channel input drawn letter by letter from `p_{X_j|V_j}`. Because
//! the codes are linear, `v_1^n ⊕ v_2^n` lies in the code with bias
//! `b_1 ⊕ b_2`, so the receiver decodes that code against the induced sum
//! ensemble and reads off `m_1 ⊕ m_2`.

use rand::distr::{weighted::WeightedIndex, Distribution};
use serde::{Deserialize, Serialize};

use crate::channels::{induced_sum_ensemble, CqMac, InducedSumEnsemble};
use crate::coding::decoder::coset_decoder;
use crate::coding::ncc::{choose_representatives, NestedCosetCode, Representatives};
use crate::error::{usage, Result};
use crate::field::{add_vectors, index_to_vector, random_matrix, random_vector, FieldMatrix};
use crate::limits::Limits;
use crate::pmf::JointPmf;
use crate::quantum::Povm;
use crate::rng::{stream_rng, tag};

/// Everything about a message-sum code except its measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MacSumSpec {
    pub seed: u64,
    pub delta: f64,
    pub g_inner: FieldMatrix,
    pub g_outer: FieldMatrix,
    pub bias1: Vec<u32>,
    pub bias2: Vec<u32>,
    pub p_v1x1: JointPmf,
    pub p_v2x2: JointPmf,
    pub representatives1: Representatives,
    pub representatives2: Representatives,
    /// Channel input sequence of sender 1 for every message index.
    pub inputs1: Vec<Vec<usize>>,
    pub inputs2: Vec<Vec<usize>>,
}

impl MacSumSpec {
    pub fn q(&self) -> u32 {
        self.g_inner.modulus()
    }

    pub fn n(&self) -> usize {
        self.bias1.len()
    }

    pub fn k(&self) -> usize {
        self.g_inner.rows()
    }

    pub fn l(&self) -> usize {
        self.g_outer.rows()
    }

    pub fn message_count(&self) -> usize {
        self.inputs1.len()
    }

    fn with_bias(&self, bias: &[u32]) -> NestedCosetCode {
        NestedCosetCode::new(self.g_inner.clone(), self.g_outer.clone(), bias.to_vec())
            .expect("stored generators and biases are consistent")
    }

    /// Sender `j`'s code (`j ∈ {1, 2}`).
    pub fn sender(&self, j: usize) -> NestedCosetCode {
        match j {
            1 => self.with_bias(&self.bias1),
            2 => self.with_bias(&self.bias2),
            _ => panic!("sender index must be 1 or 2"),
        }
    }

    /// The receiver's code, with bias `b_1 ⊕ b_2`.
    pub fn decoder_code(&self) -> NestedCosetCode {
        self.with_bias(&add_vectors(&self.bias1, &self.bias2, self.q()))
    }

    /// `v_j^n(a_{j,m}, m)` for the message with index `m`.
    pub fn auxiliary_codeword(&self, j: usize, m: usize) -> Vec<u32> {
        let reps = if j == 1 { &self.representatives1 } else { &self.representatives2 };
        let mv = index_to_vector(m, self.l(), self.q());
        self.sender(j).codeword_unchecked(&reps.choices[m], &mv)
    }
}

/// A message-sum code with its decoding measurement, whose outcomes are
/// the `q^l` values of `m_1 ⊕ m_2` followed by failure.
#[derive(Debug, Clone)]
pub struct MacSumCode {
    spec: MacSumSpec,
    ensemble: InducedSumEnsemble,
    povm: Povm,
}

impl MacSumCode {
    /// Rebuilds the measurement of a stored code for `mac`.
    pub fn from_spec(spec: MacSumSpec, mac: &CqMac, limits: &Limits) -> Result<Self> {
        let ensemble = induced_sum_ensemble(mac, spec.q(), &spec.p_v1x1, &spec.p_v2x2)?;
        let povm = coset_decoder(&spec.decoder_code(), &ensemble.ensemble(), spec.delta, limits)?;
        Ok(MacSumCode { spec, ensemble, povm })
    }

    pub fn spec(&self) -> &MacSumSpec {
        &self.spec
    }

    pub fn ensemble(&self) -> &InducedSumEnsemble {
        &self.ensemble
    }

    pub fn povm(&self) -> &Povm {
        &self.povm
    }
}

/// Draws `x^n` letter by letter from `p_{X|V}(·|v_t)`.
fn sample_inputs(v: &[u32], pmf: &JointPmf, seed: u64, sender: u64, message: usize) -> Vec<usize> {
    let mut rng = stream_rng(seed, &[tag::CHANNEL_INPUT, sender, message as u64]);
    v.iter()
        .map(|&vt| {
            let row = pmf.conditional_row(vt as usize);
            WeightedIndex::new(&row)
                .expect("conditional rows are valid pmfs")
                .sample(&mut rng)
        })
        .collect()
}

/// Parameters of a message-sum code besides the channel and embeddings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MacSumParams {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub delta: f64,
    pub seed: u64,
}

/// Random message-sum code. The generators, both biases and every
/// sender's channel inputs come from separate streams of `seed`.
pub fn build_mac_sum_code(
    mac: &CqMac,
    q: u32,
    p_v1x1: &JointPmf,
    p_v2x2: &JointPmf,
    params: MacSumParams,
    limits: &Limits,
) -> Result<MacSumCode> {
    let MacSumParams { n, k, l, delta, seed } = params;
    if n == 0 {
        return usage("block length must be at least 1");
    }
    let ensemble = induced_sum_ensemble(mac, q, p_v1x1, p_v2x2)?;
    limits.tensor_dim(mac.dim(), n)?;
    let g_inner = random_matrix(&mut stream_rng(seed, &[tag::INNER_GENERATOR]), k, n, q)?;
    let g_outer = random_matrix(&mut stream_rng(seed, &[tag::OUTER_GENERATOR]), l, n, q)?;
    let bias1 = random_vector(&mut stream_rng(seed, &[tag::BIAS, 1]), n, q);
    let bias2 = random_vector(&mut stream_rng(seed, &[tag::BIAS, 2]), n, q);
    let code1 = NestedCosetCode::new(g_inner.clone(), g_outer.clone(), bias1.clone())?;
    let code2 = code1.with_bias(bias2.clone())?;
    let representatives1 = choose_representatives(&code1, ensemble.p_v1(), delta, limits)?;
    let representatives2 = choose_representatives(&code2, ensemble.p_v2(), delta, limits)?;
    let messages = representatives1.choices.len();
    let mut spec = MacSumSpec {
        seed,
        delta,
        g_inner,
        g_outer,
        bias1,
        bias2,
        p_v1x1: p_v1x1.clone(),
        p_v2x2: p_v2x2.clone(),
        representatives1,
        representatives2,
        inputs1: Vec::with_capacity(messages),
        inputs2: Vec::with_capacity(messages),
    };
    for m in 0..messages {
        let x1 = sample_inputs(&spec.auxiliary_codeword(1, m), p_v1x1, seed, 1, m);
        let x2 = sample_inputs(&spec.auxiliary_codeword(2, m), p_v2x2, seed, 2, m);
        spec.inputs1.push(x1);
        spec.inputs2.push(x2);
    }
    let povm = coset_decoder(&spec.decoder_code(), &ensemble.ensemble(), delta, limits)?;
    Ok(MacSumCode { spec, ensemble, povm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::example1_channel;
    use crate::quantum::DensityOperator;

    fn channel() -> CqMac {
        let s0 = DensityOperator::diagonal(&[1.0, 0.0]).unwrap();
        let s1 = DensityOperator::pure_qubit_with_overlap(0.5).unwrap();
        example1_channel(0.1, &s0, &s1).unwrap()
    }

    fn params(n: usize, k: usize, l: usize, seed: u64) -> MacSumParams {
        MacSumParams { n, k, l, delta: 0.4, seed }
    }

    #[test]
    fn closure_and_bias_bookkeeping() {
        let embed = JointPmf::diagonal(&[0.5, 0.5]).unwrap();
        let code = build_mac_sum_code(&channel(), 2, &embed, &embed, params(2, 1, 1, 9), &Limits::default()).unwrap();
        let spec = code.spec();
        let dec = spec.decoder_code();
        assert_eq!(dec.bias(), add_vectors(&spec.bias1, &spec.bias2, 2).as_slice());
        assert_eq!(spec.sender(1).g_inner(), spec.sender(2).g_inner());
        assert_eq!(spec.sender(1).codeword(&[0], &[0]).unwrap(), spec.bias1);
        for a in 0..2u32 {
            for m in 0..2u32 {
                let brute: Vec<u32> = (0..2)
                    .map(|t| (a * spec.g_inner.get(0, t) + m * spec.g_outer.get(0, t) + dec.bias()[t]) % 2)
                    .collect();
                assert_eq!(dec.codeword(&[a], &[m]).unwrap(), brute);
            }
        }
        for a1 in 0..2u32 {
            for a2 in 0..2u32 {
                for m1 in 0..2u32 {
                    for m2 in 0..2u32 {
                        let sum = add_vectors(
                            &spec.sender(1).codeword(&[a1], &[m1]).unwrap(),
                            &spec.sender(2).codeword(&[a2], &[m2]).unwrap(),
                            2,
                        );
                        assert_eq!(sum, dec.codeword(&[(a1 + a2) % 2], &[(m1 + m2) % 2]).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn point_mass_embedding_sends_auxiliary_codeword() {
        let embed = JointPmf::diagonal(&[0.5, 0.5]).unwrap();
        let code = build_mac_sum_code(&channel(), 2, &embed, &embed, params(3, 1, 1, 2), &Limits::default()).unwrap();
        for m in 0..2 {
            let v: Vec<usize> = code.spec().auxiliary_codeword(1, m).iter().map(|&x| x as usize).collect();
            assert_eq!(code.spec().inputs1[m], v);
        }
    }

    #[test]
    fn construction_is_deterministic_and_valid() {
        let embed = JointPmf::new(3, 2, vec![0.5, 0.0, 0.1, 0.2, 0.0, 0.2]).unwrap();
        let limits = Limits::default();
        let a = build_mac_sum_code(&channel(), 3, &embed, &embed, params(3, 1, 1, 4), &limits).unwrap();
        let b = build_mac_sum_code(&channel(), 3, &embed, &embed, params(3, 1, 1, 4), &limits).unwrap();
        assert_eq!(a.spec(), b.spec());
        assert_eq!(a.povm().len(), 4);
        assert!(a.povm().completeness_error() < 1e-9);
        assert!(a.povm().min_eigenvalue() > -1e-9);
        let json = serde_json::to_string(a.spec()).unwrap();
        let spec: MacSumSpec = serde_json::from_str(&json).unwrap();
        let rebuilt = MacSumCode::from_spec(spec, &channel(), &limits).unwrap();
        for (x, y) in rebuilt.povm().elements().iter().zip(a.povm().elements()) {
            assert!((x.matrix() - y.matrix()).norm() < 1e-12);
        }
    }
}
