//! Point-to-point codes built from a nested coset code.

use serde::{Deserialize, Serialize};

use crate::channels::CqPtp;
use crate::coding::decoder::coset_decoder;
use crate::coding::ncc::{choose_representatives, NestedCosetCode, Representatives};
use crate::error::{usage, Result};
use crate::limits::Limits;
use crate::quantum::Povm;

/// Encoder side of a point-to-point code: message `m` is sent as
/// `v^n(a_m, m)`, the channel input alphabet being `F_q` itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PtpCodebook {
    pub ncc: NestedCosetCode,
    pub representatives: Representatives,
    pub p_v: Vec<f64>,
    pub delta: f64,
}

impl PtpCodebook {
    pub fn message_count(&self) -> usize {
        self.representatives.choices.len()
    }

    /// Channel input sequence for the message with index `m`.
    pub fn transmitted(&self, m: usize) -> Vec<u32> {
        let mv = crate::field::index_to_vector(m, self.ncc.l(), self.ncc.q());
        self.ncc.codeword_unchecked(&self.representatives.choices[m], &mv)
    }

    /// Rebuilds the decoder for `ptp`; the measurement is not serialized.
    pub fn decoder(&self, ptp: &CqPtp, limits: &Limits) -> Result<Povm> {
        let ensemble = ptp.ensemble(&self.p_v)?;
        coset_decoder(&self.ncc, &ensemble, self.delta, limits)
    }
}

/// Encoder and coset-aggregated square-root decoder for `ptp`, whose
/// inputs must be `F_q`. The decoder has `q^l` message outcomes followed by
/// the failure outcome.
pub fn build_ptp_code(
    ncc: &NestedCosetCode,
    ptp: &CqPtp,
    p_v: &[f64],
    delta: f64,
    limits: &Limits,
) -> Result<(PtpCodebook, Povm)> {
    if ptp.inputs() != ncc.q() as usize {
        return usage(format!(
            "channel has {} inputs, the code is over F_{}",
            ptp.inputs(),
            ncc.q()
        ));
    }
    let representatives = choose_representatives(ncc, p_v, delta, limits)?;
    let codebook = PtpCodebook {
        ncc: ncc.clone(),
        representatives,
        p_v: p_v.to_vec(),
        delta,
    };
    let povm = codebook.decoder(ptp, limits)?;
    Ok((codebook, povm))
}
