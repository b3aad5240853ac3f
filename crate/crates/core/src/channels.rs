//! Classical-quantum channel models, source pairs, the induced sum
//! ensemble of a two-sender channel and the additive-channel reduction.

use crate::error::{usage, Result};
use crate::field::{add_mod, check_prime};
use crate::limits::Tolerances;
use crate::pmf::{JointPmf, ZERO_PROB};
use crate::quantum::linalg::trace_distance;
use crate::quantum::{CqEnsemble, DensityOperator};

fn common_dim(states: &[DensityOperator]) -> Result<usize> {
    let Some(first) = states.first() else {
        return usage("channel needs at least one input");
    };
    let d = first.dim();
    if states.iter().any(|s| s.dim() != d) {
        return usage("channel output states have different dimensions");
    }
    Ok(d)
}

/// Point-to-point channel `x ↦ ρ_x` over the inputs `0..len`.
#[derive(Debug, Clone)]
pub struct CqPtp {
    states: Vec<DensityOperator>,
    dim: usize,
}

impl CqPtp {
    pub fn new(states: Vec<DensityOperator>) -> Result<Self> {
        let dim = common_dim(&states)?;
        Ok(CqPtp { states, dim })
    }

    pub fn inputs(&self) -> usize {
        self.states.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    pub fn state(&self, x: usize) -> &DensityOperator {
        &self.states[x]
    }

    /// `{p_x, ρ_x}` for an input distribution.
    pub fn ensemble(&self, input_pmf: &[f64]) -> Result<CqEnsemble> {
        if input_pmf.len() != self.inputs() {
            return usage(format!(
                "input pmf has {} entries for {} channel inputs",
                input_pmf.len(),
                self.inputs()
            ));
        }
        CqEnsemble::new(input_pmf.to_vec(), self.states.clone(), &Tolerances::default())
    }
}

/// Two-sender channel `(x1, x2) ↦ ρ_{x1 x2}`, stored with `x1` most
/// significant.
#[derive(Debug, Clone)]
pub struct CqMac {
    x1: usize,
    x2: usize,
    states: Vec<DensityOperator>,
    dim: usize,
}

impl CqMac {
    pub fn new(x1: usize, x2: usize, states: Vec<DensityOperator>) -> Result<Self> {
        if x1 == 0 || x2 == 0 {
            return usage("input alphabets must be nonempty");
        }
        if states.len() != x1 * x2 {
            return usage(format!(
                "channel table has {} states, expected {}x{}",
                states.len(),
                x1,
                x2
            ));
        }
        let dim = common_dim(&states)?;
        Ok(CqMac { x1, x2, states, dim })
    }

    /// The additive channel `ρ_{x1 x2} = σ_{x1 ⊕ x2}` over `F_q`.
    pub fn additive(ptp: &CqPtp, q: u32) -> Result<Self> {
        check_prime(q)?;
        if ptp.inputs() != q as usize {
            return usage(format!("additive channel over F_{q} needs {q} PTP inputs"));
        }
        let mut states = Vec::with_capacity(ptp.inputs().pow(2));
        for a in 0..q {
            for b in 0..q {
                states.push(ptp.state(add_mod(a, b, q) as usize).clone());
            }
        }
        CqMac::new(q as usize, q as usize, states)
    }

    pub fn inputs1(&self) -> usize {
        self.x1
    }

    pub fn inputs2(&self) -> usize {
        self.x2
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    pub fn state(&self, x1: usize, x2: usize) -> &DensityOperator {
        &self.states[x1 * self.x2 + x2]
    }

    /// `{p_1(x1) p_2(x2), ρ_{x1 x2}}` over the pair alphabet.
    pub fn product_ensemble(&self, p1: &[f64], p2: &[f64]) -> Result<CqEnsemble> {
        if p1.len() != self.x1 || p2.len() != self.x2 {
            return usage("input pmfs do not match the channel alphabets");
        }
        let joint = JointPmf::product(p1, p2)?;
        CqEnsemble::new(joint.probs().to_vec(), self.states.clone(), &Tolerances::default())
    }
}

/// Joint law `W_{S1 S2}` of two correlated sources.
#[derive(Debug, Clone, PartialEq)]
pub struct SourcePair {
    joint: JointPmf,
}

impl SourcePair {
    pub fn new(joint: JointPmf) -> Self {
        SourcePair { joint }
    }

    pub fn joint(&self) -> &JointPmf {
        &self.joint
    }

    pub fn alphabet1(&self) -> usize {
        self.joint.rows()
    }

    pub fn alphabet2(&self) -> usize {
        self.joint.cols()
    }

    /// Law of `S1 ⊕_q S2` for sources over `F_q`.
    pub fn sum_pmf(&self, q: u32) -> Result<Vec<f64>> {
        check_prime(q)?;
        let qs = q as usize;
        if self.alphabet1() != qs || self.alphabet2() != qs {
            return usage(format!("sources are not over F_{q}"));
        }
        let mut p = vec![0.0; qs];
        for a in 0..qs {
            for b in 0..qs {
                p[(a + b) % qs] += self.joint.get(a, b);
            }
        }
        Ok(p)
    }
}

/// Induced ensemble of a two-sender channel under auxiliary field-valued
/// inputs: `ρ_{v1 v2} = Σ p(x1|v1) p(x2|v2) ρ_{x1 x2}`, the law of
/// `U = V1 ⊕ V2` and `ρ_u = Σ_{v1 ⊕ v2 = u} p(v1, v2 | u) ρ_{v1 v2}`.
#[derive(Debug, Clone)]
pub struct InducedSumEnsemble {
    q: u32,
    p_v1: Vec<f64>,
    p_v2: Vec<f64>,
    cond1: Vec<Vec<f64>>,
    cond2: Vec<Vec<f64>>,
    p_u: Vec<f64>,
    rho_v: Vec<DensityOperator>,
    rho_u: Vec<DensityOperator>,
}

impl InducedSumEnsemble {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn p_v1(&self) -> &[f64] {
        &self.p_v1
    }

    pub fn p_v2(&self) -> &[f64] {
        &self.p_v2
    }

    /// `p_{X1|V1}(·|v)`; rows of zero probability are uniform.
    pub fn conditional1(&self, v: usize) -> &[f64] {
        &self.cond1[v]
    }

    pub fn conditional2(&self, v: usize) -> &[f64] {
        &self.cond2[v]
    }

    pub fn p_u(&self) -> &[f64] {
        &self.p_u
    }

    pub fn rho_v(&self, v1: usize, v2: usize) -> &DensityOperator {
        &self.rho_v[v1 * self.q as usize + v2]
    }

    /// `ρ_u`; labels of probability zero carry the maximally mixed state,
    /// which never enters any weighted quantity.
    pub fn rho_u(&self, u: usize) -> &DensityOperator {
        &self.rho_u[u]
    }

    pub fn rho_u_all(&self) -> &[DensityOperator] {
        &self.rho_u
    }

    /// `{p_U, ρ_u}`.
    pub fn ensemble(&self) -> CqEnsemble {
        CqEnsemble::new(self.p_u.clone(), self.rho_u.clone(), &Tolerances::uniform(1e-6))
            .expect("induced ensemble is valid by construction")
    }
}

fn conditional_rows(p: &JointPmf) -> Vec<Vec<f64>> {
    (0..p.rows()).map(|v| p.conditional_row(v)).collect()
}

pub fn induced_sum_ensemble(
    mac: &CqMac,
    q: u32,
    p_v1x1: &JointPmf,
    p_v2x2: &JointPmf,
) -> Result<InducedSumEnsemble> {
    check_prime(q)?;
    let qs = q as usize;
    if p_v1x1.rows() != qs || p_v2x2.rows() != qs {
        return usage(format!("auxiliary alphabets must be F_{q}"));
    }
    if p_v1x1.cols() != mac.inputs1() || p_v2x2.cols() != mac.inputs2() {
        return usage("input alphabets do not match the channel");
    }
    let cond1 = conditional_rows(p_v1x1);
    let cond2 = conditional_rows(p_v2x2);
    let p_v1 = p_v1x1.row_marginal();
    let p_v2 = p_v2x2.row_marginal();
    let mut rho_v = Vec::with_capacity(qs * qs);
    let mut weights = Vec::with_capacity(mac.inputs1() * mac.inputs2());
    let refs: Vec<&DensityOperator> = mac.states().iter().collect();
    for v1 in 0..qs {
        for v2 in 0..qs {
            weights.clear();
            for &a in &cond1[v1] {
                for &b in &cond2[v2] {
                    weights.push(a * b);
                }
            }
            rho_v.push(weighted_sum(&weights, &refs, mac.dim()));
        }
    }
    let mut p_u = vec![0.0; qs];
    for v1 in 0..qs {
        for v2 in 0..qs {
            p_u[(v1 + v2) % qs] += p_v1[v1] * p_v2[v2];
        }
    }
    let mut rho_u = Vec::with_capacity(qs);
    for u in 0..qs {
        if p_u[u] <= ZERO_PROB {
            rho_u.push(DensityOperator::maximally_mixed(mac.dim())?);
            continue;
        }
        let mut w = Vec::with_capacity(qs);
        let mut members = Vec::with_capacity(qs);
        for v1 in 0..qs {
            let v2 = (u + qs - v1) % qs;
            w.push(p_v1[v1] * p_v2[v2] / p_u[u]);
            members.push(&rho_v[v1 * qs + v2]);
        }
        rho_u.push(weighted_sum(&w, &members, mac.dim()));
    }
    Ok(InducedSumEnsemble {
        q,
        p_v1,
        p_v2,
        cond1,
        cond2,
        p_u,
        rho_v,
        rho_u,
    })
}

fn weighted_sum(weights: &[f64], states: &[&DensityOperator], dim: usize) -> DensityOperator {
    let mut m = crate::quantum::CMatrix::zeros(dim, dim);
    for (&w, s) in weights.iter().zip(states) {
        if w != 0.0 {
            m += s.matrix().map(|z| z * w);
        }
    }
    DensityOperator::from_trusted(m)
}

/// The point-to-point channel `σ_u = ρ_{x1 x2}` (any `x1 ⊕ x2 = u`) when the
/// channel output depends on its inputs only through their field sum, up to
/// trace distance `tol_eq`.
pub fn additive_reduction(mac: &CqMac, q: u32, tol_eq: f64) -> Option<CqPtp> {
    let qs = q as usize;
    if check_prime(q).is_err() || mac.inputs1() != qs || mac.inputs2() != qs {
        return None;
    }
    for x1 in 0..qs {
        for x2 in 0..qs {
            let u = (x1 + x2) % qs;
            let reference = mac.state(u, 0);
            if trace_distance(mac.state(x1, x2).matrix(), reference.matrix()) > tol_eq {
                return None;
            }
        }
    }
    CqPtp::new((0..qs).map(|u| mac.state(u, 0).clone()).collect()).ok()
}

/// `ρ(t) = (1 − t) σ0 + t σ1`.
pub fn noisy_mixture(t: f64, sigma0: &DensityOperator, sigma1: &DensityOperator) -> Result<DensityOperator> {
    DensityOperator::mixture(&[1.0 - t, t], &[sigma0, sigma1])
}

/// Binary OR channel with output noise: `ρ_{00} = ρ(q)` and every other
/// input pair gives `ρ(1 − q)`.
pub fn example1_channel(q_noise: f64, sigma0: &DensityOperator, sigma1: &DensityOperator) -> Result<CqMac> {
    if !(0.0..=1.0).contains(&q_noise) {
        return usage(format!("noise parameter {q_noise} outside [0, 1]"));
    }
    if sigma0.dim() != sigma1.dim() {
        return usage("σ0 and σ1 have different dimensions");
    }
    let off = noisy_mixture(q_noise, sigma0, sigma1)?;
    let on = noisy_mixture(1.0 - q_noise, sigma0, sigma1)?;
    CqMac::new(2, 2, vec![off, on.clone(), on.clone(), on])
}
