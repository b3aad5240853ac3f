//! Reconstructing `S1 ∨ S2` over a noisy binary OR channel, with and
//! without a ternary-field embedding.
//!
//! The channel is `ρ_{x1 x2} = ρ(q)` when `x1 = x2 = 0` and `ρ(1 − q)`
//! otherwise, with `ρ(t) = (1 − t) σ0 + t σ1`. The structured scheme embeds
//! the sources identically into `F_3` and decodes `S1 ⊕_3 S2`; the
//! auxiliary inputs are `V_j ~ (1 − θ, θ, 0)` sent as `X_j = V_j`.

use serde::{Deserialize, Serialize};

use crate::channels::{example1_channel, noisy_mixture, SourcePair};
use crate::error::{usage, Result};
use crate::limits::Limits;
use crate::pmf::JointPmf;
use crate::quantum::{von_neumann_entropy, DensityOperator};
use crate::rates::optimize::{maximize_on_interval, unstructured_condition, RateGrid};
use crate::rates::{conv, entropy_unchecked, hb, message_sum_rate, STRICT_MARGIN};

/// Law of the source pair.
///
/// `IndependentBernoulli` has `S1, S2` iid Bernoulli(p); `SymmetricFlip`
/// has uniform marginals with `P(S1 ≠ S2) = p`. `Split` evaluates the
/// structured side under the first and the unstructured side under the
/// second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Example1SourceModel {
    IndependentBernoulli,
    SymmetricFlip,
    Split,
}

impl Example1SourceModel {
    fn joint(self, p: f64) -> JointPmf {
        let table = match self {
            Example1SourceModel::IndependentBernoulli => {
                vec![vec![(1.0 - p) * (1.0 - p), p * (1.0 - p)], vec![p * (1.0 - p), p * p]]
            }
            _ => vec![vec![(1.0 - p) / 2.0, p / 2.0], vec![p / 2.0, (1.0 - p) / 2.0]],
        };
        JointPmf::from_table(&table).expect("source tables are valid for p in [0, 1]")
    }

    fn structured(self) -> Self {
        match self {
            Example1SourceModel::Split => Example1SourceModel::IndependentBernoulli,
            m => m,
        }
    }

    fn unstructured(self) -> Self {
        match self {
            Example1SourceModel::Split => Example1SourceModel::SymmetricFlip,
            m => m,
        }
    }

    /// Source pair seen by the structured (`true`) or unstructured side.
    pub fn source(self, p: f64, structured: bool) -> SourcePair {
        let model = if structured { self.structured() } else { self.unstructured() };
        SourcePair::new(model.joint(p))
    }
}

/// Closed form of `H(S1 ⊕_3 S2)`.
fn structured_lhs_closed(model: Example1SourceModel, p: f64) -> f64 {
    match model.structured() {
        Example1SourceModel::SymmetricFlip => hb(p) + (1.0 - p),
        _ => {
            let t = 2.0 * p - p * p;
            hb(t) + t * hb(p / (2.0 - p))
        }
    }
}

/// Closed form of `H(S1, S2)`.
fn unstructured_lhs_closed(model: Example1SourceModel, p: f64) -> f64 {
    match model.unstructured() {
        Example1SourceModel::IndependentBernoulli => 2.0 * hb(p),
        _ => 1.0 + hb(p),
    }
}

fn ternary_sum_entropy(joint: &JointPmf) -> f64 {
    let mut pmf = [0.0; 3];
    for s1 in 0..2 {
        for s2 in 0..2 {
            pmf[s1 + s2] += joint.get(s1, s2);
        }
    }
    entropy_unchecked(&pmf)
}

fn ternary_embedding(theta: f64) -> JointPmf {
    JointPmf::new(3, 2, vec![1.0 - theta, 0.0, 0.0, theta, 0.0, 0.0]).expect("θ in [0, 1]")
}

fn check_states(sigma0: &DensityOperator, sigma1: &DensityOperator) -> Result<()> {
    if sigma0.dim() != sigma1.dim() {
        return usage("σ0 and σ1 have different dimensions");
    }
    Ok(())
}

/// Message-sum rate of the ternary embedding at `θ`, written out term by
/// term: `h_b(θ) − H(U) + S(ρ((2θ − θ²) * q)) − [(1 − θ)² S(ρ(q)) +
/// (2θ − θ²) S(ρ(1 − q))]` with `U ~ ((1 − θ)², 2θ(1 − θ), θ²)`.
pub fn example1_structured_rate(
    theta: f64,
    q_noise: f64,
    sigma0: &DensityOperator,
    sigma1: &DensityOperator,
) -> Result<f64> {
    check_states(sigma0, sigma1)?;
    if !(0.0..=1.0).contains(&theta) || !(0.0..=1.0).contains(&q_noise) {
        return usage("θ and q must lie in [0, 1]");
    }
    let a = 1.0 - theta;
    let t = 2.0 * theta - theta * theta;
    let s = |x: f64| noisy_mixture(x, sigma0, sigma1).map(|r| von_neumann_entropy(&r));
    let h_u = entropy_unchecked(&[a * a, 2.0 * theta * a, theta * theta]);
    Ok(hb(theta) - h_u + s(conv(t, q_noise))? - (a * a * s(q_noise)? + t * s(1.0 - q_noise)?))
}

/// The simplified structured right-hand side for pure `σ0, σ1`, where
/// `S(ρ(q)) = S(ρ(1 − q))`.
fn structured_rhs_pure(theta: f64, q_noise: f64, s_q: f64, sigma0: &DensityOperator, sigma1: &DensityOperator) -> Result<f64> {
    let t = 2.0 * theta - theta * theta;
    let s_avg = von_neumann_entropy(&noisy_mixture(conv(t, q_noise), sigma0, sigma1)?);
    Ok(hb(theta) - hb(t) - t * hb(theta / (2.0 - theta)) + s_avg - s_q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Example1Mode {
    /// The simplified formulas, which require pure `σ0, σ1`.
    ClosedForm,
    /// Evaluation through the general message-sum rate and Holevo
    /// optimization.
    Generic,
}

#[derive(Debug, Clone)]
pub struct Example1Params {
    pub p: f64,
    pub q_noise: f64,
    pub sigma0: DensityOperator,
    pub sigma1: DensityOperator,
    pub theta_points: usize,
    pub refine: bool,
    pub model: Example1SourceModel,
    pub mode: Example1Mode,
    /// Grid for the generic unstructured optimization.
    pub unstructured_grid: RateGrid,
}

impl Example1Params {
    /// Closed-form analysis of `σ0 = |0⟩⟨0|` and a pure `σ1` with
    /// `|⟨0|σ1⟩| = overlap`.
    pub fn pure_qubits(p: f64, q_noise: f64, overlap: f64, theta_points: usize) -> Result<Self> {
        Ok(Example1Params {
            p,
            q_noise,
            sigma0: DensityOperator::diagonal(&[1.0, 0.0])?,
            sigma1: DensityOperator::pure_qubit_with_overlap(overlap)?,
            theta_points,
            refine: true,
            model: Example1SourceModel::Split,
            mode: Example1Mode::ClosedForm,
            unstructured_grid: RateGrid { resolution: 8, refine: true },
        })
    }
}

/// Both sufficient conditions with every side reported.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example1Report {
    pub p: f64,
    pub q_noise: f64,
    pub model: Example1SourceModel,
    pub mode: Example1Mode,
    /// `H(S1 ⊕_3 S2)` from its closed form.
    pub lhs_structured: f64,
    /// The same entropy computed from the pmf of the sum.
    pub lhs_structured_direct: f64,
    pub rhs_structured: f64,
    pub theta_star: f64,
    /// `H(S1, S2)` from its closed form.
    pub lhs_unstructured: f64,
    pub lhs_unstructured_direct: f64,
    /// Largest Holevo information over independent inputs.
    pub rhs_unstructured: f64,
    pub structured_margin: f64,
    pub unstructured_margin: f64,
    pub structured_holds: bool,
    pub unstructured_holds: bool,
}

pub fn example1_analysis(params: &Example1Params, limits: &Limits) -> Result<Example1Report> {
    let Example1Params {
        p,
        q_noise,
        ref sigma0,
        ref sigma1,
        theta_points,
        refine,
        model,
        mode,
        unstructured_grid,
    } = *params;
    check_states(sigma0, sigma1)?;
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q_noise) {
        return usage("p and q must lie in [0, 1]");
    }
    let lhs_structured = structured_lhs_closed(model, p);
    let lhs_structured_direct = ternary_sum_entropy(model.source(p, true).joint());
    let lhs_unstructured = unstructured_lhs_closed(model, p);
    let lhs_unstructured_direct = entropy_unchecked(model.source(p, false).joint().probs());

    let (best, rhs_unstructured) = match mode {
        Example1Mode::ClosedForm => {
            let pure = 1.0 - limits.tol.trace;
            if sigma0.purity() < pure || sigma1.purity() < pure {
                return usage("closed-form mode needs pure σ0 and σ1; use generic mode for mixed states");
            }
            let s_q = von_neumann_entropy(&noisy_mixture(q_noise, sigma0, sigma1)?);
            let s_half = von_neumann_entropy(&noisy_mixture(0.5, sigma0, sigma1)?);
            let best = maximize_on_interval(
                |theta| structured_rhs_pure(theta, q_noise, s_q, sigma0, sigma1),
                0.0,
                1.0,
                theta_points,
                refine,
            )?;
            (best, s_half - s_q)
        }
        Example1Mode::Generic => {
            let mac = example1_channel(q_noise, sigma0, sigma1)?;
            let best = maximize_on_interval(
                |theta| {
                    let embed = ternary_embedding(theta);
                    Ok(message_sum_rate(&mac, 3, &embed, &embed)?.rate)
                },
                0.0,
                1.0,
                theta_points,
                refine,
            )?;
            let unstructured = unstructured_condition(&model.source(p, false), &mac, unstructured_grid, limits)?;
            (best, unstructured.max_chi)
        }
    };
    let structured_margin = best.value - lhs_structured;
    let unstructured_margin = rhs_unstructured - lhs_unstructured;
    Ok(Example1Report {
        p,
        q_noise,
        model,
        mode,
        lhs_structured,
        lhs_structured_direct,
        rhs_structured: best.value,
        theta_star: best.x,
        lhs_unstructured,
        lhs_unstructured_direct,
        rhs_unstructured,
        structured_margin,
        unstructured_margin,
        structured_holds: structured_margin > STRICT_MARGIN,
        unstructured_holds: unstructured_margin > STRICT_MARGIN,
    })
}

/// Parameter grid for [`find_example1_witness`]; `σ0 = |0⟩⟨0|` and `σ1` is
/// the pure qubit state with the given overlap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessGrid {
    pub p: Vec<f64>,
    pub q_noise: Vec<f64>,
    pub overlap: Vec<f64>,
    pub theta_points: usize,
    pub model: Example1SourceModel,
}

/// `lo, lo + step, …` up to `hi`, each point computed as `lo + i·step`.
fn stepped(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || hi < lo {
        return usage("grid ranges need lo ≤ hi and a positive step");
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| lo + i as f64 * step).collect())
}

impl WitnessGrid {
    pub fn stepped(
        p: (f64, f64),
        q_noise: (f64, f64),
        overlap: (f64, f64),
        step: f64,
        theta_points: usize,
        model: Example1SourceModel,
    ) -> Result<Self> {
        Ok(WitnessGrid {
            p: stepped(p.0, p.1, step)?,
            q_noise: stepped(q_noise.0, q_noise.1, step)?,
            overlap: stepped(overlap.0, overlap.1, step)?,
            theta_points,
            model,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example1Witness {
    pub p: f64,
    pub q_noise: f64,
    pub overlap: f64,
    pub report: Example1Report,
}

/// Result of a witness search, with counts that explain a failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSearch {
    pub witness: Option<Example1Witness>,
    pub evaluated: usize,
    pub structured_true: usize,
    pub unstructured_true: usize,
    /// Parameters `(p, q, overlap)` and margin of the largest structured
    /// margin among points where the unstructured condition fails.
    pub closest: Option<(f64, f64, f64, f64)>,
}

/// First grid point, in `p`-major then `q`-then-overlap order, where the
/// structured condition holds and the unstructured one fails.
pub fn find_example1_witness(grid: &WitnessGrid, limits: &Limits) -> Result<WitnessSearch> {
    let mut search = WitnessSearch {
        witness: None,
        evaluated: 0,
        structured_true: 0,
        unstructured_true: 0,
        closest: None,
    };
    for &p in &grid.p {
        for &q_noise in &grid.q_noise {
            for &overlap in &grid.overlap {
                let mut params = Example1Params::pure_qubits(p, q_noise, overlap, grid.theta_points)?;
                params.model = grid.model;
                let report = example1_analysis(&params, limits)?;
                search.evaluated += 1;
                search.structured_true += usize::from(report.structured_holds);
                search.unstructured_true += usize::from(report.unstructured_holds);
                if !report.unstructured_holds
                    && search.closest.is_none_or(|c| report.structured_margin > c.3)
                {
                    search.closest = Some((p, q_noise, overlap, report.structured_margin));
                }
                if report.structured_holds && !report.unstructured_holds {
                    search.witness = Some(Example1Witness {
                        p,
                        q_noise,
                        overlap,
                        report,
                    });
                    return Ok(search);
                }
            }
        }
    }
    Ok(search)
}
