//! Deterministic grid search with optional local refinement.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{CqMac, SourcePair};
use crate::error::{resource, usage, Result};
use crate::limits::Limits;
use crate::pmf::JointPmf;
use crate::quantum::holevo_information;
use crate::rates::{entropy_unchecked, message_sum_rate, RateReport, STRICT_MARGIN};
use crate::typicality::for_each_composition;

/// Resolution `r` puts every probability on the lattice `{0, 1/r, …, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RateGrid {
    pub resolution: usize,
    pub refine: bool,
}

impl Default for RateGrid {
    fn default() -> Self {
        RateGrid {
            resolution: 4,
            refine: true,
        }
    }
}

/// How a supremum estimate was reached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerTrace {
    pub resolution: usize,
    pub refine: bool,
    pub grid_points: usize,
    /// Indices of the best lattice points of the two pmfs.
    pub best_grid_index: (usize, usize),
    pub grid_value: f64,
    /// Value after refinement; equal to `grid_value` without refinement.
    pub value: f64,
    pub refinement_evaluations: usize,
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// All pmfs on `cells` symbols with entries in `{0, 1/r, …, 1}`.
fn simplex_lattice(cells: usize, r: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for_each_composition(r, cells, &mut |c| out.push(c.iter().map(|&x| x as f64 / r as f64).collect()));
    out
}

const REFINE_FLOOR: f64 = 1e-7;
const REFINE_ROUNDS: usize = 200;

/// Moves probability mass between pairs of cells of either pmf in halving
/// steps, accepting only strict improvements.
fn refine_pair<F>(f: &F, p: &mut [Vec<f64>; 2], best: &mut f64, start_step: f64) -> Result<usize>
where
    F: Fn(&[f64], &[f64]) -> Result<f64>,
{
    let mut evaluations = 0;
    let mut step = start_step;
    while step > REFINE_FLOOR {
        for _ in 0..REFINE_ROUNDS {
            let mut improved = false;
            for which in 0..2 {
                let cells = p[which].len();
                for i in 0..cells {
                    for j in 0..cells {
                        let amount = step.min(p[which][i]);
                        if i == j || amount <= 0.0 {
                            continue;
                        }
                        let mut candidate = p[which].clone();
                        candidate[i] -= amount;
                        candidate[j] += amount;
                        let value = if which == 0 { f(&candidate, &p[1])? } else { f(&p[0], &candidate)? };
                        evaluations += 1;
                        if value > *best {
                            *best = value;
                            p[which] = candidate;
                            improved = true;
                        }
                    }
                }
            }
            if !improved {
                break;
            }
        }
        step /= 2.0;
    }
    Ok(evaluations)
}

/// Maximizes `f(p1, p2)` over pairs of pmfs on `c1` and `c2` symbols. Ties
/// on the lattice go to the lexicographically smallest index pair.
fn maximize_product_simplex<F>(
    c1: usize,
    c2: usize,
    grid: RateGrid,
    limits: &Limits,
    f: F,
) -> Result<(Vec<f64>, Vec<f64>, OptimizerTrace)>
where
    F: Fn(&[f64], &[f64]) -> Result<f64> + Sync,
{
    let r = grid.resolution;
    if r == 0 || c1 == 0 || c2 == 0 {
        return usage("grid resolution and alphabets must be positive");
    }
    let n1 = binomial(r + c1 - 1, c1 - 1);
    let n2 = binomial(r + c2 - 1, c2 - 1);
    let total = n1.zip(n2).and_then(|(a, b)| a.checked_mul(b));
    match total {
        Some(t) if t <= limits.max_enum => {}
        _ => return resource(format!("optimization grid exceeds {} points", limits.max_enum)),
    }
    let lattice1 = simplex_lattice(c1, r);
    let lattice2 = simplex_lattice(c2, r);
    let m = lattice2.len();
    let values = (0..lattice1.len() * m)
        .into_par_iter()
        .map(|idx| f(&lattice1[idx / m], &lattice2[idx % m]))
        .collect::<Result<Vec<f64>>>()?;
    let mut best_idx = 0;
    for (idx, &v) in values.iter().enumerate() {
        if v > values[best_idx] {
            best_idx = idx;
        }
    }
    let grid_value = values[best_idx];
    let mut p = [lattice1[best_idx / m].clone(), lattice2[best_idx % m].clone()];
    let mut value = grid_value;
    let refinement_evaluations = if grid.refine {
        refine_pair(&f, &mut p, &mut value, 0.5 / r as f64)?
    } else {
        0
    };
    let [p1, p2] = p;
    Ok((
        p1,
        p2,
        OptimizerTrace {
            resolution: r,
            refine: grid.refine,
            grid_points: values.len(),
            best_grid_index: (best_idx / m, best_idx % m),
            grid_value,
            value,
            refinement_evaluations,
        },
    ))
}

/// Supremum estimate of the message-sum rate over product auxiliary
/// structures `p_{V1X1} p_{V2X2}` with `V1 = V2 = F_q`.
pub fn optimize_message_sum_rate(mac: &CqMac, q: u32, grid: RateGrid, limits: &Limits) -> Result<RateReport> {
    let qs = q as usize;
    let (x1, x2) = (mac.inputs1(), mac.inputs2());
    let eval = |p1: &[f64], p2: &[f64]| -> Result<f64> {
        let a = JointPmf::new(qs, x1, p1.to_vec())?;
        let b = JointPmf::new(qs, x2, p2.to_vec())?;
        Ok(message_sum_rate(mac, q, &a, &b)?.rate)
    };
    crate::field::check_prime(q)?;
    let (p1, p2, trace) = maximize_product_simplex(qs * x1, qs * x2, grid, limits, eval)?;
    let mut report = message_sum_rate(mac, q, &JointPmf::new(qs, x1, p1)?, &JointPmf::new(qs, x2, p2)?)?;
    report.optimizer = Some(trace);
    Ok(report)
}

/// The sufficient condition of separate source and channel coding:
/// `H(S1, S2) < max χ({p_{X1} p_{X2}, ρ_{x1 x2}})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnstructuredReport {
    pub h_joint: f64,
    pub max_chi: f64,
    pub p_x1: Vec<f64>,
    pub p_x2: Vec<f64>,
    /// `max χ − H(S1, S2)`.
    pub margin: f64,
    pub holds: bool,
    pub optimizer: OptimizerTrace,
}

/// Maximizes the Holevo information over independent inputs and compares
/// it with the joint source entropy.
pub fn unstructured_condition(
    source: &SourcePair,
    mac: &CqMac,
    grid: RateGrid,
    limits: &Limits,
) -> Result<UnstructuredReport> {
    let eval = |p1: &[f64], p2: &[f64]| -> Result<f64> { Ok(holevo_information(&mac.product_ensemble(p1, p2)?)) };
    let (p_x1, p_x2, optimizer) = maximize_product_simplex(mac.inputs1(), mac.inputs2(), grid, limits, eval)?;
    let h_joint = entropy_unchecked(source.joint().probs());
    let max_chi = optimizer.value;
    let margin = max_chi - h_joint;
    Ok(UnstructuredReport {
        h_joint,
        max_chi,
        p_x1,
        p_x2,
        margin,
        holds: margin > STRICT_MARGIN,
        optimizer,
    })
}

/// Best point of a one-dimensional sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalMaximum {
    pub x: f64,
    pub value: f64,
    pub grid_points: usize,
    pub grid_value: f64,
}

/// Maximizes `f` on `[lo, hi]` over `points` equally spaced points, then
/// optionally by golden-section search between the neighbours of the best
/// point. Refinement is kept only when it improves on the grid.
pub fn maximize_on_interval<F>(f: F, lo: f64, hi: f64, points: usize, refine: bool) -> Result<IntervalMaximum>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if points < 2 || !(lo < hi) {
        return usage("a sweep needs at least two points on a nonempty interval");
    }
    let step = (hi - lo) / (points - 1) as f64;
    let at = |i: usize| if i + 1 == points { hi } else { lo + i as f64 * step };
    let values = (0..points).into_par_iter().map(|i| f(at(i))).collect::<Result<Vec<f64>>>()?;
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    let mut out = IntervalMaximum {
        x: at(best),
        value: values[best],
        grid_points: points,
        grid_value: values[best],
    };
    if refine {
        let (mut a, mut b) = (at(best.saturating_sub(1)), at((best + 1).min(points - 1)));
        let ratio = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = b - ratio * (b - a);
        let mut d = a + ratio * (b - a);
        let (mut fc, mut fd) = (f(c)?, f(d)?);
        for _ in 0..80 {
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - ratio * (b - a);
                fc = f(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + ratio * (b - a);
                fd = f(d)?;
            }
        }
        let (x, v) = if fc >= fd { (c, fc) } else { (d, fd) };
        if v > out.value {
            out.x = x;
            out.value = v;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::example1_channel;
    use crate::quantum::{von_neumann_entropy, DensityOperator};

    fn basis(i: usize, d: usize) -> DensityOperator {
        let mut p = vec![0.0; d];
        p[i] = 1.0;
        DensityOperator::diagonal(&p).unwrap()
    }

    #[test]
    fn lattice_sizes() {
        assert_eq!(simplex_lattice(3, 4).len(), binomial(6, 2).unwrap());
        assert_eq!(binomial(9, 5), Some(126));
        for p in simplex_lattice(4, 3) {
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn useless_channel_never_has_positive_rate() {
        let s = DensityOperator::diagonal(&[0.6, 0.4]).unwrap();
        let mac = CqMac::new(2, 2, vec![s.clone(), s.clone(), s.clone(), s]).unwrap();
        let r = optimize_message_sum_rate(&mac, 2, RateGrid { resolution: 3, refine: true }, &Limits::default())
            .unwrap();
        assert!(r.rate <= 1e-9);
    }

    #[test]
    fn refinement_never_decreases_the_estimate() {
        let s0 = basis(0, 2);
        let s1 = DensityOperator::pure_qubit_with_overlap(0.5).unwrap();
        let mac = example1_channel(0.1, &s0, &s1).unwrap();
        let limits = Limits::default();
        let coarse = optimize_message_sum_rate(&mac, 2, RateGrid { resolution: 2, refine: false }, &limits).unwrap();
        let refined = optimize_message_sum_rate(&mac, 2, RateGrid { resolution: 2, refine: true }, &limits).unwrap();
        let fine = optimize_message_sum_rate(&mac, 2, RateGrid { resolution: 4, refine: false }, &limits).unwrap();
        assert!(refined.rate >= coarse.rate);
        assert!(fine.rate >= coarse.rate - 1e-12);
        assert!(refined.consistency_defect() < 1e-12);
        let trace = refined.optimizer.unwrap();
        assert_eq!(trace.grid_value, coarse.rate);
        assert!((trace.value - refined.rate).abs() < 1e-12);
    }

    #[test]
    fn optimization_is_reproducible() {
        let s0 = basis(0, 2);
        let s1 = DensityOperator::pure_qubit_with_overlap(0.3).unwrap();
        let mac = example1_channel(0.2, &s0, &s1).unwrap();
        let grid = RateGrid { resolution: 3, refine: true };
        let a = optimize_message_sum_rate(&mac, 2, grid, &Limits::default()).unwrap();
        let b = optimize_message_sum_rate(&mac, 2, grid, &Limits::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn grid_budget_is_enforced() {
        let s = basis(0, 2);
        let mac = CqMac::new(2, 2, vec![s.clone(), s.clone(), s.clone(), s]).unwrap();
        let limits = Limits { max_enum: 10, ..Limits::default() };
        let err = optimize_message_sum_rate(&mac, 2, RateGrid { resolution: 4, refine: false }, &limits);
        assert!(matches!(err, Err(crate::Error::Resource(_))));
    }

    #[test]
    fn perfect_channel_unstructured_condition() {
        let states: Vec<DensityOperator> = (0..4).map(|i| basis(i, 4)).collect();
        let mac = CqMac::new(2, 2, states).unwrap();
        let grid = RateGrid { resolution: 4, refine: true };
        let uniform = SourcePair::new(JointPmf::from_table(&[vec![0.25; 2], vec![0.25; 2]]).unwrap());
        let r = unstructured_condition(&uniform, &mac, grid, &Limits::default()).unwrap();
        assert!((r.max_chi - 2.0).abs() < 1e-9);
        assert!(!r.holds);
        let skewed = SourcePair::new(JointPmf::from_table(&[vec![0.7, 0.1], vec![0.1, 0.1]]).unwrap());
        assert!(unstructured_condition(&skewed, &mac, grid, &Limits::default()).unwrap().holds);
    }

    #[test]
    fn or_channel_unstructured_maximum() {
        let s0 = basis(0, 2);
        let s1 = DensityOperator::pure_qubit_with_overlap(0.4).unwrap();
        let q = 0.15;
        let mac = example1_channel(q, &s0, &s1).unwrap();
        let source = SourcePair::new(JointPmf::from_table(&[vec![0.45, 0.05], vec![0.05, 0.45]]).unwrap());
        let r = unstructured_condition(&source, &mac, RateGrid { resolution: 4, refine: true }, &Limits::default())
            .unwrap();
        let rho = |t: f64| crate::channels::noisy_mixture(t, &s0, &s1).unwrap();
        let oracle = von_neumann_entropy(&rho(0.5)) - von_neumann_entropy(&rho(q));
        assert!((r.max_chi - oracle).abs() < 1e-6);
        let c = (r.p_x1[0] * r.p_x2[0] - 0.5).abs();
        assert!(c < 1e-3);
    }

    #[test]
    fn interval_maximum_of_a_parabola() {
        let f = |x: f64| Ok(-(x - 0.3137) * (x - 0.3137));
        let coarse = maximize_on_interval(f, 0.0, 1.0, 11, false).unwrap();
        assert!((coarse.x - 0.3).abs() < 1e-12);
        let fine = maximize_on_interval(f, 0.0, 1.0, 11, true).unwrap();
        assert!((fine.x - 0.3137).abs() < 1e-7);
        assert!(fine.value >= coarse.value);
        assert!(maximize_on_interval(f, 0.0, 1.0, 1, false).is_err());
    }
}
