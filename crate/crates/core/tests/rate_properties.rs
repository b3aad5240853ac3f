mod common;

use common::{arb_pmf, arb_state, basis};
use cqsum::channels::{example1_channel, induced_sum_ensemble, CqMac};
use cqsum::pmf::JointPmf;
use cqsum::quantum::{holevo_information, DensityOperator};
use cqsum::rates::{
    binary_convolution, binary_entropy, classical_typical_set, example1_analysis, example1_structured_rate,
    find_example1_witness, message_sum_rate, optimize_message_sum_rate, shannon_entropy, Example1Mode,
    Example1Params, Example1SourceModel, RateGrid, WitnessGrid,
};
use cqsum::Limits;
use proptest::prelude::*;

fn arb_mac() -> impl Strategy<Value = CqMac> {
    prop::collection::vec(arb_state(2), 4).prop_map(|states| CqMac::new(2, 2, states).unwrap())
}

fn arb_embedding() -> impl Strategy<Value = JointPmf> {
    arb_pmf(6, 0.0).prop_map(|p| JointPmf::new(3, 2, p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rate_equals_its_recomputed_parts(mac in arb_mac(), e1 in arb_embedding(), e2 in arb_embedding()) {
        let r = message_sum_rate(&mac, 3, &e1, &e2).unwrap();
        let induced = induced_sum_ensemble(&mac, 3, &e1, &e2).unwrap();
        let h1 = shannon_entropy(&e1.row_marginal()).unwrap();
        let h2 = shannon_entropy(&e2.row_marginal()).unwrap();
        let hu = shannon_entropy(induced.p_u()).unwrap();
        let chi = holevo_information(&induced.ensemble());
        prop_assert!((r.rate - (h1.min(h2) - hu + chi)).abs() < 1e-12);
        prop_assert!(r.consistency_defect() < 1e-12);
    }

    #[test]
    fn generic_and_closed_form_rates_agree(
        theta in 0.0f64..1.0,
        q in 0.0f64..0.5,
        overlap in 0.0f64..1.0,
        mixed in arb_state(2),
    ) {
        let s0 = basis(0, 2);
        for s1 in [DensityOperator::pure_qubit_with_overlap(overlap).unwrap(), mixed.clone()] {
            let mac = example1_channel(q, &s0, &s1).unwrap();
            let embed = JointPmf::new(3, 2, vec![1.0 - theta, 0.0, 0.0, theta, 0.0, 0.0]).unwrap();
            let generic = message_sum_rate(&mac, 3, &embed, &embed).unwrap().rate;
            let closed = example1_structured_rate(theta, q, &s0, &s1).unwrap();
            prop_assert!((generic - closed).abs() < 1e-8);
        }
    }

    #[test]
    fn convolution_is_symmetric_and_bounded(a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let c = binary_convolution(a, b).unwrap();
        prop_assert!((c - binary_convolution(b, a).unwrap()).abs() < 1e-15);
        prop_assert!((0.0..=1.0).contains(&c));
        prop_assert!((binary_entropy(a).unwrap() - binary_entropy(1.0 - a).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn typical_set_matches_brute_force(p in arb_pmf(3, 0.0), n in 1usize..7, delta in 0.0f64..0.4) {
        let limits = Limits::default();
        let set = classical_typical_set(&p, n, delta, None, &limits).unwrap();
        let mut brute = Vec::new();
        for idx in 0..3usize.pow(n as u32) {
            let seq: Vec<usize> = (0..n).rev().map(|t| (idx / 3usize.pow(t as u32)) % 3).collect();
            let ok = (0..3).all(|a| {
                let freq = seq.iter().filter(|&&x| x == a).count() as f64 / n as f64;
                if p[a] <= 1e-12 { freq == 0.0 } else { (freq - p[a]).abs() <= delta + 1e-12 }
            });
            if ok {
                brute.push(seq);
            }
        }
        prop_assert_eq!(set, brute);
    }
}

#[test]
fn ternary_optimizer_reproduces_the_closed_form_maximum() {
    let s0 = basis(0, 2);
    let s1 = DensityOperator::pure_qubit_with_overlap(0.2).unwrap();
    let mut params = Example1Params::pure_qubits(0.1, 0.05, 0.2, 401).unwrap();
    let closed = example1_analysis(&params, &Limits::default()).unwrap();
    params.mode = Example1Mode::Generic;
    params.unstructured_grid = RateGrid { resolution: 4, refine: true };
    let generic = example1_analysis(&params, &Limits::default()).unwrap();
    assert!((closed.rhs_structured - generic.rhs_structured).abs() < 1e-8);
    let sweep = (0..=1000)
        .map(|i| example1_structured_rate(i as f64 / 1000.0, 0.05, &s0, &s1).unwrap())
        .fold(f64::MIN, f64::max);
    assert!(closed.rhs_structured >= sweep - 1e-12);
    assert!(closed.rhs_structured <= sweep + 1e-5);
}

#[test]
fn optimizer_beats_any_fixed_point() {
    let s0 = basis(0, 2);
    let s1 = DensityOperator::pure_qubit_with_overlap(0.2).unwrap();
    let mac = example1_channel(0.05, &s0, &s1).unwrap();
    let best = optimize_message_sum_rate(&mac, 3, RateGrid { resolution: 2, refine: true }, &Limits::default()).unwrap();
    for theta in [0.1, 0.25, 0.4] {
        let embed = JointPmf::new(3, 2, vec![1.0 - theta, 0.0, 0.0, theta, 0.0, 0.0]).unwrap();
        let fixed = message_sum_rate(&mac, 3, &embed, &embed).unwrap();
        assert!(best.rate >= fixed.rate - 1e-3, "θ = {theta}: {} < {}", best.rate, fixed.rate);
    }
}

#[test]
fn example1_witness_exists_and_revalidates() {
    let limits = Limits::default();
    let grid = WitnessGrid::stepped((0.05, 0.45), (0.0, 0.4), (0.0, 0.9), 0.05, 401, Example1SourceModel::Split)
        .unwrap();
    let search = find_example1_witness(&grid, &limits).unwrap();
    let w = search.witness.expect("a witness on the default grid");
    let mut params = Example1Params::pure_qubits(w.p, w.q_noise, w.overlap, 401).unwrap();
    let again = example1_analysis(&params, &limits).unwrap();
    assert_eq!(again, w.report);
    assert!(again.structured_margin > 0.0 && again.unstructured_margin < 0.0);
    params.mode = Example1Mode::Generic;
    params.unstructured_grid = RateGrid { resolution: 8, refine: true };
    let generic = example1_analysis(&params, &limits).unwrap();
    assert!((generic.rhs_structured - again.rhs_structured).abs() < 1e-8);
    assert!((generic.rhs_unstructured - again.rhs_unstructured).abs() < 1e-6);
}

#[test]
fn consistent_source_models_have_no_witness() {
    for model in [Example1SourceModel::IndependentBernoulli, Example1SourceModel::SymmetricFlip] {
        let grid = WitnessGrid::stepped((0.05, 0.45), (0.0, 0.4), (0.0, 0.9), 0.05, 201, model).unwrap();
        assert!(find_example1_witness(&grid, &Limits::default()).unwrap().witness.is_none());
    }
}
