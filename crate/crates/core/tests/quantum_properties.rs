mod common;

use common::{arb_pmf, arb_state, basis};
use cqsum::quantum::{
    holevo_information, square_root_povm, von_neumann_entropy, CqEnsemble, DensityOperator, PsdOperator,
};
use cqsum::rates::shannon_entropy;
use cqsum::Tolerances;
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entropy_lies_between_zero_and_log_dimension(rho in arb_state(3)) {
        let s = von_neumann_entropy(&rho);
        prop_assert!(s >= 0.0);
        prop_assert!(s <= 3f64.log2() + 1e-10);
    }

    #[test]
    fn holevo_is_bounded_by_label_entropy(
        p in arb_pmf(3, 0.0),
        a in arb_state(2),
        b in arb_state(2),
        c in arb_state(2),
    ) {
        let h = shannon_entropy(&p).unwrap();
        let chi = holevo_information(&CqEnsemble::new(p, vec![a, b, c], &tol()).unwrap());
        prop_assert!(chi >= 0.0);
        prop_assert!(chi <= h + 1e-10);
        prop_assert!(chi <= 1.0 + 1e-10);
    }

    #[test]
    fn orthogonal_ensembles_attain_label_entropy(p in arb_pmf(3, 0.0)) {
        let states: Vec<DensityOperator> = (0..3).map(|i| basis(i, 3)).collect();
        let chi = holevo_information(&CqEnsemble::new(p.clone(), states, &tol()).unwrap());
        prop_assert!((chi - shannon_entropy(&p).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn square_root_measurement_resolves_identity(
        states in prop::collection::vec(arb_state(3), 1..5),
        weights in prop::collection::vec(0.05f64..1.0, 5),
    ) {
        let gammas: Vec<PsdOperator> = states
            .iter()
            .zip(&weights)
            .map(|(s, &w)| PsdOperator::new(s.matrix().map(|z| z * w), &tol()).unwrap())
            .collect();
        let povm = square_root_povm(&gammas, &tol()).unwrap();
        prop_assert_eq!(povm.len(), gammas.len() + 1);
        prop_assert!(povm.completeness_error() < 1e-9);
        prop_assert!(povm.min_eigenvalue() > -1e-9);
    }

    #[test]
    fn outcome_probabilities_form_a_pmf(
        states in prop::collection::vec(arb_state(2), 2..4),
        rho in arb_state(2),
    ) {
        let gammas: Vec<PsdOperator> = states.iter().map(DensityOperator::as_psd).collect();
        let probs = square_root_povm(&gammas, &tol()).unwrap().probabilities(rho.matrix());
        prop_assert!(probs.iter().all(|&x| x > -1e-9));
        prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn reference_entropies() {
    let mixed = DensityOperator::maximally_mixed(2).unwrap();
    assert!((von_neumann_entropy(&mixed) - 1.0).abs() < 1e-10);
    let plus = DensityOperator::pure_qubit_with_overlap(0.5f64.sqrt()).unwrap();
    assert!(von_neumann_entropy(&plus).abs() < 1e-10);
    let pair = CqEnsemble::new(vec![0.5, 0.5], vec![basis(0, 2), plus], &tol()).unwrap();
    let lambda = (1.0 + 0.5f64.sqrt()) / 2.0;
    let oracle = -lambda * lambda.log2() - (1.0 - lambda) * (1.0 - lambda).log2();
    assert!((holevo_information(&pair) - oracle).abs() < 1e-12);
    assert!((holevo_information(&pair) - 0.6009).abs() < 1e-3);
}
