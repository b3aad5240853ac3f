mod common;

use common::basis;
use cqsum::channels::{CqMac, CqPtp};
use cqsum::coding::{build_mac_sum_code, build_ptp_code, KmCode, MacSumParams, NestedCosetCode};
use cqsum::field::{add_vectors, index_to_vector, FieldMatrix};
use cqsum::pmf::JointPmf;
use cqsum::quantum::DensityOperator;
use cqsum::Limits;
use proptest::prelude::*;

fn qubit_ptp() -> CqPtp {
    CqPtp::new(vec![basis(0, 2), DensityOperator::pure_qubit_with_overlap(0.6).unwrap()]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn codeword_sums_stay_in_the_bias_summed_code(
        seed in any::<u64>(),
        q in prop::sample::select(vec![2u32, 3]),
        n in 2usize..6,
        k in 0usize..3,
        l in 0usize..3,
        other_seed in any::<u64>(),
    ) {
        let c1 = NestedCosetCode::from_seed(seed, q, n, k, l).unwrap();
        let other = NestedCosetCode::from_seed(other_seed, q, n, 0, 0).unwrap();
        let c2 = c1.with_bias(other.bias().to_vec()).unwrap();
        let sum = c1.with_bias(add_vectors(c1.bias(), c2.bias(), q)).unwrap();
        let ka = q.pow(k as u32) as usize;
        let lm = q.pow(l as u32) as usize;
        for a1 in 0..ka {
            for m1 in 0..lm {
                for a2 in 0..ka {
                    for m2 in 0..lm {
                        let (a1v, m1v) = (index_to_vector(a1, k, q), index_to_vector(m1, l, q));
                        let (a2v, m2v) = (index_to_vector(a2, k, q), index_to_vector(m2, l, q));
                        let lhs = add_vectors(&c1.codeword(&a1v, &m1v).unwrap(), &c2.codeword(&a2v, &m2v).unwrap(), q);
                        let rhs = sum.codeword(&add_vectors(&a1v, &a2v, q), &add_vectors(&m1v, &m2v, q)).unwrap();
                        prop_assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn ptp_decoders_are_valid_measurements(
        seed in 0u64..10_000,
        n in 1usize..5,
        k in 0usize..2,
        l in 0usize..3,
        delta in prop::sample::select(vec![0.2, 0.5, 1.0]),
    ) {
        let limits = Limits::default();
        let ncc = NestedCosetCode::from_seed(seed, 2, n, k, l).unwrap();
        let (codebook, povm) = build_ptp_code(&ncc, &qubit_ptp(), &[0.5, 0.5], delta, &limits).unwrap();
        prop_assert_eq!(povm.len(), codebook.message_count() + 1);
        prop_assert!(povm.completeness_error() < 1e-9);
        prop_assert!(povm.min_eigenvalue() > -1e-9);
    }

    #[test]
    fn mac_sum_decoders_are_valid_measurements(seed in 0u64..10_000, n in 1usize..4, l in 0usize..3) {
        let ptp = CqPtp::new(vec![basis(0, 2), DensityOperator::pure_qubit_with_overlap(0.3).unwrap()]).unwrap();
        let mac = CqMac::additive(&ptp, 2).unwrap();
        let embed = JointPmf::diagonal(&[0.5, 0.5]).unwrap();
        let params = MacSumParams { n, k: 0, l, delta: 0.5, seed };
        let code = build_mac_sum_code(&mac, 2, &embed, &embed, params, &Limits::default()).unwrap();
        prop_assert!(code.povm().completeness_error() < 1e-9);
        prop_assert!(code.povm().min_eigenvalue() > -1e-9);
    }

    #[test]
    fn ml_decoding_returns_a_member_of_the_coset(
        seed in any::<u64>(),
        n in 1usize..9,
        l in 0usize..9,
        s in prop::collection::vec(0u32..3, 8),
    ) {
        let km = KmCode::random(3, n, l.min(n), vec![0.7, 0.2, 0.1], seed, &[42]).unwrap();
        let z: Vec<u32> = s[..n].to_vec();
        let syndrome = km.encode(&z).unwrap();
        let decoded = km.decode_ml(&syndrome, &Limits::default()).unwrap();
        prop_assert_eq!(km.encode(&decoded).unwrap(), syndrome);
        let log_likelihood = |v: &[u32]| v.iter().map(|&x| km.p_z()[x as usize].ln()).sum::<f64>();
        prop_assert!(log_likelihood(&decoded) >= log_likelihood(&z) - 1e-9);
    }
}

#[test]
fn full_rank_parity_is_resampled_until_invertible() {
    for seed in 0..50 {
        let km = KmCode::random(2, 6, 6, vec![0.9, 0.1], seed, &[1]).unwrap();
        assert!(km.parity().is_invertible());
        let tall = KmCode::random(2, 4, 6, vec![0.9, 0.1], seed, &[1]).unwrap();
        assert_eq!(tall.parity().rank(), 4);
    }
}

#[test]
fn syndrome_encoding_matches_matrix_product() {
    let h = FieldMatrix::from_rows(3, &[vec![1, 2, 0, 1], vec![0, 1, 1, 2]]).unwrap();
    let km = KmCode::new(h.clone(), vec![0.5, 0.3, 0.2]).unwrap();
    assert_eq!(km.encode(&[2, 1, 0, 1]).unwrap(), h.right_mul(&[2, 1, 0, 1]).unwrap());
}
