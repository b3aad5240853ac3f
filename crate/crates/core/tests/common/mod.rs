#![allow(dead_code)]

use cqsum::quantum::{CMatrix, Complex64, DensityOperator};
use cqsum::Tolerances;
use proptest::prelude::*;

/// `A A† / tr(A A†)` for a `d × rank` matrix whose entries are taken from
/// `raw` two at a time as real and imaginary parts.
pub fn state_from(raw: &[f64], d: usize, rank: usize) -> DensityOperator {
    let a = CMatrix::from_fn(d, rank, |i, j| {
        let k = 2 * (i * rank + j);
        Complex64::new(raw[k], raw[k + 1])
    });
    let mut m = &a * a.adjoint();
    let tr = m.trace().re;
    if tr < 1e-9 {
        return DensityOperator::maximally_mixed(d).unwrap();
    }
    m /= Complex64::new(tr, 0.0);
    DensityOperator::new(m, &Tolerances::default()).unwrap()
}

pub fn arb_state(d: usize) -> impl Strategy<Value = DensityOperator> {
    (1..=d).prop_flat_map(move |rank| {
        prop::collection::vec(-1.0f64..1.0, 2 * d * rank).prop_map(move |raw| state_from(&raw, d, rank))
    })
}

/// A pmf on `len` symbols with every entry at least `floor`.
pub fn arb_pmf(len: usize, floor: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, len).prop_map(move |w| {
        let total: f64 = w.iter().sum::<f64>() + 1e-12;
        let scale = 1.0 - floor * len as f64;
        w.iter().map(|x| floor + scale * (x + 1e-12 / len as f64) / total).collect()
    })
}

pub fn basis(i: usize, d: usize) -> DensityOperator {
    let mut p = vec![0.0; d];
    p[i] = 1.0;
    DensityOperator::diagonal(&p).unwrap()
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}
