//! Strong (frequency) typicality.
//!
//! A sequence `x^n` is δ-typical for `p` when every symbol's empirical
//! frequency is within δ of its probability and symbols of probability zero
//! do not occur at all. Joint typicality is the same test on the pair
//! alphabet.

use crate::error::{usage, Result};
use crate::limits::Limits;
use crate::pmf::{check_pmf, JointPmf, ZERO_PROB};

/// Slack for frequencies that land exactly on the δ boundary.
const BOUNDARY: f64 = 1e-12;

/// Typicality test from symbol counts.
pub fn counts_typical(counts: &[usize], n: usize, pmf: &[f64], delta: f64) -> bool {
    debug_assert_eq!(counts.len(), pmf.len());
    counts.iter().zip(pmf).all(|(&c, &p)| {
        if p <= ZERO_PROB {
            c == 0
        } else {
            (c as f64 / n as f64 - p).abs() <= delta + BOUNDARY
        }
    })
}

pub fn symbol_counts(seq: &[usize], alphabet: usize) -> Vec<usize> {
    let mut counts = vec![0usize; alphabet];
    for &s in seq {
        counts[s] += 1;
    }
    counts
}

pub fn is_typical(seq: &[usize], pmf: &[f64], delta: f64) -> bool {
    if seq.iter().any(|&s| s >= pmf.len()) {
        return false;
    }
    counts_typical(&symbol_counts(seq, pmf.len()), seq.len(), pmf, delta)
}

/// Same test for field-valued sequences.
pub fn is_typical_field(seq: &[u32], pmf: &[f64], delta: f64) -> bool {
    let mut counts = vec![0usize; pmf.len()];
    for &s in seq {
        match counts.get_mut(s as usize) {
            Some(c) => *c += 1,
            None => return false,
        }
    }
    counts_typical(&counts, seq.len(), pmf, delta)
}

pub fn is_jointly_typical(x: &[usize], y: &[usize], joint: &JointPmf, delta: f64) -> bool {
    if x.len() != y.len() || x.iter().any(|&a| a >= joint.rows()) || y.iter().any(|&b| b >= joint.cols()) {
        return false;
    }
    let mut counts = vec![0usize; joint.rows() * joint.cols()];
    for (&a, &b) in x.iter().zip(y) {
        counts[a * joint.cols() + b] += 1;
    }
    counts_typical(&counts, x.len(), joint.probs(), delta)
}

/// Odometer over `alphabet^n`, lexicographic with the first coordinate most
/// significant.
pub(crate) fn for_each_sequence(alphabet: usize, n: usize, mut f: impl FnMut(&[usize])) {
    if alphabet == 0 {
        return;
    }
    let mut seq = vec![0usize; n];
    loop {
        f(&seq);
        let mut t = n;
        loop {
            if t == 0 {
                return;
            }
            t -= 1;
            seq[t] += 1;
            if seq[t] < alphabet {
                break;
            }
            seq[t] = 0;
        }
    }
}

/// Compositions of `n` into `cells` parts, in lexicographic order.
pub(crate) fn for_each_composition(n: usize, cells: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(pos: usize, left: usize, counts: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if pos + 1 == counts.len() {
            counts[pos] = left;
            f(counts);
            return;
        }
        for c in 0..=left {
            counts[pos] = c;
            rec(pos + 1, left - c, counts, f);
        }
    }
    if cells == 0 {
        return;
    }
    let mut counts = vec![0; cells];
    rec(0, n, &mut counts, f);
}

/// Conditioning for [`classical_typical_set`]: return the `y^n` that are
/// jointly typical with `given` under `joint` (rows indexed by the given
/// sequence's symbols).
pub struct Conditioning<'a> {
    pub joint: &'a JointPmf,
    pub given: &'a [usize],
}

/// Exhaustive enumeration of `T_δ^n(pmf)`, or of the conditional typical set
/// when `conditioning` is supplied (in which case `pmf` is ignored and the
/// alphabet is the joint pmf's column alphabet).
pub fn classical_typical_set(
    pmf: &[f64],
    n: usize,
    delta: f64,
    conditioning: Option<Conditioning<'_>>,
    limits: &Limits,
) -> Result<Vec<Vec<usize>>> {
    if delta < 0.0 {
        return usage("typicality radius must be nonnegative");
    }
    let mut out = Vec::new();
    match conditioning {
        None => {
            check_pmf(pmf, limits.tol.pmf)?;
            limits.enumeration(pmf.len(), n, "sequences")?;
            for_each_sequence(pmf.len(), n, |s| {
                if is_typical(s, pmf, delta) {
                    out.push(s.to_vec());
                }
            });
        }
        Some(Conditioning { joint, given }) => {
            if given.len() != n {
                return usage(format!(
                    "conditioning sequence has length {}, expected {n}",
                    given.len()
                ));
            }
            limits.enumeration(joint.cols(), n, "sequences")?;
            for_each_sequence(joint.cols(), n, |s| {
                if is_jointly_typical(given, s, joint, delta) {
                    out.push(s.to_vec());
                }
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_mass_has_one_typical_sequence() {
        for delta in [0.0, 0.3, 1.0] {
            let set = classical_typical_set(&[0.0, 1.0], 5, delta, None, &Limits::default()).unwrap();
            assert_eq!(set, vec![vec![1; 5]]);
        }
    }

    #[test]
    fn uniform_binary_exact_type() {
        let set = classical_typical_set(&[0.5, 0.5], 4, 0.0, None, &Limits::default()).unwrap();
        assert_eq!(set.len(), 6);
        assert!(set.iter().all(|s| s.iter().sum::<usize>() == 2));
    }

    #[test]
    fn conditional_set_respects_joint_law() {
        // Y = X exactly.
        let joint = JointPmf::diagonal(&[0.5, 0.5]).unwrap();
        let given = [0, 1, 1, 0];
        let set = classical_typical_set(
            &[],
            4,
            0.1,
            Some(Conditioning { joint: &joint, given: &given }),
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(set, vec![given.to_vec()]);
    }

    #[test]
    fn budget_is_enforced() {
        let limits = Limits { max_enum: 100, ..Limits::default() };
        assert!(classical_typical_set(&[0.5, 0.5], 7, 0.1, None, &limits).is_err());
    }

    #[test]
    fn composition_count() {
        let mut count = 0;
        for_each_composition(4, 3, &mut |c| {
            assert_eq!(c.iter().sum::<usize>(), 4);
            count += 1;
        });
        assert_eq!(count, 15);
    }
}
