//! Coset-aggregated square-root decoder shared by the point-to-point and
//! message-sum codes.

use crate::coding::ncc::NestedCosetCode;
use crate::error::{usage, Result};
use crate::limits::Limits;
use crate::quantum::{
    square_root_povm_factored, unconditional_projector, CMatrix, ConditionalProjectors, CqEnsemble, Povm,
};
use crate::typicality::is_typical_field;

/// Square-root measurement over `γ_{a,m} = π_ρ π_{a,m} π_ρ` with the
/// elements of each coset summed into one outcome per message `m`.
///
/// `ensemble` is `{p_V, ρ_v}` over `v ∈ F_q`; `π_ρ` is the typical
/// projector of its average state and `π_{a,m}` the conditional typical
/// projector of `v^n(a, m)`, zero unless `v^n(a, m)` is `p_V`-typical.
pub(crate) fn coset_decoder(
    ncc: &NestedCosetCode,
    ensemble: &CqEnsemble,
    delta: f64,
    limits: &Limits,
) -> Result<Povm> {
    if ensemble.len() != ncc.q() as usize {
        return usage(format!(
            "ensemble has {} labels, the code is over F_{}",
            ensemble.len(),
            ncc.q()
        ));
    }
    if delta < 0.0 {
        return usage("typicality radius must be nonnegative");
    }
    let d = ensemble.dim();
    let n = ncc.n();
    let dim = limits.tensor_dim(d, n)?;
    let messages = limits.enumeration(ncc.q() as usize, ncc.l(), "messages")?;
    let inner = limits.enumeration(ncc.q() as usize, ncc.k(), "coset members")?;
    limits.check_count(messages.saturating_mul(inner), "codewords")?;

    let pi_rho = unconditional_projector(&ensemble.average_state(), n, delta, limits)?;
    let conditional = ConditionalProjectors::new(ensemble, delta);
    let p_v = ensemble.probs();

    let mut factors = Vec::with_capacity(messages);
    for m in 0..messages {
        let mut blocks: Vec<CMatrix> = Vec::new();
        for a in 0..inner {
            let v = ncc.codeword_at(a, m);
            if !is_typical_field(&v, p_v, delta) {
                continue;
            }
            let labels: Vec<usize> = v.iter().map(|&x| x as usize).collect();
            let pi_v = conditional.projector(&labels, limits)?;
            if pi_v.is_zero() {
                continue;
            }
            blocks.push(pi_rho.apply_columns(&pi_v.columns()));
        }
        factors.push(hstack(&blocks, dim));
    }
    square_root_povm_factored(&factors, dim)
}

fn hstack(blocks: &[CMatrix], rows: usize) -> CMatrix {
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut offset = 0;
    for b in blocks {
        out.columns_mut(offset, b.ncols()).copy_from(b);
        offset += b.ncols();
    }
    out
}
