use serde::Serialize;

use super::{is_lls_kernel, LLSCandidate, Window};
use crate::curves::{CurveInstance, Located};
use crate::exactalg::{Field, Matrix, Poly};
use crate::multidegrees::ConcentratedTuple;
use crate::{Error, Result};

/// The inclusion ℒ_w|_{Z_v} → ℒ_{w′}|_{Z_v} induced by a twist path from w to w′ that
/// avoids v, on local polynomial coefficients.
pub fn inclusion_on_component<F: Field>(inst: &CurveInstance<F>, from: &Located, to: &Located, v: usize) -> Result<Matrix<F>> {
    let field = inst.field();
    let (of, ot) = (inst.vanishing_orders(from), inst.vanishing_orders(to));
    let mut mult = Poly::constant(field, field.one());
    for &e in inst.skeleton().graph().incident(v) {
        let k = of.get(e, v) - ot.get(e, v);
        if k < 0 {
            return Err(Error::Precondition(format!(
                "no inclusion on component {}: the path twists there",
                inst.skeleton().graph().label(v)
            )));
        }
        mult = mult.mul(field, &Poly::linear_root(field, inst.point(e, v)).pow(field, k as u32));
    }
    let extra = inst.extra_degree()[v];
    let lf = (from.w.weights[v] + extra + 1).max(0) as usize;
    let lt = (to.w.weights[v] + extra + 1).max(0) as usize;
    let pc = mult.coeffs();
    Ok(Matrix::from_fn(field, lt, lf, |i, j| if i >= j && i - j < pc.len() { pc[i - j].clone() } else { field.zero() }))
}

/// Re-expresses a candidate for the tuple of `inst` as one for the tuple of `alt`, by the
/// canonical identification between the two choices. None when the identification does
/// not produce (r+1)-dimensional spaces, which only happens for non-members.
pub fn transport_candidate<F: Field>(
    inst: &CurveInstance<F>,
    cand: &LLSCandidate<F>,
    alt: &CurveInstance<F>,
) -> Result<Option<LLSCandidate<F>>> {
    let sk = inst.skeleton();
    let mut spaces = Vec::with_capacity(cand.spaces.len());
    for v in 0..sk.vertex_count() {
        let (wv, wv_alt) = (&inst.tuple().members[v], &alt.tuple().members[v]);
        if wv == wv_alt {
            spaces.push(cand.spaces[v].clone());
            continue;
        }
        // Drop the twists at v from the path w_v → w′_v; both members include into the result.
        let mut path = sk.locate(wv, wv_alt)?.normalize();
        path.counts[v] = 0;
        let mid = inst.locate(&sk.apply(wv, &path))?;
        let own = inst.member(v);
        let other = inst.locate(wv_alt)?;
        let image = cand.spaces[v].image(&inclusion_on_component(inst, &own, &mid, v)?);
        let pre = image.preimage(&inclusion_on_component(inst, &other, &mid, v)?);
        if pre.dim() != cand.r + 1 {
            return Ok(None);
        }
        spaces.push(pre);
    }
    Ok(Some(LLSCandidate::from_subspaces(alt, cand.r, spaces)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndepReport {
    pub base: bool,
    /// Verdict under each alternative tuple; None when the candidate does not transport.
    pub alternatives: Vec<Option<bool>>,
    pub consistent: bool,
}

/// Compares kernel-method verdicts under the instance's tuple and under each alternative.
pub fn check_indep_of_wv<F: Field>(
    inst: &CurveInstance<F>,
    cand: &LLSCandidate<F>,
    alternatives: &[ConcentratedTuple],
    window: &Window,
) -> Result<IndepReport> {
    let base = is_lls_kernel(inst, cand, window)?.member;
    let mut out = Vec::with_capacity(alternatives.len());
    for t in alternatives {
        let alt = inst.with_tuple(t.clone())?;
        let verdict = match transport_candidate(inst, cand, &alt)? {
            Some(c) => Some(is_lls_kernel(&alt, &c, window)?.member),
            None => None,
        };
        out.push(verdict);
    }
    let consistent = out.iter().all(|v| match v {
        Some(m) => *m == base,
        None => !base,
    });
    Ok(IndepReport { base, alternatives: out, consistent })
}
