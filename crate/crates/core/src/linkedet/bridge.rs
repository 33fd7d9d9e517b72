use super::{linked_det_membership, FlagPair, LinkedChain, Violation};
use crate::curves::{CurveInstance, Located, SectionSpace};
use crate::exactalg::{combine, Field, Subspace};
use crate::llseries::LLSCandidate;
use crate::multidegrees::TwistMultiset;
use crate::{Error, Result};

/// The chain of augmented section spaces along one collapsed edge.
#[derive(Clone, Debug)]
pub struct BridgeChain<F: Field> {
    pub chain: LinkedChain<F>,
    /// Lifts of V^v and V^v′ to global sections at the end members; None when a lift has
    /// dimension below r+1, which already rules out membership.
    pub flags: Option<FlagPair<F>>,
    pub locations: Vec<Located>,
    pub extra_degree: Vec<i64>,
    /// Failures of the s-linked conditions, reported rather than enforced.
    pub violations: Vec<Violation>,
}

impl<F: Field> BridgeChain<F> {
    pub fn member(&self) -> bool {
        self.flags.as_ref().is_some_and(|fl| linked_det_membership(&self.chain, fl).member)
    }
}

/// w_v, then the (ē,v)-twists up to w_v′.
fn segment<F: Field>(inst: &CurveInstance<F>, ebar: usize) -> Result<(usize, usize, Vec<Located>)> {
    let tree = inst.tree().ok_or(Error::NotMultitree)?;
    let col = inst.skeleton().collapsed();
    let se = col.edge(ebar);
    let (v, vp) = (se.a, se.b);
    let mask = col.side(ebar, v);
    let mut cur = inst.member(v);
    let mut out = vec![cur.clone()];
    for _ in 0..tree.link(ebar) {
        cur = Located {
            w: inst.skeleton().twist_set(&cur.w, &mask),
            twists: cur.twists.plus(&TwistMultiset::of_set(&mask, 1)).normalize(),
        };
        out.push(cur.clone());
    }
    if cur.w != inst.tuple().members[vp] {
        return Err(Error::ModelInconsistency("the (ē,v)-twists do not reach the adjacent member".into()));
    }
    Ok((v, vp, out))
}

fn segment_spaces<F: Field>(aug: &CurveInstance<F>, locs: &[Located]) -> Result<Vec<SectionSpace<F>>> {
    locs.iter().map(|l| aug.section_space(l)).collect()
}

fn expected_rank<F: Field>(inst: &CurveInstance<F>, extra: &[i64]) -> i64 {
    inst.w0().total_degree() + extra.iter().sum::<i64>() + 1 - inst.genus()
}

/// The smallest uniform extra degree (up to `max`) for which every augmented section space
/// along ē has dimension d + deg D + 1 − g.
pub fn sufficient_extra_degree<F: Field>(inst: &CurveInstance<F>, ebar: usize, max: i64) -> Result<Vec<i64>> {
    let (_, _, locs) = segment(inst, ebar)?;
    let nv = inst.skeleton().vertex_count();
    for k in 0..=max {
        let extra = vec![k; nv];
        let aug = inst.with_extra_degree(&extra)?;
        let want = expected_rank(inst, &extra);
        if segment_spaces(&aug, &locs)?.iter().all(|s| s.dim() as i64 == want) {
            return Ok(extra);
        }
    }
    Err(Error::Precondition(format!("no uniform extra degree up to {max} makes the dimensions constant")))
}

/// Lift of V^u through the injective restriction at w_u, embedded in the augmented space.
fn lift<F: Field>(
    inst: &CurveInstance<F>,
    cand: &LLSCandidate<F>,
    u: usize,
    target: &SectionSpace<F>,
) -> Result<Option<Subspace<F>>> {
    let plain = inst.section_space(&inst.member(u))?;
    let r = plain.restrict_matrix(u);
    if r.rank() != plain.dim() {
        return Err(Error::ModelInconsistency(format!(
            "restriction to component {} is not injective at its member",
            inst.skeleton().graph().label(u)
        )));
    }
    let pre = cand.spaces[u].preimage(&r);
    if pre.dim() != cand.r + 1 {
        return Ok(None);
    }
    let mut rows = Vec::with_capacity(pre.dim());
    for c in pre.basis() {
        let amb = combine(inst.field(), plain.ambient, c, plain.basis());
        let coords = plain
            .embed_into(target, &amb)
            .ok_or_else(|| Error::ModelInconsistency("a section does not survive raising the degree".into()))?;
        rows.push(coords);
    }
    Ok(Some(Subspace::span(inst.field(), target.dim(), rows)))
}

/// Augmented section spaces along ē with the twist maps both ways (s = 0) and the lifted
/// candidate spaces at the ends as flags of dimension r+1.
pub fn curve_to_chain<F: Field>(inst: &CurveInstance<F>, cand: &LLSCandidate<F>, ebar: usize, extra: &[i64]) -> Result<BridgeChain<F>> {
    let (v, vp, locs) = segment(inst, ebar)?;
    let aug = inst.with_extra_degree(extra)?;
    let spaces = segment_spaces(&aug, &locs)?;
    let want = expected_rank(inst, extra);
    if let Some(s) = spaces.iter().find(|s| s.dim() as i64 != want) {
        return Err(Error::Precondition(format!(
            "augmented section spaces are not of constant dimension {want} (found {}); raise the extra degree",
            s.dim()
        )));
    }
    let mut f = Vec::with_capacity(spaces.len() - 1);
    let mut fback = Vec::with_capacity(spaces.len() - 1);
    for w in spaces.windows(2) {
        f.push(aug.twist_map(&w[0], &w[1])?);
        fback.push(aug.twist_map(&w[1], &w[0])?);
    }
    let field = inst.field().clone();
    let chain = LinkedChain::new(field.clone(), want as usize, field.zero(), f, fback)?;
    let violations = chain.validate();
    let flags = match (lift(inst, cand, v, &spaces[0])?, lift(inst, cand, vp, &spaces[spaces.len() - 1])?) {
        (Some(a), Some(b)) => Some(FlagPair::new(cand.r + 1, a, b)?),
        _ => None,
    };
    Ok(BridgeChain { chain, flags, locations: locs, extra_degree: extra.to_vec(), violations })
}
