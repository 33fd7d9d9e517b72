use serde::Serialize;

use super::LLSCandidate;
use crate::curves::{subspace_vanishing, CurveInstance, DivisorSeq};
use crate::exactalg::{Field, Subspace};
use crate::{Error, Result};

/// a_0 ≤ … ≤ a_r: the value deg D_i appears dim V(−D_i)/V(−D_{i+1}) times.
pub fn multivanishing_sequence<F: Field>(v: &Subspace<F>, points: &[F::Elem], seq: &DivisorSeq) -> Result<Vec<u32>> {
    let dims: Vec<usize> = (0..seq.steps.len()).map(|i| subspace_vanishing(v, points, &seq.steps[i]).dim()).collect();
    if *dims.last().expect("nonempty sequence") != 0 {
        return Err(Error::Precondition("the last divisor of the sequence does not kill the space".into()));
    }
    let mut out = Vec::with_capacity(v.dim());
    for i in 0..seq.steps.len() - 1 {
        for _ in 0..dims[i] - dims[i + 1] {
            out.push(seq.degree(i));
        }
    }
    Ok(out)
}

/// deg D_i for the largest i with s vanishing on D_i; None for s = 0 or when s survives
/// the whole sequence.
pub fn order_of_vanishing<F: Field>(field: &F, s: &[F::Elem], points: &[F::Elem], seq: &DivisorSeq) -> Option<u32> {
    if s.iter().all(|c| field.is_zero(c)) {
        return None;
    }
    let line = Subspace::span(field, s.len(), vec![s.to_vec()]);
    let mut best = None;
    for i in 0..seq.steps.len() {
        if subspace_vanishing(&line, points, &seq.steps[i]).dim() == 1 {
            best = Some(i);
        } else {
            break;
        }
    }
    match best {
        Some(i) if i + 1 < seq.steps.len() => Some(seq.degree(i)),
        _ => None,
    }
}

/// A basis s_0..s_r of V with ord(s_ℓ) = a_ℓ, built from complements of V(−D_{i+1}) in
/// V(−D_i).
pub fn adapted_basis<F: Field>(v: &Subspace<F>, points: &[F::Elem], seq: &DivisorSeq) -> Vec<Vec<F::Elem>> {
    let filtration: Vec<Subspace<F>> =
        (0..seq.steps.len()).map(|i| subspace_vanishing(v, points, &seq.steps[i])).collect();
    let mut out = Vec::with_capacity(v.dim());
    for i in 0..seq.steps.len() - 1 {
        let mut cur = filtration[i + 1].clone();
        for b in filtration[i].basis() {
            if !cur.contains(b) {
                cur = cur.sum(&Subspace::span(v.field(), v.ambient_dim(), vec![b.clone()]));
                out.push(b.clone());
            }
        }
    }
    out
}

/// The multivanishing data of V^v along D^{(ē,v)}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SideReport {
    pub vertex: usize,
    pub a: Vec<u32>,
    /// deg D_i for i = 0..=b+1.
    pub degrees: Vec<u32>,
    /// dim V(−D_i) for i = 0..=b+1.
    pub dims: Vec<usize>,
    pub critical: Vec<usize>,
}

/// The two-sided comparison at step i (i on the v side, b − i on the v′ side).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub i: usize,
    pub critical: bool,
    pub l1: i64,
    pub l2: i64,
    pub l3: i64,
    pub l4: i64,
    /// Rank of the gluing map V^v(−D_i) ⊕ V^{v′}(−D′_{b−i}) → quotient at the new nodes.
    pub rank: usize,
    pub kernel_dim: usize,
    /// dim(im φ ∩ im ψ).
    pub overlap: usize,
    /// #{ℓ : ℓ1 ≤ ℓ ≤ ℓ2, ℓ3 ≤ r − ℓ ≤ ℓ4}.
    pub required: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultivanishingReport {
    pub ebar: usize,
    pub r: usize,
    pub b: usize,
    pub side: SideReport,
    pub other: SideReport,
    pub steps: Vec<StepReport>,
}

fn side_report<F: Field>(
    inst: &CurveInstance<F>,
    space: &Subspace<F>,
    seq: &DivisorSeq,
    v: usize,
) -> Result<(SideReport, Vec<Subspace<F>>)> {
    let d = inst.component_degree(v);
    let last = seq.degree(seq.steps.len() - 1) as i64;
    if last <= d {
        return Err(Error::Precondition(format!(
            "deg D_(b+1) = {last} does not exceed the degree {d} on component {}; the members are not concentrated enough for the pairwise conditions",
            inst.skeleton().graph().label(v)
        )));
    }
    let pts = inst.sequence_points(seq, v);
    let filtration: Vec<Subspace<F>> = (0..seq.steps.len()).map(|i| subspace_vanishing(space, &pts, &seq.steps[i])).collect();
    let a = multivanishing_sequence(space, &pts, seq)?;
    Ok((
        SideReport {
            vertex: v,
            a,
            degrees: (0..seq.steps.len()).map(|i| seq.degree(i)).collect(),
            dims: filtration.iter().map(Subspace::dim).collect(),
            critical: crate::curves::critical_indices(seq),
        },
        filtration,
    ))
}

fn min_at_least(a: &[u32], x: u32) -> i64 {
    a.iter().position(|&y| y >= x).unwrap_or(a.len()) as i64
}

fn max_at_most(a: &[u32], x: u32) -> i64 {
    a.iter().rposition(|&y| y <= x).map_or(-1, |p| p as i64)
}

/// Multivanishing sequences on both sides of ē and the step-by-step gluing comparison.
pub fn multivanishing_report<F: Field>(
    inst: &CurveInstance<F>,
    cand: &LLSCandidate<F>,
    ebar: usize,
) -> Result<MultivanishingReport> {
    let tree = inst.tree().ok_or(Error::NotMultitree)?;
    let se = inst.skeleton().collapsed().edge(ebar).clone();
    let (v, vp) = (se.a, se.b);
    let b = tree.link(ebar) as usize;
    let seq_v = inst.divisor_sequence(ebar, v)?;
    let seq_vp = inst.divisor_sequence(ebar, vp)?;
    let (side, filt_v) = side_report(inst, &cand.spaces[v], &seq_v, v)?;
    let (other, filt_vp) = side_report(inst, &cand.spaces[vp], &seq_vp, vp)?;
    let r = cand.r;
    let field = inst.field();
    let mut steps = Vec::with_capacity(b + 1);
    for i in 0..=b {
        let supp_v = seq_v.support_step(i);
        let supp_vp = seq_vp.support_step(b - i);
        if supp_v != supp_vp {
            return Err(Error::ModelInconsistency(format!(
                "step {i} on one side of collapsed edge {ebar} adds different nodes than step {} on the other",
                b - i
            )));
        }
        let phi = inst.jet_map_for(&seq_v, v, i);
        let psi = inst.jet_map_for(&seq_vp, vp, b - i);
        let (a1, a2) = (&filt_v[i], &filt_vp[b - i]);
        let im1 = if supp_v.is_empty() { Subspace::zero(field, 0) } else { a1.image(&phi) };
        let im2 = if supp_v.is_empty() { Subspace::zero(field, 0) } else { a2.image(&psi) };
        let rank = im1.sum(&im2).dim();
        let overlap = im1.dim() + im2.dim() - rank;
        let (d1, d2) = (seq_v.degree(i), seq_vp.degree(b - i));
        let l1 = min_at_least(&side.a, d1);
        let l2 = max_at_most(&side.a, d1);
        let l3 = min_at_least(&other.a, d2);
        let l4 = max_at_most(&other.a, d2);
        let required = (0..=r as i64).filter(|&l| l1 <= l && l <= l2 && l3 <= r as i64 - l && r as i64 - l <= l4).count();
        steps.push(StepReport {
            i,
            critical: !supp_v.is_empty(),
            l1,
            l2,
            l3,
            l4,
            rank,
            kernel_dim: a1.dim() + a2.dim() - rank,
            overlap,
            required,
        });
    }
    Ok(MultivanishingReport { ebar, r, b, side, other, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Rationals;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn point_seq(steps: &[u32]) -> DivisorSeq {
        DivisorSeq::new(vec![0], steps.iter().map(|&m| vec![m]).collect()).unwrap()
    }

    #[test]
    fn full_quadratics_along_powers() {
        let v = Subspace::full(&Rationals, 3);
        let a = multivanishing_sequence(&v, &[q(0)], &point_seq(&[0, 1, 2, 3])).unwrap();
        assert_eq!(a, vec![0, 1, 2]);
    }

    #[test]
    fn gap_sequence() {
        let v = Subspace::span(&Rationals, 3, vec![vec![q(1), q(0), q(0)], vec![q(0), q(0), q(1)]]);
        let a = multivanishing_sequence(&v, &[q(0)], &point_seq(&[0, 1, 2, 3])).unwrap();
        assert_eq!(a, vec![0, 2]);
    }

    #[test]
    fn two_points_at_once() {
        let v = Subspace::full(&Rationals, 3);
        let seq = DivisorSeq::new(vec![0, 1], vec![vec![0, 0], vec![1, 1], vec![2, 2]]).unwrap();
        let a = multivanishing_sequence(&v, &[q(0), q(1)], &seq).unwrap();
        assert_eq!(a, vec![0, 0, 2]);
    }

    #[test]
    fn repeated_divisors_do_not_matter() {
        let v = Subspace::span(&Rationals, 4, vec![vec![q(1), q(1), q(0), q(0)], vec![q(0), q(0), q(0), q(1)]]);
        let plain = multivanishing_sequence(&v, &[q(0)], &point_seq(&[0, 1, 2, 3, 4])).unwrap();
        let padded = multivanishing_sequence(&v, &[q(0)], &point_seq(&[0, 0, 1, 1, 2, 3, 3, 4])).unwrap();
        assert_eq!(plain, padded);
    }

    #[test]
    fn orders_of_adapted_basis() {
        let v = Subspace::span(&Rationals, 3, vec![vec![q(1), q(0), q(0)], vec![q(0), q(0), q(1)]]);
        let seq = point_seq(&[0, 1, 2, 3]);
        let a = multivanishing_sequence(&v, &[q(0)], &seq).unwrap();
        let basis = adapted_basis(&v, &[q(0)], &seq);
        let mut ords: Vec<u32> = basis.iter().map(|s| order_of_vanishing(&Rationals, s, &[q(0)], &seq).unwrap()).collect();
        ords.sort();
        assert_eq!(ords, a);
    }
}
