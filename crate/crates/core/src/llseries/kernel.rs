use rayon::prelude::*;

use super::{multivanishing_report, KernelDim, LLSCandidate, MembershipVerdict, Method};
use crate::curves::{CurveInstance, Located, SectionSpace};
use crate::exactalg::{Field, Matrix};
use crate::{Error, Result};

/// Which multidegrees the kernel method inspects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Window {
    /// The tree between adjacent tuple members (multitrees only).
    BarG,
    /// The starting set enlarged by this many vertex twists in every direction.
    Ball(usize),
    Explicit(Vec<Located>),
}

/// Section spaces and restriction matrices over a window, shared across candidates.
#[derive(Clone, Debug)]
pub struct PreparedWindow<F: Field> {
    pub spaces: Vec<SectionSpace<F>>,
    restricts: Vec<Vec<Matrix<F>>>,
    pub bounded: bool,
}

impl<F: Field> PreparedWindow<F> {
    pub fn new(inst: &CurveInstance<F>, window: &Window) -> Result<Self> {
        let locs = match window {
            Window::BarG => {
                if !inst.is_multitree() {
                    return Err(Error::NotMultitree);
                }
                inst.bar_g()?
            }
            Window::Ball(n) => inst.window(*n)?,
            Window::Explicit(v) => v.clone(),
        };
        let spaces: Vec<SectionSpace<F>> =
            locs.par_iter().map(|l| inst.section_space(l)).collect::<Result<_>>()?;
        let nv = inst.skeleton().vertex_count();
        let restricts = spaces.iter().map(|s| (0..nv).map(|v| s.restrict_matrix(v)).collect()).collect();
        Ok(PreparedWindow { spaces, restricts, bounded: !inst.is_multitree() })
    }
}

fn kernel_dim<F: Field>(field: &F, space: &SectionSpace<F>, restricts: &[Matrix<F>], ann: &[Matrix<F>]) -> usize {
    let dim = space.dim();
    if dim == 0 {
        return 0;
    }
    let mut stacked = Matrix::zeros(field, 0, dim);
    for (r, y) in restricts.iter().zip(ann) {
        if y.rows() > 0 && r.rows() > 0 {
            stacked = stacked.vstack(&y.mul(r));
        }
    }
    dim - stacked.rank()
}

fn annihilators<F: Field>(inst: &CurveInstance<F>, cand: &LLSCandidate<F>) -> Vec<Matrix<F>> {
    let field = inst.field();
    cand.spaces
        .iter()
        .map(|s| {
            let ann = s.annihilator();
            if ann.dim() == 0 {
                Matrix::zeros(field, 0, s.ambient_dim())
            } else {
                ann.basis_matrix()
            }
        })
        .collect()
}

/// dim ker(Γ(ℒ_w) → ⊕_v Γ(Z_v, ℒ^v)/V^v).
pub fn kernel_dimension_at<F: Field>(inst: &CurveInstance<F>, cand: &LLSCandidate<F>, w: &Located) -> Result<usize> {
    let space = inst.section_space(w)?;
    let nv = inst.skeleton().vertex_count();
    let restricts: Vec<Matrix<F>> = (0..nv).map(|v| space.restrict_matrix(v)).collect();
    Ok(kernel_dim(inst.field(), &space, &restricts, &annihilators(inst, cand)))
}

pub fn is_lls_kernel_prepared<F: Field>(
    inst: &CurveInstance<F>,
    prepared: &PreparedWindow<F>,
    cand: &LLSCandidate<F>,
) -> MembershipVerdict {
    let ann = annihilators(inst, cand);
    let mut verdict = MembershipVerdict::empty(inst, Method::Kernel, cand.r);
    verdict.window_bounded = prepared.bounded;
    for (space, restricts) in prepared.spaces.iter().zip(&prepared.restricts) {
        let k = kernel_dim(inst.field(), space, restricts, &ann);
        verdict.member &= k > cand.r;
        verdict.kernel_dims.push(KernelDim { w: space.loc.w.clone(), sections: space.dim(), kernel: k });
    }
    verdict
}

/// Membership by kernel dimensions over the window.
pub fn is_lls_kernel<F: Field>(
    inst: &CurveInstance<F>,
    cand: &LLSCandidate<F>,
    window: &Window,
) -> Result<MembershipVerdict> {
    let prepared = PreparedWindow::new(inst, window)?;
    Ok(is_lls_kernel_prepared(inst, &prepared, cand))
}

/// Kernel dimensions of the two-sided jet matching map along ē for i = 0..=b.
pub fn pairwise_kernel_check<F: Field>(inst: &CurveInstance<F>, cand: &LLSCandidate<F>, ebar: usize) -> Result<Vec<usize>> {
    Ok(multivanishing_report(inst, cand, ebar)?.steps.iter().map(|s| s.kernel_dim).collect())
}
