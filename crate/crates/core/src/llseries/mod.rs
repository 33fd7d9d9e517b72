//! Limit linear series membership, both through kernel dimensions over a window of
//! multidegrees and through vanishing conditions on each collapsed edge.

mod eh;
mod kernel;
mod transport;
mod vanishing;

pub use eh::{edge_diagnostics, eh_condition_i, eh_condition_i_symmetric, eh_condition_ii, is_lls_eh, EdgeDiagnostics};
pub use kernel::{
    is_lls_kernel, is_lls_kernel_prepared, kernel_dimension_at, pairwise_kernel_check, PreparedWindow, Window,
};
pub use transport::{check_indep_of_wv, inclusion_on_component, transport_candidate, IndepReport};
pub use vanishing::{
    adapted_basis, multivanishing_report, multivanishing_sequence, order_of_vanishing, MultivanishingReport,
    SideReport, StepReport,
};

use serde::Serialize;

use crate::curves::CurveInstance;
use crate::exactalg::{Field, Subspace};
use crate::multidegrees::AdmissibleMultidegree;
use crate::{Error, Result};

/// Subspaces V^v ⊆ Γ(Z_v, ℒ^v) of dimension r+1, written in the coefficients of
/// polynomials of degree ≤ deg ℒ^v.
#[derive(Clone, Debug, PartialEq)]
pub struct LLSCandidate<F: Field> {
    pub r: usize,
    pub spaces: Vec<Subspace<F>>,
}

impl<F: Field> LLSCandidate<F> {
    pub fn new(inst: &CurveInstance<F>, r: usize, bases: Vec<Vec<Vec<F::Elem>>>) -> Result<Self> {
        let field = inst.field();
        let n = inst.skeleton().vertex_count();
        if bases.len() != n {
            return Err(Error::Invalid(format!("candidate has {} subspaces for {} components", bases.len(), n)));
        }
        let mut spaces = Vec::with_capacity(n);
        for (v, rows) in bases.into_iter().enumerate() {
            let len = (inst.component_degree(v) + 1).max(0) as usize;
            let label = inst.skeleton().graph().label(v);
            if rows.len() != r + 1 {
                return Err(Error::Invalid(format!("V on {label:?} must have exactly r+1 = {} rows", r + 1)));
            }
            if rows.iter().any(|row| row.len() != len) {
                return Err(Error::Invalid(format!(
                    "V on {label:?} must have rows of length deg + 1 = {len}"
                )));
            }
            let s = Subspace::span(field, len, rows);
            if s.dim() != r + 1 {
                return Err(Error::Invalid(format!("rows of V on {label:?} are not independent")));
            }
            spaces.push(s);
        }
        Ok(LLSCandidate { r, spaces })
    }

    pub fn from_subspaces(inst: &CurveInstance<F>, r: usize, spaces: Vec<Subspace<F>>) -> Result<Self> {
        Self::new(inst, r, spaces.into_iter().map(|s| s.basis().to_vec()).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Kernel,
    Eh,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelDim {
    pub w: AdmissibleMultidegree,
    pub sections: usize,
    pub kernel: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipVerdict {
    pub method: Method,
    pub member: bool,
    pub r: usize,
    pub degree: i64,
    pub genus: i64,
    pub rho: i64,
    /// deg ℒ^v = δ_v(w_v) for every component.
    pub component_degrees: Vec<i64>,
    /// Set when the window cannot certify membership (graphs that are not multitrees).
    pub window_bounded: bool,
    pub kernel_dims: Vec<KernelDim>,
    pub edges: Vec<EdgeDiagnostics>,
}

impl MembershipVerdict {
    pub(crate) fn empty<F: Field>(inst: &CurveInstance<F>, method: Method, r: usize) -> Self {
        MembershipVerdict {
            method,
            member: true,
            r,
            degree: inst.w0().total_degree(),
            genus: inst.genus(),
            rho: inst.rho(r as i64),
            component_degrees: (0..inst.skeleton().vertex_count()).map(|v| inst.component_degree(v)).collect(),
            window_bounded: false,
            kernel_dims: Vec::new(),
            edges: Vec::new(),
        }
    }
}
