use serde::Serialize;

use super::{multivanishing_report, LLSCandidate, MembershipVerdict, Method, MultivanishingReport};
use crate::curves::CurveInstance;
use crate::exactalg::Field;
use crate::{Error, Result};

/// Per-edge results of the vanishing conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeDiagnostics {
    pub report: MultivanishingReport,
    pub condition_i: bool,
    pub condition_i_symmetric: bool,
    /// (ℓ, j) pairs violating condition (I).
    pub failures_i: Vec<(usize, usize)>,
    /// None when (I) fails.
    pub condition_ii: Option<bool>,
    /// ℓ1+ℓ3 ≤ r+1 at every step and ℓ3 ≤ r−ℓ2, ℓ1 ≤ r−ℓ4 at critical steps.
    pub bookkeeping: bool,
}

/// The critical j with deg D_j = a, if any.
fn critical_with_degree(degrees: &[u32], critical: &[usize], a: u32) -> Option<usize> {
    critical.iter().copied().find(|&j| degrees[j] == a)
}

/// Condition (I): whenever a_ℓ = deg D_j with j critical, a′_{r−ℓ} ≥ deg D′_{b−j}.
pub fn eh_condition_i(report: &MultivanishingReport) -> (bool, Vec<(usize, usize)>) {
    let (s, o, r, b) = (&report.side, &report.other, report.r, report.b);
    let mut failures = Vec::new();
    for l in 0..=r {
        if let Some(j) = critical_with_degree(&s.degrees, &s.critical, s.a[l]) {
            if o.a[r - l] < o.degrees[b - j] {
                failures.push((l, j));
            }
        }
    }
    (failures.is_empty(), failures)
}

/// The same condition read from the other side of the edge.
pub fn eh_condition_i_symmetric(report: &MultivanishingReport) -> bool {
    let (s, o, r, b) = (&report.side, &report.other, report.r, report.b);
    (0..=r).all(|l| match critical_with_degree(&o.degrees, &o.critical, o.a[r - l]) {
        Some(jj) => s.a[l] >= s.degrees[b - jj],
        None => true,
    })
}

/// Condition (II) as an overlap count at every critical step; requires (I).
pub fn eh_condition_ii(report: &MultivanishingReport) -> Result<bool> {
    if !eh_condition_i(report).0 {
        return Err(Error::Precondition("condition (II) is only meaningful when (I) holds".into()));
    }
    Ok(report.steps.iter().filter(|s| s.critical).all(|s| s.overlap >= s.required))
}

fn bookkeeping(report: &MultivanishingReport) -> bool {
    let r = report.r as i64;
    report.steps.iter().all(|s| {
        s.l1 + s.l3 <= r + 1 && (!s.critical || (s.l3 <= r - s.l2 && s.l1 <= r - s.l4))
    })
}

pub fn edge_diagnostics<F: Field>(inst: &CurveInstance<F>, cand: &LLSCandidate<F>, ebar: usize) -> Result<EdgeDiagnostics> {
    let report = multivanishing_report(inst, cand, ebar)?;
    let (condition_i, failures_i) = eh_condition_i(&report);
    let condition_i_symmetric = eh_condition_i_symmetric(&report);
    let condition_ii = if condition_i { Some(eh_condition_ii(&report)?) } else { None };
    let bookkeeping = !condition_i || bookkeeping(&report);
    Ok(EdgeDiagnostics { report, condition_i, condition_i_symmetric, failures_i, condition_ii, bookkeeping })
}

/// Membership by conditions (I) and (II) over every collapsed edge.
pub fn is_lls_eh<F: Field>(inst: &CurveInstance<F>, cand: &LLSCandidate<F>) -> Result<MembershipVerdict> {
    if !inst.is_multitree() {
        return Err(Error::NotMultitree);
    }
    let mut verdict = MembershipVerdict::empty(inst, Method::Eh, cand.r);
    for ebar in 0..inst.skeleton().collapsed().edges().len() {
        let diag = edge_diagnostics(inst, cand, ebar)?;
        if diag.condition_i != diag.condition_i_symmetric {
            return Err(Error::ModelInconsistency(format!(
                "condition (I) on collapsed edge {ebar} depends on the side it is read from"
            )));
        }
        verdict.member &= diag.condition_i && diag.condition_ii == Some(true);
        verdict.edges.push(diag);
    }
    Ok(verdict)
}
