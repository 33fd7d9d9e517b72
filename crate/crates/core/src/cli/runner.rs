use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::schema::{ChainFile, InstanceFile};
use crate::corpus::{
    enumerate_subspaces, product, random_candidate, random_multitree_instance, random_tuple, two_component_instances,
    CandidateKind, MultitreeParams, TwoComponentGrid,
};
use crate::curves::CurveInstance;
use crate::exactalg::{Field, PrimeField, Subspace};
use crate::linkedet::{
    complete_flags, curve_to_chain, gen_random_chain, is_linked_grassmannian_point, linked_det_membership,
    sufficient_extra_degree, FlagPair,
};
use crate::llseries::{
    check_indep_of_wv, is_lls_eh, is_lls_kernel_prepared, pairwise_kernel_check, LLSCandidate, PreparedWindow, Window,
};
use crate::{Error, Result};

const MAX_COUNTEREXAMPLES: usize = 5;

/// Aggregate of one cross-validation suite.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub field: String,
    pub seed: Option<u64>,
    pub cases: usize,
    pub agree: usize,
    pub disagree: usize,
    pub members: usize,
    /// Samples that produced no case (no instance or candidate within budget).
    pub skipped: usize,
    pub notes: BTreeMap<String, usize>,
    pub counterexamples: Vec<Value>,
}

impl SuiteReport {
    fn new(suite: &str, field: &str, seed: Option<u64>) -> Self {
        SuiteReport { suite: suite.into(), field: field.into(), seed, ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.cases > 0 && self.disagree == 0
    }

    fn record(&mut self, agree: bool, member: bool, counterexample: impl FnOnce() -> Value) {
        self.cases += 1;
        if member {
            self.members += 1;
        }
        if agree {
            self.agree += 1;
        } else {
            self.disagree += 1;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(counterexample());
            }
        }
    }

    fn note(&mut self, key: &str) {
        *self.notes.entry(key.into()).or_default() += 1;
    }

    /// Folds partial reports in order.
    fn merge(mut self, parts: Vec<SuiteReport>) -> Self {
        for p in parts {
            self.cases += p.cases;
            self.agree += p.agree;
            self.disagree += p.disagree;
            self.members += p.members;
            self.skipped += p.skipped;
            for (k, v) in p.notes {
                *self.notes.entry(k).or_default() += v;
            }
            for c in p.counterexamples {
                if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                    self.counterexamples.push(c);
                }
            }
        }
        self
    }
}

/// Independent stream `i` of a seeded generator.
pub fn sample_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

fn bundle<F: Field>(inst: &CurveInstance<F>, cand: &LLSCandidate<F>, detail: Value) -> Value {
    json!({ "instance": InstanceFile::from_instance(inst, &[cand]), "detail": detail })
}

fn kind_name(kind: CandidateKind) -> &'static str {
    match kind {
        CandidateKind::Uniform => "uniform",
        CandidateKind::Seeded => "seeded",
        CandidateKind::Glued => "glued",
        CandidateKind::Perturbed => "perturbed",
    }
}

const KINDS: [CandidateKind; 4] = [CandidateKind::Uniform, CandidateKind::Seeded, CandidateKind::Glued, CandidateKind::Perturbed];

/// Ranks r ≤ max_r for which every component carries at least r+1 sections.
fn feasible_ranks<F: Field>(inst: &CurveInstance<F>, max_r: usize) -> Vec<usize> {
    let dmin = (0..inst.skeleton().vertex_count()).map(|v| inst.component_degree(v)).min().unwrap_or(-1);
    (0..=max_r).filter(|&r| r as i64 <= dmin).collect()
}

/// Kernel and vanishing verdicts on one candidate; an error from either side counts as a
/// disagreement.
fn compare_methods<F: Field>(
    report: &mut SuiteReport,
    inst: &CurveInstance<F>,
    prepared: &PreparedWindow<F>,
    cand: &LLSCandidate<F>,
) {
    let kernel = is_lls_kernel_prepared(inst, prepared, cand).member;
    match is_lls_eh(inst, cand) {
        Ok(eh) => report.record(kernel == eh.member, kernel, || bundle(inst, cand, json!({ "kernel": kernel, "eh": eh.member }))),
        Err(e) => report.record(false, kernel, || bundle(inst, cand, json!({ "kernel": kernel, "eh_error": e.to_string() }))),
    }
}

/// Every two-component instance of the grid, every rank in `ranks`, and every pair of
/// (r+1)-dimensional subspaces: kernel method over \bar G against the vanishing conditions.
pub fn equivalence_suite(p: u64, grid: &TwoComponentGrid, ranks: &[usize]) -> Result<SuiteReport> {
    let field = PrimeField::new(p)?;
    let (insts, counts) = two_component_instances(&field, grid)?;
    let parts: Vec<SuiteReport> = insts
        .par_iter()
        .map(|inst| {
            let mut part = SuiteReport::default();
            let prepared = PreparedWindow::new(inst, &Window::BarG)?;
            let lens: Vec<usize> = (0..2).map(|v| (inst.component_degree(v) + 1).max(0) as usize).collect();
            for &r in ranks {
                if lens.iter().any(|&l| l < r + 1) {
                    continue;
                }
                let first = enumerate_subspaces(&field, lens[0], r + 1);
                let second = enumerate_subspaces(&field, lens[1], r + 1);
                for a in &first {
                    for b in &second {
                        let cand = LLSCandidate { r, spaces: vec![a.clone(), b.clone()] };
                        compare_methods(&mut part, inst, &prepared, &cand);
                    }
                }
            }
            Ok(part)
        })
        .collect::<Result<_>>()?;
    let mut report = SuiteReport::new("equivalence", &format!("GF({p})"), None).merge(parts);
    report.notes.insert("shapes".into(), counts.shapes);
    report.notes.insert("instances".into(), counts.instances);
    report.notes.insert("shapes_not_pairwise_ready".into(), counts.not_pairwise_ready);
    Ok(report)
}

/// One random multitree instance per sample, for every candidate kind and feasible r ≤ 1.
fn multitree_samples<T: Send>(
    seed: u64,
    samples: usize,
    p: u64,
    params: &MultitreeParams,
    per_sample: impl Fn(&mut ChaCha8Rng, &CurveInstance<PrimeField>, &mut SuiteReport) -> Result<T> + Sync,
) -> Result<Vec<SuiteReport>> {
    let field = PrimeField::new(p)?;
    (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let mut part = SuiteReport::default();
            match random_multitree_instance(&mut rng, &field, params) {
                Ok(inst) => {
                    per_sample(&mut rng, &inst, &mut part)?;
                }
                Err(Error::Budget(_)) => part.skipped += 1,
                Err(e) => return Err(e),
            }
            Ok(part)
        })
        .collect()
}

/// Candidates of every kind for every feasible r ≤ 1; kinds the instance cannot supply are
/// noted and skipped.
fn sampled_candidates(
    rng: &mut ChaCha8Rng,
    inst: &CurveInstance<PrimeField>,
    part: &mut SuiteReport,
) -> Vec<LLSCandidate<PrimeField>> {
    let mut out = Vec::new();
    for r in feasible_ranks(inst, 1) {
        for kind in KINDS {
            match random_candidate(rng, inst, r, kind) {
                Ok(c) => out.push(c),
                Err(_) => part.note(&format!("no_{}_candidate", kind_name(kind))),
            }
        }
    }
    out
}

/// Random multitrees: kernel method over \bar G against the vanishing conditions.
pub fn multitree_suite(seed: u64, samples: usize, p: u64, params: &MultitreeParams) -> Result<SuiteReport> {
    let parts = multitree_samples(seed, samples, p, params, |rng, inst, part| {
        let prepared = PreparedWindow::new(inst, &Window::BarG)?;
        for cand in sampled_candidates(rng, inst, part) {
            compare_methods(part, inst, &prepared, &cand);
        }
        Ok(())
    })?;
    Ok(SuiteReport::new("multitree", &format!("GF({p})"), Some(seed)).merge(parts))
}

/// Random multitrees: verdicts over \bar G against verdicts over \bar G enlarged by
/// `radius` twists in every direction.
pub fn window_suite(seed: u64, samples: usize, p: u64, params: &MultitreeParams, radius: usize) -> Result<SuiteReport> {
    let parts = multitree_samples(seed, samples, p, params, |rng, inst, part| {
        let base = PreparedWindow::new(inst, &Window::BarG)?;
        let wide = PreparedWindow::new(inst, &Window::Ball(radius))?;
        *part.notes.entry("window_multidegrees".into()).or_default() += wide.spaces.len();
        for cand in sampled_candidates(rng, inst, part) {
            let a = is_lls_kernel_prepared(inst, &base, &cand).member;
            let b = is_lls_kernel_prepared(inst, &wide, &cand).member;
            part.record(a == b, a, || bundle(inst, &cand, json!({ "bar_g": a, "ball": b, "radius": radius })));
        }
        Ok(())
    })?;
    let mut report = SuiteReport::new("window", &format!("GF({p})"), Some(seed)).merge(parts);
    report.notes.insert("radius".into(), radius);
    Ok(report)
}

/// Random multitrees with `tuples` further independently generated tuples each: kernel
/// verdicts after transporting every candidate.
pub fn indep_suite(seed: u64, samples: usize, p: u64, params: &MultitreeParams, tuples: usize) -> Result<SuiteReport> {
    let parts = multitree_samples(seed, samples, p, params, |rng, inst, part| {
        let g = inst.skeleton();
        let mut alts = Vec::with_capacity(tuples);
        while alts.len() < tuples {
            let t = random_tuple(rng, g, inst.w0(), params.max_extra_link)?;
            if inst.with_tuple(t.clone()).is_ok() {
                alts.push(t);
            } else {
                part.note("rejected_tuples");
            }
        }
        for cand in sampled_candidates(rng, inst, part) {
            let rep = check_indep_of_wv(inst, &cand, &alts, &Window::BarG)?;
            if rep.alternatives.iter().any(Option::is_none) {
                part.note("untransported");
            }
            part.record(rep.consistent, rep.base, || bundle(inst, &cand, json!({ "indep": rep })));
        }
        Ok(())
    })?;
    let mut report = SuiteReport::new("indep", &format!("GF({p})"), Some(seed)).merge(parts);
    report.notes.insert("tuples_per_instance".into(), tuples);
    Ok(report)
}

/// Nondecreasing rank lists of length k with entries in 0..=d.
fn rank_lists(k: usize, d: usize) -> Vec<Vec<usize>> {
    product(d + 1, k).into_iter().filter(|l| l.windows(2).all(|w| w[0] <= w[1])).collect()
}

/// Chains over GF(p) of dimension d and length n ∈ `lengths`, for every s, every
/// admissible rank list and `seeds` generator seeds, against every pair of r-dimensional
/// end flags: membership, completion, and a brute-force search for interior flags agree.
pub fn linked_suite(p: u64, d: usize, lengths: &[usize], r: usize, seeds: u64) -> Result<SuiteReport> {
    let field = PrimeField::new(p)?;
    let flags = enumerate_subspaces(&field, d, r);
    let elems = field.elements().expect("finite field");
    let mut configs = Vec::new();
    for &n in lengths {
        for s in &elems {
            let lists = if *s == 0 { rank_lists(n - 1, d) } else { vec![vec![]] };
            for ranks in lists {
                for seed in 0..seeds {
                    configs.push((n, *s, ranks.clone(), seed));
                }
            }
        }
    }
    let parts: Vec<SuiteReport> = configs
        .par_iter()
        .map(|(n, s, ranks, seed)| {
            let mut part = SuiteReport::default();
            let chain = match gen_random_chain(*seed, &field, d, *n, *s, ranks) {
                Ok(c) => c,
                Err(Error::Budget(_)) => {
                    part.skipped += 1;
                    return Ok(part);
                }
                Err(e) => return Err(e),
            };
            let interiors: Vec<Vec<Subspace<PrimeField>>> = product(flags.len(), n - 2)
                .into_iter()
                .map(|idx| idx.into_iter().map(|i| flags[i].clone()).collect())
                .collect();
            for a in &flags {
                for b in &flags {
                    let pair = FlagPair::new(r, a.clone(), b.clone())?;
                    let member = linked_det_membership(&chain, &pair).member;
                    let exists = interiors.iter().any(|mid| {
                        let mut all = vec![a.clone()];
                        all.extend(mid.iter().cloned());
                        all.push(b.clone());
                        is_linked_grassmannian_point(&chain, r, &all)
                    });
                    let completion = complete_flags(&chain, &pair);
                    let completed = matches!(completion, Ok(Some(_)));
                    let agree = completion.is_ok() && member == completed && member == exists;
                    part.record(agree, member, || {
                        json!({
                            "chain": ChainFile::from_chain(&chain, Some(&pair)),
                            "member": member,
                            "completion": completion.as_ref().map(|c| c.is_some()).map_err(|e| e.to_string()),
                            "brute_force": exists,
                        })
                    });
                }
            }
            Ok(part)
        })
        .collect::<Result<_>>()?;
    let mut report = SuiteReport::new("linked", &format!("GF({p})"), None).merge(parts);
    report.notes.insert("chains".into(), configs.len());
    Ok(report)
}

/// Random two-component instances from the grid over GF(p): the chain along the edge,
/// with extra degree just large enough, against the pairwise kernel condition. Failures of
/// f∘f^ = 0 count as disagreements; failures of (II)/(III) are only noted.
pub fn bridge_suite(seed: u64, samples: usize, p: u64, grid: &TwoComponentGrid, max_extra: i64) -> Result<SuiteReport> {
    let field = PrimeField::new(p)?;
    let (insts, _) = two_component_instances(&field, grid)?;
    if insts.is_empty() {
        return Err(Error::Invalid("the grid has no instances".into()));
    }
    let parts: Vec<SuiteReport> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            use rand::Rng;
            let mut rng = sample_rng(seed, i);
            let inst = &insts[rng.random_range(0..insts.len())];
            let mut part = SuiteReport::default();
            let extra = match sufficient_extra_degree(inst, 0, max_extra) {
                Ok(x) => x,
                Err(Error::Budget(_)) => {
                    part.skipped += 1;
                    return Ok(part);
                }
                Err(e) => return Err(e),
            };
            for r in feasible_ranks(inst, 1) {
                for kind in [CandidateKind::Uniform, CandidateKind::Glued, CandidateKind::Perturbed] {
                    let Ok(cand) = random_candidate(&mut rng, inst, r, kind) else {
                        part.note(&format!("no_{}_candidate", kind_name(kind)));
                        continue;
                    };
                    let bc = curve_to_chain(inst, &cand, 0, &extra)?;
                    let zero_i = bc.chain.f.iter().zip(&bc.chain.fback).all(|(a, b)| a.mul(b).is_zero() && b.mul(a).is_zero());
                    if !bc.violations.is_empty() {
                        part.note("linked_condition_failures");
                    }
                    if bc.flags.is_none() {
                        part.note("short_lifts");
                    }
                    let pairwise = pairwise_kernel_check(inst, &cand, 0)?.iter().all(|&k| k > r);
                    let linked = bc.member();
                    part.record(zero_i && pairwise == linked, pairwise, || {
                        bundle(inst, &cand, json!({ "pairwise": pairwise, "linked": linked, "condition_i": zero_i, "extra_degree": extra }))
                    });
                }
            }
            Ok(part)
        })
        .collect::<Result<_>>()?;
    Ok(SuiteReport::new("bridge", &format!("GF({p})"), Some(seed)).merge(parts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_lists_are_nondecreasing() {
        assert_eq!(rank_lists(2, 1), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(rank_lists(0, 3), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn streams_are_independent_and_reproducible() {
        use rand::Rng;
        let a: u64 = sample_rng(1, 0).random();
        let b: u64 = sample_rng(1, 1).random();
        assert_ne!(a, b);
        assert_eq!(a, sample_rng(1, 0).random::<u64>());
    }

    #[test]
    fn small_equivalence_run_agrees() {
        let grid = TwoComponentGrid { max_nodes: 1, max_chain: 1, max_degree: 2, ..Default::default() };
        let rep = equivalence_suite(2, &grid, &[0, 1]).unwrap();
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn reports_are_reproducible() {
        let params = MultitreeParams { max_components: 3, ..Default::default() };
        let a = multitree_suite(5, 4, 5, &params).unwrap();
        let b = multitree_suite(5, 4, 5, &params).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
