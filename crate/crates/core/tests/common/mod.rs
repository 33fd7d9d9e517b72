#![allow(dead_code)]

use nodal_lls::curves::CurveInstance;
use nodal_lls::exactalg::{Field, PrimeField, Rationals, Subspace};
use nodal_lls::graphs::{ChainStructure, DualGraph};
use nodal_lls::llseries::LLSCandidate;
use nodal_lls::multidegrees::{AdmissibleMultidegree, ChainedGraph, ConcentratedTuple};
use num_rational::BigRational;

pub fn gf(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

pub fn q(n: i64) -> BigRational {
    Rationals.from_i64(n)
}

pub fn chained(k: usize, pairs: &[(usize, usize)], n: Vec<u32>) -> ChainedGraph {
    ChainedGraph::new(DualGraph::from_pairs(k, pairs).unwrap(), ChainStructure::new(n).unwrap()).unwrap()
}

pub fn md(weights: &[i64], mu: &[u32]) -> AdmissibleMultidegree {
    AdmissibleMultidegree::new(weights.to_vec(), mu.to_vec())
}

/// An instance from small integers; the tuple is derived when `members` is None.
#[allow(clippy::too_many_arguments)]
pub fn instance<F: Field>(
    field: &F,
    k: usize,
    pairs: &[(usize, usize)],
    n: Vec<u32>,
    tails: &[i64],
    heads: &[i64],
    lambda: &[i64],
    w0: AdmissibleMultidegree,
    members: Option<Vec<AdmissibleMultidegree>>,
) -> CurveInstance<F> {
    let g = chained(k, pairs, n);
    let tuple = match members {
        Some(m) => ConcentratedTuple { members: m },
        None => ConcentratedTuple::derive(&g, &w0).unwrap(),
    };
    let el = |xs: &[i64]| xs.iter().map(|&x| field.from_i64(x)).collect::<Vec<_>>();
    CurveInstance::new(field.clone(), g, el(tails), el(heads), el(lambda), w0, tuple).unwrap()
}

/// Two rational components meeting once at x = 0 on both, members (d,0) and (0,d).
pub fn compact_node<F: Field>(field: &F, d: i64) -> CurveInstance<F> {
    instance(field, 2, &[(0, 1)], vec![1], &[0], &[0], &[1], md(&[d, 0], &[0]), Some(vec![md(&[d, 0], &[0]), md(&[0, d], &[0])]))
}

pub fn candidate<F: Field>(inst: &CurveInstance<F>, r: usize, bases: Vec<Vec<Vec<i64>>>) -> LLSCandidate<F> {
    let f = inst.field();
    LLSCandidate::new(inst, r, bases.into_iter().map(|b| b.into_iter().map(|row| row.into_iter().map(|x| f.from_i64(x)).collect()).collect()).collect()).unwrap()
}

pub fn span<F: Field>(field: &F, n: usize, rows: &[&[i64]]) -> Subspace<F> {
    Subspace::span(field, n, rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect())
}

/// Every vector of GF(p)^n.
pub fn all_vectors(p: u64, n: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v: Vec<u64>| (0..p).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Random connected multigraph on 2..=max_k vertices: a random tree plus extra edges.
pub fn graph_strategy(max_k: usize) -> impl proptest::strategy::Strategy<Value = (usize, Vec<(usize, usize)>)> {
    use proptest::prelude::*;
    (2usize..=max_k)
        .prop_flat_map(|k| {
            let tree = prop::collection::vec(any::<prop::sample::Index>(), k - 1);
            let extra = prop::collection::vec((0..k, 0..k), 0..4);
            (Just(k), tree, extra)
        })
        .prop_map(|(k, tree, extra)| {
            let mut pairs: Vec<(usize, usize)> = tree.iter().enumerate().map(|(i, ix)| (ix.index(i + 1), i + 1)).collect();
            pairs.extend(extra.into_iter().filter(|(a, b)| a != b));
            (k, pairs)
        })
}

/// A chained graph with chain lengths in 1..=3 and a multidegree on it.
pub fn chained_strategy(max_k: usize) -> impl proptest::strategy::Strategy<Value = (ChainedGraph, AdmissibleMultidegree)> {
    use proptest::prelude::*;
    graph_strategy(max_k).prop_flat_map(|(k, pairs)| {
        let m = pairs.len();
        (Just(k), Just(pairs), prop::collection::vec(1u32..=3, m), prop::collection::vec(-3i64..=3, k), prop::collection::vec(0u32..3, m))
            .prop_map(|(k, pairs, n, weights, mu)| {
                let mu = mu.iter().zip(&n).map(|(x, n)| x % n).collect();
                (chained(k, &pairs, n), AdmissibleMultidegree::new(weights, mu))
            })
    })
}

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

/// A random multitree instance with 2..=4 components over GF(p).
pub fn random_multitree(seed: u64, p: u64) -> CurveInstance<PrimeField> {
    let params = nodal_lls::corpus::MultitreeParams { min_components: 2, max_components: 4, ..Default::default() };
    nodal_lls::corpus::random_multitree_instance(&mut rng(seed), &gf(p), &params).expect("instance within budget")
}

pub fn rationals() -> Rationals {
    Rationals
}
