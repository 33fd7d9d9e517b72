mod common;

use common::{compact_node, gf, rng, span};
use nodal_lls::corpus::{enumerate_subspaces, random_subspace};
use nodal_lls::exactalg::{Matrix, PrimeField, Subspace};
use nodal_lls::linkedet::{
    complete_flags, curve_to_chain, gen_random_chain, is_linked_grassmannian_point, linked_det_membership, FlagPair,
    LinkedChain,
};
use nodal_lls::llseries::{is_lls_kernel, Window};
use proptest::prelude::*;
use rand::Rng;

fn random_invertible(r: &mut impl Rng, f: &PrimeField, d: usize) -> Matrix<PrimeField> {
    loop {
        let m = Matrix::from_fn(f, d, d, |_, _| r.random_range(0..f.modulus()));
        if m.rank() == d {
            return m;
        }
    }
}

fn diag(f: &PrimeField, d: &[u64]) -> Matrix<PrimeField> {
    Matrix::from_fn(f, d.len(), d.len(), |i, j| if i == j { d[i] } else { 0 })
}

/// Interior flags by exhaustive search over r-dimensional subspaces.
fn brute_force_interior(chain: &LinkedChain<PrimeField>, flags: &FlagPair<PrimeField>) -> bool {
    let all = enumerate_subspaces(&chain.field, chain.d, flags.r);
    let mut partial = vec![vec![flags.first.clone()]];
    for _ in 1..chain.n - 1 {
        partial = partial.into_iter().flat_map(|p| all.iter().map(move |s| [p.clone(), vec![s.clone()]].concat())).collect();
    }
    partial.into_iter().any(|mut p| {
        p.push(flags.last.clone());
        is_linked_grassmannian_point(chain, flags.r, &p)
    })
}

#[test]
fn diagonal_chain_examples() {
    let f = gf(2);
    let chain = LinkedChain::new(f.clone(), 2, 0, vec![diag(&f, &[1, 0])], vec![diag(&f, &[0, 1])]).unwrap();
    assert!(chain.validate().is_empty());
    let (e1, e2) = (span(&f, 2, &[&[1, 0]]), span(&f, 2, &[&[0, 1]]));
    assert!(linked_det_membership(&chain, &FlagPair::new(1, e1.clone(), e1.clone()).unwrap()).member);
    assert!(linked_det_membership(&chain, &FlagPair::new(1, e2.clone(), e2.clone()).unwrap()).member);
    assert!(!linked_det_membership(&chain, &FlagPair::new(1, e1.clone(), e2.clone()).unwrap()).member);
    assert!(linked_det_membership(&chain, &FlagPair::new(1, e2, e1).unwrap()).member);
}

#[test]
fn three_space_completion_is_a_linked_point() {
    let f = gf(2);
    let chain = gen_random_chain(3, &f, 2, 3, 0, &[1, 1]).unwrap();
    for first in enumerate_subspaces(&f, 2, 1) {
        for last in enumerate_subspaces(&f, 2, 1) {
            let flags = FlagPair::new(1, first.clone(), last).unwrap();
            match complete_flags(&chain, &flags).unwrap() {
                Some(mid) => {
                    let all = [vec![flags.first.clone()], mid, vec![flags.last.clone()]].concat();
                    assert!(is_linked_grassmannian_point(&chain, 1, &all));
                }
                None => assert!(!brute_force_interior(&chain, &flags)),
            }
        }
    }
}

#[test]
fn flag_dimensions_are_checked() {
    let f = gf(3);
    assert!(FlagPair::new(1, Subspace::zero(&f, 2), span(&f, 2, &[&[1, 0]])).is_err());
    assert!(LinkedChain::new(f.clone(), 2, 0, vec![diag(&f, &[1, 0])], vec![]).is_err());
}

#[test]
fn bridge_on_a_compact_node() {
    let f = gf(5);
    let inst = compact_node(&f, 1);
    let cand = common::candidate(&inst, 0, vec![vec![vec![0, 1]], vec![vec![0, 1]]]);
    let bridge = curve_to_chain(&inst, &cand, 0, &[1, 1]).unwrap();
    // d + deg D + 1 − g = 1 + 2 + 1 − 0, also 3 + 2 coefficients less one gluing condition
    assert_eq!(bridge.chain.d, 4);
    assert!(bridge.violations.is_empty());
    let zero = Matrix::zeros(&f, 4, 4);
    for (a, b) in bridge.chain.f.iter().zip(&bridge.chain.fback) {
        assert_eq!(a.mul(b), zero);
        assert_eq!(b.mul(a), zero);
    }
    assert_eq!(bridge.member(), is_lls_kernel(&inst, &cand, &Window::BarG).unwrap().member);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_chains_validate(seed in any::<u64>(), d in 1usize..=3, ranks in prop::collection::vec(0usize..=3, 1..4)) {
        let f = gf(3);
        let mut ranks: Vec<usize> = ranks.into_iter().map(|k| k.min(d)).collect();
        ranks.sort();
        let chain = gen_random_chain(seed, &f, d, ranks.len() + 1, 0, &ranks).unwrap();
        prop_assert!(chain.validate().is_empty());
        prop_assert_eq!(chain.f.iter().map(Matrix::rank).collect::<Vec<_>>(), ranks);
        prop_assert!(chain.reversed().validate().is_empty());
    }

    #[test]
    fn nonzero_s_members_carry_the_first_flag_onto_the_last(seed in any::<u64>(), d in 1usize..=3, n in 2usize..=4, s in 1u64..3) {
        let f = gf(3);
        let chain = gen_random_chain(seed, &f, d, n, s, &[]).unwrap();
        let mut r = rng(seed ^ 1);
        let k = r.random_range(0..=d);
        let flags = FlagPair::new(k, random_subspace(&mut r, &f, d, k), random_subspace(&mut r, &f, d, k)).unwrap();
        let carried = flags.first.image(&chain.to_last(0)) == flags.last;
        prop_assert_eq!(linked_det_membership(&chain, &flags).member, carried);
    }

    #[test]
    fn membership_is_invariant_under_change_of_basis(seed in any::<u64>(), d in 1usize..=3, n in 2usize..=4) {
        let f = gf(3);
        let mut r = rng(seed);
        let ranks: Vec<usize> = { let mut v: Vec<usize> = (0..n - 1).map(|_| r.random_range(0..=d)).collect(); v.sort(); v };
        let chain = gen_random_chain(seed, &f, d, n, 0, &ranks).unwrap();
        let p: Vec<Matrix<PrimeField>> = (0..n).map(|_| random_invertible(&mut r, &f, d)).collect();
        let pinv: Vec<Matrix<PrimeField>> = p.iter().map(|m| m.inverse().unwrap()).collect();
        let moved = LinkedChain::new(
            f.clone(),
            d,
            0,
            (0..n - 1).map(|i| p[i + 1].mul(&chain.f[i]).mul(&pinv[i])).collect(),
            (0..n - 1).map(|i| p[i].mul(&chain.fback[i]).mul(&pinv[i + 1])).collect(),
        ).unwrap();
        prop_assert!(moved.validate().is_empty());
        let k = r.random_range(0..=d);
        let flags = FlagPair::new(k, random_subspace(&mut r, &f, d, k), random_subspace(&mut r, &f, d, k)).unwrap();
        let moved_flags = FlagPair::new(k, flags.first.image(&p[0]), flags.last.image(&p[n - 1])).unwrap();
        let (a, b) = (linked_det_membership(&chain, &flags), linked_det_membership(&moved, &moved_flags));
        prop_assert_eq!(a.ranks, b.ranks);
        prop_assert_eq!(a.member, b.member);
    }

    #[test]
    fn completion_agrees_with_exhaustive_search(seed in any::<u64>(), n in 2usize..=4) {
        let f = gf(2);
        let mut r = rng(seed);
        let ranks: Vec<usize> = { let mut v: Vec<usize> = (0..n - 1).map(|_| r.random_range(0..=2)).collect(); v.sort(); v };
        let chain = gen_random_chain(seed, &f, 2, n, 0, &ranks).unwrap();
        let flags = FlagPair::new(1, random_subspace(&mut r, &f, 2, 1), random_subspace(&mut r, &f, 2, 1)).unwrap();
        let member = linked_det_membership(&chain, &flags).member;
        prop_assert_eq!(complete_flags(&chain, &flags).unwrap().is_some(), member);
        prop_assert_eq!(brute_force_interior(&chain, &flags), member);
        let back = FlagPair::new(1, flags.last.clone(), flags.first.clone()).unwrap();
        prop_assert_eq!(linked_det_membership(&chain.reversed(), &back).member, member);
    }
}

