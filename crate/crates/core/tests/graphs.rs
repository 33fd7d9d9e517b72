mod common;

use common::graph_strategy;
use nodal_lls::graphs::{collapse, is_multitree, subdivide, ChainStructure, DualGraph, VertexOrigin};
use nodal_lls::Error;
use proptest::prelude::*;

#[test]
fn validation_examples() {
    assert!(DualGraph::from_pairs(2, &[(0, 1)]).is_ok());
    assert!(matches!(DualGraph::from_pairs(2, &[(1, 1)]), Err(Error::Invalid(_))));
    assert!(matches!(DualGraph::from_pairs(2, &[]), Err(Error::Invalid(_))));
    assert!(DualGraph::new(vec!["a".into(), "a".into()], vec![]).is_err());
}

#[test]
fn multitree_examples() {
    assert!(is_multitree(&DualGraph::from_pairs(2, &[(0, 1), (0, 1), (0, 1)]).unwrap()));
    assert!(!is_multitree(&DualGraph::from_pairs(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()));
    assert!(is_multitree(&DualGraph::from_pairs(5, &[(0, 1), (1, 2), (1, 3), (4, 3)]).unwrap()));
}

#[test]
fn subdivision_examples() {
    let g = DualGraph::from_pairs(2, &[(0, 1)]).unwrap();
    assert_eq!(subdivide(&g, &ChainStructure::new(vec![1]).unwrap()).graph, g);
    let s = subdivide(&g, &ChainStructure::new(vec![3]).unwrap());
    assert_eq!(s.graph.vertex_count(), 4);
    assert_eq!(s.graph.edge_count(), 3);
    assert_eq!(s.origin[2], VertexOrigin::Exceptional { edge: 0, position: 1 });
    let g = DualGraph::from_pairs(2, &[(0, 1), (0, 1)]).unwrap();
    let s = subdivide(&g, &ChainStructure::new(vec![2, 1]).unwrap());
    assert_eq!(s.graph.vertex_count(), 3);
    assert_eq!(s.paths, vec![vec![0, 2, 1], vec![0, 1]]);
}

#[test]
fn chain_lengths_must_be_positive() {
    assert!(ChainStructure::new(vec![1, 0]).is_err());
}

/// Union-find cycle test on the underlying simple graph.
fn simple_graph_is_forest(k: usize, pairs: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut seen = std::collections::HashSet::new();
    for &(a, b) in pairs {
        if !seen.insert((a.min(b), a.max(b))) {
            continue;
        }
        let (x, y) = (find(&mut parent, a), find(&mut parent, b));
        if x == y {
            return false;
        }
        parent[x] = y;
    }
    true
}

proptest! {
    #[test]
    fn multitree_iff_simple_graph_is_a_tree((k, pairs) in graph_strategy(6)) {
        let g = DualGraph::from_pairs(k, &pairs).unwrap();
        prop_assert_eq!(is_multitree(&g), simple_graph_is_forest(k, &pairs));
        prop_assert_eq!(g.genus(), pairs.len() as i64 - k as i64 + 1);
        let c = collapse(&g);
        prop_assert_eq!(c.edges().iter().map(|e| e.parallel.len()).sum::<usize>(), pairs.len());
    }

    #[test]
    fn subdivision_adds_n_minus_one_vertices((k, pairs) in graph_strategy(6), n in prop::collection::vec(1u32..=3, 10)) {
        let g = DualGraph::from_pairs(k, &pairs).unwrap();
        let n = ChainStructure::new(n[..pairs.len()].to_vec()).unwrap();
        let s = subdivide(&g, &n);
        let extra: u32 = n.as_slice().iter().map(|x| x - 1).sum();
        prop_assert_eq!(s.graph.vertex_count(), k + extra as usize);
        prop_assert_eq!(s.graph.genus(), g.genus());
        prop_assert!(s.graph.validate().is_ok());
    }
}
