use std::collections::HashSet;

use super::{AdmissibleMultidegree, ChainedGraph, TwistMultiset};

/// A witness ordering if w is concentrated at v.
///
/// Searches orderings depth first; the state after a prefix depends only on the set of
/// vertices used, so failed sets are memoized.
pub fn is_concentrated(g: &ChainedGraph, w: &AdmissibleMultidegree, v: usize) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    assert!(n <= 64, "concentration search supports at most 64 vertices");
    let mut failed = HashSet::new();
    let mut order = vec![v];
    let start = g.negative_twist(w, v);
    search(g, &start, 1u64 << v, &mut order, &mut failed).then_some(order)
}

fn search(
    g: &ChainedGraph,
    cur: &AdmissibleMultidegree,
    used: u64,
    order: &mut Vec<usize>,
    failed: &mut HashSet<u64>,
) -> bool {
    let n = g.vertex_count();
    if order.len() == n {
        return true;
    }
    if failed.contains(&used) {
        return false;
    }
    for u in 0..n {
        if used & (1 << u) != 0 || cur.weights[u] >= 0 {
            continue;
        }
        order.push(u);
        let next = g.negative_twist(cur, u);
        if search(g, &next, used | (1 << u), order, failed) {
            return true;
        }
        order.pop();
    }
    failed.insert(used);
    false
}

/// The sufficient condition: for every v′ ≠ v and every neighbour v″ of v′, the negative
/// twist of w at v″ is negative at v′.
pub fn satisfies_canonical_concentration(g: &ChainedGraph, w: &AdmissibleMultidegree, v: usize) -> bool {
    let graph = g.graph();
    (0..g.vertex_count()).filter(|&u| u != v).all(|u| {
        graph.incident(u).iter().all(|&e| {
            let nb = graph.other_end(e, u);
            g.negative_twist(w, nb).weights[u] < 0
        })
    })
}

/// A multidegree concentrated at v reached from w by twisting away from v, with the
/// twist multiset used (zero at v).
///
/// Runs the layered negative-twist procedure and stops as soon as the current multidegree
/// is concentrated at v.
pub fn concentrate(g: &ChainedGraph, w: &AdmissibleMultidegree, v: usize) -> (AdmissibleMultidegree, TwistMultiset) {
    layered(g, w, v, true)
}

/// Like [`concentrate`] but always runs the full procedure, so the result is negative at
/// every vertex other than v.
pub fn concentrate_negative(
    g: &ChainedGraph,
    w: &AdmissibleMultidegree,
    v: usize,
) -> (AdmissibleMultidegree, TwistMultiset) {
    layered(g, w, v, false)
}

fn layered(
    g: &ChainedGraph,
    w: &AdmissibleMultidegree,
    v: usize,
    early_stop: bool,
) -> (AdmissibleMultidegree, TwistMultiset) {
    let n = g.vertex_count();
    let dist: Vec<usize> = g.graph().distances_from(v).into_iter().map(|d| d.expect("connected graph")).collect();
    let radius = dist.iter().copied().max().unwrap_or(0);
    let mut cur = w.clone();
    let mut used = TwistMultiset::zero(n);
    let done = |x: &AdmissibleMultidegree| early_stop && is_concentrated(g, x, v).is_some();
    if done(&cur) {
        return (cur, used);
    }
    // Negative twists over the ball of radius k equal positive twists over its complement.
    for k in (0..radius).rev() {
        let outside: Vec<bool> = dist.iter().map(|&d| d > k).collect();
        let shell: Vec<usize> = (0..n).filter(|&u| dist[u] == k + 1).collect();
        while shell.iter().any(|&u| cur.weights[u] >= 0) {
            cur = g.twist_set(&cur, &outside);
            used = used.plus(&TwistMultiset::of_set(&outside, 1));
            if done(&cur) {
                return (cur, used);
            }
        }
    }
    (cur, used)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{ChainStructure, DualGraph};

    fn graph(n: usize, pairs: &[(usize, usize)], chains: Vec<u32>) -> ChainedGraph {
        ChainedGraph::new(DualGraph::from_pairs(n, pairs).unwrap(), ChainStructure::new(chains).unwrap()).unwrap()
    }

    #[test]
    fn banana_concentrated_at_both_ends() {
        let g = graph(2, &[(0, 1), (0, 1)], vec![1, 1]);
        let w = AdmissibleMultidegree::new(vec![1, 1], vec![0, 0]);
        assert!(is_concentrated(&g, &w, 0).is_some());
        assert!(is_concentrated(&g, &w, 1).is_some());
    }

    #[test]
    fn compact_type_node() {
        let g = graph(2, &[(0, 1)], vec![1]);
        let w = AdmissibleMultidegree::new(vec![3, 0], vec![0]);
        assert_eq!(is_concentrated(&g, &w, 0), Some(vec![0, 1]));
        let w = AdmissibleMultidegree::new(vec![0, 3], vec![0]);
        let (c, used) = concentrate(&g, &w, 0);
        assert_eq!(c.weights, vec![3, 0]);
        assert_eq!(used.counts, vec![0, 3]);
    }

    #[test]
    fn negative_elsewhere_is_concentrated() {
        let g = graph(3, &[(0, 1), (1, 2), (2, 0)], vec![2, 3, 1]);
        let w = AdmissibleMultidegree::new(vec![5, -1, -2], vec![1, 0, 0]);
        assert!(is_concentrated(&g, &w, 0).is_some());
    }

    #[test]
    fn full_procedure_is_negative_elsewhere() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3), (1, 3)], vec![2, 1, 3, 2]);
        let w = AdmissibleMultidegree::new(vec![0, 2, 1, 1], vec![1, 0, 2, 0]);
        let (c, used) = concentrate_negative(&g, &w, 2);
        assert_eq!(used.counts[2], 0);
        assert!((0..4).filter(|&u| u != 2).all(|u| c.weights[u] < 0));
        assert_eq!(g.apply(&w, &used), c);
    }
}
