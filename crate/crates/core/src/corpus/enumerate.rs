use crate::curves::CurveInstance;
use crate::exactalg::{Field, PrimeField, Subspace};
use crate::graphs::{ChainStructure, DualGraph};
use crate::multidegrees::{is_concentrated, AdmissibleMultidegree, ChainedGraph, ConcentratedTuple};
use crate::Result;

/// Every k-dimensional subspace of F^n over a finite field, one per reduced echelon form.
pub fn enumerate_subspaces<F: Field>(field: &F, n: usize, k: usize) -> Vec<Subspace<F>> {
    let elems = field.elements().expect("subspace enumeration needs a finite field");
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    for pivots in combinations(n, k) {
        // Free slots: row i, column j > pivots[i], j not a pivot.
        let slots: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| ((pivots[i] + 1)..n).filter(|j| !pivots.contains(j)).map(move |j| (i, j)))
            .collect();
        for assignment in product(elems.len(), slots.len()) {
            let mut rows = vec![vec![field.zero(); n]; k];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = field.one();
            }
            for (&(i, j), &a) in slots.iter().zip(&assignment) {
                rows[i][j] = elems[a].clone();
            }
            out.push(Subspace::span(field, n, rows));
        }
    }
    out
}

/// Increasing k-subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All tuples in {0..base}^len, last coordinate fastest.
pub fn product(base: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out.into_iter().flat_map(|p| (0..base).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Bounds for the exhaustive two-component corpus.
#[derive(Clone, Debug)]
pub struct TwoComponentGrid {
    pub max_nodes: usize,
    pub max_chain: u32,
    pub max_degree: i64,
    /// Weights of the second component in the first member.
    pub opposite_weights: Vec<i64>,
    /// Twists beyond the minimal number between the members.
    pub extra_links: Vec<u32>,
}

impl Default for TwoComponentGrid {
    fn default() -> Self {
        TwoComponentGrid { max_nodes: 2, max_chain: 2, max_degree: 3, opposite_weights: vec![0, -1, -2], extra_links: vec![0, 1] }
    }
}

/// Statistics of a grid enumeration.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GridCounts {
    pub shapes: usize,
    /// Tuples dropped because the last divisor does not exceed a component degree.
    pub not_pairwise_ready: usize,
    pub instances: usize,
}

/// Two components joined by m parallel nodes (all oriented from the first to the second),
/// every chain structure, marker, member pair, and gluing scalar within the grid. Node
/// coordinates are the first m field elements on both components.
pub fn two_component_instances(field: &PrimeField, grid: &TwoComponentGrid) -> Result<(Vec<CurveInstance<PrimeField>>, GridCounts)> {
    let elems = field.elements().expect("finite field");
    let units: Vec<_> = elems.iter().filter(|x| !field.is_zero(x)).cloned().collect();
    let mut out = Vec::new();
    let mut counts = GridCounts::default();
    for m in 1..=grid.max_nodes.min(elems.len()) {
        let graph = DualGraph::from_pairs(2, &vec![(0, 1); m])?;
        let pts: Vec<_> = elems[..m].to_vec();
        for chain in product(grid.max_chain as usize, m) {
            let n: Vec<u32> = chain.iter().map(|&c| c as u32 + 1).collect();
            let g = ChainedGraph::new(graph.clone(), ChainStructure::new(n.clone())?)?;
            let mut tuples: Vec<ConcentratedTuple> = Vec::new();
            for mu in markers(&n) {
                for d1 in 0..=grid.max_degree {
                    for &x in &grid.opposite_weights {
                        let w1 = AdmissibleMultidegree::new(vec![d1, x], mu.clone());
                        if is_concentrated(&g, &w1, 0).is_none() {
                            continue;
                        }
                        let mut cur = w1.clone();
                        while cur.weights[0] >= 0 {
                            cur = g.twist_pair(&cur, 0, 0)?;
                        }
                        for extra in 0..=grid.extra_links.iter().copied().max().unwrap_or(0) {
                            if extra > 0 {
                                cur = g.twist_pair(&cur, 0, 0)?;
                            }
                            if !grid.extra_links.contains(&extra) {
                                continue;
                            }
                            let d2 = cur.weights[1];
                            if !(0..=grid.max_degree).contains(&d2) {
                                continue;
                            }
                            let t = ConcentratedTuple { members: vec![w1.clone(), cur.clone()] };
                            if t.validate(&g).is_ok() && !tuples.contains(&t) {
                                tuples.push(t);
                            }
                        }
                    }
                }
            }
            for t in tuples {
                counts.shapes += 1;
                let w0 = t.members[0].clone();
                let probe = CurveInstance::new(
                    field.clone(),
                    g.clone(),
                    pts.clone(),
                    pts.clone(),
                    vec![field.one(); m],
                    w0.clone(),
                    t.clone(),
                )?;
                if !probe.pairwise_ready()? {
                    counts.not_pairwise_ready += 1;
                    continue;
                }
                for lam in product(units.len(), m) {
                    let lambda = lam.iter().map(|&i| units[i].clone()).collect();
                    out.push(probe.with_lambda(lambda)?);
                }
            }
        }
    }
    counts.instances = out.len();
    Ok((out, counts))
}

/// Every marker vector μ with μ(e) ∈ ℤ/n(e).
pub fn markers(n: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &k in n {
        out = out.into_iter().flat_map(|p: Vec<u32>| (0..k).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_binomial(n: u32, k: u32, q: u64) -> u64 {
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..k {
            num *= q.pow(n - i) - 1;
            den *= q.pow(i + 1) - 1;
        }
        num / den
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        for p in [2u64, 3] {
            let f = PrimeField::new(p).unwrap();
            for n in 0..=4usize {
                for k in 0..=n {
                    let all = enumerate_subspaces(&f, n, k);
                    assert_eq!(all.len() as u64, gaussian_binomial(n as u32, k as u32, p), "p={p} n={n} k={k}");
                    assert!(all.iter().all(|s| s.dim() == k));
                }
            }
        }
    }

    #[test]
    fn enumerated_subspaces_are_distinct() {
        let f = PrimeField::new(3).unwrap();
        let all = enumerate_subspaces(&f, 3, 2);
        for i in 0..all.len() {
            for j in 0..i {
                assert_ne!(all[i], all[j]);
            }
        }
    }

    #[test]
    fn small_grid_is_nonempty_and_valid() {
        let f = PrimeField::new(2).unwrap();
        let grid = TwoComponentGrid { max_nodes: 1, max_chain: 1, max_degree: 2, ..Default::default() };
        let (insts, counts) = two_component_instances(&f, &grid).unwrap();
        assert!(!insts.is_empty());
        assert_eq!(counts.instances, insts.len());
        for inst in &insts {
            assert!(inst.is_multitree());
            assert!(inst.pairwise_ready().unwrap());
        }
    }
}
