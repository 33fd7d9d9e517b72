//! Admissible multidegrees and their twist calculus.

mod concentrate;
mod tuple;

pub use concentrate::{concentrate, concentrate_negative, is_concentrated, satisfies_canonical_concentration};
pub use tuple::{naive_restriction, BarG, BarGEdge, BarGNode, ConcentratedTuple, RestrictedMultidegree, TreeData};

use serde::{Deserialize, Serialize};

use crate::exactalg::{Field, Matrix, Rationals};
use crate::graphs::{collapse, subdivide, ChainStructure, CollapsedGraph, DualGraph, VertexOrigin};
use crate::{Error, Result};

/// Vertex weights w_Γ together with edge markers μ(e) ∈ Z/n(e).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AdmissibleMultidegree {
    pub weights: Vec<i64>,
    pub mu: Vec<u32>,
}

impl AdmissibleMultidegree {
    pub fn new(weights: Vec<i64>, mu: Vec<u32>) -> Self {
        AdmissibleMultidegree { weights, mu }
    }

    /// #{e : μ(e) ≠ 0} + Σ_v w_Γ(v).
    pub fn total_degree(&self) -> i64 {
        self.weights.iter().sum::<i64>() + self.mu.iter().filter(|&&m| m != 0).count() as i64
    }
}

/// A counted collection of vertex twists, meaningful up to adding the all-ones vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwistMultiset {
    pub counts: Vec<i64>,
}

impl TwistMultiset {
    pub fn zero(vertex_count: usize) -> Self {
        TwistMultiset { counts: vec![0; vertex_count] }
    }

    pub fn single(vertex_count: usize, v: usize, k: i64) -> Self {
        let mut m = Self::zero(vertex_count);
        m.counts[v] = k;
        m
    }

    /// Indicator of a vertex set, scaled by k.
    pub fn of_set(mask: &[bool], k: i64) -> Self {
        TwistMultiset { counts: mask.iter().map(|&b| if b { k } else { 0 }).collect() }
    }

    /// Subtracts the minimum so that the smallest count is 0.
    pub fn normalize(&self) -> Self {
        let min = self.counts.iter().copied().min().unwrap_or(0);
        TwistMultiset { counts: self.counts.iter().map(|c| c - min).collect() }
    }

    pub fn plus(&self, other: &Self) -> Self {
        TwistMultiset { counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect() }
    }

    pub fn minus(&self, other: &Self) -> Self {
        TwistMultiset { counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a - b).collect() }
    }

    pub fn total(&self) -> i64 {
        self.counts.iter().sum()
    }
}

/// True iff the two multisets differ by a constant multiple of the all-ones vector.
pub fn same_endpoint(m1: &TwistMultiset, m2: &TwistMultiset) -> bool {
    m1.minus(m2).normalize().counts.iter().all(|&c| c == 0)
}

/// A dual graph with its chain structure; the context for all twist operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainedGraph {
    graph: DualGraph,
    chains: ChainStructure,
    collapsed: CollapsedGraph,
}

impl ChainedGraph {
    pub fn new(graph: DualGraph, chains: ChainStructure) -> Result<Self> {
        graph.validate()?;
        chains.check_against(&graph)?;
        let collapsed = collapse(&graph);
        Ok(ChainedGraph { graph, chains, collapsed })
    }

    pub fn graph(&self) -> &DualGraph {
        &self.graph
    }
    pub fn chains(&self) -> &ChainStructure {
        &self.chains
    }
    pub fn collapsed(&self) -> &CollapsedGraph {
        &self.collapsed
    }
    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }
    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }
    pub fn n(&self, e: usize) -> u32 {
        self.chains.n(e)
    }
    pub fn is_multitree(&self) -> bool {
        self.collapsed.is_tree()
    }

    /// Checks shape and residue ranges of a multidegree.
    pub fn check(&self, w: &AdmissibleMultidegree) -> Result<()> {
        if w.weights.len() != self.vertex_count() || w.mu.len() != self.edge_count() {
            return Err(Error::Invalid(format!(
                "multidegree has {} weights and {} markers for {} vertices and {} edges",
                w.weights.len(),
                w.mu.len(),
                self.vertex_count(),
                self.edge_count()
            )));
        }
        for (e, &m) in w.mu.iter().enumerate() {
            if m >= self.n(e) {
                return Err(Error::Invalid(format!("marker {m} on edge {e} is not reduced mod {}", self.n(e))));
            }
        }
        Ok(())
    }

    /// σ(e,v)·μ(e) reduced into [0, n(e)): the marker position seen from v.
    pub fn position_from(&self, w: &AdmissibleMultidegree, e: usize, v: usize) -> u32 {
        let n = self.n(e) as i64;
        (self.graph.sigma(e, v) * w.mu[e] as i64).rem_euclid(n) as u32
    }

    fn shift(&self, w: &mut AdmissibleMultidegree, e: usize, v: usize) {
        let n = self.n(e) as i64;
        let old = w.mu[e];
        let new = (old as i64 + self.graph.sigma(e, v)).rem_euclid(n) as u32;
        if old == 0 {
            w.weights[v] -= 1;
        }
        if new == 0 {
            w.weights[self.graph.other_end(e, v)] += 1;
        }
        w.mu[e] = new;
    }

    fn unshift(&self, w: &mut AdmissibleMultidegree, e: usize, v: usize) {
        let n = self.n(e) as i64;
        let cur = w.mu[e];
        let prev = (cur as i64 - self.graph.sigma(e, v)).rem_euclid(n) as u32;
        if cur == 0 {
            w.weights[self.graph.other_end(e, v)] -= 1;
        }
        if prev == 0 {
            w.weights[v] += 1;
        }
        w.mu[e] = prev;
    }

    /// Twist at vertex v.
    pub fn twist(&self, w: &AdmissibleMultidegree, v: usize) -> AdmissibleMultidegree {
        let mut out = w.clone();
        for &e in self.graph.incident(v) {
            self.shift(&mut out, e, v);
        }
        out
    }

    /// Inverse of `twist(·, v)`.
    pub fn negative_twist(&self, w: &AdmissibleMultidegree, v: usize) -> AdmissibleMultidegree {
        let mut out = w.clone();
        for &e in self.graph.incident(v) {
            self.unshift(&mut out, e, v);
        }
        out
    }

    /// Twist at (ē, v) for a collapsed edge ē adjacent to v.
    pub fn twist_pair(&self, w: &AdmissibleMultidegree, ebar: usize, v: usize) -> Result<AdmissibleMultidegree> {
        if !self.is_multitree() {
            return Err(Error::NotMultitree);
        }
        let se = self.collapsed.edge(ebar);
        if !se.touches(v) {
            return Err(Error::Invalid(format!("collapsed edge {ebar} is not adjacent to vertex {v}")));
        }
        let mut out = w.clone();
        for &e in &se.parallel {
            self.shift(&mut out, e, v);
        }
        Ok(out)
    }

    /// Applies a twist multiset (negative counts apply negative twists).
    pub fn apply(&self, w: &AdmissibleMultidegree, m: &TwistMultiset) -> AdmissibleMultidegree {
        let m = m.normalize();
        let mut out = w.clone();
        for (v, &c) in m.counts.iter().enumerate() {
            for _ in 0..c {
                out = self.twist(&out, v);
            }
        }
        out
    }

    /// Twists once at every vertex of a set.
    pub fn twist_set(&self, w: &AdmissibleMultidegree, mask: &[bool]) -> AdmissibleMultidegree {
        let mut out = w.clone();
        for v in (0..mask.len()).filter(|&v| mask[v]) {
            out = self.twist(&out, v);
        }
        out
    }

    /// Vertex weights on the subdivided graph.
    pub fn lift_to_subdivision(&self, w: &AdmissibleMultidegree) -> Vec<i64> {
        let sub = subdivide(&self.graph, &self.chains);
        sub.origin
            .iter()
            .map(|o| match *o {
                VertexOrigin::Original(v) => w.weights[v],
                VertexOrigin::Exceptional { edge, position } => (w.mu[edge] == position) as i64,
            })
            .collect()
    }

    /// Signed Laplacian M of the subdivided graph: M(v,v) = −valence, M(v,v′) = #edges.
    pub fn subdivided_laplacian(&self) -> Matrix<Rationals> {
        let sub = subdivide(&self.graph, &self.chains);
        let n = sub.graph.vertex_count();
        let f = Rationals;
        let mut m = Matrix::zeros(&f, n, n);
        for e in sub.graph.edges() {
            for (a, b) in [(e.tail, e.head), (e.head, e.tail)] {
                let v = f.add(m.get(a, b), &f.one());
                m.set(a, b, v);
                let d = f.sub(m.get(a, a), &f.one());
                m.set(a, a, d);
            }
        }
        m
    }

    /// Whether the kernel of the subdivided Laplacian is exactly span(1, …, 1).
    pub fn laplacian_kernel_check(&self) -> bool {
        let m = self.subdivided_laplacian();
        let kernel = m.kernel();
        kernel.len() == 1 && kernel[0].iter().all(|x| *x == kernel[0][0])
    }

    /// A twist multiset taking `from` to `to`, if `to` lies in G(from).
    ///
    /// Solves the chip-firing system on the subdivided graph exactly, then confirms by
    /// applying the vertex twists.
    pub fn locate(&self, from: &AdmissibleMultidegree, to: &AdmissibleMultidegree) -> Result<TwistMultiset> {
        self.check(from)?;
        self.check(to)?;
        if from.total_degree() != to.total_degree() {
            return Err(Error::Unreachable("total degrees differ".into()));
        }
        let lap = self.subdivided_laplacian();
        let f = Rationals;
        let a = self.lift_to_subdivision(from);
        let b = self.lift_to_subdivision(to);
        let n = lap.rows();
        // M = −L, so w_to = w_from + M x; fix x(0) = 0.
        let sys = Matrix::from_fn(&f, n, n, |i, j| {
            if j + 1 < n {
                lap.get(i, j + 1).clone()
            } else {
                f.from_i64(b[i] - a[i])
            }
        });
        let (red, pivots) = sys.rref();
        if pivots.last() == Some(&(n - 1)) {
            return Err(Error::Unreachable("no firing vector solves the chip-firing system".into()));
        }
        let mut x = vec![f.zero(); n];
        for (row, &p) in pivots.iter().enumerate() {
            x[p + 1] = red.get(row, n - 1).clone();
        }
        let mut counts = Vec::with_capacity(self.vertex_count());
        for xv in x.iter().take(self.vertex_count()) {
            if !xv.is_integer() {
                return Err(Error::Unreachable("firing vector is not integral".into()));
            }
            counts.push(i64::try_from(xv.to_integer()).map_err(|_| Error::Unreachable("firing count overflow".into()))?);
        }
        let m = TwistMultiset { counts }.normalize();
        if &self.apply(from, &m) != to {
            return Err(Error::Unreachable("target is not a twist of the source".into()));
        }
        Ok(m)
    }

    /// Same data with edge e reversed; markers are re-expressed from the new tail.
    pub fn reversed(&self, e: usize) -> ChainedGraph {
        ChainedGraph {
            graph: self.graph.reversed(e),
            chains: self.chains.clone(),
            collapsed: collapse(&self.graph.reversed(e)),
        }
    }

    /// A multidegree re-expressed for the graph with edge e reversed.
    pub fn reverse_marker(&self, w: &AdmissibleMultidegree, e: usize) -> AdmissibleMultidegree {
        let mut out = w.clone();
        let n = self.n(e);
        out.mu[e] = (n - w.mu[e]) % n;
        out
    }
}
