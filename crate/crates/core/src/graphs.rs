//! Dual graphs of nodal curves: directed loop-free multigraphs with stable edge indices,
//! chain structures, subdivision, and the collapsed graph used to detect multitrees.

use std::collections::VecDeque;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    labels: Vec<String>,
    edges: Vec<Edge>,
    incidence: Vec<Vec<usize>>,
}

impl DualGraph {
    /// Builds and validates a graph.
    pub fn new(labels: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let g = Self::new_unchecked(labels, edges)?;
        g.validate()?;
        Ok(g)
    }

    /// Builds a graph checking only that endpoints exist.
    pub fn new_unchecked(labels: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let n = labels.len();
        let mut incidence = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            if e.tail >= n || e.head >= n {
                return Err(Error::Invalid(format!("edge {i} has an endpoint outside the vertex list")));
            }
            incidence[e.tail].push(i);
            if e.head != e.tail {
                incidence[e.head].push(i);
            }
        }
        Ok(DualGraph { labels, edges, incidence })
    }

    /// Graph on vertices named "v0", "v1", ... from (tail, head) pairs.
    pub fn from_pairs(vertex_count: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let labels = (0..vertex_count).map(|i| format!("v{i}")).collect();
        Self::new(labels, pairs.iter().map(|&(tail, head)| Edge { tail, head }).collect())
    }

    /// Accepts iff the graph is nonempty, loop-free and connected.
    pub fn validate(&self) -> Result<()> {
        if self.labels.is_empty() {
            return Err(Error::Invalid("graph has no vertices".into()));
        }
        for (i, l) in self.labels.iter().enumerate() {
            if self.labels[..i].contains(l) {
                return Err(Error::Invalid(format!("duplicate vertex label {l:?}")));
            }
        }
        if let Some(i) = self.edges.iter().position(|e| e.tail == e.head) {
            return Err(Error::Invalid(format!(
                "edge {i} is a loop at vertex {:?}",
                self.labels[self.edges[i].tail]
            )));
        }
        let dist = self.distances_from(0);
        let unreached: Vec<&str> =
            (0..self.vertex_count()).filter(|&v| dist[v].is_none()).map(|v| self.labels[v].as_str()).collect();
        if !unreached.is_empty() {
            return Err(Error::Invalid(format!("graph is disconnected; unreachable vertices {unreached:?}")));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }
    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Edges incident to v, in index order.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    /// +1 if v is the tail of e, −1 if the head, 0 otherwise.
    pub fn sigma(&self, e: usize, v: usize) -> i64 {
        let edge = self.edges[e];
        if edge.tail == v {
            1
        } else if edge.head == v {
            -1
        } else {
            0
        }
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let edge = self.edges[e];
        if edge.tail == v {
            edge.head
        } else {
            debug_assert_eq!(edge.head, v);
            edge.tail
        }
    }

    /// First Betti number |E| − |V| + 1.
    pub fn genus(&self) -> i64 {
        self.edge_count() as i64 - self.vertex_count() as i64 + 1
    }

    /// Same graph with edge e reversed.
    pub fn reversed(&self, e: usize) -> Self {
        let mut edges = self.edges.clone();
        edges[e] = Edge { tail: edges[e].head, head: edges[e].tail };
        Self::new_unchecked(self.labels.clone(), edges).expect("endpoints unchanged")
    }

    /// Graph distances from v (None if unreachable).
    pub fn distances_from(&self, v: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[v] = Some(0);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &e in &self.incidence[u] {
                let x = self.other_end(e, u);
                if dist[x].is_none() {
                    dist[x] = Some(du + 1);
                    queue.push_back(x);
                }
            }
        }
        dist
    }

    /// Whether the induced subgraph on `keep` is connected (and nonempty).
    pub fn induced_connected(&self, keep: &[bool]) -> bool {
        let Some(start) = keep.iter().position(|&k| k) else { return false };
        let mut seen = vec![false; self.vertex_count()];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &e in &self.incidence[u] {
                let x = self.other_end(e, u);
                if keep[x] && !seen[x] {
                    seen[x] = true;
                    stack.push(x);
                }
            }
        }
        keep.iter().zip(&seen).all(|(&k, &s)| !k || s)
    }
}

/// Length n(e) ≥ 1 of the rational chain inserted at each node.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainStructure(Vec<u32>);

impl ChainStructure {
    pub fn new(n: Vec<u32>) -> Result<Self> {
        if let Some(e) = n.iter().position(|&x| x == 0) {
            return Err(Error::Invalid(format!("chain length of edge {e} must be positive")));
        }
        Ok(ChainStructure(n))
    }

    pub fn trivial(edge_count: usize) -> Self {
        ChainStructure(vec![1; edge_count])
    }

    pub fn n(&self, e: usize) -> u32 {
        self.0[e]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&x| x == 1)
    }

    pub fn check_against(&self, g: &DualGraph) -> Result<()> {
        if self.0.len() != g.edge_count() {
            return Err(Error::Invalid(format!(
                "chain structure has {} entries for {} edges",
                self.0.len(),
                g.edge_count()
            )));
        }
        Ok(())
    }
}

/// A class of parallel edges between two vertices a < b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleEdge {
    pub a: usize,
    pub b: usize,
    pub parallel: Vec<usize>,
}

impl SimpleEdge {
    pub fn other(&self, v: usize) -> usize {
        if v == self.a {
            self.b
        } else {
            debug_assert_eq!(v, self.b);
            self.a
        }
    }

    pub fn touches(&self, v: usize) -> bool {
        v == self.a || v == self.b
    }
}

/// The graph obtained by collapsing parallel edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapsedGraph {
    vertex_count: usize,
    edges: Vec<SimpleEdge>,
    class_of: Vec<usize>,
}

impl CollapsedGraph {
    pub fn edges(&self) -> &[SimpleEdge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &SimpleEdge {
        &self.edges[i]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Index of the collapsed edge containing edge e of the original graph.
    pub fn class_of(&self, e: usize) -> usize {
        self.class_of[e]
    }

    pub fn between(&self, u: usize, v: usize) -> Option<usize> {
        let (a, b) = (u.min(v), u.max(v));
        self.edges.iter().position(|s| s.a == a && s.b == b)
    }

    /// Collapsed edges at v, in index order.
    pub fn at(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].touches(v)).collect()
    }

    /// Acyclic (for a connected graph: a tree).
    pub fn is_tree(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for s in &self.edges {
            let (ra, rb) = (find(&mut parent, s.a), find(&mut parent, s.b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }

    /// Membership mask of the component containing v after deleting collapsed edge `i`.
    pub fn side(&self, i: usize, v: usize) -> Vec<bool> {
        let mut mask = vec![false; self.vertex_count];
        mask[v] = true;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for (j, s) in self.edges.iter().enumerate() {
                if j == i || !s.touches(u) {
                    continue;
                }
                let x = s.other(u);
                if !mask[x] {
                    mask[x] = true;
                    stack.push(x);
                }
            }
        }
        mask
    }
}

pub fn collapse(g: &DualGraph) -> CollapsedGraph {
    let mut edges: Vec<SimpleEdge> = Vec::new();
    let mut class_of = Vec::with_capacity(g.edge_count());
    for (i, e) in g.edges().iter().enumerate() {
        let (a, b) = (e.tail.min(e.head), e.tail.max(e.head));
        let idx = match edges.iter().position(|s| s.a == a && s.b == b) {
            Some(k) => k,
            None => {
                edges.push(SimpleEdge { a, b, parallel: Vec::new() });
                edges.len() - 1
            }
        };
        edges[idx].parallel.push(i);
        class_of.push(idx);
    }
    CollapsedGraph { vertex_count: g.vertex_count(), edges, class_of }
}

pub fn is_multitree(g: &DualGraph) -> bool {
    collapse(g).is_tree()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexOrigin {
    Original(usize),
    /// The `position`-th new vertex on edge `edge`, counted from its tail (1-based).
    Exceptional { edge: usize, position: u32 },
}

/// Γ̃ together with the bookkeeping relating it to Γ.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub graph: DualGraph,
    pub origin: Vec<VertexOrigin>,
    /// For each edge of Γ, the vertices of Γ̃ along it from tail to head (inclusive).
    pub paths: Vec<Vec<usize>>,
}

impl Subdivision {
    /// Index in Γ̃ of the `position`-th new vertex over edge e (0 is the tail, n(e) the head).
    pub fn vertex_on(&self, e: usize, position: u32) -> usize {
        self.paths[e][position as usize]
    }
}

pub fn subdivide(g: &DualGraph, n: &ChainStructure) -> Subdivision {
    let mut labels: Vec<String> = g.labels().to_vec();
    let mut origin: Vec<VertexOrigin> = (0..g.vertex_count()).map(VertexOrigin::Original).collect();
    let mut edges = Vec::new();
    let mut paths = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        let mut path = vec![e.tail];
        for position in 1..n.n(i) {
            labels.push(format!("{}~{}", i, position));
            origin.push(VertexOrigin::Exceptional { edge: i, position });
            path.push(labels.len() - 1);
        }
        path.push(e.head);
        for w in path.windows(2) {
            edges.push(Edge { tail: w[0], head: w[1] });
        }
        paths.push(path);
    }
    let graph = DualGraph::new_unchecked(labels, edges).expect("subdivision endpoints exist");
    Subdivision { graph, origin, paths }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_examples() {
        assert!(DualGraph::from_pairs(2, &[(0, 1)]).is_ok());
        assert!(matches!(DualGraph::from_pairs(2, &[(0, 0)]), Err(Error::Invalid(m)) if m.contains("loop")));
        assert!(matches!(DualGraph::from_pairs(2, &[]), Err(Error::Invalid(m)) if m.contains("disconnected")));
    }

    #[test]
    fn multitree_examples() {
        let banana = DualGraph::from_pairs(2, &[(0, 1), (0, 1), (1, 0)]).unwrap();
        assert!(is_multitree(&banana));
        assert_eq!(collapse(&banana).edges().len(), 1);
        let triangle = DualGraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(!is_multitree(&triangle));
        let star = DualGraph::from_pairs(4, &[(0, 1), (0, 2), (3, 0)]).unwrap();
        assert!(is_multitree(&star));
    }

    #[test]
    fn subdivision_examples() {
        let g = DualGraph::from_pairs(2, &[(0, 1)]).unwrap();
        let s = subdivide(&g, &ChainStructure::trivial(1));
        assert_eq!(s.graph.edges(), g.edges());
        let s = subdivide(&g, &ChainStructure::new(vec![3]).unwrap());
        assert_eq!(s.graph.vertex_count(), 4);
        assert_eq!(s.paths[0], vec![0, 2, 3, 1]);
        assert_eq!(s.origin[3], VertexOrigin::Exceptional { edge: 0, position: 2 });
        let g = DualGraph::from_pairs(2, &[(0, 1), (0, 1)]).unwrap();
        let s = subdivide(&g, &ChainStructure::new(vec![2, 1]).unwrap());
        assert_eq!(s.graph.edge_count(), 3);
        assert_eq!(s.paths[1], vec![0, 1]);
    }

    #[test]
    fn sides_of_a_path() {
        let g = DualGraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        let c = collapse(&g);
        assert_eq!(c.side(0, 0), vec![true, false, false]);
        assert_eq!(c.side(0, 1), vec![false, true, true]);
    }
}
