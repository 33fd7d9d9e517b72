use std::collections::HashMap;

use super::{concentrate_negative, is_concentrated, AdmissibleMultidegree, ChainedGraph, TwistMultiset};
use crate::graphs::{ChainStructure, DualGraph, Edge};
use crate::{Error, Result};

/// One multidegree w_v per vertex, each meant to be concentrated at its vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcentratedTuple {
    pub members: Vec<AdmissibleMultidegree>,
}

/// Link counts of a valid tuple on a multitree, and where each member sits relative to
/// member 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeData {
    /// For collapsed edge ē = {a < b}: the number of (ē, a)-twists taking w_a to w_b.
    pub b: Vec<u32>,
    /// Twist multiset from w_0 to w_v for every v.
    pub offsets: Vec<TwistMultiset>,
}

impl TreeData {
    /// b_{v,v′} for the collapsed edge between them (symmetric).
    pub fn link(&self, ebar: usize) -> u32 {
        self.b[ebar]
    }
}

impl ConcentratedTuple {
    /// Checks that every member is concentrated at its vertex and, on multitrees, that
    /// adjacent members are related by nonnegatively many node twists.
    pub fn validate(&self, g: &ChainedGraph) -> Result<Option<TreeData>> {
        let n = g.vertex_count();
        if self.members.len() != n {
            return Err(Error::Invalid(format!("tuple has {} members for {} vertices", self.members.len(), n)));
        }
        for (v, w) in self.members.iter().enumerate() {
            g.check(w)?;
            if is_concentrated(g, w, v).is_none() {
                return Err(Error::Invalid(format!(
                    "tuple member for vertex {:?} is not concentrated there",
                    g.graph().label(v)
                )));
            }
        }
        if !g.is_multitree() {
            for v in 1..n {
                g.locate(&self.members[0], &self.members[v]).map_err(|_| {
                    Error::Invalid(format!(
                        "tuple member for vertex {:?} is not a twist of the first member",
                        g.graph().label(v)
                    ))
                })?;
            }
            return Ok(None);
        }
        let col = g.collapsed();
        let mut b = Vec::with_capacity(col.edges().len());
        for (i, se) in col.edges().iter().enumerate() {
            b.push(self.link_count(g, i, se.a, se.b)?);
        }
        let offsets = tree_offsets(g, &b);
        Ok(Some(TreeData { b, offsets }))
    }

    fn link_count(&self, g: &ChainedGraph, ebar: usize, a: usize, bv: usize) -> Result<u32> {
        let label = |v| g.graph().label(v).to_string();
        let (from, to) = (&self.members[a], &self.members[bv]);
        if let Some(k) = pair_twist_count(g, from, to, ebar, a)? {
            return Ok(k);
        }
        if pair_twist_count(g, from, to, ebar, bv)?.is_some() {
            return Err(Error::Invalid(format!(
                "member for {:?} needs twists at the node side of {:?} from member for {:?} (negative link count)",
                label(bv),
                label(bv),
                label(a)
            )));
        }
        Err(Error::Invalid(format!(
            "members for {:?} and {:?} are not related by twists at their common nodes",
            label(a),
            label(bv)
        )))
    }

    /// Deterministic tuple: the lexicographically smallest label is the root, and the tree
    /// is traversed breadth first with neighbours in label order. Every member is negative
    /// away from its vertex. Non-multitrees get an independent member per vertex.
    pub fn derive(g: &ChainedGraph, w0: &AdmissibleMultidegree) -> Result<ConcentratedTuple> {
        g.check(w0)?;
        let n = g.vertex_count();
        let labels = g.graph().labels();
        if !g.is_multitree() {
            let members = (0..n).map(|v| concentrate_negative(g, w0, v).0).collect();
            return Ok(ConcentratedTuple { members });
        }
        let root = (0..n).min_by(|&x, &y| labels[x].cmp(&labels[y])).expect("nonempty graph");
        let col = g.collapsed();
        let mut members: Vec<Option<AdmissibleMultidegree>> = vec![None; n];
        members[root] = Some(concentrate_negative(g, w0, root).0);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let mut nbrs: Vec<(usize, usize)> =
                col.at(v).into_iter().map(|i| (col.edge(i).other(v), i)).filter(|&(u, _)| members[u].is_none()).collect();
            nbrs.sort_by(|x, y| labels[x.0].cmp(&labels[y.0]));
            for (u, i) in nbrs {
                let mut cur = members[v].clone().unwrap();
                while cur.weights[v] >= 0 {
                    cur = g.twist_pair(&cur, i, v)?;
                }
                members[u] = Some(cur);
                queue.push_back(u);
            }
        }
        Ok(ConcentratedTuple { members: members.into_iter().map(Option::unwrap).collect() })
    }

    /// t_{(ē,v)}(w): net (ē,v)-twists in the minimal expression from w_v to w.
    pub fn t_ev(&self, g: &ChainedGraph, w: &AdmissibleMultidegree, ebar: usize, v: usize) -> Result<i64> {
        if !g.is_multitree() {
            return Err(Error::NotMultitree);
        }
        let other = g.collapsed().edge(ebar).other(v);
        let m = g.locate(&self.members[v], w)?;
        Ok(m.counts[v] - m.counts[other])
    }

    /// Enumerates the tree of multidegrees between adjacent members.
    pub fn bar_g(&self, g: &ChainedGraph) -> Result<BarG> {
        if !g.is_multitree() {
            return Err(Error::NotMultitree);
        }
        let tree = self.validate(g)?.expect("multitree");
        let col = g.collapsed();
        let mut nodes: Vec<BarGNode> = Vec::new();
        let mut index: HashMap<AdmissibleMultidegree, usize> = HashMap::new();
        let mut intern = |nodes: &mut Vec<BarGNode>, w: AdmissibleMultidegree, twists: TwistMultiset| -> usize {
            *index.entry(w.clone()).or_insert_with(|| {
                nodes.push(BarGNode { w, twists });
                nodes.len() - 1
            })
        };
        let member_idx: Vec<usize> = (0..g.vertex_count())
            .map(|v| intern(&mut nodes, self.members[v].clone(), tree.offsets[v].clone()))
            .collect();
        let mut edges = Vec::new();
        for (i, se) in col.edges().iter().enumerate() {
            let side = col.side(i, se.a);
            let mut prev = member_idx[se.a];
            let mut cur = self.members[se.a].clone();
            for t in 1..=tree.b[i] {
                cur = g.twist_pair(&cur, i, se.a)?;
                let idx = if t == tree.b[i] {
                    member_idx[se.b]
                } else {
                    let twists = tree.offsets[se.a].plus(&TwistMultiset::of_set(&side, t as i64)).normalize();
                    intern(&mut nodes, cur.clone(), twists)
                };
                edges.push(BarGEdge { from: prev, to: idx, ebar: i, at: se.a });
                edges.push(BarGEdge { from: idx, to: prev, ebar: i, at: se.b });
                prev = idx;
            }
        }
        Ok(BarG { nodes, edges, members: member_idx })
    }

    /// Restriction of w to the connected subcurve `keep`, twisting at the outer side of
    /// every boundary node first.
    pub fn restrict_multidegree(
        &self,
        g: &ChainedGraph,
        w: &AdmissibleMultidegree,
        keep: &[bool],
    ) -> Result<RestrictedMultidegree> {
        if !g.is_multitree() {
            return Err(Error::NotMultitree);
        }
        if !g.graph().induced_connected(keep) {
            return Err(Error::Invalid("subcurve is not connected".into()));
        }
        let col = g.collapsed();
        let mut cur = w.clone();
        for (i, se) in col.edges().iter().enumerate() {
            let (inside, outside) = match (keep[se.a], keep[se.b]) {
                (true, false) => (se.a, se.b),
                (false, true) => (se.b, se.a),
                _ => continue,
            };
            let t = self.t_ev(g, w, i, inside)?;
            let at = if t >= 0 { outside } else { inside };
            for _ in 0..t.unsigned_abs() {
                cur = g.twist_pair(&cur, i, at)?;
            }
        }
        Ok(naive_restriction(g, &cur, keep))
    }
}

/// Number of (ē, v)-twists taking `from` to `to`, if nonnegative.
pub(crate) fn pair_twist_count(
    g: &ChainedGraph,
    from: &AdmissibleMultidegree,
    to: &AdmissibleMultidegree,
    ebar: usize,
    v: usize,
) -> Result<Option<u32>> {
    let max_n = g.collapsed().edge(ebar).parallel.iter().map(|&e| g.n(e)).max().unwrap_or(1) as i64;
    let budget = (from.weights[v] - to.weights[v] + 2).max(1) * max_n;
    let mut cur = from.clone();
    for k in 0..=budget {
        if &cur == to {
            return Ok(Some(k as u32));
        }
        cur = g.twist_pair(&cur, ebar, v)?;
    }
    Ok(None)
}

fn tree_offsets(g: &ChainedGraph, b: &[u32]) -> Vec<TwistMultiset> {
    let n = g.vertex_count();
    let col = g.collapsed();
    let mut offsets: Vec<Option<TwistMultiset>> = vec![None; n];
    offsets[0] = Some(TwistMultiset::zero(n));
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        for i in col.at(v) {
            let u = col.edge(i).other(v);
            if offsets[u].is_some() {
                continue;
            }
            // w_u is b twists at (ē, a) from w_a, i.e. at every vertex on a's side.
            let se = col.edge(i);
            let side = col.side(i, se.a);
            let step = TwistMultiset::of_set(&side, b[i] as i64);
            let base = offsets[v].clone().unwrap();
            offsets[u] = Some(if v == se.a { base.plus(&step) } else { base.minus(&step) }.normalize());
            stack.push(u);
        }
    }
    offsets.into_iter().map(Option::unwrap).collect()
}

/// A multidegree on an induced subgraph with the index maps back to the full graph.
#[derive(Clone, Debug)]
pub struct RestrictedMultidegree {
    pub graph: ChainedGraph,
    pub w: AdmissibleMultidegree,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

pub fn naive_restriction(g: &ChainedGraph, w: &AdmissibleMultidegree, keep: &[bool]) -> RestrictedMultidegree {
    let vertices: Vec<usize> = (0..keep.len()).filter(|&v| keep[v]).collect();
    let pos = |v: usize| vertices.iter().position(|&x| x == v);
    let edges: Vec<usize> =
        (0..g.edge_count()).filter(|&e| keep[g.graph().edge(e).tail] && keep[g.graph().edge(e).head]).collect();
    let labels = vertices.iter().map(|&v| g.graph().label(v).to_string()).collect();
    let sub_edges = edges
        .iter()
        .map(|&e| {
            let ed = g.graph().edge(e);
            Edge { tail: pos(ed.tail).unwrap(), head: pos(ed.head).unwrap() }
        })
        .collect();
    let graph = DualGraph::new(labels, sub_edges).expect("connected induced subgraph");
    let chains = ChainStructure::new(edges.iter().map(|&e| g.n(e)).collect()).expect("positive lengths");
    let w = AdmissibleMultidegree::new(
        vertices.iter().map(|&v| w.weights[v]).collect(),
        edges.iter().map(|&e| w.mu[e]).collect(),
    );
    RestrictedMultidegree { graph: ChainedGraph::new(graph, chains).expect("valid subgraph"), w, vertices, edges }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarGNode {
    pub w: AdmissibleMultidegree,
    /// Twist multiset from member 0 (normalized).
    pub twists: TwistMultiset,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarGEdge {
    pub from: usize,
    pub to: usize,
    pub ebar: usize,
    /// The vertex v of the (ē, v)-twist taking `from` to `to`.
    pub at: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarG {
    pub nodes: Vec<BarGNode>,
    pub edges: Vec<BarGEdge>,
    /// Node index of each tuple member.
    pub members: Vec<usize>,
}
