use rand::seq::SliceRandom;
use rand::Rng;

use crate::curves::{CurveInstance, DivisorSeq};
use crate::exactalg::{Field, Subspace};
use crate::graphs::{ChainStructure, DualGraph, Edge};
use crate::llseries::LLSCandidate;
use crate::multidegrees::{concentrate_negative, is_concentrated, AdmissibleMultidegree, ChainedGraph, ConcentratedTuple};
use crate::{Error, Result};

const ATTEMPTS: usize = 10_000;
const GLUE_ATTEMPTS: usize = 300;

/// Shape of randomly generated multitree instances.
#[derive(Clone, Debug)]
pub struct MultitreeParams {
    pub min_components: usize,
    pub max_components: usize,
    pub max_parallel: usize,
    pub max_chain: u32,
    pub max_degree: i64,
    /// Twists beyond the minimal number between adjacent members.
    pub max_extra_link: u32,
}

impl Default for MultitreeParams {
    fn default() -> Self {
        MultitreeParams { min_components: 3, max_components: 5, max_parallel: 2, max_chain: 3, max_degree: 3, max_extra_link: 1 }
    }
}

fn label_graph(k: usize, edges: Vec<Edge>) -> Result<DualGraph> {
    DualGraph::new((0..k).map(|i| format!("v{i}")).collect(), edges)
}

fn oriented<R: Rng + ?Sized>(rng: &mut R, a: usize, b: usize) -> Edge {
    if rng.random_bool(0.5) {
        Edge { tail: a, head: b }
    } else {
        Edge { tail: b, head: a }
    }
}

/// A random tree on k vertices whose edges are replaced by 1..=max_parallel parallel
/// edges of random orientation; no vertex has more than `max_valence` nodes.
pub fn random_multitree_graph<R: Rng + ?Sized>(rng: &mut R, k: usize, max_parallel: usize, max_valence: usize) -> Result<DualGraph> {
    for _ in 0..ATTEMPTS {
        let mut edges = Vec::new();
        for v in 1..k {
            let parent = rng.random_range(0..v);
            for _ in 0..rng.random_range(1..=max_parallel) {
                edges.push(oriented(rng, parent, v));
            }
        }
        let g = label_graph(k, edges)?;
        if (0..k).all(|v| g.incident(v).len() <= max_valence) {
            return Ok(g);
        }
    }
    Err(Error::Budget(format!("no multitree on {k} vertices with valence at most {max_valence}")))
}

/// A random connected loop-free multigraph: a random spanning tree plus `extra` random
/// edges.
pub fn random_connected_graph<R: Rng + ?Sized>(rng: &mut R, k: usize, extra: usize, max_valence: usize) -> Result<DualGraph> {
    for _ in 0..ATTEMPTS {
        let mut edges = Vec::new();
        for v in 1..k {
            let parent = rng.random_range(0..v);
            edges.push(oriented(rng, parent, v));
        }
        if k >= 2 {
            for _ in 0..extra {
                let a = rng.random_range(0..k);
                let mut b = rng.random_range(0..k - 1);
                if b >= a {
                    b += 1;
                }
                edges.push(oriented(rng, a, b));
            }
        }
        let g = label_graph(k, edges)?;
        if (0..k).all(|v| g.incident(v).len() <= max_valence) {
            return Ok(g);
        }
    }
    Err(Error::Budget(format!("no connected graph on {k} vertices with valence at most {max_valence}")))
}

pub fn random_chains<R: Rng + ?Sized>(rng: &mut R, edges: usize, max_chain: u32) -> ChainStructure {
    ChainStructure::new((0..edges).map(|_| rng.random_range(1..=max_chain)).collect()).expect("positive chain lengths")
}

pub fn random_multidegree<R: Rng + ?Sized>(rng: &mut R, g: &ChainedGraph, weights: std::ops::RangeInclusive<i64>) -> AdmissibleMultidegree {
    AdmissibleMultidegree::new(
        (0..g.vertex_count()).map(|_| rng.random_range(weights.clone())).collect(),
        (0..g.edge_count()).map(|e| rng.random_range(0..g.n(e))).collect(),
    )
}

/// Distinct random coordinates for the nodes on every component.
pub fn random_points<F: Field, R: Rng + ?Sized>(rng: &mut R, field: &F, g: &DualGraph) -> Result<(Vec<F::Elem>, Vec<F::Elem>)> {
    let m = g.edge_count();
    let mut tails = vec![field.zero(); m];
    let mut heads = vec![field.zero(); m];
    for v in 0..g.vertex_count() {
        let inc = g.incident(v);
        let pts: Vec<F::Elem> = match field.elements() {
            Some(mut all) => {
                if all.len() < inc.len() {
                    return Err(Error::Invalid(format!("{} nodes on one component exceed the field size", inc.len())));
                }
                all.shuffle(rng);
                all.truncate(inc.len());
                all
            }
            None => {
                let mut out: Vec<F::Elem> = Vec::new();
                while out.len() < inc.len() {
                    let x = field.random(rng);
                    if !out.contains(&x) {
                        out.push(x);
                    }
                }
                out
            }
        };
        for (&e, p) in inc.iter().zip(pts) {
            if g.edge(e).tail == v {
                tails[e] = p;
            } else {
                heads[e] = p;
            }
        }
    }
    Ok((tails, heads))
}

/// Adjacent members from `root_member` outward: each neighbour is reached by the minimal
/// number of node twists making the parent negative plus up to `max_extra` more.
pub fn tuple_from_root<R: Rng + ?Sized>(
    rng: &mut R,
    g: &ChainedGraph,
    root: usize,
    root_member: AdmissibleMultidegree,
    max_extra: u32,
) -> Result<ConcentratedTuple> {
    let n = g.vertex_count();
    let col = g.collapsed();
    let mut members: Vec<Option<AdmissibleMultidegree>> = vec![None; n];
    members[root] = Some(root_member);
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for i in col.at(v) {
            let u = col.edge(i).other(v);
            if members[u].is_some() {
                continue;
            }
            let mut cur = members[v].clone().expect("visited");
            while cur.weights[v] >= 0 {
                cur = g.twist_pair(&cur, i, v)?;
            }
            for _ in 0..rng.random_range(0..=max_extra) {
                cur = g.twist_pair(&cur, i, v)?;
            }
            members[u] = Some(cur);
            queue.push_back(u);
        }
    }
    let t = ConcentratedTuple { members: members.into_iter().map(|m| m.expect("connected")).collect() };
    t.validate(g)?;
    Ok(t)
}

/// An independently generated concentrated tuple for w0 on a multitree: random root,
/// fully concentrated root member, random extra links.
pub fn random_tuple<R: Rng + ?Sized>(rng: &mut R, g: &ChainedGraph, w0: &AdmissibleMultidegree, max_extra: u32) -> Result<ConcentratedTuple> {
    if !g.is_multitree() {
        return Err(Error::NotMultitree);
    }
    let root = rng.random_range(0..g.vertex_count());
    let (member, _) = concentrate_negative(g, w0, root);
    tuple_from_root(rng, g, root, member, max_extra)
}

/// A random multitree instance with small component degrees whose tuple satisfies the
/// pairwise precondition; w0 is a random multidegree of \bar G.
pub fn random_multitree_instance<F: Field, R: Rng + ?Sized>(
    rng: &mut R,
    field: &F,
    params: &MultitreeParams,
) -> Result<CurveInstance<F>> {
    let max_valence = field.elements().map_or(usize::MAX, |e| e.len());
    for _ in 0..ATTEMPTS {
        let k = rng.random_range(params.min_components..=params.max_components);
        let graph = random_multitree_graph(rng, k, params.max_parallel, max_valence)?;
        let chains = random_chains(rng, graph.edge_count(), params.max_chain);
        let g = ChainedGraph::new(graph, chains)?;
        let root = rng.random_range(0..k);
        let mut w = random_multidegree(rng, &g, -2..=-1);
        w.weights[root] = rng.random_range(0..=params.max_degree);
        if is_concentrated(&g, &w, root).is_none() {
            continue;
        }
        let Ok(tuple) = tuple_from_root(rng, &g, root, w, params.max_extra_link) else { continue };
        if (0..k).any(|v| !(0..=params.max_degree).contains(&tuple.members[v].weights[v])) {
            continue;
        }
        let (tails, heads) = random_points(rng, field, g.graph())?;
        let lambda = (0..g.edge_count()).map(|_| field.random_nonzero(rng)).collect();
        let w0 = tuple.members[root].clone();
        let probe = CurveInstance::new(field.clone(), g, tails, heads, lambda, w0, tuple)?;
        if !probe.pairwise_ready()? {
            continue;
        }
        let bar = probe.bar_g()?;
        let w0 = bar[rng.random_range(0..bar.len())].w.clone();
        return probe.with_w0(w0);
    }
    Err(Error::Budget("no multitree instance within the attempt budget".into()))
}

/// A compact-type instance: a random tree with trivial chains, every member equal to d at
/// its own vertex and 0 elsewhere.
pub fn compact_type_instance<F: Field, R: Rng + ?Sized>(rng: &mut R, field: &F, k: usize, d: i64) -> Result<CurveInstance<F>> {
    let max_valence = field.elements().map_or(usize::MAX, |e| e.len());
    let graph = random_multitree_graph(rng, k, 1, max_valence)?;
    let m = graph.edge_count();
    let g = ChainedGraph::new(graph, ChainStructure::trivial(m))?;
    let members: Vec<AdmissibleMultidegree> = (0..k)
        .map(|v| AdmissibleMultidegree::new((0..k).map(|u| if u == v { d } else { 0 }).collect(), vec![0; m]))
        .collect();
    let (tails, heads) = random_points(rng, field, g.graph())?;
    let lambda = (0..m).map(|_| field.random_nonzero(rng)).collect();
    let w0 = members[0].clone();
    CurveInstance::new(field.clone(), g, tails, heads, lambda, w0, ConcentratedTuple { members })
}

/// A uniformly random k-dimensional subspace of F^n (k ≤ n).
pub fn random_subspace<F: Field, R: Rng + ?Sized>(rng: &mut R, field: &F, n: usize, k: usize) -> Subspace<F> {
    assert!(k <= n);
    loop {
        let rows: Vec<Vec<F::Elem>> = (0..k).map(|_| (0..n).map(|_| field.random(rng)).collect()).collect();
        let s = Subspace::span(field, n, rows);
        if s.dim() == k {
            return s;
        }
    }
}

/// Grows `base` to dimension k with random vectors.
fn pad<F: Field, R: Rng + ?Sized>(rng: &mut R, base: Subspace<F>, k: usize) -> Subspace<F> {
    let field = base.field().clone();
    let n = base.ambient_dim();
    let mut cur = base;
    while cur.dim() < k {
        let v: Vec<F::Elem> = (0..n).map(|_| field.random(rng)).collect();
        cur = cur.sum(&Subspace::span(&field, n, vec![v]));
    }
    cur
}

/// How random candidates are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateKind {
    /// Independent uniform subspaces.
    Uniform,
    /// Restrictions of a random (r+1)-dimensional space of global sections at a random
    /// multidegree of the window, padded randomly where they drop rank.
    Seeded,
    /// Built outward from a random root space so that every adjacent pair glues (multitrees).
    Glued,
    /// A glued candidate with one basis vector on one component replaced at random.
    Perturbed,
}

pub fn random_candidate<F: Field, R: Rng + ?Sized>(
    rng: &mut R,
    inst: &CurveInstance<F>,
    r: usize,
    kind: CandidateKind,
) -> Result<LLSCandidate<F>> {
    let field = inst.field();
    let nv = inst.skeleton().vertex_count();
    let lens: Vec<usize> = (0..nv).map(|v| (inst.component_degree(v) + 1).max(0) as usize).collect();
    if lens.iter().any(|&l| l < r + 1) {
        return Err(Error::Invalid(format!("some component has fewer than r+1 = {} sections", r + 1)));
    }
    let spaces = match kind {
        CandidateKind::Uniform => lens.iter().map(|&l| random_subspace(rng, field, l, r + 1)).collect(),
        CandidateKind::Seeded => {
            let locs = if inst.is_multitree() { inst.bar_g()? } else { inst.window(0)? };
            let loc = &locs[rng.random_range(0..locs.len())];
            let space = inst.section_space(loc)?;
            let k = (r + 1).min(space.dim());
            let coords = random_subspace(rng, field, space.dim(), k);
            (0..nv)
                .map(|v| {
                    let rm = space.restrict_matrix(v);
                    let imgs: Vec<Vec<F::Elem>> = coords.basis().iter().map(|c| rm.mul_vec(c)).collect();
                    pad(rng, Subspace::span(field, lens[v], imgs), r + 1)
                })
                .collect()
        }
        CandidateKind::Glued | CandidateKind::Perturbed => {
            let mut spaces = glued_spaces(rng, inst, r)?;
            if kind == CandidateKind::Perturbed {
                let v = rng.random_range(0..nv);
                let mut basis = spaces[v].basis().to_vec();
                let k = rng.random_range(0..basis.len());
                basis[k] = (0..lens[v]).map(|_| field.random(rng)).collect();
                let s = Subspace::span(field, lens[v], basis);
                spaces[v] = pad(rng, s, r + 1);
            }
            spaces
        }
    };
    LLSCandidate::from_subspaces(inst, r, spaces)
}

/// Index of the last divisor of the sequence on which s vanishes.
fn vanishing_index<F: Field>(inst: &CurveInstance<F>, s: &[F::Elem], seq: &DivisorSeq, v: usize) -> usize {
    let line = Subspace::span(inst.field(), s.len(), vec![s.to_vec()]);
    (0..seq.steps.len()).take_while(|&i| inst.vanishing_on(&line, seq, v, i).dim() == 1).last().unwrap_or(0)
}

/// Restricts `space` to sections vanishing on D_k along each collapsed edge at v other
/// than `skip`, with k random among the depths that leave a nonzero space.
fn deepen<F: Field, R: Rng + ?Sized>(
    rng: &mut R,
    inst: &CurveInstance<F>,
    mut space: Subspace<F>,
    v: usize,
    skip: Option<usize>,
) -> Result<Subspace<F>> {
    let mut edges: Vec<usize> = inst.skeleton().collapsed().at(v).into_iter().filter(|&i| Some(i) != skip).collect();
    edges.shuffle(rng);
    for i in edges {
        let seq = inst.divisor_sequence(i, v)?;
        let options: Vec<Subspace<F>> =
            (0..seq.steps.len()).map(|k| inst.vanishing_on(&space, &seq, v, k)).filter(|s| s.dim() > 0).collect();
        if options.is_empty() {
            return Ok(Subspace::zero(inst.field(), space.ambient_dim()));
        }
        space = options[rng.random_range(0..options.len())].clone();
    }
    Ok(space)
}

fn random_nonzero_in<F: Field, R: Rng + ?Sized>(rng: &mut R, space: &Subspace<F>) -> Option<Vec<F::Elem>> {
    let field = space.field();
    if space.dim() == 0 {
        return None;
    }
    loop {
        let c: Vec<F::Elem> = (0..space.dim()).map(|_| field.random(rng)).collect();
        if c.iter().any(|x| !field.is_zero(x)) {
            return Some(crate::exactalg::combine(field, space.ambient_dim(), &c, space.basis()));
        }
    }
}

/// Spaces chosen breadth first from a random root space: across each collapsed edge, the
/// ℓ-th adapted section s on the known side (vanishing exactly through D_j) is matched by
/// a random section on the new side that vanishes on D′_(b−j) and whose leading values
/// there are proportional to those of s. Sections vanish to random depths along the
/// edges still to be glued.
fn glued_spaces<F: Field, R: Rng + ?Sized>(rng: &mut R, inst: &CurveInstance<F>, r: usize) -> Result<Vec<Subspace<F>>> {
    if !inst.is_multitree() {
        return Err(Error::NotMultitree);
    }
    let field = inst.field();
    let nv = inst.skeleton().vertex_count();
    let col = inst.skeleton().collapsed();
    let tree = inst.tree().expect("multitree");
    let len = |v: usize| (inst.component_degree(v) + 1).max(0) as usize;
    'attempt: for _ in 0..GLUE_ATTEMPTS {
        let root = rng.random_range(0..nv);
        let mut spaces: Vec<Option<Subspace<F>>> = vec![None; nv];
        let mut rows = Vec::new();
        for _ in 0..=r {
            let room = deepen(rng, inst, Subspace::full(field, len(root)), root, None)?;
            match random_nonzero_in(rng, &room) {
                Some(x) => rows.push(x),
                None => continue 'attempt,
            }
        }
        let span = Subspace::span(field, len(root), rows);
        if span.dim() != r + 1 {
            continue 'attempt;
        }
        spaces[root] = Some(span);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for i in col.at(v) {
                let u = col.edge(i).other(v);
                if spaces[u].is_some() {
                    continue;
                }
                let b = tree.link(i) as usize;
                let (seq_v, seq_u) = (inst.divisor_sequence(i, v)?, inst.divisor_sequence(i, u)?);
                let pts_v = inst.sequence_points(&seq_v, v);
                let full_u = Subspace::full(field, len(u));
                let mut chosen: Vec<Vec<F::Elem>> = Vec::new();
                for s in crate::llseries::adapted_basis(spaces[v].as_ref().expect("visited"), &pts_v, &seq_v) {
                    let j = vanishing_index(inst, &s, &seq_v, v);
                    let ju = b - j.min(b);
                    let lead = Subspace::span(field, seq_v.support_step(j).len(), vec![inst.jet_map_for(&seq_v, v, j).mul_vec(&s)]);
                    let room = inst.vanishing_on(&full_u, &seq_u, u, ju);
                    let admissible = room.intersect(&lead.preimage(&inst.jet_map_for(&seq_u, u, ju)));
                    let admissible = deepen(rng, inst, admissible, u, Some(i))?;
                    match random_nonzero_in(rng, &admissible) {
                        Some(x) => chosen.push(x),
                        None => continue 'attempt,
                    }
                }
                let span = Subspace::span(field, len(u), chosen);
                if span.dim() != r + 1 {
                    continue 'attempt;
                }
                spaces[u] = Some(span);
                queue.push_back(u);
            }
        }
        return Ok(spaces.into_iter().map(|s| s.expect("connected")).collect());
    }
    Err(Error::Budget("no glued candidate within the attempt budget".into()))
}
