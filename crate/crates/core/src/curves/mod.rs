//! Nodal curves with rational components and the line bundles ℒ_w on their chain
//! blow-ups.
//!
//! Sections on a component Z_v are written in the coordinates of ℒ^v = ℒ_{w_v}|_{Z_v}: a
//! section of ℒ_w on Z_v is a rational function ∏_e (x − p_{e,v})^{m_{e,v}(w)} · q_v with
//! deg q_v ≤ δ_v(w). In these coordinates the twist maps are inclusions (or zero on the
//! twisted components), and the gluing scalar λ_e enters only through the matching of
//! leading coefficients at nodes whose chain carries no degree. Leading coefficients are
//! taken in the frame of w0, so the bundle does not depend on the tuple.

mod divisors;
mod sections;

pub use divisors::{critical_indices, jet_functional, subspace_vanishing, DivisorSeq};
pub use sections::{SectionSpace, VanishingOrders};

use crate::exactalg::Field;
use crate::multidegrees::{AdmissibleMultidegree, ChainedGraph, ConcentratedTuple, TreeData, TwistMultiset};
use crate::{Error, Result};

/// A multidegree together with a twist multiset from the tuple's first member.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Located {
    pub w: AdmissibleMultidegree,
    pub twists: TwistMultiset,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveInstance<F: Field> {
    field: F,
    skeleton: ChainedGraph,
    tail_points: Vec<F::Elem>,
    head_points: Vec<F::Elem>,
    lambda: Vec<F::Elem>,
    w0: AdmissibleMultidegree,
    tuple: ConcentratedTuple,
    tree: Option<TreeData>,
    offsets: Vec<TwistMultiset>,
    base_offset: TwistMultiset,
    extra: Vec<i64>,
}

impl<F: Field> CurveInstance<F> {
    /// Validates node coordinates, gluing scalars and the tuple.
    pub fn new(
        field: F,
        skeleton: ChainedGraph,
        tail_points: Vec<F::Elem>,
        head_points: Vec<F::Elem>,
        lambda: Vec<F::Elem>,
        w0: AdmissibleMultidegree,
        tuple: ConcentratedTuple,
    ) -> Result<Self> {
        let m = skeleton.edge_count();
        if tail_points.len() != m || head_points.len() != m || lambda.len() != m {
            return Err(Error::Invalid("node data must have one entry per edge".into()));
        }
        if let Some(e) = lambda.iter().position(|l| field.is_zero(l)) {
            return Err(Error::Invalid(format!("gluing scalar of edge {e} is zero")));
        }
        skeleton.check(&w0)?;
        let graph = skeleton.graph();
        for v in 0..graph.vertex_count() {
            let pts: Vec<&F::Elem> = graph
                .incident(v)
                .iter()
                .map(|&e| if graph.edge(e).tail == v { &tail_points[e] } else { &head_points[e] })
                .collect();
            for i in 0..pts.len() {
                if pts[..i].contains(&pts[i]) {
                    return Err(Error::Invalid(format!(
                        "two nodes on component {:?} share the coordinate {}",
                        graph.label(v),
                        field.format(pts[i])
                    )));
                }
            }
        }
        let tree = tuple.validate(&skeleton)?;
        if tuple.members[0].total_degree() != w0.total_degree() {
            return Err(Error::Invalid("tuple members and w0 have different total degrees".into()));
        }
        let base_offset = skeleton
            .locate(&tuple.members[0], &w0)
            .map_err(|_| Error::Invalid("tuple members are not twists of w0".into()))?;
        let offsets = match &tree {
            Some(t) => t.offsets.clone(),
            None => (0..skeleton.vertex_count())
                .map(|v| skeleton.locate(&tuple.members[0], &tuple.members[v]))
                .collect::<Result<_>>()?,
        };
        let extra = vec![0; skeleton.vertex_count()];
        Ok(CurveInstance { field, skeleton, tail_points, head_points, lambda, w0, tuple, tree, offsets, base_offset, extra })
    }

    /// Same curve and bundle twisted by an effective divisor of degree extra[v] at the
    /// point at infinity of each component.
    pub fn with_extra_degree(&self, extra: &[i64]) -> Result<Self> {
        if extra.len() != self.skeleton.vertex_count() || extra.iter().any(|&x| x < 0) {
            return Err(Error::Invalid("extra degree needs one nonnegative entry per component".into()));
        }
        let mut out = self.clone();
        out.extra = extra.to_vec();
        Ok(out)
    }

    /// The same data with another base multidegree (a twist of the members).
    pub fn with_w0(&self, w0: AdmissibleMultidegree) -> Result<Self> {
        Self::new(
            self.field.clone(),
            self.skeleton.clone(),
            self.tail_points.clone(),
            self.head_points.clone(),
            self.lambda.clone(),
            w0,
            self.tuple.clone(),
        )
        .and_then(|c| c.with_extra_degree(&self.extra))
    }

    /// The same data with another concentrated tuple.
    pub fn with_tuple(&self, tuple: ConcentratedTuple) -> Result<Self> {
        Self::new(
            self.field.clone(),
            self.skeleton.clone(),
            self.tail_points.clone(),
            self.head_points.clone(),
            self.lambda.clone(),
            self.w0.clone(),
            tuple,
        )
        .and_then(|c| c.with_extra_degree(&self.extra))
    }

    /// The same data with new gluing scalars.
    pub fn with_lambda(&self, lambda: Vec<F::Elem>) -> Result<Self> {
        Self::new(
            self.field.clone(),
            self.skeleton.clone(),
            self.tail_points.clone(),
            self.head_points.clone(),
            lambda,
            self.w0.clone(),
            self.tuple.clone(),
        )
        .and_then(|c| c.with_extra_degree(&self.extra))
    }

    /// The same curve with edge e's orientation reversed: node coordinates swap sides,
    /// markers are re-expressed, and λ_e is inverted.
    pub fn with_reversed_edge(&self, e: usize) -> Result<Self> {
        let sk = &self.skeleton;
        let mut tails = self.tail_points.clone();
        let mut heads = self.head_points.clone();
        std::mem::swap(&mut tails[e], &mut heads[e]);
        let mut lambda = self.lambda.clone();
        lambda[e] = self.field.inv(&lambda[e]).expect("nonzero gluing scalar");
        let tuple = ConcentratedTuple { members: self.tuple.members.iter().map(|w| sk.reverse_marker(w, e)).collect() };
        Self::new(self.field.clone(), sk.reversed(e), tails, heads, lambda, sk.reverse_marker(&self.w0, e), tuple)
            .and_then(|c| c.with_extra_degree(&self.extra))
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn skeleton(&self) -> &ChainedGraph {
        &self.skeleton
    }
    pub fn w0(&self) -> &AdmissibleMultidegree {
        &self.w0
    }
    pub fn tuple(&self) -> &ConcentratedTuple {
        &self.tuple
    }
    pub fn tree(&self) -> Option<&TreeData> {
        self.tree.as_ref()
    }
    pub fn lambda(&self, e: usize) -> &F::Elem {
        &self.lambda[e]
    }
    pub fn lambdas(&self) -> &[F::Elem] {
        &self.lambda
    }
    pub fn tail_points(&self) -> &[F::Elem] {
        &self.tail_points
    }
    pub fn head_points(&self) -> &[F::Elem] {
        &self.head_points
    }
    pub fn extra_degree(&self) -> &[i64] {
        &self.extra
    }

    /// Coordinate on Z_v of the node of edge e.
    pub fn point(&self, e: usize, v: usize) -> &F::Elem {
        let edge = self.skeleton.graph().edge(e);
        if edge.tail == v {
            &self.tail_points[e]
        } else {
            debug_assert_eq!(edge.head, v);
            &self.head_points[e]
        }
    }

    /// Gluing scalar seen from v: λ_e on the tail side, 1 on the head side.
    pub fn side_scalar(&self, e: usize, v: usize) -> F::Elem {
        if self.skeleton.graph().edge(e).tail == v {
            self.lambda[e].clone()
        } else {
            self.field.one()
        }
    }

    /// deg ℒ^v = δ_v(w_v), raised by the extra degree.
    pub fn component_degree(&self, v: usize) -> i64 {
        self.tuple.members[v].weights[v] + self.extra[v]
    }

    /// Total degree of ℒ (including any extra degree).
    pub fn total_degree(&self) -> i64 {
        self.w0.total_degree() + self.extra.iter().sum::<i64>()
    }

    pub fn genus(&self) -> i64 {
        self.skeleton.graph().genus()
    }

    pub fn is_multitree(&self) -> bool {
        self.skeleton.is_multitree()
    }

    /// Twist multiset from w_0's tuple member 0 to the member at v.
    pub fn member_offset(&self, v: usize) -> &TwistMultiset {
        &self.offsets[v]
    }

    /// Twist multiset from member 0 to w0.
    pub fn base_offset(&self) -> &TwistMultiset {
        &self.base_offset
    }

    pub fn member(&self, v: usize) -> Located {
        Located { w: self.tuple.members[v].clone(), twists: self.offsets[v].clone() }
    }

    /// Places an arbitrary multidegree relative to the tuple.
    pub fn locate(&self, w: &AdmissibleMultidegree) -> Result<Located> {
        let twists = self.skeleton.locate(&self.tuple.members[0], w)?;
        Ok(Located { w: w.clone(), twists })
    }

    /// Twist at a vertex, tracking the multiset.
    pub fn twist(&self, loc: &Located, v: usize) -> Located {
        let mut twists = loc.twists.clone();
        twists.counts[v] += 1;
        Located { w: self.skeleton.twist(&loc.w, v), twists: twists.normalize() }
    }

    /// Negative twist at a vertex, tracking the multiset.
    pub fn negative_twist(&self, loc: &Located, v: usize) -> Located {
        let mut twists = loc.twists.clone();
        twists.counts[v] -= 1;
        Located { w: self.skeleton.negative_twist(&loc.w, v), twists: twists.normalize() }
    }

    /// Whether the minimal path from w to w_v avoids twisting at v, so that restriction to
    /// Z_v is an inclusion rather than zero.
    pub fn restriction_survives(&self, loc: &Located, v: usize) -> bool {
        let delta = loc.twists.minus(&self.offsets[v]);
        let max = delta.counts.iter().copied().max().unwrap_or(0);
        delta.counts[v] == max
    }

    /// Multidegrees of the tree between adjacent members.
    pub fn bar_g(&self) -> Result<Vec<Located>> {
        let bg = self.tuple.bar_g(&self.skeleton)?;
        Ok(bg.nodes.into_iter().map(|n| Located { w: n.w, twists: n.twists }).collect())
    }

    /// The starting set (\bar G on multitrees, the members otherwise) enlarged by every
    /// multidegree within `radius` positive or negative vertex twists.
    pub fn window(&self, radius: usize) -> Result<Vec<Located>> {
        let mut seen: Vec<Located> = if self.is_multitree() {
            self.bar_g()?
        } else {
            let mut v: Vec<Located> = Vec::new();
            for u in 0..self.skeleton.vertex_count() {
                let m = self.member(u);
                if !v.contains(&m) {
                    v.push(m);
                }
            }
            v
        };
        let mut index: std::collections::HashSet<AdmissibleMultidegree> = seen.iter().map(|l| l.w.clone()).collect();
        let mut frontier = seen.clone();
        for _ in 0..radius {
            let mut next = Vec::new();
            for loc in &frontier {
                for v in 0..self.skeleton.vertex_count() {
                    for cand in [self.twist(loc, v), self.negative_twist(loc, v)] {
                        if index.insert(cand.w.clone()) {
                            next.push(cand);
                        }
                    }
                }
            }
            seen.extend(next.iter().cloned());
            frontier = next;
        }
        Ok(seen)
    }

    /// ρ = g + (r+1)(d − r − g) for the base degree.
    pub fn rho(&self, r: i64) -> i64 {
        let g = self.genus();
        let d = self.w0.total_degree();
        g + (r + 1) * (d - r - g)
    }
}
