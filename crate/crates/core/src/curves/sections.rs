use std::ops::Range;

use super::{CurveInstance, Located};
use crate::exactalg::{Field, Matrix, Poly, Subspace};
use crate::{Error, Result};

pub(crate) fn ceil_div(a: i64, n: i64) -> i64 {
    -((-a).div_euclid(n))
}

/// m_{e,v}(w) for both endpoints of every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingOrders {
    tail_vertex: Vec<usize>,
    pub tail: Vec<i64>,
    pub head: Vec<i64>,
    /// The same orders measured from w0 instead of w_v.
    pub base_tail: Vec<i64>,
    pub base_head: Vec<i64>,
}

impl VanishingOrders {
    pub fn get(&self, e: usize, v: usize) -> i64 {
        if self.tail_vertex[e] == v {
            self.tail[e]
        } else {
            self.head[e]
        }
    }

    pub fn base(&self, e: usize, v: usize) -> i64 {
        if self.tail_vertex[e] == v {
            self.base_tail[e]
        } else {
            self.base_head[e]
        }
    }
}

/// Number of multiples of n in [start, start + len), signed when len < 0.
fn multiples_in(start: i64, len: i64, n: i64) -> i64 {
    ceil_div(start + len, n) - ceil_div(start, n)
}

/// Γ(X̃₀, ℒ_w) as a subspace of ⊕_v F[x]_{≤δ_v(w)}, one coefficient block per component.
#[derive(Clone, Debug)]
pub struct SectionSpace<F: Field> {
    pub loc: Located,
    pub orders: VanishingOrders,
    pub blocks: Vec<Range<usize>>,
    pub ambient: usize,
    pub space: Subspace<F>,
    /// Map from the ambient coefficients to ℒ^v coefficients, absent when it is zero.
    pub restriction: Vec<Option<Matrix<F>>>,
    target_len: Vec<usize>,
}

impl<F: Field> SectionSpace<F> {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn basis(&self) -> &[Vec<F::Elem>] {
        self.space.basis()
    }

    /// The local polynomial q_v of an ambient vector.
    pub fn component<'a>(&self, vector: &'a [F::Elem], v: usize) -> &'a [F::Elem] {
        &vector[self.blocks[v].clone()]
    }

    /// Restriction to Z_v in ℒ^v coordinates, with columns indexed by the basis.
    pub fn restrict_matrix(&self, v: usize) -> Matrix<F> {
        let field = self.space.field();
        match &self.restriction[v] {
            None => Matrix::zeros(field, self.target_len[v], self.dim()),
            Some(r) => {
                let cols: Vec<Vec<F::Elem>> = self.basis().iter().map(|b| r.mul_vec(b)).collect();
                Matrix::from_fn(field, self.target_len[v], self.dim(), |i, j| cols[j][i].clone())
            }
        }
    }

    /// Sends an ambient vector of this space to basis coordinates of `target`, a space for
    /// the same multidegree with larger degree bounds, by padding every block with zeros.
    /// None when the padded vector is not a section of the target.
    pub fn embed_into(&self, target: &SectionSpace<F>, vector: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let field = self.space.field();
        let mut out = vec![field.zero(); target.ambient];
        for (from, to) in self.blocks.iter().zip(&target.blocks) {
            if from.len() > to.len() {
                return None;
            }
            out[to.start..to.start + from.len()].clone_from_slice(&vector[from.clone()]);
        }
        target.space.coordinates(&out)
    }

    pub fn restrict_vector(&self, vector: &[F::Elem], v: usize) -> Vec<F::Elem> {
        match &self.restriction[v] {
            None => vec![self.space.field().zero(); self.target_len[v]],
            Some(r) => r.mul_vec(vector),
        }
    }
}

impl<F: Field> CurveInstance<F> {
    pub fn vanishing_orders(&self, loc: &Located) -> VanishingOrders {
        let sk = self.skeleton();
        let graph = sk.graph();
        let m = graph.edge_count();
        let mut orders = [vec![0; m], vec![0; m], vec![0; m], vec![0; m]];
        let base_delta = loc.twists.minus(self.base_offset());
        for e in 0..m {
            let edge = graph.edge(e);
            let n = sk.n(e) as i64;
            for (side, v, y) in [(0, edge.tail, edge.head), (1, edge.head, edge.tail)] {
                let delta = loc.twists.minus(self.member_offset(v));
                let nu = sk.position_from(&self.tuple().members[v], e, v) as i64;
                orders[side][e] = multiples_in(nu, delta.counts[v] - delta.counts[y], n);
                let nu = sk.position_from(self.w0(), e, v) as i64;
                orders[2 + side][e] = multiples_in(nu, base_delta.counts[v] - base_delta.counts[y], n);
            }
        }
        let [tail, head, base_tail, base_head] = orders;
        VanishingOrders { tail_vertex: graph.edges().iter().map(|e| e.tail).collect(), tail, head, base_tail, base_head }
    }

    /// Ratio between leading values in the frame of w0 and in the frame of w_v at the node
    /// of e on Z_v: ∏_{f ≠ e} (p_e − p_f)^{m⁰_f(w_v)}.
    pub fn frame_factor(&self, e: usize, v: usize) -> F::Elem {
        let orders = self.vanishing_orders(&self.member(v));
        self.node_factor(&orders, e, v)
    }

    fn node_factor(&self, orders: &VanishingOrders, e: usize, v: usize) -> F::Elem {
        let field = self.field();
        let p = self.point(e, v);
        let mut kappa = field.one();
        for &f in self.skeleton().graph().incident(v) {
            if f == e {
                continue;
            }
            let k = orders.base(f, v);
            let diff = field.sub(p, self.point(f, v));
            kappa = field.mul(&kappa, &field.pow(&diff, k).expect("node points are distinct"));
        }
        kappa
    }

    /// The polynomial ∏_e (x − p_{e,v})^{m_e} over the edges at v.
    fn node_product(&self, orders: &VanishingOrders, v: usize) -> Result<Poly<F::Elem>> {
        let field = self.field();
        let mut p = Poly::constant(field, field.one());
        for &e in self.skeleton().graph().incident(v) {
            let m = orders.get(e, v);
            if m < 0 {
                return Err(Error::ModelInconsistency(format!("negative vanishing order on a surviving component {v}")));
            }
            p = p.mul(field, &Poly::linear_root(field, self.point(e, v)).pow(field, m as u32));
        }
        Ok(p)
    }

    /// Leading value at the node of e in the frame of w0, as a functional on the q_v block.
    fn lead_functional(&self, orders: &VanishingOrders, e: usize, v: usize, len: usize) -> Vec<F::Elem> {
        let field = self.field();
        let p = self.point(e, v);
        let mut out = Vec::with_capacity(len);
        let mut pk = self.node_factor(orders, e, v);
        for _ in 0..len {
            out.push(pk.clone());
            pk = field.mul(&pk, p);
        }
        out
    }

    pub fn section_space(&self, loc: &Located) -> Result<SectionSpace<F>> {
        let field = self.field();
        let sk = self.skeleton();
        let graph = sk.graph();
        let nv = graph.vertex_count();
        let orders = self.vanishing_orders(loc);
        let mut blocks = Vec::with_capacity(nv);
        let mut ambient = 0;
        for v in 0..nv {
            let total: i64 = loc.w.weights[v] + graph.incident(v).iter().map(|&e| orders.get(e, v)).sum::<i64>();
            if total != self.tuple().members[v].weights[v] {
                return Err(Error::ModelInconsistency(format!(
                    "degree bookkeeping fails on component {}: {} != {}",
                    graph.label(v),
                    total,
                    self.tuple().members[v].weights[v]
                )));
            }
            let len = (loc.w.weights[v] + self.extra_degree()[v] + 1).max(0) as usize;
            blocks.push(ambient..ambient + len);
            ambient += len;
        }
        let mut rows = Vec::new();
        for e in 0..graph.edge_count() {
            if loc.w.mu[e] != 0 {
                continue;
            }
            let edge = graph.edge(e);
            let mut row = vec![field.zero(); ambient];
            let lt = self.lead_functional(&orders, e, edge.tail, blocks[edge.tail].len());
            for (k, c) in lt.iter().enumerate() {
                row[blocks[edge.tail].start + k] = field.mul(self.lambda(e), c);
            }
            let lh = self.lead_functional(&orders, e, edge.head, blocks[edge.head].len());
            for (k, c) in lh.iter().enumerate() {
                row[blocks[edge.head].start + k] = field.neg(c);
            }
            rows.push(row);
        }
        let space = if rows.is_empty() {
            Subspace::full(field, ambient)
        } else {
            let cons = Matrix::from_rows(field, ambient, rows)?;
            Subspace::span(field, ambient, cons.kernel())
        };
        let mut restriction = Vec::with_capacity(nv);
        let mut target_len = Vec::with_capacity(nv);
        for v in 0..nv {
            let lv = (self.component_degree(v) + 1).max(0) as usize;
            target_len.push(lv);
            if !self.restriction_survives(loc, v) || blocks[v].is_empty() || lv == 0 {
                restriction.push(None);
                continue;
            }
            let prod = self.node_product(&orders, v)?;
            let pc = prod.coeffs();
            let block = blocks[v].clone();
            let r = Matrix::from_fn(field, lv, ambient, |i, j| {
                if !block.contains(&j) {
                    return field.zero();
                }
                let k = j - block.start;
                if i >= k && i - k < pc.len() {
                    pc[i - k].clone()
                } else {
                    field.zero()
                }
            });
            restriction.push(Some(r));
        }
        Ok(SectionSpace { loc: loc.clone(), orders, blocks, ambient, space, restriction, target_len })
    }

    /// The twist map along the whole multiset from `from` to `to` in one step, on ambient
    /// coefficients: zero on twisted components, re-expansion of the same rational function
    /// elsewhere.
    pub fn direct_twist_ambient(&self, from: &SectionSpace<F>, to: &SectionSpace<F>) -> Result<Matrix<F>> {
        let field = self.field();
        let graph = self.skeleton().graph();
        let c = to.loc.twists.minus(&from.loc.twists).normalize();
        let mut out = Matrix::zeros(field, to.ambient, from.ambient);
        for v in 0..graph.vertex_count() {
            if c.counts[v] != 0 || from.blocks[v].is_empty() {
                continue;
            }
            let mut mult = Poly::constant(field, field.one());
            for &e in graph.incident(v) {
                let k = from.orders.get(e, v) - to.orders.get(e, v);
                if k < 0 {
                    return Err(Error::ModelInconsistency(format!(
                        "twist map would introduce a pole on component {}",
                        graph.label(v)
                    )));
                }
                mult = mult.mul(field, &Poly::linear_root(field, self.point(e, v)).pow(field, k as u32));
            }
            let pc = mult.coeffs();
            let (fb, tb) = (from.blocks[v].clone(), to.blocks[v].clone());
            for k in 0..fb.len() {
                for (i, c) in pc.iter().enumerate() {
                    if k + i >= tb.len() {
                        if !field.is_zero(c) {
                            return Err(Error::ModelInconsistency("twist map exceeds the target degree".into()));
                        }
                        continue;
                    }
                    out.set(tb.start + k + i, fb.start + k, c.clone());
                }
            }
        }
        Ok(out)
    }

    /// Expresses an ambient map in basis coordinates, verifying that every image satisfies
    /// the target constraints.
    pub fn to_basis_map(&self, from: &SectionSpace<F>, to: &SectionSpace<F>, ambient_map: &Matrix<F>) -> Result<Matrix<F>> {
        let field = self.field();
        let mut cols = Vec::with_capacity(from.dim());
        for b in from.basis() {
            let img = ambient_map.mul_vec(b);
            let coords = to
                .space
                .coordinates(&img)
                .ok_or_else(|| Error::ModelInconsistency("twist map image violates the target constraints".into()))?;
            cols.push(coords);
        }
        Ok(Matrix::from_fn(field, to.dim(), from.dim(), |i, j| cols[j][i].clone()))
    }

    /// f_{w,w′} in basis coordinates, computed in one step.
    pub fn twist_map(&self, from: &SectionSpace<F>, to: &SectionSpace<F>) -> Result<Matrix<F>> {
        let a = self.direct_twist_ambient(from, to)?;
        self.to_basis_map(from, to, &a)
    }

    /// f_{w,w′} as the composite of single-vertex twist maps in the given order, with the
    /// endpoint's section space.
    pub fn twist_map_along(&self, from: &SectionSpace<F>, order: &[usize]) -> Result<(Matrix<F>, SectionSpace<F>)> {
        let mut cur = from.clone();
        let mut acc = Matrix::identity(self.field(), from.dim());
        for &u in order {
            let next = self.section_space(&self.twist(&cur.loc, u))?;
            let step = self.twist_map(&cur, &next)?;
            acc = step.mul(&acc);
            cur = next;
        }
        Ok((acc, cur))
    }

    /// Restriction Γ(ℒ_w) → Γ(Z_v, ℒ^v) in basis coordinates.
    pub fn restrict_to_component(&self, space: &SectionSpace<F>, v: usize) -> Matrix<F> {
        space.restrict_matrix(v)
    }
}
