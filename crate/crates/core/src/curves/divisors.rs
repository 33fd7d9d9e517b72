use super::CurveInstance;
use crate::exactalg::{Field, Matrix, Subspace};
use crate::{Error, Result};

/// D_0 ≤ D_1 ≤ … ≤ D_{b+1} supported on the nodes over one collapsed edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorSeq {
    /// Edge indices of the nodes, in increasing order.
    pub edges: Vec<usize>,
    /// steps[i][k] is the multiplicity of edges[k] in D_i.
    pub steps: Vec<Vec<u32>>,
}

impl DivisorSeq {
    pub fn new(edges: Vec<usize>, steps: Vec<Vec<u32>>) -> Result<Self> {
        if steps.is_empty() || steps[0].iter().any(|&m| m != 0) {
            return Err(Error::Invalid("a divisor sequence starts at D_0 = 0".into()));
        }
        for w in steps.windows(2) {
            if w[0].len() != edges.len() || w[1].len() != edges.len() {
                return Err(Error::Invalid("divisor multiplicities must cover every node".into()));
            }
            if w[0].iter().zip(&w[1]).any(|(a, b)| b < a || b - a > 1) {
                return Err(Error::Invalid("each step adds multiplicity at most one per node".into()));
            }
        }
        Ok(DivisorSeq { edges, steps })
    }

    /// The sequence whose step i adds node k exactly when positions[k] + i ≡ 0 mod n[k].
    pub fn from_positions(edges: Vec<usize>, positions: &[u32], n: &[u32], b: u32) -> Self {
        let mut steps = vec![vec![0u32; edges.len()]];
        for i in 0..=b {
            let prev = steps.last().expect("nonempty").clone();
            let next = prev
                .iter()
                .enumerate()
                .map(|(k, &m)| m + u32::from((positions[k] + i) % n[k] == 0))
                .collect();
            steps.push(next);
        }
        DivisorSeq { edges, steps }
    }

    /// b, so that the sequence runs D_0..D_{b+1}.
    pub fn b(&self) -> usize {
        self.steps.len() - 2
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.steps[i].iter().sum()
    }

    /// Nodes (positions into `edges`) in supp(D_{j+1} − D_j).
    pub fn support_step(&self, j: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&k| self.steps[j + 1][k] != self.steps[j][k]).collect()
    }

    pub fn is_critical(&self, j: usize) -> bool {
        self.steps[j + 1] != self.steps[j]
    }
}

/// Indices j in 0..=b with D_{j+1} ≠ D_j.
pub fn critical_indices(seq: &DivisorSeq) -> Vec<usize> {
    (0..seq.steps.len() - 1).filter(|&j| seq.is_critical(j)).collect()
}

/// The functional on coefficient vectors of length `len` giving the Taylor coefficient of
/// order `order` at `point`.
pub fn jet_functional<F: Field>(field: &F, len: usize, point: &F::Elem, order: usize) -> Vec<F::Elem> {
    let mut out = vec![field.zero(); len];
    if order >= len {
        return out;
    }
    let mut row = vec![field.one()];
    let mut binom = Vec::with_capacity(len);
    for j in 0..len {
        binom.push(row.get(order).cloned().unwrap_or_else(|| field.zero()));
        let mut next = vec![field.one(); j + 2];
        for k in 1..=j {
            next[k] = field.add(&row[k - 1], &row[k]);
        }
        row = next;
    }
    let mut pk = field.one();
    for (j, slot) in out.iter_mut().enumerate().skip(order) {
        *slot = field.mul(&binom[j], &pk);
        pk = field.mul(&pk, point);
    }
    out
}

/// V(−D): the sections in V vanishing to order mults[k] at points[k].
pub fn subspace_vanishing<F: Field>(v: &Subspace<F>, points: &[F::Elem], mults: &[u32]) -> Subspace<F> {
    let field = v.field();
    let len = v.ambient_dim();
    let mut functionals = Vec::new();
    for (p, &m) in points.iter().zip(mults) {
        for k in 0..m as usize {
            functionals.push(jet_functional(field, len, p, k));
        }
    }
    if functionals.is_empty() {
        return v.clone();
    }
    let j = Matrix::from_rows(field, len, functionals).expect("functionals have ambient length");
    v.intersect(&Subspace::span(field, len, j.kernel()))
}

impl<F: Field> CurveInstance<F> {
    /// D^{(ē,v)}_• on Z_v.
    pub fn divisor_sequence(&self, ebar: usize, v: usize) -> Result<DivisorSeq> {
        let tree = self.tree().ok_or(Error::NotMultitree)?;
        let sk = self.skeleton();
        let coll = sk.collapsed();
        if !coll.edge(ebar).touches(v) {
            return Err(Error::Invalid(format!("vertex {} is not on the collapsed edge {ebar}", sk.graph().label(v))));
        }
        let edges = coll.edge(ebar).parallel.clone();
        let member = &self.tuple().members[v];
        let positions: Vec<u32> = edges.iter().map(|&e| sk.position_from(member, e, v)).collect();
        let n: Vec<u32> = edges.iter().map(|&e| sk.n(e)).collect();
        Ok(DivisorSeq::from_positions(edges, &positions, &n, tree.link(ebar)))
    }

    /// Whether deg D_(b+1) exceeds deg ℒ^v on both sides of every collapsed edge, as the
    /// vanishing conditions require.
    pub fn pairwise_ready(&self) -> Result<bool> {
        let coll = self.skeleton().collapsed();
        for (i, se) in coll.edges().iter().enumerate() {
            for v in [se.a, se.b] {
                let seq = self.divisor_sequence(i, v)?;
                if seq.degree(seq.steps.len() - 1) as i64 <= self.component_degree(v) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Coordinates on Z_v of the nodes of a divisor sequence.
    pub fn sequence_points(&self, seq: &DivisorSeq, v: usize) -> Vec<F::Elem> {
        seq.edges.iter().map(|&e| self.point(e, v).clone()).collect()
    }

    /// V(−D_i) for a subspace V of Γ(Z_v, ℒ^v).
    pub fn vanishing_on(&self, v_space: &Subspace<F>, seq: &DivisorSeq, v: usize, i: usize) -> Subspace<F> {
        subspace_vanishing(v_space, &self.sequence_points(seq, v), &seq.steps[i])
    }

    /// φ_j: sections of ℒ^v(−D_j) to their leading values at the nodes added in step j,
    /// in the frame of w0 and scaled by λ on the tail side.
    pub fn jet_map(&self, ebar: usize, v: usize, j: usize) -> Result<Matrix<F>> {
        let seq = self.divisor_sequence(ebar, v)?;
        if j > seq.b() {
            return Err(Error::Invalid(format!("step {j} is beyond b = {}", seq.b())));
        }
        Ok(self.jet_map_for(&seq, v, j))
    }

    /// φ_j for an explicit sequence on Z_v.
    pub fn jet_map_for(&self, seq: &DivisorSeq, v: usize, j: usize) -> Matrix<F> {
        let field = self.field();
        let len = (self.component_degree(v) + 1).max(0) as usize;
        let rows: Vec<Vec<F::Elem>> = seq
            .support_step(j)
            .into_iter()
            .map(|k| {
                let e = seq.edges[k];
                let s = self.field().mul(&self.side_scalar(e, v), &self.frame_factor(e, v));
                jet_functional(field, len, self.point(e, v), seq.steps[j][k] as usize)
                    .iter()
                    .map(|c| field.mul(&s, c))
                    .collect()
            })
            .collect();
        Matrix::from_rows(field, len, rows).expect("rows have component length")
    }
}
