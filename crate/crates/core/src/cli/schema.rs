use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::curves::CurveInstance;
use crate::exactalg::{Field, FieldSpec, Matrix, Subspace};
use crate::graphs::{ChainStructure, DualGraph, Edge};
use crate::linkedet::{FlagPair, LinkedChain};
use crate::llseries::LLSCandidate;
use crate::multidegrees::{AdmissibleMultidegree, ChainedGraph, ConcentratedTuple};
use crate::{Error, Result};

pub const INSTANCE_SCHEMA: &str = "nodal-lls/instance@1";
pub const CHAIN_SCHEMA: &str = "nodal-lls/chain@1";
pub const REPORT_SCHEMA: &str = "nodal-lls/report@1";

/// A field element written as an integer or a "num/den" string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    pub fn parse<F: Field>(&self, field: &F) -> Result<F::Elem> {
        match self {
            Scalar::Int(n) => Ok(field.from_i64(*n)),
            Scalar::Text(s) => field.parse(s),
        }
    }

    pub fn of<F: Field>(field: &F, x: &F::Elem) -> Self {
        Scalar::Text(field.format(x))
    }
}

fn one() -> Scalar {
    Scalar::Int(1)
}

fn trivial_chain() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub tail: String,
    pub head: String,
    #[serde(default = "trivial_chain")]
    pub n: u32,
    pub tail_point: Scalar,
    pub head_point: Scalar,
    #[serde(default = "one")]
    pub lambda: Scalar,
}

/// Weights in vertex order and markers in edge order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultidegreeSpec {
    #[serde(rename = "vertex_weights")]
    pub weights: Vec<i64>,
    #[serde(default)]
    pub mu: Vec<u32>,
}

impl MultidegreeSpec {
    pub fn build(&self, edges: usize) -> AdmissibleMultidegree {
        let mu = if self.mu.is_empty() { vec![0; edges] } else { self.mu.clone() };
        AdmissibleMultidegree::new(self.weights.clone(), mu)
    }

    pub fn of(w: &AdmissibleMultidegree) -> Self {
        MultidegreeSpec { weights: w.weights.clone(), mu: w.mu.clone() }
    }
}

/// {r, V: {vertex label: rows of coefficients, constant term first}}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateSpec {
    pub r: usize,
    #[serde(rename = "V")]
    pub spaces: BTreeMap<String, Vec<Vec<Scalar>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema: String,
    pub field: FieldSpec,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    pub w0: MultidegreeSpec,
    /// Members in vertex order; derived when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuple: Option<Vec<MultidegreeSpec>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<CandidateSpec>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        if file.schema != INSTANCE_SCHEMA {
            return Err(Error::Invalid(format!("unsupported schema {:?}, expected {INSTANCE_SCHEMA:?}", file.schema)));
        }
        file.field.validate()?;
        Ok(file)
    }

    fn vertex(&self, label: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| Error::Invalid(format!("edge endpoint {label:?} is not a listed vertex")))
    }

    pub fn skeleton(&self) -> Result<ChainedGraph> {
        let edges = self
            .edges
            .iter()
            .map(|e| Ok(Edge { tail: self.vertex(&e.tail)?, head: self.vertex(&e.head)? }))
            .collect::<Result<Vec<_>>>()?;
        let graph = DualGraph::new(self.vertices.clone(), edges)?;
        ChainedGraph::new(graph, ChainStructure::new(self.edges.iter().map(|e| e.n).collect())?)
    }

    /// The curve over `field` (which must match the declared field spec).
    pub fn build<F: Field>(&self, field: &F) -> Result<CurveInstance<F>> {
        let sk = self.skeleton()?;
        let m = self.edges.len();
        let parse_all = |f: &dyn Fn(&EdgeSpec) -> &Scalar| -> Result<Vec<F::Elem>> {
            self.edges.iter().map(|e| f(e).parse(field)).collect()
        };
        let tails = parse_all(&|e| &e.tail_point)?;
        let heads = parse_all(&|e| &e.head_point)?;
        let lambda = parse_all(&|e| &e.lambda)?;
        let w0 = self.w0.build(m);
        if w0.weights.len() != self.vertices.len() {
            return Err(Error::Invalid("w0 needs one weight per vertex".into()));
        }
        let tuple = match &self.tuple {
            Some(ms) => ConcentratedTuple { members: ms.iter().map(|w| w.build(m)).collect() },
            None => ConcentratedTuple::derive(&sk, &w0)?,
        };
        CurveInstance::new(field.clone(), sk, tails, heads, lambda, w0, tuple)
    }

    pub fn build_candidate<F: Field>(&self, inst: &CurveInstance<F>, spec: &CandidateSpec) -> Result<LLSCandidate<F>> {
        let field = inst.field();
        for label in spec.spaces.keys() {
            self.vertex(label).map_err(|_| Error::Invalid(format!("candidate names unknown vertex {label:?}")))?;
        }
        let bases = self
            .vertices
            .iter()
            .map(|label| {
                let rows = spec
                    .spaces
                    .get(label)
                    .ok_or_else(|| Error::Invalid(format!("candidate has no space for vertex {label:?}")))?;
                rows.iter().map(|row| row.iter().map(|c| c.parse(field)).collect()).collect()
            })
            .collect::<Result<Vec<Vec<Vec<F::Elem>>>>>()?;
        LLSCandidate::new(inst, spec.r, bases)
    }

    /// Serializes an instance (with its tuple) and candidates.
    pub fn from_instance<F: Field>(inst: &CurveInstance<F>, candidates: &[&LLSCandidate<F>]) -> Self {
        let field = inst.field();
        let g = inst.skeleton().graph();
        let labels = g.labels().to_vec();
        let edges = g
            .edges()
            .iter()
            .enumerate()
            .map(|(e, ed)| EdgeSpec {
                tail: labels[ed.tail].clone(),
                head: labels[ed.head].clone(),
                n: inst.skeleton().n(e),
                tail_point: Scalar::of(field, &inst.tail_points()[e]),
                head_point: Scalar::of(field, &inst.head_points()[e]),
                lambda: Scalar::of(field, inst.lambda(e)),
            })
            .collect();
        let candidates = candidates
            .iter()
            .map(|c| CandidateSpec {
                r: c.r,
                spaces: labels
                    .iter()
                    .zip(&c.spaces)
                    .map(|(l, s)| (l.clone(), s.basis().iter().map(|row| row.iter().map(|x| Scalar::of(field, x)).collect()).collect()))
                    .collect(),
            })
            .collect();
        InstanceFile {
            schema: INSTANCE_SCHEMA.into(),
            field: field.spec(),
            vertices: labels,
            edges,
            w0: MultidegreeSpec::of(inst.w0()),
            tuple: Some(inst.tuple().members.iter().map(MultidegreeSpec::of).collect()),
            candidates,
        }
    }
}

/// Chain JSON: maps as row lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFile {
    pub schema: String,
    pub field: FieldSpec,
    pub d: usize,
    pub n: usize,
    pub s: Scalar,
    pub f: Vec<Vec<Vec<Scalar>>>,
    pub fback: Vec<Vec<Vec<Scalar>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flags: Option<FlagsSpec>,
}

/// Flags as row bases of r-dimensional subspaces of the end spaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagsSpec {
    pub r: usize,
    pub first: Vec<Vec<Scalar>>,
    pub last: Vec<Vec<Scalar>>,
}

fn parse_matrix<F: Field>(field: &F, d: usize, rows: &[Vec<Scalar>]) -> Result<Matrix<F>> {
    let rows = rows.iter().map(|r| r.iter().map(|c| c.parse(field)).collect()).collect::<Result<Vec<Vec<_>>>>()?;
    if rows.len() != d {
        return Err(Error::Invalid(format!("chain maps must have {d} rows")));
    }
    Matrix::from_rows(field, d, rows)
}

fn parse_rows<F: Field>(field: &F, d: usize, rows: &[Vec<Scalar>]) -> Result<Subspace<F>> {
    let rows = rows.iter().map(|r| r.iter().map(|c| c.parse(field)).collect()).collect::<Result<Vec<Vec<_>>>>()?;
    if rows.iter().any(|r| r.len() != d) {
        return Err(Error::Invalid(format!("flag rows must have length {d}")));
    }
    Ok(Subspace::span(field, d, rows))
}

fn write_matrix<F: Field>(field: &F, m: &Matrix<F>) -> Vec<Vec<Scalar>> {
    m.to_rows().iter().map(|r| r.iter().map(|x| Scalar::of(field, x)).collect()).collect()
}

impl ChainFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: ChainFile = serde_json::from_str(text)?;
        if file.schema != CHAIN_SCHEMA {
            return Err(Error::Invalid(format!("unsupported schema {:?}, expected {CHAIN_SCHEMA:?}", file.schema)));
        }
        file.field.validate()?;
        if file.n == 0 || file.f.len() + 1 != file.n {
            return Err(Error::Invalid(format!("a chain of length {} needs {} forward maps", file.n, file.n.saturating_sub(1))));
        }
        Ok(file)
    }

    pub fn build<F: Field>(&self, field: &F) -> Result<(LinkedChain<F>, Option<FlagPair<F>>)> {
        let f = self.f.iter().map(|m| parse_matrix(field, self.d, m)).collect::<Result<Vec<_>>>()?;
        let fback = self.fback.iter().map(|m| parse_matrix(field, self.d, m)).collect::<Result<Vec<_>>>()?;
        let chain = LinkedChain::new(field.clone(), self.d, self.s.parse(field)?, f, fback)?;
        let flags = match &self.flags {
            Some(fl) => Some(FlagPair::new(fl.r, parse_rows(field, self.d, &fl.first)?, parse_rows(field, self.d, &fl.last)?)?),
            None => None,
        };
        Ok((chain, flags))
    }

    pub fn from_chain<F: Field>(chain: &LinkedChain<F>, flags: Option<&FlagPair<F>>) -> Self {
        let field = &chain.field;
        let rows = |s: &Subspace<F>| s.basis().iter().map(|r| r.iter().map(|x| Scalar::of(field, x)).collect()).collect();
        ChainFile {
            schema: CHAIN_SCHEMA.into(),
            field: field.spec(),
            d: chain.d,
            n: chain.n,
            s: Scalar::of(field, &chain.s),
            f: chain.f.iter().map(|m| write_matrix(field, m)).collect(),
            fback: chain.fback.iter().map(|m| write_matrix(field, m)).collect(),
            flags: flags.map(|fl| FlagsSpec { r: fl.r, first: rows(&fl.first), last: rows(&fl.last) }),
        }
    }
}
