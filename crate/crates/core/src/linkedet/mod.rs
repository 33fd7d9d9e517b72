//! s-linked chains of vector spaces, linked determinantal membership for a pair of end
//! flags, completion of end flags to a point of the linked Grassmannian, random chains,
//! and chains built from two adjacent components of a curve.

mod bridge;
mod generate;

pub use bridge::{curve_to_chain, sufficient_extra_degree, BridgeChain};
pub use generate::gen_random_chain;

use serde::Serialize;

use crate::exactalg::{Field, Matrix, Subspace};
use crate::{Error, Result};

/// Spaces E_1..E_n of dimension d with f_i: E_i → E_{i+1} and f^i: E_{i+1} → E_i
/// (stored 0-based, acting on column vectors).
#[derive(Clone, Debug, PartialEq)]
pub struct LinkedChain<F: Field> {
    pub field: F,
    pub d: usize,
    pub n: usize,
    pub s: F::Elem,
    pub f: Vec<Matrix<F>>,
    pub fback: Vec<Matrix<F>>,
}

/// r-dimensional subspaces of E_1 and E_n.
#[derive(Clone, Debug, PartialEq)]
pub struct FlagPair<F: Field> {
    pub r: usize,
    pub first: Subspace<F>,
    pub last: Subspace<F>,
}

impl<F: Field> FlagPair<F> {
    pub fn new(r: usize, first: Subspace<F>, last: Subspace<F>) -> Result<Self> {
        if first.dim() != r || last.dim() != r {
            return Err(Error::Invalid(format!(
                "flags must have dimension r = {r}, got {} and {}",
                first.dim(),
                last.dim()
            )));
        }
        Ok(FlagPair { r, first, last })
    }
}

/// A failed s-linked condition at link i (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub index: usize,
    pub condition: String,
}

impl<F: Field> LinkedChain<F> {
    pub fn new(field: F, d: usize, s: F::Elem, f: Vec<Matrix<F>>, fback: Vec<Matrix<F>>) -> Result<Self> {
        if f.len() != fback.len() {
            return Err(Error::Invalid("forward and backward maps differ in number".into()));
        }
        for m in f.iter().chain(&fback) {
            if m.rows() != d || m.cols() != d {
                return Err(Error::Invalid(format!("chain maps must be {d}×{d}")));
            }
        }
        let n = f.len() + 1;
        Ok(LinkedChain { field, d, n, s, f, fback })
    }

    fn image(&self, m: &Matrix<F>) -> Subspace<F> {
        Subspace::full(&self.field, self.d).image(m)
    }

    fn kernel(&self, m: &Matrix<F>) -> Subspace<F> {
        Subspace::span(&self.field, self.d, m.kernel())
    }

    /// Condition (I) always; (II) and (III) when s = 0.
    pub fn validate(&self) -> Vec<Violation> {
        let field = &self.field;
        let mut out = Vec::new();
        let s_id = Matrix::scalar(field, self.d, &self.s);
        for i in 0..self.n - 1 {
            if self.f[i].mul(&self.fback[i]) != s_id || self.fback[i].mul(&self.f[i]) != s_id {
                out.push(Violation { index: i, condition: "(I) f∘f^ = s·id".into() });
            }
        }
        if !field.is_zero(&self.s) {
            return out;
        }
        for i in 0..self.n - 1 {
            if self.kernel(&self.fback[i]) != self.image(&self.f[i]) || self.kernel(&self.f[i]) != self.image(&self.fback[i]) {
                out.push(Violation { index: i, condition: "(II) ker f^ = im f and ker f = im f^".into() });
            }
        }
        for i in 0..self.n.saturating_sub(2) {
            let a = self.image(&self.f[i]).intersect(&self.kernel(&self.f[i + 1]));
            let b = self.image(&self.fback[i + 1]).intersect(&self.kernel(&self.fback[i]));
            if a.dim() != 0 || b.dim() != 0 {
                out.push(Violation { index: i, condition: "(III) im f_i ∩ ker f_(i+1) = 0 and im f^(i+1) ∩ ker f^i = 0".into() });
            }
        }
        out
    }

    /// E_i → E_1 by backward maps.
    pub fn to_first(&self, i: usize) -> Matrix<F> {
        let mut m = Matrix::identity(&self.field, self.d);
        for k in (0..i).rev() {
            m = self.fback[k].mul(&m);
        }
        m
    }

    /// E_i → E_n by forward maps.
    pub fn to_last(&self, i: usize) -> Matrix<F> {
        let mut m = Matrix::identity(&self.field, self.d);
        for k in i..self.n - 1 {
            m = self.f[k].mul(&m);
        }
        m
    }

    /// The chain read in the opposite direction.
    pub fn reversed(&self) -> Self {
        LinkedChain {
            field: self.field.clone(),
            d: self.d,
            n: self.n,
            s: self.s.clone(),
            f: self.fback.iter().rev().cloned().collect(),
            fback: self.f.iter().rev().cloned().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinkedDetReport<F: Field> {
    pub member: bool,
    /// Rank of E_i → E_1/F_1 ⊕ E_n/F_n for i = 1..n.
    pub ranks: Vec<usize>,
    pub kernels: Vec<Subspace<F>>,
}

fn quotient_rows<F: Field>(field: &F, flag: &Subspace<F>) -> Matrix<F> {
    let ann = flag.annihilator();
    if ann.dim() == 0 {
        Matrix::zeros(field, 0, flag.ambient_dim())
    } else {
        ann.basis_matrix()
    }
}

/// Whether every E_i → E_1/F_1 ⊕ E_n/F_n has rank at most d − r.
pub fn linked_det_membership<F: Field>(chain: &LinkedChain<F>, flags: &FlagPair<F>) -> LinkedDetReport<F> {
    let field = &chain.field;
    let (q1, qn) = (quotient_rows(field, &flags.first), quotient_rows(field, &flags.last));
    let mut ranks = Vec::with_capacity(chain.n);
    let mut kernels = Vec::with_capacity(chain.n);
    for i in 0..chain.n {
        let stacked = q1.mul(&chain.to_first(i)).vstack(&qn.mul(&chain.to_last(i)));
        let (rank, ker) = stacked.rank_and_kernel();
        ranks.push(rank);
        kernels.push(Subspace::span(field, chain.d, ker));
    }
    let member = ranks.iter().all(|&k| k + flags.r <= chain.d);
    LinkedDetReport { member, ranks, kernels }
}

/// Whether (F_1, …, F_n) is a point of the linked Grassmannian: each F_i has dimension r,
/// f_i(F_i) ⊆ F_(i+1) and f^i(F_(i+1)) ⊆ F_i.
pub fn is_linked_grassmannian_point<F: Field>(chain: &LinkedChain<F>, r: usize, flags: &[Subspace<F>]) -> bool {
    flags.len() == chain.n
        && flags.iter().all(|s| s.dim() == r)
        && (0..chain.n - 1).all(|i| {
            flags[i + 1].contains_subspace(&flags[i].image(&chain.f[i]))
                && flags[i].contains_subspace(&flags[i + 1].image(&chain.fback[i]))
        })
}

/// Completes the end flags to F_2..F_(n−1) by shrinking the kernels K_i of the membership
/// maps: while some dim K_i > r, the smallest such i is replaced by an r-dimensional
/// subspace containing f_(i−1)K_(i−1) + f^i K_(i+1). None when membership fails.
pub fn complete_flags<F: Field>(chain: &LinkedChain<F>, flags: &FlagPair<F>) -> Result<Option<Vec<Subspace<F>>>> {
    let report = linked_det_membership(chain, flags);
    if !report.member {
        return Ok(None);
    }
    let r = flags.r;
    let mut k = report.kernels;
    while let Some(i) = (0..chain.n).find(|&i| k[i].dim() > r) {
        let mut forced = Subspace::zero(&chain.field, chain.d);
        if i > 0 {
            forced = forced.sum(&k[i - 1].image(&chain.f[i - 1]));
        }
        if i + 1 < chain.n {
            forced = forced.sum(&k[i + 1].image(&chain.fback[i]));
        }
        if forced.dim() > r || !k[i].contains_subspace(&forced) {
            return Err(Error::ModelInconsistency(format!(
                "forced span at position {} has dimension {} or leaves the kernel",
                i + 1,
                forced.dim()
            )));
        }
        k[i] = forced.extend_within(&k[i], r);
    }
    if k[0] != flags.first || k[chain.n - 1] != flags.last || !is_linked_grassmannian_point(chain, r, &k) {
        return Err(Error::ModelInconsistency("completed flags fail the linked Grassmannian conditions".into()));
    }
    Ok(Some(k[1..chain.n - 1].to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::PrimeField;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    fn diag(f: &PrimeField, d: &[u64]) -> Matrix<PrimeField> {
        Matrix::from_fn(f, d.len(), d.len(), |i, j| if i == j { d[i] } else { 0 })
    }

    fn line(f: &PrimeField, v: Vec<u64>) -> Subspace<PrimeField> {
        Subspace::span(f, v.len(), vec![v])
    }

    fn basic_chain() -> LinkedChain<PrimeField> {
        let f = f2();
        LinkedChain::new(f.clone(), 2, 0, vec![diag(&f, &[1, 0])], vec![diag(&f, &[0, 1])]).unwrap()
    }

    #[test]
    fn diagonal_link_validates() {
        assert!(basic_chain().validate().is_empty());
    }

    #[test]
    fn invertible_link_validates() {
        let f = PrimeField::new(5).unwrap();
        let a = Matrix::from_rows(&f, 2, vec![vec![1, 2], vec![3, 4]]).unwrap();
        let s = 3;
        let b = a.inverse().unwrap().scale(&s);
        assert!(LinkedChain::new(f, 2, s, vec![a], vec![b]).unwrap().validate().is_empty());
    }

    #[test]
    fn zero_link_fails_exactness() {
        let f = f2();
        let z = Matrix::zeros(&f, 2, 2);
        let v = LinkedChain::new(f, 2, 0, vec![z.clone()], vec![z]).unwrap().validate();
        assert!(v.iter().any(|x| x.condition.starts_with("(II)")));
    }

    #[test]
    fn membership_examples() {
        let c = basic_chain();
        let f = f2();
        let e1 = line(&f, vec![1, 0]);
        let e2 = line(&f, vec![0, 1]);
        let yes = linked_det_membership(&c, &FlagPair::new(1, e1.clone(), e1.clone()).unwrap());
        assert!(yes.member);
        assert_eq!(yes.ranks, vec![1, 1]);
        let no = linked_det_membership(&c, &FlagPair::new(1, e1, e2).unwrap());
        assert!(!no.member);
        assert_eq!(no.ranks[0], 2);
    }

    #[test]
    fn two_spaces_complete_trivially() {
        let c = basic_chain();
        let f = f2();
        let e1 = line(&f, vec![1, 0]);
        let flags = FlagPair::new(1, e1.clone(), e1).unwrap();
        assert_eq!(complete_flags(&c, &flags).unwrap(), Some(vec![]));
    }

    #[test]
    fn reversal_swaps_directions() {
        let c = basic_chain();
        let r = c.reversed();
        assert_eq!(r.f[0], c.fback[0]);
        assert!(r.validate().is_empty());
    }
}
