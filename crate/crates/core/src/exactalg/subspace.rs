use super::field::Field;
use super::matrix::{echelon_basis, subspace_intersect, Matrix};

/// A subspace of F^dim stored by its reduced echelon basis, so equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F: Field> {
    field: F,
    dim: usize,
    basis: Vec<Vec<F::Elem>>,
}

impl<F: Field> Subspace<F> {
    pub fn span(field: &F, dim: usize, vectors: Vec<Vec<F::Elem>>) -> Self {
        Subspace { field: field.clone(), dim, basis: echelon_basis(field, dim, vectors) }
    }

    pub fn zero(field: &F, dim: usize) -> Self {
        Subspace { field: field.clone(), dim, basis: Vec::new() }
    }

    pub fn full(field: &F, dim: usize) -> Self {
        Self::span(field, dim, Matrix::identity(field, dim).to_rows())
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<F::Elem>] {
        &self.basis
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Basis vectors as the rows of a matrix.
    pub fn basis_matrix(&self) -> Matrix<F> {
        Matrix::from_rows(&self.field, self.dim, self.basis.clone()).expect("basis vectors have ambient length")
    }

    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Subspace {
            field: self.field.clone(),
            dim: self.dim,
            basis: subspace_intersect(&self.field, self.dim, &self.basis, &other.basis),
        }
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Self::span(&self.field, self.dim, v)
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Coordinates of v in the echelon basis, if v lies in the subspace.
    pub fn coordinates(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let f = &self.field;
        assert_eq!(v.len(), self.dim);
        let coords: Vec<F::Elem> = self
            .basis
            .iter()
            .map(|b| {
                let pivot = b.iter().position(|x| !f.is_zero(x)).expect("basis vectors are nonzero");
                v[pivot].clone()
            })
            .collect();
        let recombined = combine(f, self.dim, &coords, &self.basis);
        (recombined.as_slice() == v).then_some(coords)
    }

    /// Vectors y with y·v = 0 for all v in the subspace, as a subspace of the same ambient space.
    pub fn annihilator(&self) -> Self {
        if self.basis.is_empty() {
            return Self::full(&self.field, self.dim);
        }
        Subspace { field: self.field.clone(), dim: self.dim, basis: self.basis_matrix().kernel() }
    }

    /// Image under m (acting on column vectors, m.cols() == ambient dim).
    pub fn image(&self, m: &Matrix<F>) -> Self {
        assert_eq!(m.cols(), self.dim);
        Self::span(&self.field, m.rows(), self.basis.iter().map(|v| m.mul_vec(v)).collect())
    }

    /// Preimage {v : m v ∈ self}, with self living in the codomain of m.
    pub fn preimage(&self, m: &Matrix<F>) -> Self {
        assert_eq!(m.rows(), self.dim);
        let ann = self.annihilator();
        if ann.basis.is_empty() {
            return Self::full(&self.field, m.cols());
        }
        let cond = ann.basis_matrix().mul(m);
        Subspace { field: self.field.clone(), dim: m.cols(), basis: cond.kernel() }
    }

    /// Extends this basis to one of `target` (which must contain self), adding target's
    /// echelon basis vectors in order until the dimension reaches `k`.
    pub fn extend_within(&self, target: &Self, k: usize) -> Self {
        let mut cur = self.clone();
        for v in target.basis() {
            if cur.dim() >= k {
                break;
            }
            if !cur.contains(v) {
                cur = cur.sum(&Self::span(&self.field, self.dim, vec![v.clone()]));
            }
        }
        cur
    }
}

/// Linear combination Σ c_k b_k.
pub fn combine<F: Field>(field: &F, dim: usize, coeffs: &[F::Elem], basis: &[Vec<F::Elem>]) -> Vec<F::Elem> {
    let mut out = vec![field.zero(); dim];
    for (c, b) in coeffs.iter().zip(basis) {
        if field.is_zero(c) {
            continue;
        }
        for (o, x) in out.iter_mut().zip(b) {
            *o = field.add(o, &field.mul(c, x));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::PrimeField;

    #[test]
    fn preimage_of_line() {
        let f = PrimeField::new(5).unwrap();
        let proj = Matrix::from_rows(&f, 2, vec![vec![1, 0], vec![0, 0]]).unwrap();
        let line = Subspace::span(&f, 2, vec![vec![0, 1]]);
        let pre = line.preimage(&proj);
        assert_eq!(pre.basis(), &[vec![0, 1]]);
    }

    #[test]
    fn annihilator_dimension() {
        let f = PrimeField::new(3).unwrap();
        let s = Subspace::span(&f, 4, vec![vec![1, 1, 0, 0], vec![0, 0, 1, 2]]);
        let a = s.annihilator();
        assert_eq!(a.dim(), 2);
        for y in a.basis() {
            for v in s.basis() {
                let dot = y.iter().zip(v).fold(0, |acc, (a, b)| f.add(&acc, &f.mul(a, b)));
                assert_eq!(dot, 0);
            }
        }
    }

    #[test]
    fn extension_keeps_the_forced_part() {
        let f = PrimeField::new(2).unwrap();
        let small = Subspace::span(&f, 3, vec![vec![0, 1, 1]]);
        let big = Subspace::full(&f, 3);
        let ext = small.extend_within(&big, 2);
        assert_eq!(ext.dim(), 2);
        assert!(ext.contains_subspace(&small));
    }
}
