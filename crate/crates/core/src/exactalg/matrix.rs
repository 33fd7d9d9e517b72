use std::fmt;

use super::field::Field;
use crate::Error;

/// Dense row-major matrix over an exact field. Acts on column vectors.
#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| self.field.format(x)).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        Self::scalar(field, n, &field.one())
    }

    pub fn scalar(field: &F, n: usize, s: &F::Elem) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, s.clone());
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(field: &F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Result<Self, Error> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Invalid(format!("row {i} has length {}, expected {cols}", r.len())));
            }
            data.extend(r);
        }
        Ok(Matrix { field: field.clone(), rows: n, cols, data })
    }

    pub fn from_fn(field: &F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn to_rows(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let f = &self.field;
        let data = self.data.iter().map(|a| f.mul(a, s)).collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(&self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else { continue };
            m.swap_rows(r, p);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || f.is_zero(m.get(i, c)) {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rank and a basis of the right kernel {x : M x = 0}, the basis in reduced echelon form.
    pub fn rank_and_kernel(&self) -> (usize, Vec<Vec<F::Elem>>) {
        let f = &self.field;
        let (m, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(m.get(row, free));
            }
            basis.push(v);
        }
        (pivots.len(), echelon_basis(f, self.cols, basis))
    }

    pub fn kernel(&self) -> Vec<Vec<F::Elem>> {
        self.rank_and_kernel().1
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(&self.field, n));
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(&self.field, n, n, |i, j| red.get(i, n + j).clone()))
    }
}

/// Reduced echelon basis of the span of `vectors` in dimension `dim`.
pub fn echelon_basis<F: Field>(field: &F, dim: usize, vectors: Vec<Vec<F::Elem>>) -> Vec<Vec<F::Elem>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(field, dim, vectors).expect("vectors share the ambient dimension");
    let (red, pivots) = m.rref();
    (0..pivots.len()).map(|i| red.row(i).to_vec()).collect()
}

/// Basis of span(a) ∩ span(b), in reduced echelon form.
pub fn subspace_intersect<F: Field>(
    field: &F,
    dim: usize,
    a: &[Vec<F::Elem>],
    b: &[Vec<F::Elem>],
) -> Vec<Vec<F::Elem>> {
    let a = echelon_basis(field, dim, a.to_vec());
    let b = echelon_basis(field, dim, b.to_vec());
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // Solve x·A = y·B via the kernel of [Aᵀ | −Bᵀ].
    let na = a.len();
    let m = Matrix::from_fn(field, dim, na + b.len(), |i, j| {
        if j < na {
            a[j][i].clone()
        } else {
            field.neg(&b[j - na][i])
        }
    });
    let vecs = m
        .kernel()
        .into_iter()
        .map(|x| {
            (0..dim)
                .map(|c| (0..na).fold(field.zero(), |acc, k| field.add(&acc, &field.mul(&x[k], &a[k][c]))))
                .collect()
        })
        .collect();
    echelon_basis(field, dim, vecs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{PrimeField, Rationals};

    #[test]
    fn inverse_of_upper_triangular() {
        let f = Rationals;
        let m = Matrix::from_rows(&f, 2, vec![vec![f.from_i64(1), f.from_i64(2)], vec![f.zero(), f.from_i64(4)]])
            .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(&f, 2));
    }

    #[test]
    fn singular_has_no_inverse() {
        let f = PrimeField::new(5).unwrap();
        let m = Matrix::from_rows(&f, 2, vec![vec![1, 2], vec![2, 4]]).unwrap();
        assert!(m.inverse().is_none());
    }

    #[test]
    fn stacking_shapes() {
        let f = PrimeField::new(3).unwrap();
        let a = Matrix::identity(&f, 2);
        assert_eq!(a.vstack(&a).rows(), 4);
        assert_eq!(a.hstack(&a).cols(), 4);
        assert_eq!(a.hstack(&a).rank(), 2);
    }
}
