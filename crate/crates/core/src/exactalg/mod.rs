//! Exact arithmetic over Q and GF(p): fields, dense matrices with reduced echelon
//! forms, subspaces, and univariate polynomials.

mod field;
mod matrix;
mod poly;
mod subspace;

pub use field::{is_prime, Field, FieldSpec, PrimeField, Rationals};
pub use matrix::{echelon_basis, subspace_intersect, Matrix};
pub use poly::{taylor_coefficient, taylor_coefficient_of, Poly};
pub use subspace::{combine, Subspace};

/// Rank and reduced-echelon kernel basis of `m`.
pub fn rank_and_kernel<F: Field>(m: &Matrix<F>) -> (usize, Vec<Vec<F::Elem>>) {
    m.rank_and_kernel()
}
