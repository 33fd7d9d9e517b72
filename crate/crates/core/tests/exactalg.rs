mod common;

use common::{all_vectors, gf, q, span};
use nodal_lls::exactalg::{taylor_coefficient, taylor_coefficient_of, Field, Matrix, Poly, PrimeField, Rationals, Subspace};
use proptest::prelude::*;

#[test]
fn identity_has_full_rank() {
    let m = Matrix::identity(&Rationals, 3);
    let (rank, ker) = m.rank_and_kernel();
    assert_eq!(rank, 3);
    assert!(ker.is_empty());
}

#[test]
fn zero_matrix_has_full_kernel() {
    let m = Matrix::zeros(&Rationals, 2, 3);
    let (rank, ker) = m.rank_and_kernel();
    assert_eq!(rank, 0);
    assert_eq!(ker.len(), 3);
}

#[test]
fn rank_one_over_gf5() {
    let f = gf(5);
    let m = Matrix::from_rows(&f, 2, vec![vec![1, 2], vec![2, 4]]).unwrap();
    let (rank, ker) = m.rank_and_kernel();
    assert_eq!(rank, 1);
    assert_eq!(Subspace::span(&f, 2, ker), span(&f, 2, &[&[2, -1]]));
}

#[test]
fn intersection_examples() {
    let f = Rationals;
    let e1 = span(&f, 3, &[&[1, 0, 0]]);
    let e2 = span(&f, 3, &[&[0, 1, 0]]);
    assert_eq!(e1.intersect(&e1), e1);
    assert_eq!(e1.intersect(&e2).dim(), 0);
    let a = span(&f, 3, &[&[1, 0, 0], &[0, 1, 0]]);
    let b = span(&f, 3, &[&[0, 1, 0], &[0, 0, 1]]);
    assert_eq!(a.intersect(&b), e2);
}

#[test]
fn taylor_examples() {
    let f = Rationals;
    let x2 = Poly::new(&f, vec![q(0), q(0), q(1)]);
    assert_eq!(taylor_coefficient(&f, &x2, &q(0), 2), q(1));
    assert_eq!(taylor_coefficient(&f, &x2, &q(1), 1), q(2));
    assert_eq!(taylor_coefficient(&f, &Poly::zero(), &q(3), 4), q(0));
}

#[test]
fn fractions_parse_and_print() {
    let f = Rationals;
    let x = f.parse("-6/4").unwrap();
    assert_eq!(f.format(&x), "-3/2");
    assert_eq!(gf(7).parse("1/2").unwrap(), 4);
    assert!(gf(7).parse("1/7").is_err());
}

/// f^(k)(a)/k! from term-by-term derivatives.
fn derivative_oracle(coeffs: &[i64], a: i64, k: usize) -> num_rational::BigRational {
    let f = Rationals;
    let mut c: Vec<_> = coeffs.iter().map(|&x| q(x)).collect();
    let mut fact = q(1);
    for j in 0..k {
        c = c.iter().enumerate().skip(1).map(|(i, x)| f.mul(x, &q(i as i64))).collect();
        fact = f.mul(&fact, &q(j as i64 + 1));
    }
    let val = c.iter().rev().fold(q(0), |acc, x| f.add(&f.mul(&acc, &q(a)), x));
    f.div(&val, &fact).unwrap()
}

fn matrix_strategy(p: u64, max: usize) -> impl Strategy<Value = (usize, usize, Vec<u64>)> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| (Just(r), Just(c), prop::collection::vec(0..p, r * c)))
}

fn to_matrix(f: &PrimeField, r: usize, c: usize, data: &[u64]) -> Matrix<PrimeField> {
    Matrix::from_fn(f, r, c, |i, j| data[i * c + j])
}

fn rows_of(f: &PrimeField, n: usize, data: &[u64]) -> Subspace<PrimeField> {
    Subspace::span(f, n, data.chunks(n).map(|c| c.to_vec()).collect())
}

/// Elements of a subspace by enumerating every vector of the ambient space.
fn members(s: &Subspace<PrimeField>, p: u64) -> Vec<Vec<u64>> {
    all_vectors(p, s.ambient_dim()).into_iter().filter(|v| s.contains(v)).collect()
}

/// Whether v is an F-combination of `rows`, by enumerating coefficient vectors.
fn in_span(f: &PrimeField, rows: &[Vec<u64>], v: &[u64]) -> bool {
    all_vectors(f.modulus(), rows.len()).into_iter().any(|c| {
        (0..v.len()).all(|j| rows.iter().zip(&c).fold(0, |acc, (r, x)| f.add(&acc, &f.mul(&r[j], x))) == v[j])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn kernel_size_matches_enumeration(p in prop::sample::select(vec![2u64, 3]), (r, c, data) in matrix_strategy(3, 4)) {
        let f = gf(p);
        let data: Vec<u64> = data.into_iter().map(|x| x % p).collect();
        let m = to_matrix(&f, r, c, &data);
        let (rank, ker) = m.rank_and_kernel();
        let zeros = all_vectors(p, c).into_iter().filter(|x| m.mul_vec(x).iter().all(|y| *y == 0)).count();
        prop_assert_eq!(zeros as u64, p.pow((c - rank) as u32));
        prop_assert_eq!(ker.len(), c - rank);
        for k in &ker {
            prop_assert!(m.mul_vec(k).iter().all(|y| *y == 0));
        }
    }

    #[test]
    fn subspace_operations_match_enumeration(
        n in 1usize..=3,
        a in prop::collection::vec(0u64..3, 0..9),
        b in prop::collection::vec(0u64..3, 0..9),
    ) {
        let f = gf(3);
        let a: Vec<u64> = a[..a.len() / n * n].to_vec();
        let b: Vec<u64> = b[..b.len() / n * n].to_vec();
        let (sa, sb) = (rows_of(&f, n, &a), rows_of(&f, n, &b));
        let ra: Vec<Vec<u64>> = a.chunks(n).map(|c| c.to_vec()).collect();
        let rb: Vec<Vec<u64>> = b.chunks(n).map(|c| c.to_vec()).collect();
        for v in all_vectors(3, n) {
            prop_assert_eq!(sa.contains(&v), in_span(&f, &ra, &v));
            prop_assert_eq!(sa.intersect(&sb).contains(&v), in_span(&f, &ra, &v) && in_span(&f, &rb, &v));
        }
        prop_assert_eq!(members(&sa, 3).len() as u64, 3u64.pow(sa.dim() as u32));
        prop_assert_eq!(sa.sum(&sb).dim() + sa.intersect(&sb).dim(), sa.dim() + sb.dim());
        let ann = sa.annihilator();
        prop_assert_eq!(ann.dim(), n - sa.dim());
        for x in ann.basis() {
            for y in sa.basis() {
                prop_assert_eq!(x.iter().zip(y).fold(0, |acc, (s, t)| f.add(&acc, &f.mul(s, t))), 0);
            }
        }
    }

    #[test]
    fn image_and_preimage_are_adjoint((r, c, data) in matrix_strategy(5, 3), s in prop::collection::vec(0u64..5, 0..9)) {
        let f = gf(5);
        let m = to_matrix(&f, r, c, &data);
        let s = rows_of(&f, r, &s[..s.len() / r * r]);
        let pre = s.preimage(&m);
        prop_assert!(s.contains_subspace(&pre.image(&m)));
        for v in all_vectors(5, c) {
            prop_assert_eq!(pre.contains(&v), s.contains(&m.mul_vec(&v)));
        }
    }

    #[test]
    fn extension_stays_within_target(a in prop::collection::vec(0u64..2, 0..8), k in 0usize..=4) {
        let f = gf(2);
        let base = rows_of(&f, 4, &a[..a.len() / 4 * 4]);
        let target = Subspace::full(&f, 4);
        let k = k.max(base.dim());
        let ext = base.extend_within(&target, k);
        prop_assert_eq!(ext.dim(), k);
        prop_assert!(ext.contains_subspace(&base));
    }

    #[test]
    fn inverses_over_rationals(data in prop::collection::vec(-4i64..=4, 9)) {
        let f = Rationals;
        let m = Matrix::from_fn(&f, 3, 3, |i, j| q(data[3 * i + j]));
        match m.inverse() {
            Some(inv) => prop_assert_eq!(inv.mul(&m), Matrix::identity(&f, 3)),
            None => prop_assert!(m.rank() < 3),
        }
    }

    #[test]
    fn taylor_coefficients_match_derivatives(coeffs in prop::collection::vec(-5i64..=5, 0..6), a in -3i64..=3, k in 0usize..6) {
        let f = Rationals;
        let c: Vec<_> = coeffs.iter().map(|&x| q(x)).collect();
        prop_assert_eq!(taylor_coefficient_of(&f, &c, &q(a), k), derivative_oracle(&coeffs, a, k));
    }

    #[test]
    fn prime_field_inverses(p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 101]), x in 1u64..1000) {
        let f = gf(p);
        let x = x % p;
        prop_assume!(x != 0);
        prop_assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), 1);
    }
}
