use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::LinkedChain;
use crate::exactalg::{Field, Matrix};
use crate::{Error, Result};

const RESAMPLE_BUDGET: usize = 1000;

fn random_invertible<F: Field>(rng: &mut ChaCha8Rng, field: &F, d: usize) -> Matrix<F> {
    loop {
        let m = Matrix::from_fn(field, d, d, |_, _| field.random(rng));
        if m.rank() == d {
            return m;
        }
    }
}

fn block_diag<F: Field>(field: &F, d: usize, ones: std::ops::Range<usize>) -> Matrix<F> {
    Matrix::from_fn(field, d, d, |i, j| if i == j && ones.contains(&i) { field.one() } else { field.zero() })
}

/// A random s-linked chain. For s = 0 link i is A = P·diag(1^(d_i), 0)·Q with
/// B = Q⁻¹·diag(0, 1^(d−d_i))·P⁻¹ for random invertible P, Q, resampled until condition
/// (III) holds; `ranks[i]` = d_i must be nondecreasing for (III) to be possible. For
/// s ≠ 0 every A is random invertible with B = s·A⁻¹ and `ranks` is ignored.
pub fn gen_random_chain<F: Field>(seed: u64, field: &F, d: usize, n: usize, s: F::Elem, ranks: &[usize]) -> Result<LinkedChain<F>> {
    if n == 0 {
        return Err(Error::Invalid("a chain needs at least one space".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if !field.is_zero(&s) {
        let mut f = Vec::with_capacity(n - 1);
        let mut fback = Vec::with_capacity(n - 1);
        for _ in 0..n - 1 {
            let a = random_invertible(&mut rng, field, d);
            let b = a.inverse().expect("invertible").scale(&s);
            f.push(a);
            fback.push(b);
        }
        return LinkedChain::new(field.clone(), d, s, f, fback);
    }
    if ranks.len() != n - 1 || ranks.iter().any(|&k| k > d) {
        return Err(Error::Invalid(format!("need {} link ranks between 0 and {d}", n - 1)));
    }
    if ranks.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Invalid("link ranks must be nondecreasing for condition (III)".into()));
    }
    for _ in 0..RESAMPLE_BUDGET {
        let mut f = Vec::with_capacity(n - 1);
        let mut fback = Vec::with_capacity(n - 1);
        for &k in ranks {
            let p = random_invertible(&mut rng, field, d);
            let q = random_invertible(&mut rng, field, d);
            let (pi, qi) = (p.inverse().expect("invertible"), q.inverse().expect("invertible"));
            f.push(p.mul(&block_diag(field, d, 0..k)).mul(&q));
            fback.push(qi.mul(&block_diag(field, d, k..d)).mul(&pi));
        }
        let chain = LinkedChain::new(field.clone(), d, s.clone(), f, fback)?;
        if chain.validate().is_empty() {
            return Ok(chain);
        }
    }
    Err(Error::Budget(format!("no chain satisfying (III) after {RESAMPLE_BUDGET} resamples with seed {seed}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::PrimeField;

    #[test]
    fn identity_changes_of_basis_give_diagonal_links() {
        let f = PrimeField::new(3).unwrap();
        assert_eq!(block_diag(&f, 2, 0..1), Matrix::from_rows(&f, 2, vec![vec![1, 0], vec![0, 0]]).unwrap());
        assert_eq!(block_diag(&f, 2, 1..2), Matrix::from_rows(&f, 2, vec![vec![0, 0], vec![0, 1]]).unwrap());
    }

    #[test]
    fn generated_chains_validate() {
        let f = PrimeField::new(3).unwrap();
        for seed in 0..20 {
            let c = gen_random_chain(seed, &f, 3, 4, 0, &[0, 1, 3]).unwrap();
            assert!(c.validate().is_empty());
            let c = gen_random_chain(seed, &f, 3, 4, 2, &[]).unwrap();
            assert!(c.validate().is_empty());
            assert!(c.f.iter().all(|m| m.rank() == 3));
        }
    }

    #[test]
    fn decreasing_ranks_rejected() {
        let f = PrimeField::new(2).unwrap();
        assert!(gen_random_chain(0, &f, 2, 3, 0, &[2, 1]).is_err());
    }

    #[test]
    fn seeds_are_reproducible() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(gen_random_chain(7, &f, 2, 3, 0, &[1, 1]).unwrap(), gen_random_chain(7, &f, 2, 3, 0, &[1, 1]).unwrap());
    }
}
