use super::field::Field;

/// Univariate polynomial, coefficients low degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone> Poly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<E: Clone + PartialEq> Poly<E> {
    pub fn new<F: Field<Elem = E>>(field: &F, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant<F: Field<Elem = E>>(field: &F, c: E) -> Self {
        Self::new(field, vec![c])
    }

    /// x − a.
    pub fn linear_root<F: Field<Elem = E>>(field: &F, a: &E) -> Self {
        Self::new(field, vec![field.neg(a), field.one()])
    }

    /// Coefficient vector padded with zeros to length `len`.
    pub fn padded<F: Field<Elem = E>>(&self, field: &F, len: usize) -> Vec<E> {
        assert!(self.coeffs.len() <= len, "polynomial does not fit in {len} coefficients");
        let mut v = self.coeffs.clone();
        v.resize(len, field.zero());
        v
    }

    pub fn eval<F: Field<Elem = E>>(&self, field: &F, x: &E) -> E {
        self.coeffs.iter().rev().fold(field.zero(), |acc, c| field.add(&field.mul(&acc, x), c))
    }

    pub fn add<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = field.zero();
        let c = (0..n)
            .map(|i| field.add(self.coeffs.get(i).unwrap_or(&z), other.coeffs.get(i).unwrap_or(&z)))
            .collect();
        Self::new(field, c)
    }

    pub fn scale<F: Field<Elem = E>>(&self, field: &F, s: &E) -> Self {
        Self::new(field, self.coeffs.iter().map(|c| field.mul(c, s)).collect())
    }

    pub fn mul<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = field.add(&c[i + j], &field.mul(a, b));
            }
        }
        Self::new(field, c)
    }

    pub fn pow<F: Field<Elem = E>>(&self, field: &F, k: u32) -> Self {
        (0..k).fold(Self::constant(field, field.one()), |acc, _| acc.mul(field, self))
    }

    /// Coefficients of f(x + a), i.e. the expansion of f in powers of (x − a).
    pub fn taylor_expansion<F: Field<Elem = E>>(&self, field: &F, a: &E) -> Vec<E> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = field.mul(a, &c[j + 1]);
                c[j] = field.add(&c[j], &t);
            }
        }
        c
    }
}

/// Coefficient of (x − point)^order in the expansion of f at point.
pub fn taylor_coefficient<F: Field>(field: &F, f: &Poly<F::Elem>, point: &F::Elem, order: usize) -> F::Elem {
    f.taylor_expansion(field, point).get(order).cloned().unwrap_or_else(|| field.zero())
}

/// Taylor coefficient of a raw coefficient vector (low degree first).
pub fn taylor_coefficient_of<F: Field>(field: &F, coeffs: &[F::Elem], point: &F::Elem, order: usize) -> F::Elem {
    taylor_coefficient(field, &Poly::new(field, coeffs.to_vec()), point, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::PrimeField;

    #[test]
    fn product_of_linear_factors() {
        let f = PrimeField::new(7).unwrap();
        let p = Poly::linear_root(&f, &1).mul(&f, &Poly::linear_root(&f, &2));
        assert_eq!(p.coeffs(), &[2, 4, 1]);
        assert_eq!(p.eval(&f, &1), 0);
        assert_eq!(p.eval(&f, &3), 2);
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let f = PrimeField::new(3).unwrap();
        assert!(Poly::new(&f, vec![0, 3 % 3]).is_zero());
        assert_eq!(Poly::new(&f, vec![1, 0, 0]).degree(), Some(0));
    }
}
