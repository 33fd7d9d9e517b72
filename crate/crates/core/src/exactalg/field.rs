use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::Error;

/// Which base field an instance lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldSpec {
    Rationals,
    Prime { p: u64 },
}

impl FieldSpec {
    pub fn validate(&self) -> Result<(), Error> {
        match *self {
            FieldSpec::Rationals => Ok(()),
            FieldSpec::Prime { p } => {
                if is_prime(p) && p < (1 << 31) {
                    Ok(())
                } else {
                    Err(Error::Invalid(format!("field characteristic {p} is not a prime below 2^31")))
                }
            }
        }
    }
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime { p } => write!(f, "GF({p})"),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2;
    while q * q <= p {
        if p % q == 0 {
            return false;
        }
        q += 1;
    }
    true
}

/// Exact field arithmetic. Elements are plain values; the field object carries the context.
pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn parse(&self, s: &str) -> Result<Self::Elem, Error>;
    fn format(&self, a: &Self::Elem) -> String;
    /// All elements, for finite fields.
    fn elements(&self) -> Option<Vec<Self::Elem>>;
    /// A random element; over Q a small integer.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// a^e for any integer e; None when e < 0 and a = 0.
    fn pow(&self, a: &Self::Elem, e: i64) -> Option<Self::Elem> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.one();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            sq = self.mul(&sq, &sq);
            k >>= 1;
        }
        Some(acc)
    }

    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let x = self.random(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn parse(&self, s: &str) -> Result<BigRational, Error> {
        let s = s.trim();
        let bad = || Error::Invalid(format!("not a rational number: {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(n, d))
            }
            None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
        }
    }
    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn elements(&self) -> Option<Vec<BigRational>> {
        None
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.random_range(-4..=4))
    }
}

/// The prime field GF(p), elements stored as canonical residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, Error> {
        FieldSpec::Prime { p }.validate()?;
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime { p: self.p }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i128(v as i128)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        let (mut t, mut new_t) = (0i64, 1i64);
        let (mut r, mut new_r) = (self.p as i64, *a as i64);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        Some(self.reduce_i128(t as i128))
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn parse(&self, s: &str) -> Result<u64, Error> {
        let q = Rationals.parse(s)?;
        let n = q.numer().mod_floor_i128(self.p);
        let d = q.denom().mod_floor_i128(self.p);
        let d = self
            .inv(&d)
            .ok_or_else(|| Error::Invalid(format!("{s:?} has a denominator divisible by {}", self.p)))?;
        Ok(self.mul(&n, &d))
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn elements(&self) -> Option<Vec<u64>> {
        Some((0..self.p).collect())
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.random_range(0..self.p)
    }
}

trait ModFloor {
    fn mod_floor_i128(&self, p: u64) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_i128(&self, p: u64) -> u64 {
        let m = BigInt::from(p);
        let r = ((self % &m) + &m) % &m;
        debug_assert!(!r.is_negative());
        r.to_u64().expect("residue fits in u64")
    }
}
