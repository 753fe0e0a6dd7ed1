//! Exact coefficient rings: integers, rationals, cyclotomic fields on the
//! power basis, and finite-precision p-adic rings with their unramified and
//! ramified extensions.

pub mod cyclotomic;
pub mod padic;
pub mod poly;

pub use cyclotomic::CycField;
pub use padic::{hensel_factor_of_cyclotomic, RamifiedRing, UnramRing, Zmod};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;

/// A commutative ring with exact equality. Ring "handles" are cheap to clone;
/// elements are owned values of the associated type.
pub trait Ring: Clone + PartialEq + Debug {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Multiplicative inverse, when one exists.
    fn try_inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
    fn sum<I: IntoIterator<Item = Self::Elem>>(&self, it: I) -> Self::Elem {
        it.into_iter().fold(self.zero(), |a, b| self.add(&a, &b))
    }
    fn product<I: IntoIterator<Item = Self::Elem>>(&self, it: I) -> Self::Elem {
        it.into_iter().fold(self.one(), |a, b| self.mul(&a, &b))
    }
}

/// A finite chain ring: local, principal maximal ideal `(pi)`, ideals totally
/// ordered `(1) > (pi) > ... > (pi^max_len) = (0)`. Smith reduction is valid
/// over such rings.
pub trait ChainRing: Ring {
    /// Generator of the maximal ideal.
    fn uniformizer(&self) -> Self::Elem;
    /// Nilpotency length: `pi^max_len = 0`.
    fn max_len(&self) -> u32;
    /// pi-adic valuation; `None` for the zero element (valuation >= max_len).
    fn val(&self, a: &Self::Elem) -> Option<u32>;
    /// Write `a = pi^v * u` with u a unit and v = val(a). Returns (v, u).
    fn unit_part(&self, a: &Self::Elem) -> Option<(u32, Self::Elem)>;

    fn pi_pow(&self, k: u32) -> Self::Elem {
        self.pow(&self.uniformizer(), k as u64)
    }
    /// Exact division `a / b` when `val(a) >= val(b)`.
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        let (va, ua) = self.unit_part(a)?;
        let (vb, ub) = self.unit_part(b)?;
        if va < vb {
            return None;
        }
        let inv = self.try_inv(&ub)?;
        Some(self.mul(&self.pi_pow(va - vb), &self.mul(&ua, &inv)))
    }
}

/// The ring of integers.
#[derive(Clone, PartialEq, Debug)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn from_i64(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn try_inv(&self, a: &BigInt) -> Option<BigInt> {
        if a.abs().is_one() {
            Some(a.clone())
        } else {
            None
        }
    }
}

/// The field of rational numbers.
#[derive(Clone, PartialEq, Debug)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn try_inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
}

/// p-adic valuation of a rational number (None for zero).
pub fn rational_val_p(a: &BigRational, p: u64) -> Option<i64> {
    if a.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v: i64 = 0;
    let mut num = a.numer().clone();
    while (&num % &p).is_zero() {
        num /= &p;
        v += 1;
    }
    let mut den = a.denom().clone();
    while (&den % &p).is_zero() {
        den /= &p;
        v -= 1;
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_valuation() {
        let x = BigRational::new(BigInt::from(18), BigInt::from(5));
        assert_eq!(rational_val_p(&x, 3), Some(2));
        assert_eq!(rational_val_p(&x, 5), Some(-1));
        assert_eq!(rational_val_p(&BigRational::zero(), 3), None);
    }
}
