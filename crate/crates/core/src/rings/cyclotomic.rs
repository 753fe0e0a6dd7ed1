//! The cyclotomic field Q(zeta_e) on the power basis of the e-th cyclotomic
//! polynomial. Equality is reduction to canonical form, so all comparisons
//! are exact.

use super::poly;
use super::{Rationals, Ring};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::rc::Rc;

/// Cyclotomic polynomial Phi_e as integer coefficients (index = degree).
pub fn cyclotomic_polynomial(e: u64) -> Vec<BigInt> {
    assert!(e >= 1);
    // x^e - 1 divided by the product of Phi_d for proper divisors d of e.
    let mut num = vec![BigInt::zero(); e as usize + 1];
    num[0] = -BigInt::one();
    num[e as usize] = BigInt::one();
    for d in 1..e {
        if e % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = int_poly_div_exact(&num, &phi_d);
        }
    }
    num
}

fn int_poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    // b is monic here; exact division.
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let mut quo = vec![BigInt::zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quo[i - db] = c.clone();
        for j in 0..=db {
            let t = &c * &b[j];
            rem[i - db + j] -= t;
        }
    }
    assert!(rem.iter().all(|x| x.is_zero()), "inexact polynomial division");
    quo
}

#[derive(Debug)]
struct CycData {
    order: u64,
    modulus: Vec<BigRational>,
    /// zeta^j reduced onto the power basis, for 0 <= j < order.
    zeta_pows: Vec<Vec<BigRational>>,
}

/// Handle for Q(zeta_e). Elements are coefficient vectors of length
/// deg Phi_e on the power basis 1, zeta, ..., zeta^{deg-1}.
#[derive(Clone, Debug)]
pub struct CycField {
    data: Rc<CycData>,
}

impl PartialEq for CycField {
    fn eq(&self, other: &Self) -> bool {
        self.data.order == other.data.order
    }
}

impl CycField {
    pub fn new(order: u64) -> Self {
        let phi: Vec<BigRational> = cyclotomic_polynomial(order)
            .into_iter()
            .map(BigRational::from)
            .collect();
        let deg = phi.len() - 1;
        let q = Rationals;
        let mut zeta_pows = Vec::with_capacity(order as usize);
        // x^j mod Phi, computed incrementally.
        let mut cur = vec![BigRational::one()];
        for _ in 0..order {
            let mut padded = cur.clone();
            padded.resize(deg.max(padded.len()), BigRational::zero());
            zeta_pows.push({
                let mut v = cur.clone();
                v.resize(deg, BigRational::zero());
                v
            });
            // multiply by x and reduce
            let mut next = vec![BigRational::zero()];
            next.extend(cur.iter().cloned());
            cur = poly::rem(&q, &next, &phi);
        }
        CycField {
            data: Rc::new(CycData {
                order,
                modulus: phi,
                zeta_pows,
            }),
        }
    }

    pub fn order(&self) -> u64 {
        self.data.order
    }

    pub fn degree(&self) -> usize {
        self.data.modulus.len() - 1
    }

    /// zeta^j as a field element.
    pub fn zeta_pow(&self, j: i64) -> Vec<BigRational> {
        let e = self.data.order as i64;
        let j = j.rem_euclid(e) as usize;
        self.data.zeta_pows[j].clone()
    }

    pub fn from_rational(&self, a: BigRational) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.degree()];
        if self.degree() == 0 {
            // order 1 or 2 has degree 1; degree 0 cannot happen for e >= 1
            unreachable!()
        }
        v[0] = a;
        v
    }

    /// Some(r) when the element lies in Q.
    pub fn to_rational(&self, a: &[BigRational]) -> Option<BigRational> {
        if a.iter().skip(1).all(|x| x.is_zero()) {
            Some(a.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    /// Galois action zeta -> zeta^s for s prime to the order.
    pub fn galois(&self, a: &[BigRational], s: u64) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.degree()];
        for (j, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let img = &self.data.zeta_pows[((j as u64 * s) % self.data.order) as usize];
            for (k, x) in img.iter().enumerate() {
                out[k] += c * x;
            }
        }
        out
    }
}

impl Ring for CycField {
    type Elem = Vec<BigRational>;

    fn zero(&self) -> Self::Elem {
        vec![BigRational::zero(); self.degree()]
    }
    fn one(&self) -> Self::Elem {
        self.from_rational(BigRational::one())
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| -x).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let q = Rationals;
        let p = poly::mul(&q, a, b);
        let mut r = poly::rem(&q, &p, &self.data.modulus);
        r.resize(self.degree(), BigRational::zero());
        r
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_rational(BigRational::from(BigInt::from(n)))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| x.is_zero())
    }
    fn try_inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            return None;
        }
        let q = Rationals;
        let at = poly::trim(&q, a.clone());
        let (g, s, _) = poly::xgcd(&q, &at, &self.data.modulus);
        if g.len() != 1 {
            return None; // non-trivial gcd: zero divisor (cannot happen in a field)
        }
        let ginv = g[0].recip();
        let mut inv = poly::scale(&q, &s, &ginv);
        inv = poly::rem(&q, &inv, &self.data.modulus);
        inv.resize(self.degree(), BigRational::zero());
        Some(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_polynomials() {
        let to_i = |v: Vec<BigInt>| v.iter().map(|x| format!("{}", x)).collect::<Vec<_>>();
        assert_eq!(to_i(cyclotomic_polynomial(1)), ["-1", "1"]);
        assert_eq!(to_i(cyclotomic_polynomial(4)), ["1", "0", "1"]);
        assert_eq!(to_i(cyclotomic_polynomial(6)), ["1", "-1", "1"]);
        assert_eq!(to_i(cyclotomic_polynomial(12)), ["1", "0", "-1", "0", "1"]);
    }

    #[test]
    fn zeta_arithmetic() {
        let f = CycField::new(12);
        let z = f.zeta_pow(1);
        let z12 = f.pow(&z, 12);
        assert!(f.is_one(&z12));
        let inv = f.try_inv(&z).unwrap();
        assert_eq!(inv, f.zeta_pow(-1));
        // primitive root of unity sums: 1 + zeta_3 + zeta_3^2 = 0
        let f3 = CycField::new(3);
        let s = f3.sum([f3.one(), f3.zeta_pow(1), f3.zeta_pow(2)]);
        assert!(f3.is_zero(&s));
    }

    #[test]
    fn galois_is_field_automorphism() {
        let f = CycField::new(5);
        let a = f.add(&f.zeta_pow(1), &f.from_i64(3));
        let b = f.sub(&f.zeta_pow(3), &f.from_i64(7));
        let lhs = f.galois(&f.mul(&a, &b), 2);
        let rhs = f.mul(&f.galois(&a, 2), &f.galois(&b, 2));
        assert_eq!(lhs, rhs);
    }
}
