//! Dense univariate polynomial helpers over the generic ring trait.
//! Coefficient index = degree; invariant: no trailing zero (except the zero
//! polynomial, represented by the empty vector).

use super::Ring;

pub fn trim<R: Ring>(ring: &R, mut v: Vec<R::Elem>) -> Vec<R::Elem> {
    while let Some(last) = v.last() {
        if ring.is_zero(last) {
            v.pop();
        } else {
            break;
        }
    }
    v
}

pub fn add<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(|| ring.zero());
        let y = b.get(i).cloned().unwrap_or_else(|| ring.zero());
        out.push(ring.add(&x, &y));
    }
    trim(ring, out)
}

pub fn neg<R: Ring>(ring: &R, a: &[R::Elem]) -> Vec<R::Elem> {
    a.iter().map(|x| ring.neg(x)).collect()
}

pub fn sub<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    add(ring, a, &neg(ring, b))
}

pub fn mul<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if ring.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = ring.add(&out[i + j], &ring.mul(x, y));
        }
    }
    trim(ring, out)
}

pub fn scale<R: Ring>(ring: &R, a: &[R::Elem], c: &R::Elem) -> Vec<R::Elem> {
    trim(ring, a.iter().map(|x| ring.mul(x, c)).collect())
}

/// Division with remainder by a polynomial whose leading coefficient is a
/// unit; returns (quotient, remainder).
pub fn divrem<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> (Vec<R::Elem>, Vec<R::Elem>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let lead_inv = ring
        .try_inv(b.last().unwrap())
        .expect("divisor leading coefficient must be a unit");
    let mut rem: Vec<R::Elem> = a.to_vec();
    let db = b.len() - 1;
    if rem.len() <= db {
        return (vec![], trim(ring, rem));
    }
    let mut quo = vec![ring.zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        let c = ring.mul(&rem[i], &lead_inv);
        if ring.is_zero(&c) {
            continue;
        }
        quo[i - db] = c.clone();
        for j in 0..=db {
            let t = ring.mul(&c, &b[j]);
            rem[i - db + j] = ring.sub(&rem[i - db + j], &t);
        }
    }
    (trim(ring, quo), trim(ring, rem))
}

pub fn rem<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    divrem(ring, a, b).1
}

/// Extended gcd over a field-like ring (every nonzero leading coefficient
/// invertible). Returns (g, s, t) with s*a + t*b = g, g monic (or zero).
pub fn xgcd<R: Ring>(
    ring: &R,
    a: &[R::Elem],
    b: &[R::Elem],
) -> (Vec<R::Elem>, Vec<R::Elem>, Vec<R::Elem>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    let mut s0 = vec![ring.one()];
    let mut s1: Vec<R::Elem> = vec![];
    let mut t0: Vec<R::Elem> = vec![];
    let mut t1 = vec![ring.one()];
    while !r1.is_empty() {
        let (q, r) = divrem(ring, &r0, &r1);
        let ns = sub(ring, &s0, &mul(ring, &q, &s1));
        let nt = sub(ring, &t0, &mul(ring, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, ns);
        t0 = std::mem::replace(&mut t1, nt);
    }
    if let Some(lead) = r0.last() {
        let inv = ring.try_inv(lead).expect("gcd leading coefficient not a unit");
        r0 = scale(ring, &r0, &inv);
        s0 = scale(ring, &s0, &inv);
        t0 = scale(ring, &t0, &inv);
    }
    (r0, s0, t0)
}

pub fn eval<R: Ring>(ring: &R, a: &[R::Elem], x: &R::Elem) -> R::Elem {
    let mut acc = ring.zero();
    for c in a.iter().rev() {
        acc = ring.add(&ring.mul(&acc, x), c);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Rationals;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn divrem_and_xgcd() {
        let r = Rationals;
        // a = x^2 - 1, b = x - 1
        let a = vec![q(-1), q(0), q(1)];
        let b = vec![q(-1), q(1)];
        let (quo, rem) = divrem(&r, &a, &b);
        assert_eq!(quo, vec![q(1), q(1)]);
        assert!(rem.is_empty());

        // gcd(x^2 - 1, x^2 - 2x + 1) = x - 1
        let c = vec![q(1), q(-2), q(1)];
        let (g, s, t) = xgcd(&r, &a, &c);
        assert_eq!(g, vec![q(-1), q(1)]);
        let lhs = add(&r, &mul(&r, &s, &a), &mul(&r, &t, &c));
        assert_eq!(lhs, g);
    }
}
