//! Dirichlet characters over Q with exact cyclotomic values, generalized
//! Bernoulli numbers, L-values at non-positive integers (with smoothing and
//! depletion factors), and the relative-class-number oracle built from them.

use crate::error::{CsError, Result};
use crate::group::{Character, FinAbGroup};
use crate::rings::cyclotomic::CycField;
use crate::rings::{rational_val_p, Ring};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The unit group (Z/m)^x in elementary form: independent generators with
/// their orders, assembled by CRT from the prime power components.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    pub modulus: u64,
    /// generator residues mod m
    pub gens: Vec<u64>,
    pub group: FinAbGroup,
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * a as u128 % m as u128) as u64;
        }
        a = (a as u128 * a as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

fn primitive_root_mod_prime_power(q: u64, k: u32) -> u64 {
    let qk = q.pow(k);
    let phi = qk - qk / q;
    let prime_factors = crate::rings::padic::prime_divisors(phi);
    'outer: for g in 2..qk {
        if g % q == 0 {
            continue;
        }
        for &f in &prime_factors {
            if pow_mod(g, phi / f, qk) == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("primitive root exists mod odd prime powers and 2, 4")
}

impl UnitGroup {
    pub fn new(m: u64) -> Result<UnitGroup> {
        if m == 0 {
            return Err(CsError::BadInput("modulus must be positive".into()));
        }
        // factor m
        let mut rest = m;
        let mut comps: Vec<(u64, u32)> = vec![];
        let mut d = 2;
        while d * d <= rest {
            if rest % d == 0 {
                let mut k = 0;
                while rest % d == 0 {
                    rest /= d;
                    k += 1;
                }
                comps.push((d, k));
            }
            d += 1;
        }
        if rest > 1 {
            comps.push((rest, 1));
        }
        // generators per component, lifted by CRT to mod m
        let mut gens: Vec<u64> = vec![];
        let mut orders: Vec<u32> = vec![];
        for &(q, k) in &comps {
            let qk = q.pow(k);
            let rest_mod = m / qk;
            let lift = |r: u64| -> u64 {
                // x = r mod qk, 1 mod rest
                if rest_mod == 1 {
                    return r % m;
                }
                let e = BigInt::from(qk as i64).extended_gcd(&BigInt::from(rest_mod as i64));
                // qk*s + rest*t = 1; x = r*rest*t + 1*qk*s
                let s: i128 = e.x.to_string().parse().unwrap();
                let t: i128 = e.y.to_string().parse().unwrap();
                let mm = m as i128;
                let x = (r as i128 * rest_mod as i128 % mm * t % mm
                    + qk as i128 * s % mm)
                    .rem_euclid(mm);
                x as u64
            };
            if q == 2 {
                if k == 1 {
                    continue; // trivial
                }
                // (Z/2^k)^x = <-1> x <5> for k >= 3; = <-1> for k = 2
                gens.push(lift(qk - 1));
                orders.push(2);
                if k >= 3 {
                    gens.push(lift(5 % qk));
                    orders.push(1 << (k - 2));
                }
            } else {
                let g = primitive_root_mod_prime_power(q, k);
                let phi = qk - qk / q;
                gens.push(lift(g));
                orders.push(phi as u32);
            }
        }
        if gens.is_empty() {
            gens.push(1 % m.max(1));
            orders.push(1);
        }
        // conjugation element: -1 mod m expressed in generator coordinates
        let group0 = FinAbGroup::new(orders.clone(), vec![0; orders.len()])?;
        let tmp = UnitGroup {
            modulus: m,
            gens: gens.clone(),
            group: group0,
        };
        let conj = tmp.dlog((m - 1) % m.max(1)).ok_or_else(|| {
            CsError::Invariant("-1 must lie in the unit group".into())
        })?;
        let group = FinAbGroup::new(orders, conj)?;
        Ok(UnitGroup {
            modulus: m,
            gens,
            group,
        })
    }

    /// Residue of a group element.
    pub fn residue(&self, x: &[u32]) -> u64 {
        let mut acc = 1u64 % self.modulus.max(1);
        for (g, &e) in self.gens.iter().zip(x) {
            acc = (acc as u128 * pow_mod(*g, e as u64, self.modulus.max(1)) as u128
                % self.modulus.max(1) as u128) as u64;
        }
        acc
    }

    /// Discrete log of a unit, by exhausting the (small) group.
    pub fn dlog(&self, a: u64) -> Option<Vec<u32>> {
        if self.modulus == 1 {
            return Some(self.gens.iter().map(|_| 0).collect());
        }
        if a.gcd(&self.modulus) != 1 {
            return None;
        }
        let a = a % self.modulus;
        // odometer over exponent vectors
        let orders: Vec<u32> = self.group.orders().to_vec();
        let mut x = vec![0u32; orders.len()];
        loop {
            if self.residue(&x) == a {
                return Some(x);
            }
            let mut i = 0;
            loop {
                if i == orders.len() {
                    return None;
                }
                x[i] += 1;
                if x[i] < orders[i] {
                    break;
                }
                x[i] = 0;
                i += 1;
            }
        }
    }
}

/// A Dirichlet character mod m with values in Q(zeta_L), L = exp((Z/m)^x).
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    pub units: UnitGroup,
    pub character: Character,
    pub conductor: u64,
}

impl DirichletCharacter {
    pub fn new(units: UnitGroup, exps: Vec<u32>) -> Result<DirichletCharacter> {
        let character = Character::new(units.group.clone(), exps)?;
        let mut chi = DirichletCharacter {
            units,
            character,
            conductor: 1,
        };
        chi.conductor = chi.compute_conductor();
        Ok(chi)
    }

    /// All characters mod m, ordered by exponent vector (reproducible
    /// labels: `char-index` i is the i-th in this order).
    pub fn all(m: u64) -> Result<Vec<DirichletCharacter>> {
        let units = UnitGroup::new(m)?;
        Ok(units
            .group
            .elements()
            .into_iter()
            .map(|exps| {
                let character = Character::new(units.group.clone(), exps).unwrap();
                let mut chi = DirichletCharacter {
                    units: units.clone(),
                    character,
                    conductor: 1,
                };
                chi.conductor = chi.compute_conductor();
                chi
            })
            .collect())
    }

    pub fn modulus(&self) -> u64 {
        self.units.modulus
    }

    pub fn is_odd(&self) -> bool {
        self.character.is_odd()
    }

    /// chi(a) as zeta-exponent, None when gcd(a, m) > 1.
    pub fn value_exponent(&self, a: u64) -> Option<u64> {
        let x = self.units.dlog(a % self.modulus().max(1))?;
        Some(self.character.value_exponent(&x))
    }

    /// chi(a) in the given cyclotomic field (of order = group exponent),
    /// zero when a is not prime to the modulus.
    pub fn value(&self, field: &CycField, a: u64) -> <CycField as Ring>::Elem {
        match self.value_exponent(a) {
            None => field.zero(),
            Some(k) => field.zeta_pow(k as i64),
        }
    }

    /// Value of the associated primitive character: nonzero on a prime to
    /// the conductor even when a divides the modulus.
    pub fn primitive_value(&self, field: &CycField, a: u64) -> <CycField as Ring>::Elem {
        let f = self.conductor;
        if f == 1 {
            return field.one();
        }
        if a.gcd(&f) != 1 {
            return field.zero();
        }
        // find b = a mod f with gcd(b, m) = 1: b = a + k f
        let m = self.modulus();
        let mut b = a % f;
        while b.gcd(&m) != 1 {
            b += f;
        }
        self.value(field, b)
    }

    fn compute_conductor(&self) -> u64 {
        let m = self.modulus();
        let mut best = m;
        'divisors: for f in 1..=m {
            if m % f != 0 {
                continue;
            }
            // chi trivial on the kernel of (Z/m)^x -> (Z/f)^x?
            for a in 1..m.max(2) {
                if a.gcd(&m) == 1
                    && a % f == 1 % f.max(1)
                    && self.value_exponent(a) != Some(0)
                {
                    continue 'divisors;
                }
            }
            best = f;
            break;
        }
        best
    }

    /// The order of the character (order of its value group).
    pub fn order(&self) -> u64 {
        self.character.order()
    }
}

// ---------------------------------------------------------------------------
// Bernoulli machinery

/// Bernoulli numbers B_0..B_n with B_1 = -1/2, memoized by the caller.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(BigRational::one());
            continue;
        }
        // sum_{j<m} C(m+1, j) B_j = 0
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one(); // C(m+1, 0)
        for (j, bj) in b.iter().enumerate().take(m) {
            acc += BigRational::from(binom.clone()) * bj;
            // C(m+1, j+1) = C(m+1, j) * (m+1-j)/(j+1)
            binom = binom * BigInt::from((m + 1 - j) as i64) / BigInt::from((j + 1) as i64);
        }
        let denom = BigRational::from(BigInt::from((m + 1) as i64));
        b.push(-acc / denom);
    }
    b
}

/// Bernoulli polynomial values B_k(x) = sum_j C(k,j) B_j x^{k-j}.
pub fn bernoulli_polynomial_at(k: usize, x: &BigRational, numbers: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    let mut binom = BigInt::one();
    let mut xpow = vec![BigRational::one()];
    for _ in 1..=k {
        let last = xpow.last().unwrap().clone();
        xpow.push(last * x);
    }
    for j in 0..=k {
        let term = BigRational::from(binom.clone()) * &numbers[j] * &xpow[k - j];
        acc += term;
        if j < k {
            binom = binom * BigInt::from((k - j) as i64) / BigInt::from((j + 1) as i64);
        }
    }
    acc
}

/// Generalized Bernoulli number B_{k, chi} = f^{k-1} sum_{a=1}^f chi(a) B_k(a/f)
/// for the primitive character of conductor f attached to chi.
pub fn generalized_bernoulli(
    chi: &DirichletCharacter,
    k: u32,
    field: &CycField,
) -> <CycField as Ring>::Elem {
    assert!(k >= 1);
    let f = chi.conductor;
    let numbers = bernoulli_numbers(k as usize);
    let mut acc = field.zero();
    for a in 1..=f {
        let v = chi.primitive_value(field, a);
        if field.is_zero(&v) {
            continue;
        }
        let x = BigRational::new(BigInt::from(a as i64), BigInt::from(f as i64));
        let bk = bernoulli_polynomial_at(k as usize, &x, &numbers);
        acc = field.add(&acc, &field.mul(&v, &field.from_rational(bk)));
    }
    let scale = BigRational::from(BigInt::from(f as i64)).pow((k - 1) as i32);
    field.mul(&acc, &field.from_rational(scale))
}

/// L(chi, 1-k) = -B_{k,chi}/k (primitive character), optionally multiplied by
/// depletion factors (1 - chi(l) l^{k-1}) for l in `deplete` not dividing the
/// conductor, and smoothing factors (1 - chi(l) l^k) for l in `smooth`.
pub fn l_value(
    chi: &DirichletCharacter,
    k: u32,
    deplete: &[u64],
    smooth: &[u64],
    field: &CycField,
) -> <CycField as Ring>::Elem {
    assert!(k >= 1);
    let b = generalized_bernoulli(chi, k, field);
    let kinv = field
        .try_inv(&field.from_i64(k as i64))
        .expect("k nonzero");
    let mut val = field.neg(&field.mul(&b, &kinv));
    for &l in deplete {
        if chi.conductor % l == 0 {
            continue;
        }
        let lk = BigRational::from(BigInt::from(l as i64)).pow((k - 1) as i32);
        let factor = field.sub(
            &field.one(),
            &field.mul(&chi.primitive_value(field, l), &field.from_rational(lk)),
        );
        val = field.mul(&val, &factor);
    }
    for &l in smooth {
        if chi.conductor % l == 0 {
            // the paper's smoothing product runs over v not dividing the
            // conductor; others contribute the factor 1
            continue;
        }
        let lk = BigRational::from(BigInt::from(l as i64)).pow(k as i32);
        let factor = field.sub(
            &field.one(),
            &field.mul(&chi.primitive_value(field, l), &field.from_rational(lk)),
        );
        val = field.mul(&val, &factor);
    }
    val
}

/// h_p^- = 2p * prod over odd characters mod p of (-B_{1,chi}/2), verified to
/// be a rational integer.
pub fn minus_class_number_oracle(p: u64) -> Result<BigInt> {
    if p == 2 || !is_prime(p) {
        return Err(CsError::BadInput("p must be an odd prime".into()));
    }
    let chars = DirichletCharacter::all(p)?;
    let exponent = chars[0].units.group.exponent();
    let field = CycField::new(exponent);
    let mut prod = field.from_rational(BigRational::from(BigInt::from(2 * p as i64)));
    let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
    for chi in chars.iter().filter(|c| c.is_odd()) {
        let b1 = generalized_bernoulli(chi, 1, &field);
        prod = field.mul(&prod, &field.mul(&b1, &field.from_rational(half.clone())));
    }
    let r = field
        .to_rational(&prod)
        .ok_or_else(|| CsError::Invariant("class number product must be rational".into()))?;
    if !r.denom().is_one() {
        return Err(CsError::Invariant(
            "class number product must be an integer".into(),
        ));
    }
    if !r.numer().is_positive() {
        return Err(CsError::Invariant("class number must be positive".into()));
    }
    Ok(r.numer().clone())
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// p-adic valuation of a cyclotomic-rational element's coordinates (minimum
/// over the power basis); None for zero.
pub fn coordinate_val_p(field: &CycField, x: &<CycField as Ring>::Elem, p: u64) -> Option<i64> {
    let mut best: Option<i64> = None;
    for c in x {
        if let Some(v) = rational_val_p(c, p) {
            best = Some(best.map_or(v, |b: i64| b.min(v)));
        }
    }
    let _ = field;
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn unit_group_structure() {
        let u = UnitGroup::new(23).unwrap();
        assert_eq!(u.group.size(), 22);
        let u8 = UnitGroup::new(8).unwrap();
        assert_eq!(u8.group.size(), 4);
        assert_eq!(u8.group.orders(), &[2, 2]);
        let u9 = UnitGroup::new(9).unwrap();
        assert_eq!(u9.group.size(), 6);
        // -1 is the designated conjugation
        for m in [3u64, 4, 5, 7, 8, 9, 12, 23, 40] {
            let u = UnitGroup::new(m).unwrap();
            assert_eq!(u.residue(u.group.conj()), m - 1);
        }
    }

    #[test]
    fn conductor_extraction() {
        // mod 12 characters: conductors divide 12
        for chi in DirichletCharacter::all(12).unwrap() {
            let f = chi.conductor;
            assert_eq!(12 % f, 0);
            // inducing the primitive character back reproduces chi pointwise
            let field = CycField::new(chi.units.group.exponent());
            for a in 1..12 {
                if num_integer::gcd(a, 12u64) != 1 {
                    continue;
                }
                assert_eq!(chi.value(&field, a), chi.primitive_value(&field, a));
            }
        }
    }

    #[test]
    fn bernoulli_classics() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[0], BigRational::one());
        assert_eq!(b[1], q(-1, 2));
        assert_eq!(b[2], q(1, 6));
        assert_eq!(b[12], q(-691, 2730));
    }

    #[test]
    fn generalized_bernoulli_golden() {
        // odd quadratic mod 4: B_1 = -1/2
        let chi4 = DirichletCharacter::all(4)
            .unwrap()
            .into_iter()
            .find(|c| c.is_odd())
            .unwrap();
        let f4 = CycField::new(chi4.units.group.exponent());
        let b = generalized_bernoulli(&chi4, 1, &f4);
        assert_eq!(f4.to_rational(&b).unwrap(), q(-1, 2));
        // odd quadratic mod 3: B_1 = -1/3
        let chi3 = DirichletCharacter::all(3)
            .unwrap()
            .into_iter()
            .find(|c| c.is_odd())
            .unwrap();
        let f3 = CycField::new(chi3.units.group.exponent());
        let b3 = generalized_bernoulli(&chi3, 1, &f3);
        assert_eq!(f3.to_rational(&b3).unwrap(), q(-1, 3));
        // trivial character (f = 1), k = 2: B_2 = 1/6, so zeta(-1) = -1/12
        let chi1 = DirichletCharacter::all(1).unwrap().remove(0);
        let f1 = CycField::new(1);
        let b2 = generalized_bernoulli(&chi1, 2, &f1);
        assert_eq!(f1.to_rational(&b2).unwrap(), q(1, 6));
        let z = l_value(&chi1, 2, &[], &[], &f1);
        assert_eq!(f1.to_rational(&z).unwrap(), q(-1, 12));
    }

    #[test]
    fn l_values_and_smoothing() {
        let chi4 = DirichletCharacter::all(4)
            .unwrap()
            .into_iter()
            .find(|c| c.is_odd())
            .unwrap();
        let f4 = CycField::new(chi4.units.group.exponent());
        let v = l_value(&chi4, 1, &[], &[], &f4);
        assert_eq!(f4.to_rational(&v).unwrap(), q(1, 2));
        // smoothing mod 3 at l = 5: chi(5) = chi(2) = -1: factor (1 - 5*(-1)) = 6
        let chi3 = DirichletCharacter::all(3)
            .unwrap()
            .into_iter()
            .find(|c| c.is_odd())
            .unwrap();
        let f3 = CycField::new(chi3.units.group.exponent());
        let v3 = l_value(&chi3, 1, &[], &[5], &f3);
        assert_eq!(f3.to_rational(&v3).unwrap(), q(2, 1));
        // even character at k = 1 vanishes
        let even = DirichletCharacter::all(5)
            .unwrap()
            .into_iter()
            .find(|c| !c.is_odd() && c.conductor == 5)
            .unwrap();
        let f5 = CycField::new(even.units.group.exponent());
        assert!(f5.is_zero(&l_value(&even, 1, &[], &[], &f5)));
    }

    #[test]
    fn parity_vanishing_small() {
        // B_{k,chi} = 0 when chi(-1) != (-1)^k, conductor <= 12, k <= 4,
        // except the single classical exception (k, chi) = (1, trivial)
        for m in 1..=12u64 {
            for chi in DirichletCharacter::all(m).unwrap() {
                if chi.conductor != m {
                    continue;
                }
                let field = CycField::new(chi.units.group.exponent());
                for k in 1..=4u32 {
                    let parity_match = chi.is_odd() == (k % 2 == 1);
                    if parity_match || (k == 1 && chi.conductor == 1) {
                        continue;
                    }
                    let b = generalized_bernoulli(&chi, k, &field);
                    assert!(
                        field.is_zero(&b),
                        "B_{{{k}, chi mod {m}}} should vanish by parity"
                    );
                }
            }
        }
    }

    #[test]
    fn minus_class_numbers() {
        assert_eq!(minus_class_number_oracle(3).unwrap(), BigInt::from(1));
        assert_eq!(minus_class_number_oracle(5).unwrap(), BigInt::from(1));
        assert_eq!(minus_class_number_oracle(23).unwrap(), BigInt::from(3));
    }
}
