//! Finite-precision p-adic rings: Z/p^N, its unramified extensions
//! (Z/p^N)[x]/(f) with f a Hensel-lifted irreducible factor of a cyclotomic
//! polynomial mod p, and the totally ramified chain extensions obtained by
//! adjoining p-power roots of unity.

use super::cyclotomic::cyclotomic_polynomial;
use super::{poly, ChainRing, Ring};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use std::rc::Rc;

/// Z/p^N with the valuation of Z_p truncated at N.
#[derive(Clone, Debug)]
pub struct Zmod {
    p: u64,
    n: u32,
    modulus: Rc<BigUint>,
}

impl PartialEq for Zmod {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n
    }
}

impl Zmod {
    pub fn new(p: u64, n: u32) -> Self {
        assert!(n >= 1);
        Zmod {
            p,
            n,
            modulus: Rc::new(BigUint::from(p).pow(n)),
        }
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn precision(&self) -> u32 {
        self.n
    }
    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }
    pub fn from_bigint(&self, a: &BigInt) -> BigUint {
        let m = BigInt::from((*self.modulus).clone());
        let r = a.mod_floor(&m);
        r.to_biguint().unwrap()
    }
    pub fn from_u64(&self, a: u64) -> BigUint {
        BigUint::from(a) % &*self.modulus
    }
    /// Image of a rational with denominator prime to p.
    pub fn from_rational(&self, a: &num_rational::BigRational) -> Option<BigUint> {
        let num = self.from_bigint(a.numer());
        let den = self.from_bigint(a.denom());
        let den_inv = self.try_inv(&den)?;
        Some(self.mul(&num, &den_inv))
    }
    /// Centered lift convenience for displays.
    pub fn to_string_padic(&self, a: &BigUint) -> String {
        format!("{}", a)
    }
}

impl Ring for Zmod {
    type Elem = BigUint;
    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one()
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a + b) % &*self.modulus
    }
    fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &*self.modulus - a
        }
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &*self.modulus
    }
    fn from_i64(&self, n: i64) -> BigUint {
        self.from_bigint(&BigInt::from(n))
    }
    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }
    fn try_inv(&self, a: &BigUint) -> Option<BigUint> {
        if (a % self.p).is_zero() {
            return None;
        }
        // extended Euclid on lifts
        let m = BigInt::from((*self.modulus).clone());
        let a = BigInt::from(a.clone());
        let e = a.extended_gcd(&m);
        debug_assert!(e.gcd.is_one());
        Some(self.from_bigint(&e.x))
    }
}

impl ChainRing for Zmod {
    fn uniformizer(&self) -> BigUint {
        self.from_u64(self.p)
    }
    fn max_len(&self) -> u32 {
        self.n
    }
    fn val(&self, a: &BigUint) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        let p = BigUint::from(self.p);
        let mut v = 0;
        let mut x = a.clone();
        while (&x % &p).is_zero() {
            x /= &p;
            v += 1;
        }
        Some(v)
    }
    fn unit_part(&self, a: &BigUint) -> Option<(u32, BigUint)> {
        let v = self.val(a)?;
        let mut x = a.clone();
        let p = BigUint::from(self.p);
        for _ in 0..v {
            x /= &p;
        }
        Some((v, x % &*self.modulus))
    }
}

// ---------------------------------------------------------------------------
// Unramified extensions

#[derive(Debug)]
struct UnramData {
    base: Zmod,
    /// Monic modulus f over Z/p^N, irreducible mod p; f | Phi_m mod p^N.
    modulus: Vec<BigUint>,
    /// Multiplicative order of the class of x (a root of unity), when built
    /// from a cyclotomic factor.
    root_order: u64,
}

/// (Z/p^N)[x]/(f): the ring O_chi at precision N. A chain ring with
/// uniformizer p and residue field F_{p^deg f}.
#[derive(Clone, Debug)]
pub struct UnramRing {
    data: Rc<UnramData>,
}

impl PartialEq for UnramRing {
    fn eq(&self, other: &Self) -> bool {
        self.data.base == other.data.base && self.data.modulus == other.data.modulus
    }
}

impl UnramRing {
    pub fn base(&self) -> &Zmod {
        &self.data.base
    }
    pub fn degree(&self) -> usize {
        self.data.modulus.len() - 1
    }
    pub fn p(&self) -> u64 {
        self.data.base.p
    }
    pub fn precision(&self) -> u32 {
        self.data.base.n
    }
    /// Order of the distinguished root of unity x.
    pub fn root_order(&self) -> u64 {
        self.data.root_order
    }
    /// x^j as an element.
    pub fn root_pow(&self, j: i64) -> Vec<BigUint> {
        let e = self.data.root_order as i64;
        let j = if e > 0 { j.rem_euclid(e) } else { 0 } as u64;
        let x = {
            let mut v = vec![BigUint::zero(); 2];
            v[1] = BigUint::one();
            self.reduce(v)
        };
        self.pow(&x, j)
    }
    pub fn from_base(&self, a: BigUint) -> Vec<BigUint> {
        let mut v = vec![BigUint::zero(); self.degree()];
        v[0] = a;
        v
    }
    pub fn from_rational(&self, a: &num_rational::BigRational) -> Option<Vec<BigUint>> {
        Some(self.from_base(self.data.base.from_rational(a)?))
    }
    fn reduce(&self, v: Vec<BigUint>) -> Vec<BigUint> {
        let mut r = poly::rem(&self.data.base, &v, &self.data.modulus);
        r.resize(self.degree(), BigUint::zero());
        r
    }
    /// Residue-field representation: coefficient vector mod p, or None if the
    /// element is in the maximal ideal.
    fn residue_nonzero(&self, a: &[BigUint]) -> bool {
        let p = BigUint::from(self.p());
        a.iter().any(|c| !(c % &p).is_zero())
    }
}

impl Ring for UnramRing {
    type Elem = Vec<BigUint>;
    fn zero(&self) -> Self::Elem {
        vec![BigUint::zero(); self.degree()]
    }
    fn one(&self) -> Self::Elem {
        self.from_base(BigUint::one())
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.data.base.add(x, y)).collect()
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.data.base.neg(x)).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let p = poly::mul(&self.data.base, a, b);
        self.reduce(p)
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_base(self.data.base.from_i64(n))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| x.is_zero())
    }
    fn try_inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if !self.residue_nonzero(a) {
            return None;
        }
        // Newton iteration from an inverse mod p.
        let inv_mod_p = {
            // work in F_p[x]/(f): xgcd over Z/p (valid since f irreducible mod p)
            let zp = Zmod::new(self.p(), 1);
            let am: Vec<BigUint> = a.iter().map(|c| c % zp.modulus()).collect();
            let fm: Vec<BigUint> = self.data.modulus.iter().map(|c| c % zp.modulus()).collect();
            let am = poly::trim(&zp, am);
            let (g, s, _) = poly::xgcd(&zp, &am, &fm);
            if g.len() != 1 {
                return None;
            }
            let ginv = zp.try_inv(&g[0])?;
            let mut v = poly::scale(&zp, &s, &ginv);
            v = poly::rem(&zp, &v, &fm);
            v.resize(self.degree(), BigUint::zero());
            v
        };
        let mut y: Vec<BigUint> = inv_mod_p; // already reduced entries < p
        // lift: y <- y(2 - a y), doubling correct digits
        let two = self.from_i64(2);
        let mut digits = 1u32;
        while digits < self.precision() {
            let ay = self.mul(a, &y);
            let corr = self.sub(&two, &ay);
            y = self.mul(&y, &corr);
            digits *= 2;
        }
        debug_assert!(self.is_one(&self.mul(a, &y)));
        Some(y)
    }
}

impl ChainRing for UnramRing {
    fn uniformizer(&self) -> Self::Elem {
        self.from_i64(self.p() as i64)
    }
    fn max_len(&self) -> u32 {
        self.precision()
    }
    fn val(&self, a: &Self::Elem) -> Option<u32> {
        a.iter()
            .filter_map(|c| self.data.base.val(c))
            .min()
            .or(None)
    }
    fn unit_part(&self, a: &Self::Elem) -> Option<(u32, Self::Elem)> {
        let v = self.val(a)?;
        let pk = BigUint::from(self.p()).pow(v);
        let u: Vec<BigUint> = a.iter().map(|c| c / &pk).collect();
        Some((v, u))
    }
}

// ---------------------------------------------------------------------------
// Hensel lifting of a cyclotomic factor

/// Multiplicative order of a mod n (a, n coprime).
pub fn mult_order(a: u64, n: u64) -> u64 {
    assert!(n >= 1);
    if n == 1 {
        return 1;
    }
    let mut x = a % n;
    let mut k = 1;
    while x != 1 {
        x = x * a % n;
        k += 1;
        assert!(k <= n, "not coprime");
    }
    k
}

/// Finds the monic irreducible factor of Phi_m over F_p containing a fixed
/// choice of primitive m-th root of unity, and Hensel-lifts it to Z/p^N.
/// Returns the ring (Z/p^N)[x]/(f) together with x of exact order m.
///
/// Requires p odd and p not dividing m. The degree of f is the order of
/// p modulo m.
pub fn hensel_factor_of_cyclotomic(m: u64, p: u64, n: u32) -> UnramRing {
    assert!(p % 2 == 1, "p must be odd");
    assert!(m == 1 || m % p != 0, "p must not divide the character order");
    let d = mult_order(p % m.max(1), m.max(1)).max(1);
    let d = if m <= 1 { 1 } else { d };
    let base = Zmod::new(p, n);

    if m <= 2 {
        // Phi_1 = x - 1, Phi_2 = x + 1: degree 1, root = 1 or -1. Use f = x - r.
        let r = if m <= 1 { base.one() } else { base.neg(&base.one()) };
        let f = vec![base.neg(&r), base.one()];
        return UnramRing {
            data: Rc::new(UnramData {
                base,
                modulus: f,
                root_order: m.max(1),
            }),
        };
    }

    // 1. find the factor mod p as the minimal polynomial of a root of unity
    //    of exact order m inside F_{p^d}.
    let zp = Zmod::new(p, 1);
    let g = irreducible_poly_mod_p(p, d as usize);
    // F_{p^d} = F_p[y]/(g); find xi of exact order m.
    let fq_one: Vec<BigUint> = {
        let mut v = vec![BigUint::zero(); d as usize];
        v[0] = BigUint::one();
        v
    };
    let fq_mul = |a: &Vec<BigUint>, b: &Vec<BigUint>| -> Vec<BigUint> {
        let prod = poly::mul(&zp, a, b);
        let mut r = poly::rem(&zp, &prod, &g);
        r.resize(d as usize, BigUint::zero());
        r
    };
    let fq_pow = |a: &Vec<BigUint>, mut e: u128| -> Vec<BigUint> {
        let mut base = a.clone();
        let mut acc = fq_one.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = fq_mul(&acc, &base);
            }
            base = fq_mul(&base, &base);
            e >>= 1;
        }
        acc
    };
    let q_minus_1: u128 = (0..d).fold(1u128, |acc, _| acc * p as u128) - 1;
    assert!(q_minus_1 % m as u128 == 0);
    let cof = q_minus_1 / m as u128;
    // deterministic search for an element whose cof-th power has exact order m
    let mut xi = fq_one.clone();
    'search: for trial in 1u64.. {
        // candidate: y + trial
        let mut cand = vec![BigUint::zero(); d as usize];
        cand[0] = BigUint::from(trial % p);
        if d > 1 {
            cand[1] = BigUint::one();
        } else {
            cand[0] = BigUint::from(trial % p);
            if cand[0].is_zero() {
                continue;
            }
        }
        let z = fq_pow(&cand, cof);
        // order of z divides m; need exactly m
        let mut ok = !z.iter().all(|c| c.is_zero());
        if ok {
            for q in prime_divisors(m) {
                let e = fq_pow(&z, (m / q) as u128);
                if e == fq_one {
                    ok = false;
                    break;
                }
            }
        }
        if ok && fq_pow(&z, m as u128) == fq_one {
            xi = z;
            break 'search;
        }
        assert!(trial < 10_000, "no primitive root found");
    }
    // minimal polynomial of xi: product over the Frobenius orbit (x - xi^{p^i}),
    // built in F_q[x] and read off as F_p coefficients
    let f_mod_p: Vec<BigUint> = {
        let mut polyq: Vec<Vec<BigUint>> = vec![fq_one.clone()]; // constant 1
        let mut pow = xi.clone();
        for _ in 0..d {
            let neg_pow: Vec<BigUint> = pow.iter().map(|c| zp.neg(c)).collect();
            let mut next: Vec<Vec<BigUint>> =
                vec![vec![BigUint::zero(); d as usize]; polyq.len() + 1];
            for (i, c) in polyq.iter().enumerate() {
                next[i + 1] = zp_vec_add(&zp, &next[i + 1], c);
                let t = fq_mul(c, &neg_pow);
                next[i] = zp_vec_add(&zp, &next[i], &t);
            }
            polyq = next;
            pow = fq_pow(&pow, p as u128);
        }
        polyq
            .iter()
            .map(|c| {
                assert!(
                    c.iter().skip(1).all(|x| x.is_zero()),
                    "minimal polynomial coefficient not in F_p"
                );
                c[0].clone()
            })
            .collect()
    };
    debug_assert_eq!(f_mod_p.len(), d as usize + 1);

    // 2. Hensel-lift f from mod p to mod p^N against Phi_m.
    let phi_int = cyclotomic_polynomial(m);
    let phi_n: Vec<BigUint> = phi_int.iter().map(|c| base.from_bigint(c)).collect();
    let phi_p: Vec<BigUint> = phi_int.iter().map(|c| zp.from_bigint(c)).collect();
    let g_mod_p = {
        let (q, r) = poly::divrem(&zp, &phi_p, &f_mod_p);
        assert!(r.is_empty(), "factor does not divide Phi mod p");
        q
    };
    // Bezout: s f + t g = 1 mod p
    let (one_p, s, t) = poly::xgcd(&zp, &f_mod_p, &g_mod_p);
    assert_eq!(one_p.len(), 1, "factor and cofactor not coprime mod p");

    let mut f_lift: Vec<BigUint> = f_mod_p.clone();
    let mut g_lift: Vec<BigUint> = g_mod_p.clone();
    let p_big = BigUint::from(p);
    for k in 1..n {
        // error e = (Phi - f g)/p^k mod p
        let fg = poly::mul(&base, &f_lift, &g_lift);
        let err = poly::sub(&base, &phi_n, &fg);
        let pk = p_big.pow(k);
        let e_over: Vec<BigUint> = err.iter().map(|c| (c / &pk) % &p_big).collect();
        let e_over = poly::trim(&zp, e_over);
        if e_over.is_empty() {
            continue;
        }
        // delta_f = (t e mod f), delta_g = (s e mod g) over F_p
        let df = poly::rem(&zp, &poly::mul(&zp, &t, &e_over), &f_mod_p);
        let dg = poly::rem(&zp, &poly::mul(&zp, &s, &e_over), &g_mod_p);
        f_lift = add_shifted(&base, &f_lift, &df, &pk);
        g_lift = add_shifted(&base, &g_lift, &dg, &pk);
    }
    debug_assert!({
        let fg = poly::mul(&base, &f_lift, &g_lift);
        poly::sub(&base, &phi_n, &fg).is_empty()
    });

    let ring = UnramRing {
        data: Rc::new(UnramData {
            base,
            modulus: f_lift,
            root_order: m,
        }),
    };
    debug_assert!(ring.is_one(&ring.root_pow(m as i64)));
    ring
}

fn zp_vec_add(zp: &Zmod, a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = b.get(i).cloned().unwrap_or_default();
            zp.add(&x, &y)
        })
        .collect()
}

fn add_shifted(base: &Zmod, f: &[BigUint], delta: &[BigUint], pk: &BigUint) -> Vec<BigUint> {
    let mut out = f.to_vec();
    if out.len() < delta.len() {
        out.resize(delta.len(), BigUint::zero());
    }
    for (i, d) in delta.iter().enumerate() {
        out[i] = base.add(&out[i], &((d * pk) % base.modulus()));
    }
    out
}

pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Deterministic search for a monic irreducible polynomial of degree d over F_p.
fn irreducible_poly_mod_p(p: u64, d: usize) -> Vec<BigUint> {
    let zp = Zmod::new(p, 1);
    if d == 1 {
        return vec![BigUint::zero(), BigUint::one()]; // x
    }
    // enumerate monic polynomials by counter
    let total = (p as u128).pow(d as u32);
    for idx in 0..total {
        let mut c = idx;
        let mut f: Vec<BigUint> = Vec::with_capacity(d + 1);
        for _ in 0..d {
            f.push(BigUint::from((c % p as u128) as u64));
            c /= p as u128;
        }
        f.push(BigUint::one());
        if is_irreducible_mod_p(&zp, &f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomial exists for every degree")
}

fn is_irreducible_mod_p(zp: &Zmod, f: &[BigUint], p: u64) -> bool {
    let d = f.len() - 1;
    // x^(p^d) = x mod f and gcd(x^(p^(d/q)) - x, f) = 1 for prime q | d
    let xpow = |e: u32| -> Vec<BigUint> {
        // compute x^(p^e) mod f by repeated p-powering
        let mut cur = vec![BigUint::zero(), BigUint::one()]; // x
        for _ in 0..e {
            cur = poly_pow_mod(zp, &cur, p, f);
        }
        cur
    };
    let x = vec![BigUint::zero(), BigUint::one()];
    let top = xpow(d as u32);
    if poly::sub(zp, &top, &x) != Vec::<BigUint>::new() {
        return false;
    }
    for q in prime_divisors(d as u64) {
        let e = (d as u64 / q) as u32;
        let g = poly::sub(zp, &xpow(e), &x);
        let (gcd, _, _) = poly::xgcd(zp, &g, &f.to_vec());
        if gcd.len() != 1 {
            return false;
        }
    }
    true
}

fn poly_pow_mod(zp: &Zmod, a: &[BigUint], mut e: u64, m: &[BigUint]) -> Vec<BigUint> {
    let mut base = a.to_vec();
    let mut acc = vec![BigUint::one()];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly::rem(zp, &poly::mul(zp, &acc, &base), m);
        }
        base = poly::rem(zp, &poly::mul(zp, &base, &base), m);
        e >>= 1;
    }
    acc
}

// ---------------------------------------------------------------------------
// Totally ramified chain extensions O[z]/(Phi_{p^a}(z), p^N)

#[derive(Debug)]
struct RamifiedData {
    base: UnramRing,
    /// p^a, the order of the adjoined root of unity (a >= 0; a = 0 means the
    /// trivial extension).
    root_order: u64,
    /// Phi_{p^a} with coefficients in the base ring.
    modulus: Vec<Vec<BigUint>>,
    /// ramification degree e = phi(p^a)
    e: u32,
}

/// O_chi[zeta_{p^a}] at precision p^N: a chain ring with uniformizer
/// zeta - 1 and length e*N where e = phi(p^a).
#[derive(Clone, Debug)]
pub struct RamifiedRing {
    data: Rc<RamifiedData>,
}

impl PartialEq for RamifiedRing {
    fn eq(&self, other: &Self) -> bool {
        self.data.base == other.data.base && self.data.root_order == other.data.root_order
    }
}

pub type RamElem = Vec<Vec<BigUint>>;

impl RamifiedRing {
    pub fn new(base: UnramRing, root_order: u64) -> Self {
        let p = base.p();
        assert!(root_order == 1 || {
            let mut m = root_order;
            while m % p == 0 {
                m /= p;
            }
            m == 1
        });
        let e = if root_order == 1 {
            1
        } else {
            (root_order - root_order / p) as u32
        };
        let modulus: Vec<Vec<BigUint>> = if root_order == 1 {
            // z - 1
            vec![base.neg(&base.one()), base.one()]
        } else {
            cyclotomic_polynomial(root_order)
                .iter()
                .map(|c| base.from_base(base.base().from_bigint(c)))
                .collect()
        };
        RamifiedRing {
            data: Rc::new(RamifiedData {
                base,
                root_order,
                modulus,
                e,
            }),
        }
    }
    pub fn base(&self) -> &UnramRing {
        &self.data.base
    }
    pub fn degree(&self) -> usize {
        self.data.modulus.len() - 1
    }
    pub fn ram_degree(&self) -> u32 {
        if self.data.root_order == 1 {
            1
        } else {
            self.data.e
        }
    }
    pub fn from_base(&self, a: <UnramRing as Ring>::Elem) -> RamElem {
        let mut v = vec![self.data.base.zero(); self.degree()];
        v[0] = a;
        v
    }
    /// z^j (the adjoined p-power root of unity).
    pub fn root_pow(&self, j: i64) -> RamElem {
        if self.data.root_order == 1 {
            return self.one();
        }
        let e = self.data.root_order as i64;
        let j = j.rem_euclid(e) as u64;
        let z = {
            let mut v = vec![self.data.base.zero(); self.degree().max(2)];
            v[1] = self.data.base.one();
            self.reduce(v)
        };
        self.pow(&z, j)
    }
    fn reduce(&self, v: RamElem) -> RamElem {
        let mut r = poly::rem(&self.data.base, &v, &self.data.modulus);
        r.resize(self.degree(), self.data.base.zero());
        r
    }
    /// Residue field size exponent: log_p #(O/pi).
    pub fn residue_degree(&self) -> u32 {
        self.data.base.degree() as u32
    }
}

impl Ring for RamifiedRing {
    type Elem = RamElem;
    fn zero(&self) -> RamElem {
        vec![self.data.base.zero(); self.degree()]
    }
    fn one(&self) -> RamElem {
        self.from_base(self.data.base.one())
    }
    fn add(&self, a: &RamElem, b: &RamElem) -> RamElem {
        a.iter().zip(b).map(|(x, y)| self.data.base.add(x, y)).collect()
    }
    fn neg(&self, a: &RamElem) -> RamElem {
        a.iter().map(|x| self.data.base.neg(x)).collect()
    }
    fn mul(&self, a: &RamElem, b: &RamElem) -> RamElem {
        let p = poly::mul(&self.data.base, a, b);
        self.reduce(p)
    }
    fn from_i64(&self, n: i64) -> RamElem {
        self.from_base(self.data.base.from_i64(n))
    }
    fn is_zero(&self, a: &RamElem) -> bool {
        a.iter().all(|x| self.data.base.is_zero(x))
    }
    fn try_inv(&self, a: &RamElem) -> Option<RamElem> {
        // unit iff unit_part at valuation 0 iff val = 0
        if self.val(a)? != 0 {
            return None;
        }
        // Newton-style: find inverse via iteration y <- y(2 - a y), starting
        // from a residue inverse. The residue of a is its image modulo
        // (p, z - 1): evaluate at z = 1 and invert in the residue field.
        let at_one: <UnramRing as Ring>::Elem = a
            .iter()
            .fold(self.data.base.zero(), |acc, c| self.data.base.add(&acc, c));
        let y0 = self.data.base.try_inv(&at_one)?;
        let mut y = self.from_base(y0);
        let two = self.from_i64(2);
        // pi-adic digits double each step; length e*N
        let steps = 32 - (self.max_len()).leading_zeros() + 1;
        for _ in 0..=steps {
            let ay = self.mul(a, &y);
            if self.is_one(&ay) {
                return Some(y);
            }
            y = self.mul(&y, &self.sub(&two, &ay));
        }
        if self.is_one(&self.mul(a, &y)) {
            Some(y)
        } else {
            None
        }
    }
}

impl ChainRing for RamifiedRing {
    fn uniformizer(&self) -> RamElem {
        if self.data.root_order == 1 {
            self.from_i64(self.p_i64())
        } else {
            self.sub(&self.root_pow(1), &self.one())
        }
    }
    fn max_len(&self) -> u32 {
        self.ram_degree() * self.data.base.precision()
    }
    fn val(&self, a: &RamElem) -> Option<u32> {
        if self.is_zero(a) {
            return None;
        }
        // v(a) >= k iff a * pi^(M - k) = 0, with M = max_len. Binary search.
        let m = self.max_len();
        let mut lo = 0u32; // v >= lo holds
        let mut hi = m; // v >= hi may fail
        // precompute pi powers by repeated squaring on demand
        while lo < hi {
            let mid = (lo + hi + 1) / 2;
            let t = self.mul(a, &self.pi_pow(m - mid));
            if self.is_zero(&t) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        Some(lo)
    }
    fn unit_part(&self, a: &RamElem) -> Option<(u32, RamElem)> {
        let v = self.val(a)?;
        // solve a = pi^v * u: divide by pi v times. pi division: solve
        // linearly; here do it by multiplying with a "pseudo-inverse":
        // every x with val >= 1 can be written pi * y; find y by linear
        // algebra over the base chain ring.
        let mut x = a.clone();
        for _ in 0..v {
            x = self.divide_by_pi(&x)?;
        }
        Some((v, x))
    }
}

impl RamifiedRing {
    fn p_i64(&self) -> i64 {
        self.data.base.p() as i64
    }

    /// Solve pi * y = x for y; any solution works (unique up to the
    /// annihilator, which does not affect further valuations/unit checks
    /// because we only use it when x = pi^v u with v >= 1).
    fn divide_by_pi(&self, x: &RamElem) -> Option<RamElem> {
        // Represent multiplication by pi as a matrix over the base ring on the
        // power basis and solve by Smith-style elimination. Dimension is
        // small (degree <= phi(p^a)), so direct elimination is fine.
        let d = self.degree();
        let base = &self.data.base;
        // columns: pi * z^j
        let mut cols: Vec<RamElem> = Vec::with_capacity(d);
        let pi = self.uniformizer();
        for j in 0..d {
            let mut zj = vec![base.zero(); d];
            zj[j] = base.one();
            cols.push(self.mul(&pi, &zj));
        }
        // Gaussian elimination over chain ring base: solve sum_j y_j col_j = x.
        // Build augmented matrix rows = d (power-basis coords), cols = d + 1.
        let mut mat: Vec<Vec<<UnramRing as Ring>::Elem>> = vec![vec![base.zero(); d + 1]; d];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..d {
                mat[i][j] = col[i].clone();
            }
        }
        for i in 0..d {
            mat[i][d] = x[i].clone();
        }
        match crate::linalg::solve_chain(base, &mut mat, d) {
            Some(y) => Some(y),
            None => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod_basics() {
        let r = Zmod::new(3, 4); // 81
        assert_eq!(r.from_i64(-1), BigUint::from(80u32));
        assert_eq!(r.val(&r.from_i64(18)), Some(2));
        let x = r.from_i64(7);
        let y = r.try_inv(&x).unwrap();
        assert!(r.is_one(&r.mul(&x, &y)));
        assert!(r.try_inv(&r.from_i64(6)).is_none());
    }

    #[test]
    fn hensel_lift_order_11_mod_3() {
        // ord_11(3) = 5, so O_chi has degree 5
        let ring = hensel_factor_of_cyclotomic(11, 3, 20);
        assert_eq!(ring.degree(), 5);
        let z = ring.root_pow(1);
        assert!(ring.is_one(&ring.pow(&z, 11)));
        assert!(!ring.is_one(&ring.pow(&z, 1)));
        let inv = ring.try_inv(&z).unwrap();
        assert_eq!(inv, ring.root_pow(-1));
    }

    #[test]
    fn hensel_quadratic_case() {
        // ord_4(3) = 2
        let ring = hensel_factor_of_cyclotomic(4, 3, 10);
        assert_eq!(ring.degree(), 2);
        let i = ring.root_pow(1);
        let m1 = ring.mul(&i, &i);
        assert_eq!(m1, ring.from_i64(-1));
    }

    #[test]
    fn ramified_chain_ring() {
        let base = hensel_factor_of_cyclotomic(1, 3, 6);
        let ram = RamifiedRing::new(base, 9); // e = 6
        assert_eq!(ram.max_len(), 36);
        let pi = ram.uniformizer();
        assert_eq!(ram.val(&pi), Some(1));
        let p = ram.from_i64(3);
        assert_eq!(ram.val(&p), Some(6));
        let (v, u) = ram.unit_part(&p).unwrap();
        assert_eq!(v, 6);
        assert!(ram.try_inv(&u).is_some());
        assert_eq!(ram.mul(&ram.pi_pow(6), &u), ram.from_i64(3));
    }
}
