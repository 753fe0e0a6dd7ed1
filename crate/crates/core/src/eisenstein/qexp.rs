//! Truncated Fourier expansions over an abstract setting, the tautological
//! character realizations, and the basic operators: Eisenstein series, T_l,
//! U_l and level raising.

use super::setting::{ArithmeticSetting, IdealIndex};
use crate::error::{CsError, Result};
use crate::group::{Character, GElem, PrimeSplit, Subgroup};
use crate::group_ring::{ChiComponent, GrElem, GroupRing};
use crate::rings::cyclotomic::CycField;
use crate::rings::{Ring, UnramRing, Zmod};
use std::collections::BTreeMap;

/// A realization of the tautological character: a coefficient ring together
/// with the unit values of the Galois group inside it, compatible with
/// passing to quotient settings and lifting back along norm maps.
pub trait Realization: Clone {
    type R: Ring;
    fn ring(&self) -> &Self::R;
    /// Value of the tautological character at a group element (a unit).
    fn psi_of(&self, g: &GElem) -> <Self::R as Ring>::Elem;
    /// Whether the realized character is unramified at the place (the
    /// group-ring character is ramified exactly where the extension is;
    /// a scalar character only where it is nontrivial on inertia).
    fn unramified_at(&self, place: &crate::stickelberger::PlaceData) -> bool;
    /// Realization on the quotient setting by the subgroup N (trivial on N
    /// required for scalar realizations: None when the character does not
    /// factor, in which case the norm-lifted contribution vanishes).
    fn quotient(
        &self,
        sub_setting: &ArithmeticSetting,
        n: &Subgroup,
        map: &crate::group::QuotientMap,
    ) -> Result<Option<Self>>;
    /// Lift along nu_m: (prod #I_v / #N) * sum of preimages; `sub` is the
    /// realization returned by `quotient`, `x` a value in the sub-ring.
    fn nu_lift(
        &self,
        sub: &Self,
        n: &Subgroup,
        map: &crate::group::QuotientMap,
        inertia_order_product: u64,
        x: &<Self::R as Ring>::Elem,
    ) -> <Self::R as Ring>::Elem;
}

/// The chi-component realization: values in O_chi[P] at precision p^N.
#[derive(Clone, Debug)]
pub struct ChiRealization {
    pub comp: ChiComponent,
    pub zn: Zmod,
}

impl ChiRealization {
    pub fn new(setting: &ArithmeticSetting, precision: u32, chi: &Character) -> Result<Self> {
        let comp = ChiComponent::new(&setting.group, setting.p, precision, chi)?;
        if !chi.is_faithful() {
            return Err(CsError::Setting("chi must be faithful on the prime-to-p part".into()));
        }
        if !chi.is_odd() {
            return Err(CsError::Setting("chi must be odd".into()));
        }
        let zn = Zmod::new(setting.p, precision);
        Ok(ChiRealization { comp, zn })
    }

    pub fn gr(&self) -> &GroupRing<UnramRing> {
        &self.comp.ring
    }
}

/// Transport a character of the prime-to-p part of `group` to the quotient
/// group along the projection (requires the kernel to be a p-group so the
/// prime-to-p parts are isomorphic).
pub fn transport_chi(
    group: &crate::group::FinAbGroup,
    map: &crate::group::QuotientMap,
    quotient: &crate::group::FinAbGroup,
    chi: &Character,
    p: u64,
) -> Result<Character> {
    let split_q = PrimeSplit::new(quotient, p)?;
    let split_g = PrimeSplit::new(group, p)?;
    let mut exps = vec![];
    for (i, &n) in split_q.prime_to_p.orders().iter().enumerate() {
        let mut e = split_q.prime_to_p.identity();
        e[i] = 1;
        let target = split_q.combine(&e, &split_q.p_part.identity());
        let pre = group
            .elements()
            .into_iter()
            .find(|g| map.apply_raw(g) == target)
            .ok_or_else(|| CsError::Invariant("quotient projection is surjective".into()))?;
        let (pre_prime, _) = split_g.split(&pre);
        let k = chi.value_exponent(&pre_prime);
        let l = chi.group.exponent();
        let num = k as u128 * n as u128;
        if num % l as u128 != 0 {
            return Err(CsError::Invariant(
                "character does not factor through the quotient".into(),
            ));
        }
        exps.push(((num / l as u128) % n as u128) as u32);
    }
    Character::new(split_q.prime_to_p.clone(), exps)
}

impl Realization for ChiRealization {
    type R = GroupRing<UnramRing>;

    fn ring(&self) -> &Self::R {
        &self.comp.ring
    }

    fn psi_of(&self, g: &GElem) -> GrElem<UnramRing> {
        self.comp.image_of_group_elem(g)
    }

    fn unramified_at(&self, place: &crate::stickelberger::PlaceData) -> bool {
        !place.is_ramified()
    }

    fn quotient(
        &self,
        sub_setting: &ArithmeticSetting,
        _n: &Subgroup,
        map: &crate::group::QuotientMap,
    ) -> Result<Option<Self>> {
        let chi_q = transport_chi(
            &self.comp.split.group,
            map,
            &sub_setting.group,
            &self.comp.chi,
            self.zn.p(),
        )?;
        let comp = ChiComponent::new(&sub_setting.group, self.zn.p(), self.zn.precision(), &chi_q)?;
        Ok(Some(ChiRealization {
            comp,
            zn: self.zn.clone(),
        }))
    }

    fn nu_lift(
        &self,
        sub: &Self,
        n: &Subgroup,
        map: &crate::group::QuotientMap,
        inertia_order_product: u64,
        x: &GrElem<UnramRing>,
    ) -> GrElem<UnramRing> {
        let gr = &self.comp.ring;
        let scale = gr.ring.from_i64((inertia_order_product / n.size()) as i64);
        let mut out = GrElem::zero();
        // preimages of each p-part coset under P -> p-part of quotient
        let split_g = &self.comp.split;
        let split_q = &sub.comp.split;
        for s in split_g.p_part.elements() {
            let g = split_g.combine(&split_g.prime_to_p.identity(), &s);
            let img = map.apply_raw(&g);
            let (_, img_p) = split_q.split(&img);
            if let Some(c) = x.coeffs.get(&img_p) {
                gr.insert(&mut out, s.clone(), gr.ring.mul(&scale, c));
            }
        }
        out
    }
}

/// Scalar realization at a single character psi of the full Galois group,
/// with exact cyclotomic values.
#[derive(Clone, Debug)]
pub struct PsiRealization {
    pub field: CycField,
    pub psi: Character,
}

impl PsiRealization {
    pub fn new(field: CycField, psi: Character) -> Self {
        assert_eq!(field.order(), psi.group.exponent());
        PsiRealization { field, psi }
    }
}

impl Realization for PsiRealization {
    type R = CycField;

    fn ring(&self) -> &CycField {
        &self.field
    }

    fn psi_of(&self, g: &GElem) -> <CycField as Ring>::Elem {
        self.psi.value(&self.field, g)
    }

    fn unramified_at(&self, place: &crate::stickelberger::PlaceData) -> bool {
        self.psi.is_trivial_on(&place.inertia)
    }

    fn quotient(
        &self,
        sub_setting: &ArithmeticSetting,
        n: &Subgroup,
        map: &crate::group::QuotientMap,
    ) -> Result<Option<Self>> {
        // psi must be trivial on N to factor
        if !self.psi.is_trivial_on(n) {
            return Ok(None);
        }
        // build psi-bar on the quotient: exponents via preimages
        let q = &sub_setting.group;
        let lq = q.exponent();
        let lg = self.psi.group.exponent();
        let mut exps = vec![];
        for (i, &nq) in q.orders().iter().enumerate() {
            let mut e = q.identity();
            e[i] = 1;
            let pre = self
                .psi
                .group
                .elements()
                .into_iter()
                .find(|g| map.apply_raw(g) == e)
                .ok_or_else(|| CsError::Invariant("projection is surjective".into()))?;
            let k = self.psi.value_exponent(&pre); // zeta_lg^k
            // want t with zeta_{lq-exp}: value = zeta_lq^{t * lq / nq}
            let num = k as u128 * nq as u128;
            if num % lg as u128 != 0 {
                return Err(CsError::Invariant("character must factor through the quotient".into()));
            }
            exps.push(((num / lg as u128) % nq as u128) as u32);
        }
        let psi_bar = Character::new(q.clone(), exps)?;
        // the quotient field: keep the full field (contains the sub-values)
        let sub_field = CycField::new(lq);
        Ok(Some(PsiRealization {
            field: sub_field,
            psi: psi_bar,
        }))
    }

    fn nu_lift(
        &self,
        sub: &Self,
        _n: &Subgroup,
        _map: &crate::group::QuotientMap,
        inertia_order_product: u64,
        x: &<CycField as Ring>::Elem,
    ) -> <CycField as Ring>::Elem {
        // psi(nu_m) = prod #I_v when psi factors (which `quotient` enforces)
        let up = embed_cyc(&sub.field, &self.field, x);
        self.field
            .mul(&self.field.from_i64(inertia_order_product as i64), &up)
    }
}

/// Embed a value of Q(zeta_small) into Q(zeta_big) (small | big).
pub fn embed_cyc(
    small: &CycField,
    big: &CycField,
    x: &<CycField as Ring>::Elem,
) -> <CycField as Ring>::Elem {
    if small.order() == big.order() {
        return x.clone();
    }
    assert_eq!(big.order() % small.order(), 0);
    let step = (big.order() / small.order()) as i64;
    let mut out = big.zero();
    for (j, c) in x.iter().enumerate() {
        if num_traits::Zero::is_zero(c) {
            continue;
        }
        let z = big.zeta_pow(j as i64 * step);
        let term: Vec<_> = z.iter().map(|t| t * c).collect();
        out = big.add(&out, &term);
    }
    out
}

// ---------------------------------------------------------------------------
// q-expansions

/// A truncated Fourier expansion: coefficients at the ideals of norm at most
/// `bound`, values in the realization's ring.
#[derive(Clone, Debug, PartialEq)]
pub struct QExpansion<R: Ring> {
    pub weight: u32,
    pub level: IdealIndex,
    pub bound: u64,
    pub coeffs: BTreeMap<IdealIndex, R::Elem>,
}

impl<R: Ring> QExpansion<R> {
    pub fn coeff(&self, ring: &R, a: &IdealIndex) -> R::Elem {
        self.coeffs.get(a).cloned().unwrap_or_else(|| ring.zero())
    }

    pub fn add(&self, ring: &R, other: &Self) -> Self {
        assert_eq!(self.weight, other.weight);
        let bound = self.bound.min(other.bound);
        let mut coeffs = BTreeMap::new();
        for (a, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            let e = coeffs.entry(a.clone()).or_insert_with(|| ring.zero());
            *e = ring.add(e, c);
        }
        QExpansion {
            weight: self.weight,
            level: self.level.clone(),
            bound,
            coeffs,
        }
    }

    pub fn scale(&self, ring: &R, c: &R::Elem) -> Self {
        QExpansion {
            weight: self.weight,
            level: self.level.clone(),
            bound: self.bound,
            coeffs: self
                .coeffs
                .iter()
                .map(|(a, x)| (a.clone(), ring.mul(c, x)))
                .collect(),
        }
    }

    pub fn sub(&self, ring: &R, other: &Self) -> Self {
        self.add(ring, &other.scale(ring, &ring.from_i64(-1)))
    }

    pub fn is_zero_up_to_bound(&self, ring: &R, setting: &ArithmeticSetting) -> bool {
        self.coeffs
            .iter()
            .all(|(a, c)| setting.norm_of(a).map(|n| n > self.bound).unwrap_or(false) || ring.is_zero(c))
    }

    /// Exact equality on every stored coefficient up to the common bound.
    pub fn eq_up_to_bound(&self, ring: &R, setting: &ArithmeticSetting, other: &Self) -> bool {
        let bound = self.bound.min(other.bound);
        for a in setting.ideals_up_to(bound) {
            if self.coeff(ring, &a) != other.coeff(ring, &a) {
                return false;
            }
        }
        true
    }
}

/// Psi_n(b): zero when gcd(b, n) != 1, otherwise the product of Frobenius
/// values. The modulus must be divisible by the conductor of the realized
/// character, so places prime to it are unramified for the realization.
pub fn psi_modulus_value<Re: Realization>(
    setting: &ArithmeticSetting,
    re: &Re,
    n: &IdealIndex,
    b: &IdealIndex,
) -> Result<<Re::R as Ring>::Elem> {
    if !b.gcd(n).is_one() {
        return Ok(re.ring().zero());
    }
    let mut acc = re.ring().one();
    for (l, e) in &b.0 {
        let pl = setting.place(l)?;
        if !re.unramified_at(pl) {
            return Err(CsError::Setting(format!(
                "place {l} is ramified for the character but prime to the modulus"
            )));
        }
        let v = re.psi_of(&pl.frobenius);
        acc = re.ring().mul(&acc, &re.ring().pow(&v, *e as u64));
    }
    Ok(acc)
}

/// The Eisenstein series E_k(Psi_n, 1_R): c(a) = sum over r | a coprime to R
/// of Psi_n(a/r) N(r)^{k-1}.
pub fn eisenstein_series<Re: Realization>(
    setting: &ArithmeticSetting,
    re: &Re,
    k: u32,
    n: &IdealIndex,
    ray: &IdealIndex,
    bound: u64,
) -> Result<QExpansion<Re::R>> {
    if k % 2 == 0 {
        return Err(CsError::BadInput("weight must be odd".into()));
    }
    if !n.gcd(ray).is_one() {
        return Err(CsError::BadInput("modulus and ray must be coprime".into()));
    }
    // the realized character's conductor must divide the modulus
    for pl in &setting.places {
        if n.ord(&pl.label) == 0 && !re.unramified_at(pl) {
            return Err(CsError::Setting(
                "modulus must be divisible by the conductor of the character".into(),
            ));
        }
    }
    let ring = re.ring();
    let mut coeffs = BTreeMap::new();
    for a in setting.ideals_up_to(bound) {
        let mut acc = ring.zero();
        for r in divisors(&a) {
            if !r.gcd(ray).is_one() {
                continue;
            }
            let quot = a.div(&r).unwrap();
            let psi = psi_modulus_value(setting, re, n, &quot)?;
            if ring.is_zero(&psi) {
                continue;
            }
            let nr = setting.norm_of(&r)?;
            let weight_factor = ring.pow(&ring.from_i64(nr as i64), (k - 1) as u64);
            acc = ring.add(&acc, &ring.mul(&psi, &weight_factor));
        }
        if !ring.is_zero(&acc) {
            coeffs.insert(a, acc);
        }
    }
    Ok(QExpansion {
        weight: k,
        level: n.mul(ray),
        bound,
        coeffs,
    })
}

pub fn divisors(a: &IdealIndex) -> Vec<IdealIndex> {
    let mut out = vec![IdealIndex::one()];
    for (l, e) in &a.0 {
        let mut next = vec![];
        for d in &out {
            for i in 0..=*e {
                let mut m = d.clone();
                if i > 0 {
                    m.0.insert(l.clone(), i);
                }
                next.push(m);
            }
        }
        out = next;
    }
    out
}

/// T_l for a prime l not dividing the level:
/// c(a, T_l f) = c(la, f) + delta_{l | a} psi(l) N(l)^{k-1} c(a/l, f).
pub fn hecke_t<Re: Realization>(
    setting: &ArithmeticSetting,
    re: &Re,
    f: &QExpansion<Re::R>,
    l: &str,
) -> Result<QExpansion<Re::R>> {
    let pl = setting.place(l)?;
    if f.level.ord(l) > 0 {
        return Err(CsError::BadInput(format!("T_{l} requires l prime to the level")));
    }
    if !re.unramified_at(pl) {
        return Err(CsError::Setting(
            "the nebentypus value at l needs l unramified for the character".into(),
        ));
    }
    let ring = re.ring();
    let psi_l = re.psi_of(&pl.frobenius);
    let nk = ring.pow(&ring.from_i64(pl.norm as i64), (f.weight - 1) as u64);
    let factor = ring.mul(&psi_l, &nk);
    let bound = f.bound / pl.norm;
    let mut coeffs = BTreeMap::new();
    for a in setting.ideals_up_to(bound) {
        let la = a.mul_prime(l);
        let mut acc = f.coeff(ring, &la);
        if a.ord(l) > 0 {
            let down = a.div(&IdealIndex::prime(l)).unwrap();
            acc = ring.add(&acc, &ring.mul(&factor, &f.coeff(ring, &down)));
        }
        if !ring.is_zero(&acc) {
            coeffs.insert(a, acc);
        }
    }
    Ok(QExpansion {
        weight: f.weight,
        level: f.level.clone(),
        bound,
        coeffs,
    })
}

/// U_l: c(a, U_l f) = c(la, f).
pub fn hecke_u<Re: Realization>(
    setting: &ArithmeticSetting,
    re: &Re,
    f: &QExpansion<Re::R>,
    l: &str,
) -> Result<QExpansion<Re::R>> {
    let pl = setting.place(l)?;
    let ring = re.ring();
    let bound = f.bound / pl.norm;
    let mut coeffs = BTreeMap::new();
    for a in setting.ideals_up_to(bound) {
        let c = f.coeff(ring, &a.mul_prime(l));
        if !ring.is_zero(&c) {
            coeffs.insert(a, c);
        }
    }
    Ok(QExpansion {
        weight: f.weight,
        level: f.level.clone(),
        bound,
        coeffs,
    })
}

/// Level raising: c(a, f|_m) = delta_{m | a} c(a/m, f).
pub fn level_raise<R: Ring>(ring: &R, f: &QExpansion<R>, m: &IdealIndex) -> QExpansion<R> {
    let mut coeffs = BTreeMap::new();
    for (a, c) in &f.coeffs {
        if !ring.is_zero(c) {
            coeffs.insert(a.mul(m), c.clone());
        }
    }
    QExpansion {
        weight: f.weight,
        level: f.level.mul(m),
        bound: f.bound,
        coeffs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FinAbGroup;
    use crate::stickelberger::PlaceData;

    fn chi_setting() -> (ArithmeticSetting, ChiRealization) {
        let g = FinAbGroup::new(vec![2, 3], vec![1, 0]).unwrap();
        let i3 = g.subgroup(&[vec![0, 1]]).unwrap();
        let places = vec![
            PlaceData::new("p3", 3, i3, vec![0, 1], true, 1, 3).unwrap(),
            PlaceData::new("l2", 2, g.subgroup(&[]).unwrap(), vec![1, 1], false, 0, 3).unwrap(),
            PlaceData::new("l5", 5, g.subgroup(&[]).unwrap(), vec![1, 2], false, 0, 3).unwrap(),
        ];
        let level = IdealIndex::from_pairs(&[("p3", 1)]);
        let setting = ArithmeticSetting::new(g.clone(), 3, 1, places, level).unwrap();
        let split = PrimeSplit::new(&g, 3).unwrap();
        let chi = Character::new(split.prime_to_p.clone(), vec![1]).unwrap();
        let re = ChiRealization::new(&setting, 12, &chi).unwrap();
        (setting, re)
    }

    #[test]
    fn eisenstein_prime_coefficients() {
        let (s, re) = chi_setting();
        let ring = re.ring().clone();
        let e1 = eisenstein_series(&s, &re, 1, &s.level, &IdealIndex::one(), 30).unwrap();
        // c(l) for unramified l prime to the level: psi(l) + 1
        let l2 = IdealIndex::prime("l2");
        let expect = ring.add(&re.psi_of(&s.place("l2").unwrap().frobenius), &ring.one());
        assert_eq!(e1.coeff(&ring, &l2), expect);
        // c(p3) = N^0 = 1 (psi_n(p3) = 0)
        assert_eq!(e1.coeff(&ring, &IdealIndex::prime("p3")), ring.one());
        // multiplicativity at coprime ideals
        let a = IdealIndex::prime("l2");
        let b = IdealIndex::prime("l5");
        let ab = a.mul(&b);
        assert_eq!(
            e1.coeff(&ring, &ab),
            ring.mul(&e1.coeff(&ring, &a), &e1.coeff(&ring, &b))
        );
    }

    #[test]
    fn hecke_t_eigenvalue_on_eisenstein() {
        let (s, re) = chi_setting();
        let ring = re.ring().clone();
        for k in [1u32, 3] {
            let e = eisenstein_series(&s, &re, k, &s.level, &IdealIndex::one(), 40).unwrap();
            let te = hecke_t(&s, &re, &e, "l2").unwrap();
            let lam = ring.add(
                &re.psi_of(&s.place("l2").unwrap().frobenius),
                &ring.pow(&ring.from_i64(2), (k - 1) as u64),
            );
            let rhs = e.scale(&ring, &lam);
            assert!(te.eq_up_to_bound(&ring, &s, &rhs));
        }
    }

    #[test]
    fn u_and_raise_commute() {
        let (s, re) = chi_setting();
        let ring = re.ring().clone();
        let e = eisenstein_series(&s, &re, 1, &s.level, &IdealIndex::one(), 40).unwrap();
        let m = IdealIndex::prime("l5");
        let lhs = hecke_u(&s, &re, &level_raise(&ring, &e, &m), "l2").unwrap();
        let rhs = level_raise(&ring, &hecke_u(&s, &re, &e, "l2").unwrap(), &m);
        assert!(lhs.eq_up_to_bound(&ring, &s, &rhs));
        // c(m, f|_m) = c(1, f)
        let raised = level_raise(&ring, &e, &m);
        assert_eq!(raised.coeff(&ring, &m), e.coeff(&ring, &IdealIndex::one()));
        // m = 1 is the identity
        assert!(level_raise(&ring, &e, &IdealIndex::one()).eq_up_to_bound(&ring, &s, &e));
    }

    #[test]
    fn hecke_u_on_eisenstein_both_forms() {
        let (s, re) = chi_setting();
        let ring = re.ring().clone();
        let one = IdealIndex::one();
        for k in [1u32, 3] {
            let e_r = eisenstein_series(&s, &re, k, &s.level, &one, 60).unwrap();
            let u = hecke_u(&s, &re, &e_r, "p3").unwrap();
            // first form: delta_{p not | R} N(p)^{k-1} E(psi_n, 1_R) + psi_n(p) E(psi_n, 1_pR)
            // here psi_n(p3) = 0, so U E = N^{k-1} E
            let nk = ring.pow(&ring.from_i64(3), (k - 1) as u64);
            let rhs = e_r.scale(&ring, &nk);
            assert!(u.eq_up_to_bound(&ring, &s, &rhs));
            // second form: psi_n(p) E(psi_n, 1_R) + delta N^{k-1} E(psi_{pn}, 1_R)
            let e_pn = eisenstein_series(
                &s,
                &re,
                k,
                &s.level.mul_prime("p3"),
                &one,
                60,
            )
            .unwrap();
            let rhs2 = e_pn.scale(&ring, &nk);
            assert!(u.eq_up_to_bound(&ring, &s, &rhs2));
        }
    }
}
