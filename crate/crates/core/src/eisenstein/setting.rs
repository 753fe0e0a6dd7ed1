//! Abstract arithmetic settings: a finite prime table with inertia and
//! Frobenius data drives every Fourier-coefficient computation, replacing
//! actual number fields. Ideals are exponent multisets over the prime labels.

use crate::error::{CsError, Result};
use crate::group::{FinAbGroup, GElem, Subgroup};
use crate::stickelberger::PlaceData;
use std::collections::{BTreeMap, BTreeSet};

/// An ideal of the abstract setting: exponents over prime labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct IdealIndex(pub BTreeMap<String, u32>);

impl IdealIndex {
    pub fn one() -> Self {
        IdealIndex(BTreeMap::new())
    }
    pub fn prime(label: &str) -> Self {
        let mut m = BTreeMap::new();
        m.insert(label.to_string(), 1);
        IdealIndex(m)
    }
    pub fn from_pairs(pairs: &[(&str, u32)]) -> Self {
        IdealIndex(
            pairs
                .iter()
                .filter(|(_, e)| *e > 0)
                .map(|(l, e)| (l.to_string(), *e))
                .collect(),
        )
    }
    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }
    pub fn ord(&self, label: &str) -> u32 {
        self.0.get(label).copied().unwrap_or(0)
    }
    pub fn mul(&self, other: &IdealIndex) -> IdealIndex {
        let mut out = self.0.clone();
        for (l, e) in &other.0 {
            *out.entry(l.clone()).or_insert(0) += e;
        }
        IdealIndex(out)
    }
    pub fn mul_prime(&self, label: &str) -> IdealIndex {
        self.mul(&IdealIndex::prime(label))
    }
    pub fn divides(&self, other: &IdealIndex) -> bool {
        self.0.iter().all(|(l, e)| other.ord(l) >= *e)
    }
    pub fn div(&self, other: &IdealIndex) -> Option<IdealIndex> {
        if !other.divides(self) {
            return None;
        }
        let mut out = BTreeMap::new();
        for (l, e) in &self.0 {
            let r = e - other.ord(l);
            if r > 0 {
                out.insert(l.clone(), r);
            }
        }
        Some(IdealIndex(out))
    }
    pub fn gcd(&self, other: &IdealIndex) -> IdealIndex {
        let mut out = BTreeMap::new();
        for (l, e) in &self.0 {
            let r = (*e).min(other.ord(l));
            if r > 0 {
                out.insert(l.clone(), r);
            }
        }
        IdealIndex(out)
    }
    pub fn coprime(&self, other: &IdealIndex) -> bool {
        self.0.keys().all(|l| other.ord(l) == 0)
    }
    /// Hall-divisor test: self | other with gcd(self, other/self) = 1.
    pub fn is_hall_divisor_of(&self, other: &IdealIndex) -> bool {
        self.divides(other)
            && self
                .0
                .iter()
                .all(|(l, e)| other.ord(l) == *e)
    }
    pub fn support(&self) -> BTreeSet<String> {
        self.0.keys().cloned().collect()
    }
    pub fn is_squarefree(&self) -> bool {
        self.0.values().all(|&e| e == 1)
    }
    /// Moebius value of a squarefree ideal.
    pub fn mobius(&self) -> i64 {
        assert!(self.is_squarefree());
        if self.0.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Descriptor of an abstract cusp: the two attached ideals, the sign data
/// and a class index. The incidence predicates depend only on c_A.
#[derive(Clone, Debug)]
pub struct CuspData {
    pub b_ideal: IdealIndex,
    pub c_ideal: IdealIndex,
    /// sgn(N(a)); by convention +1 or -1
    pub sgn_a: i64,
    /// sgn(N(-c))
    pub sgn_neg_c: i64,
    /// the ideal (a) b_A^{-1} evaluated through psi^{-1} in the constant
    /// term formulas (shared by both routes, so it can be any ideal)
    pub a_over_b: IdealIndex,
    pub class_index: u32,
}

impl CuspData {
    /// [A] in C_0(b, n): gcd(b, c_A) = 1.
    pub fn in_c0(&self, b: &IdealIndex) -> bool {
        b.gcd(&self.c_ideal).is_one()
    }
    /// [A] in C_infty(b, n): b | c_A.
    pub fn in_cinf(&self, b: &IdealIndex) -> bool {
        b.divides(&self.c_ideal)
    }
}

/// The abstract model of (H/F, n): group with conjugation, prime table,
/// working prime, level and conductor, and the degree d = [F:Q].
#[derive(Clone, Debug)]
pub struct ArithmeticSetting {
    pub group: FinAbGroup,
    pub p: u64,
    pub degree: u32,
    pub places: Vec<PlaceData>,
    /// level n
    pub level: IdealIndex,
    /// conductor f_{H/F}
    pub conductor: IdealIndex,
}

impl ArithmeticSetting {
    pub fn new(
        group: FinAbGroup,
        p: u64,
        degree: u32,
        places: Vec<PlaceData>,
        level: IdealIndex,
    ) -> Result<ArithmeticSetting> {
        if p == 2 {
            return Err(CsError::PrimeTwo);
        }
        let mut conductor = IdealIndex::one();
        for pl in &places {
            if pl.cond_exp > 0 {
                conductor = conductor.mul(&IdealIndex::from_pairs(&[(&pl.label, pl.cond_exp)]));
            }
        }
        let s = ArithmeticSetting {
            group,
            p,
            degree,
            places,
            level,
            conductor,
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        // level support must be in the table and divisible by the conductor
        for l in self.level.support() {
            self.place(&l)?;
        }
        if !self.conductor.divides(&self.level) {
            return Err(CsError::Setting("conductor must divide the level".into()));
        }
        self.check_star_shape(&self.level)?;
        // Hall structure P_ba || P_p || P
        let p_all = self.p_part(&self.level);
        let p_p = self.hall_p_group_inertia(&self.level);
        let p_ba = self.hall_p_group_decomposition(&self.level);
        if !p_ba.is_hall_divisor_of(&p_p) || !p_p.is_hall_divisor_of(&p_all) {
            return Err(CsError::Setting("Hall chain P_ba || P_p || P fails".into()));
        }
        Ok(())
    }

    /// The (star) shape: n = f * Q * L with Q the p-part of n/f, L squarefree
    /// and coprime to f. Also the square-freeness of the prime-to-p part of
    /// n_p is asserted.
    pub fn check_star_shape(&self, n: &IdealIndex) -> Result<()> {
        let f = &self.conductor;
        if !f.divides(n) {
            return Err(CsError::Setting("conductor must divide the modulus".into()));
        }
        let rest = n.div(f).unwrap();
        let q = self.p_part(&rest);
        let l = rest.div(&q).unwrap();
        if !l.is_squarefree() {
            return Err(CsError::Setting("the tame auxiliary part must be square-free".into()));
        }
        if !l.coprime(f) {
            return Err(CsError::Setting("the tame auxiliary part must be prime to the conductor".into()));
        }
        // n_p away from p is square-free
        let np = self.n_p(n);
        for lab in np.support() {
            let pl = self.place(&lab)?;
            if !pl.above_p && np.ord(&lab) > 1 {
                return Err(CsError::Setting(
                    "prime-to-p part of n_p must be square-free".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn place(&self, label: &str) -> Result<&PlaceData> {
        self.places
            .iter()
            .find(|p| p.label == label)
            .ok_or_else(|| CsError::BadInput(format!("unknown place {label}")))
    }

    pub fn norm_of(&self, a: &IdealIndex) -> Result<u64> {
        let mut n: u64 = 1;
        for (l, e) in &a.0 {
            let pl = self.place(l)?;
            for _ in 0..*e {
                n = n
                    .checked_mul(pl.norm)
                    .ok_or_else(|| CsError::BadInput("norm overflow".into()))?;
            }
        }
        Ok(n)
    }

    /// p-part of an ideal: the sub-ideal supported on p-adic places.
    pub fn p_part(&self, a: &IdealIndex) -> IdealIndex {
        IdealIndex(
            a.0.iter()
                .filter(|(l, _)| self.place(l).map(|p| p.above_p).unwrap_or(false))
                .map(|(l, e)| (l.clone(), *e))
                .collect(),
        )
    }

    /// n_p: the Hall divisor of n supported on places whose inertia is a
    /// p-group (trivial inertia counts).
    pub fn n_p(&self, n: &IdealIndex) -> IdealIndex {
        IdealIndex(
            n.0.iter()
                .filter(|(l, _)| {
                    self.place(l)
                        .map(|p| is_p_power(p.inertia.size(), self.p))
                        .unwrap_or(false)
                })
                .map(|(l, e)| (l.clone(), *e))
                .collect(),
        )
    }

    /// P = gcd(n, p^infty) for the setting's own level.
    pub fn p_of_level(&self) -> IdealIndex {
        self.p_part(&self.level)
    }

    /// P_p: Hall divisor of P with I_v a p-group.
    pub fn hall_p_group_inertia(&self, n: &IdealIndex) -> IdealIndex {
        IdealIndex(
            self.p_part(n)
                .0
                .iter()
                .filter(|(l, _)| {
                    self.place(l)
                        .map(|p| is_p_power(p.inertia.size(), self.p))
                        .unwrap_or(false)
                })
                .map(|(l, e)| (l.clone(), *e))
                .collect(),
        )
    }

    /// P_ba: Hall divisor of P with G_v a p-group.
    pub fn hall_p_group_decomposition(&self, n: &IdealIndex) -> IdealIndex {
        IdealIndex(
            self.p_part(n)
                .0
                .iter()
                .filter(|(l, _)| {
                    self.place(l)
                        .map(|p| is_p_power(p.decomposition_group(&self.group).size(), self.p))
                        .unwrap_or(false)
                })
                .map(|(l, e)| (l.clone(), *e))
                .collect(),
        )
    }

    /// P': the product of the p-adic places of the table NOT dividing P.
    pub fn p_prime(&self) -> IdealIndex {
        let p_lv = self.p_of_level();
        IdealIndex(
            self.places
                .iter()
                .filter(|pl| pl.above_p && p_lv.ord(&pl.label) == 0)
                .map(|pl| (pl.label.clone(), 1))
                .collect(),
        )
    }

    /// P'_ba: p-adic places not dividing P_ba.
    pub fn p_prime_ba(&self) -> IdealIndex {
        let pba = self.hall_p_group_decomposition(&self.level);
        IdealIndex(
            self.places
                .iter()
                .filter(|pl| pl.above_p && pba.ord(&pl.label) == 0)
                .map(|pl| (pl.label.clone(), 1))
                .collect(),
        )
    }

    /// All ideals of norm at most `bound`.
    pub fn ideals_up_to(&self, bound: u64) -> Vec<IdealIndex> {
        let mut out = vec![IdealIndex::one()];
        for pl in &self.places {
            let mut next = vec![];
            for a in &out {
                let mut cur = a.clone();
                let mut norm = self.norm_of(&cur).unwrap();
                next.push(cur.clone());
                loop {
                    norm = match norm.checked_mul(pl.norm) {
                        Some(n) if n <= bound => n,
                        _ => break,
                    };
                    cur = cur.mul_prime(&pl.label);
                    next.push(cur.clone());
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    /// The subgroup N_m = sum of the inertia groups of the places dividing m.
    pub fn inertia_join(&self, m: &IdealIndex) -> Result<Subgroup> {
        let mut gens: Vec<GElem> = vec![];
        for l in m.support() {
            gens.extend(self.place(&l)?.inertia.elements.iter().cloned());
        }
        self.group.subgroup(&gens)
    }

    /// Product of the inertia orders over the places dividing m.
    pub fn inertia_order_product(&self, m: &IdealIndex) -> Result<u64> {
        let mut acc = 1u64;
        for l in m.support() {
            acc *= self.place(&l)?.inertia.size();
        }
        Ok(acc)
    }

    /// Derived setting for H^m/F: quotient by the inertia join of m, with the
    /// induced places; the (star) shape of the derived pair is re-asserted.
    pub fn quotient_setting(
        &self,
        m: &IdealIndex,
        new_level: &IdealIndex,
    ) -> Result<(ArithmeticSetting, crate::group::QuotientMap)> {
        let n_m = self.inertia_join(m)?;
        let (q, map) = self.group.quotient(&n_m)?;
        let mut places = vec![];
        for pl in &self.places {
            let gens: Vec<GElem> = pl
                .inertia
                .elements
                .iter()
                .map(|x| map.apply_raw(x))
                .collect();
            let inertia = q.subgroup(&gens)?;
            let cond_exp = if inertia.is_trivial() {
                0
            } else {
                pl.cond_exp
            };
            places.push(PlaceData::new(
                pl.label.clone(),
                pl.norm,
                inertia,
                map.apply_raw(&pl.frobenius),
                pl.above_p,
                cond_exp,
                self.p,
            )?);
        }
        let derived = ArithmeticSetting::new(q, self.p, self.degree, places, new_level.clone())?;
        Ok((derived, map))
    }
}

pub fn is_p_power(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_setting() -> ArithmeticSetting {
        // G = Z/2 x Z/3, c = (1,0), p = 3; one ramified p-adic place with
        // inertia the 3-part (P_ba since Frobenius also lies in the 3-part),
        // one tame ramified place, one unramified auxiliary place.
        let g = FinAbGroup::new(vec![2, 3], vec![1, 0]).unwrap();
        let i3 = g.subgroup(&[vec![0, 1]]).unwrap();
        let places = vec![
            PlaceData::new("p3", 3, i3, vec![0, 1], true, 1, 3).unwrap(),
            PlaceData::new(
                "q7",
                7,
                g.subgroup(&[vec![0, 1]]).unwrap(),
                vec![1, 0],
                false,
                1,
                3,
            )
            .unwrap(),
            PlaceData::new("l2", 2, g.subgroup(&[]).unwrap(), vec![1, 1], false, 0, 3).unwrap(),
        ];
        let level = IdealIndex::from_pairs(&[("p3", 1), ("q7", 1), ("l2", 1)]);
        ArithmeticSetting::new(g, 3, 1, places, level).unwrap()
    }

    #[test]
    fn ideal_arithmetic() {
        let a = IdealIndex::from_pairs(&[("x", 2), ("y", 1)]);
        let b = IdealIndex::from_pairs(&[("x", 1)]);
        assert!(b.divides(&a));
        assert_eq!(a.div(&b).unwrap(), IdealIndex::from_pairs(&[("x", 1), ("y", 1)]));
        assert!(!a.is_squarefree());
        assert!(b.is_hall_divisor_of(&IdealIndex::from_pairs(&[("x", 1), ("z", 4)])));
        assert!(!b.is_hall_divisor_of(&a));
        assert_eq!(IdealIndex::from_pairs(&[("x", 1), ("y", 1)]).mobius(), 1);
        assert_eq!(b.mobius(), -1);
    }

    #[test]
    fn setting_parts() {
        let s = toy_setting();
        assert_eq!(s.conductor, IdealIndex::from_pairs(&[("p3", 1), ("q7", 1)]));
        assert_eq!(s.p_of_level(), IdealIndex::from_pairs(&[("p3", 1)]));
        // q7 has 3-group inertia, l2 unramified: both divide n_p along with p3
        assert_eq!(
            s.n_p(&s.level),
            IdealIndex::from_pairs(&[("p3", 1), ("q7", 1), ("l2", 1)])
        );
        assert_eq!(
            s.hall_p_group_decomposition(&s.level),
            IdealIndex::from_pairs(&[("p3", 1)])
        );
        assert!(s.p_prime().is_one());
        let ideals = s.ideals_up_to(12);
        // 1, 2, 3, 4, 6, 7, 8, 9, 12, and products 2*2*3 = 12 etc
        assert!(ideals.contains(&IdealIndex::from_pairs(&[("l2", 2), ("p3", 1)])));
        assert!(ideals.iter().all(|a| s.norm_of(a).unwrap() <= 12));
    }

    #[test]
    fn quotient_setting_star() {
        // p3 and q7 share their inertia subgroup here, so the quotient by
        // the q7-join makes both unramified
        let s = toy_setting();
        let m = IdealIndex::prime("q7");
        let new_level = s.level.div(&m).unwrap();
        let (derived, _) = s.quotient_setting(&m, &new_level).unwrap();
        assert_eq!(derived.group.size(), 2);
        assert!(derived.place("q7").unwrap().inertia.is_trivial());
        assert!(derived.place("p3").unwrap().inertia.is_trivial());
        assert!(derived.conductor.is_one());

        // with independent inertia subgroups the other place stays ramified
        let g = FinAbGroup::new(vec![2, 3, 3], vec![1, 0, 0]).unwrap();
        let i_a = g.subgroup(&[vec![0, 1, 0]]).unwrap();
        let i_b = g.subgroup(&[vec![0, 0, 1]]).unwrap();
        let places = vec![
            PlaceData::new("p3", 3, i_a, vec![0, 1, 0], true, 1, 3).unwrap(),
            PlaceData::new("q7", 7, i_b, vec![1, 0, 0], false, 1, 3).unwrap(),
        ];
        let level = IdealIndex::from_pairs(&[("p3", 1), ("q7", 1)]);
        let s2 = ArithmeticSetting::new(g, 3, 1, places, level).unwrap();
        let (derived2, _) = s2
            .quotient_setting(&m, &s2.level.div(&m).unwrap())
            .unwrap();
        assert!(derived2.place("q7").unwrap().inertia.is_trivial());
        assert!(!derived2.place("p3").unwrap().inertia.is_trivial());
        assert_eq!(derived2.conductor, IdealIndex::from_pairs(&[("p3", 1)]));
    }

    #[test]
    fn cusp_predicates() {
        let c = CuspData {
            b_ideal: IdealIndex::one(),
            c_ideal: IdealIndex::from_pairs(&[("p3", 1)]),
            sgn_a: 1,
            sgn_neg_c: -1,
            a_over_b: IdealIndex::one(),
            class_index: 0,
        };
        assert!(c.in_cinf(&IdealIndex::prime("p3")));
        assert!(!c.in_c0(&IdealIndex::prime("p3")));
        assert!(c.in_c0(&IdealIndex::prime("q7")));
    }
}
