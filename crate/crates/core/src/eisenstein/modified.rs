//! The modified Eisenstein series: W_k, built from quotient-extension
//! Eisenstein series lifted along norm elements and raised in level, and the
//! Hall-divisor combination of weight-one W's that produces the Stickelberger
//! element in its constant term.

use super::qexp::{eisenstein_series, level_raise, QExpansion, Realization};
use super::setting::{ArithmeticSetting, IdealIndex};
use crate::error::{CsError, Result};
use crate::rings::Ring;
use std::collections::BTreeMap;

/// Squarefree divisors of the prime-to-p part of n_p (the index set of the
/// modification sum).
pub fn modification_divisors(setting: &ArithmeticSetting, n: &IdealIndex) -> Vec<IdealIndex> {
    let np = setting.n_p(n);
    let labels: Vec<String> = np
        .support()
        .into_iter()
        .filter(|l| !setting.place(l).map(|p| p.above_p).unwrap_or(true))
        .collect();
    subsets_as_ideals(&labels)
}

pub fn subsets_as_ideals(labels: &[String]) -> Vec<IdealIndex> {
    let mut out = vec![IdealIndex::one()];
    for l in labels {
        let mut next = Vec::with_capacity(out.len() * 2);
        for a in &out {
            next.push(a.clone());
            next.push(a.mul_prime(l));
        }
        out = next;
    }
    out
}

/// W_k(Psi_n, 1_R): the sum over m | n_p with (m, p) = 1 of
/// nu_m ( Psi^{H^m}_{n/m}(m) * prod_{v|m} (1 - N(v)^k)/#I_v * E_k^{H^m}(Psi_{n/m}, 1_R)|_m ).
pub fn modified_w_k<Re: Realization>(
    setting: &ArithmeticSetting,
    re: &Re,
    k: u32,
    n: &IdealIndex,
    ray: &IdealIndex,
    bound: u64,
) -> Result<QExpansion<Re::R>> {
    setting.check_star_shape(n)?;
    if !n.gcd(ray).is_one() {
        return Err(CsError::BadInput("modulus and ray must be coprime".into()));
    }
    let ring = re.ring().clone();
    let mut total: Option<QExpansion<Re::R>> = None;
    for m in modification_divisors(setting, n) {
        let n_sub = n.div(&m).unwrap();
        let joined = setting.inertia_join(&m)?;
        let (sub_setting, map) = setting.quotient_setting(&m, &n_sub)?;
        let sub_re = match re.quotient(&sub_setting, &joined, &map)? {
            None => continue, // the nu-lift kills this term
            Some(r) => r,
        };
        let sub_ring = sub_re.ring().clone();
        let e = eisenstein_series(&sub_setting, &sub_re, k, &n_sub, ray, bound)?;
        // scalar in the sub-ring: Psi^{H^m}_{n/m}(m) * prod (1 - N(v)^k)/#I_v
        let mut scalar = super::qexp::psi_modulus_value(&sub_setting, &sub_re, &n_sub, &m)?;
        for l in m.support() {
            let pl = setting.place(&l)?;
            // (1 - N(v)^k)/#I_v is an integer by the local-CFT congruence
            let num = num_bigint::BigInt::from(1)
                - num_bigint::BigInt::from(pl.norm).pow(k);
            let den = num_bigint::BigInt::from(pl.inertia.size());
            let q = &num / &den;
            if &q * &den != num {
                return Err(CsError::Invariant(format!(
                    "(1 - N({l})^k)/#I must be an integer (local CFT congruence)"
                )));
            }
            let as_ring = int_to_ring(&sub_ring, &q);
            scalar = sub_ring.mul(&scalar, &as_ring);
        }
        let scaled = e.scale(&sub_ring, &scalar);
        let raised = level_raise(&sub_ring, &scaled, &m);
        // nu-lift coefficientwise
        let iop = setting.inertia_order_product(&m)?;
        let mut coeffs = BTreeMap::new();
        for (a, c) in &raised.coeffs {
            let lifted = re.nu_lift(&sub_re, &joined, &map, iop, c);
            if !ring.is_zero(&lifted) {
                coeffs.insert(a.clone(), lifted);
            }
        }
        let term = QExpansion {
            weight: k,
            level: n.mul(ray),
            bound,
            coeffs,
        };
        total = Some(match total {
            None => term,
            Some(t) => t.add(&ring, &term),
        });
    }
    total.ok_or_else(|| CsError::Invariant("the modification sum contains m = 1".into()))
}

/// The further modification: the Hall-divisor sum over Q || P_ba of
/// nu_Q W_1^{H^Q}(Psi_{n/Q}, 1). No level raising is used.
pub fn modified_ol_w1<Re: Realization>(
    setting: &ArithmeticSetting,
    re: &Re,
    n: &IdealIndex,
    bound: u64,
) -> Result<QExpansion<Re::R>> {
    setting.check_star_shape(n)?;
    let ring = re.ring().clone();
    let p_ba = setting.hall_p_group_decomposition(n);
    let mut total: Option<QExpansion<Re::R>> = None;
    for q_support in subsets_as_ideals(&p_ba.support().into_iter().collect::<Vec<_>>()) {
        // Hall divisor: full exponents of n at the chosen support
        let q = IdealIndex(
            q_support
                .support()
                .into_iter()
                .map(|l| (l.clone(), n.ord(&l)))
                .collect(),
        );
        let n_sub = n.div(&q).unwrap();
        let joined = setting.inertia_join(&q)?;
        let (sub_setting, map) = setting.quotient_setting(&q, &n_sub)?;
        let sub_re = match re.quotient(&sub_setting, &joined, &map)? {
            None => continue,
            Some(r) => r,
        };
        let w = modified_w_k(&sub_setting, &sub_re, 1, &n_sub, &IdealIndex::one(), bound)?;
        let iop = setting.inertia_order_product(&q)?;
        let mut coeffs = BTreeMap::new();
        for (a, c) in &w.coeffs {
            let lifted = re.nu_lift(&sub_re, &joined, &map, iop, c);
            if !ring.is_zero(&lifted) {
                coeffs.insert(a.clone(), lifted);
            }
        }
        let term = QExpansion {
            weight: 1,
            level: n.clone(),
            bound,
            coeffs,
        };
        total = Some(match total {
            None => term,
            Some(t) => t.add(&ring, &term),
        });
    }
    total.ok_or_else(|| CsError::Invariant("the Hall sum contains Q = 1".into()))
}

pub fn int_to_ring<R: Ring>(ring: &R, n: &num_bigint::BigInt) -> R::Elem {
    use num_traits::Signed;
    let mag = n.abs();
    let digits = mag.to_u64_digits().1;
    // horner over u64 limbs in base 2^64; limb counts here are tiny
    let base = ring.pow(&ring.from_i64(2), 32);
    let base2 = ring.mul(&base, &base);
    let mut acc = ring.zero();
    for limb in digits.iter().rev() {
        acc = ring.mul(&acc, &base2);
        let lo = (limb & 0xffff_ffff) as i64;
        let hi = (limb >> 32) as i64;
        let limb_val = ring.add(&ring.mul(&ring.from_i64(hi), &base), &ring.from_i64(lo));
        acc = ring.add(&acc, &limb_val);
    }
    if n.is_negative() {
        ring.neg(&acc)
    } else {
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::qexp::{hecke_t, ChiRealization};
    use crate::group::{Character, FinAbGroup, PrimeSplit};
    use crate::stickelberger::PlaceData;

    fn setting_with_tame_modification() -> (ArithmeticSetting, ChiRealization) {
        // G = Z/2 x Z/3; tame place q7 with 3-group inertia contributes to
        // the modification sum; p-adic ramified place p3.
        let g = FinAbGroup::new(vec![2, 3], vec![1, 0]).unwrap();
        let i3 = g.subgroup(&[vec![0, 1]]).unwrap();
        let places = vec![
            PlaceData::new("p3", 3, i3.clone(), vec![0, 1], true, 1, 3).unwrap(),
            PlaceData::new("q7", 7, i3, vec![1, 0], false, 1, 3).unwrap(),
            PlaceData::new("l2", 2, g.subgroup(&[]).unwrap(), vec![1, 1], false, 0, 3).unwrap(),
        ];
        let level = IdealIndex::from_pairs(&[("p3", 1), ("q7", 1)]);
        let setting = ArithmeticSetting::new(g.clone(), 3, 1, places, level).unwrap();
        let split = PrimeSplit::new(&g, 3).unwrap();
        let chi = Character::new(split.prime_to_p.clone(), vec![1]).unwrap();
        let re = ChiRealization::new(&setting, 10, &chi).unwrap();
        (setting, re)
    }

    #[test]
    fn w_k_reduces_to_eisenstein_without_tame_part() {
        // n_p away from p empty: W_k = E_k
        let g = FinAbGroup::new(vec![2, 3], vec![1, 0]).unwrap();
        let i3 = g.subgroup(&[vec![0, 1]]).unwrap();
        let places = vec![
            PlaceData::new("p3", 3, i3, vec![0, 1], true, 1, 3).unwrap(),
            PlaceData::new("l2", 2, g.subgroup(&[]).unwrap(), vec![1, 1], false, 0, 3).unwrap(),
        ];
        let level = IdealIndex::from_pairs(&[("p3", 1)]);
        let setting = ArithmeticSetting::new(g.clone(), 3, 1, places, level).unwrap();
        let split = PrimeSplit::new(&g, 3).unwrap();
        let chi = Character::new(split.prime_to_p.clone(), vec![1]).unwrap();
        let re = ChiRealization::new(&setting, 10, &chi).unwrap();
        let ring = re.ring().clone();
        let w = modified_w_k(&setting, &re, 1, &setting.level, &IdealIndex::one(), 30).unwrap();
        let e = eisenstein_series(&setting, &re, 1, &setting.level, &IdealIndex::one(), 30).unwrap();
        assert!(w.eq_up_to_bound(&ring, &setting, &e));
    }

    #[test]
    fn t_l_eigenvalue_on_w_k() {
        let (setting, re) = setting_with_tame_modification();
        let ring = re.ring().clone();
        for k in [1u32, 3] {
            let w = modified_w_k(&setting, &re, k, &setting.level, &IdealIndex::one(), 40).unwrap();
            let tw = hecke_t(&setting, &re, &w, "l2").unwrap();
            let lam = ring.add(
                &re.psi_of(&setting.place("l2").unwrap().frobenius),
                &ring.pow(&ring.from_i64(2), (k - 1) as u64),
            );
            let rhs = w.scale(&ring, &lam);
            assert!(tw.eq_up_to_bound(&ring, &setting, &rhs));
        }
    }

    #[test]
    fn ol_w1_trivial_hall_part() {
        // P_ba empty here (Frobenius of p3 has a prime-to-p component), so
        // the Hall sum is the single term Q = 1 and olW1 = W1.
        let g = FinAbGroup::new(vec![2, 3], vec![1, 0]).unwrap();
        let i3 = g.subgroup(&[vec![0, 1]]).unwrap();
        let places = vec![
            PlaceData::new("p3", 3, i3, vec![1, 1], true, 1, 3).unwrap(),
            PlaceData::new("l2", 2, g.subgroup(&[]).unwrap(), vec![1, 1], false, 0, 3).unwrap(),
        ];
        let level = IdealIndex::from_pairs(&[("p3", 1)]);
        let setting = ArithmeticSetting::new(g.clone(), 3, 1, places, level).unwrap();
        let split = PrimeSplit::new(&g, 3).unwrap();
        let chi = Character::new(split.prime_to_p.clone(), vec![1]).unwrap();
        let re = ChiRealization::new(&setting, 10, &chi).unwrap();
        let ring = re.ring().clone();
        assert!(setting.hall_p_group_decomposition(&setting.level).is_one());
        let olw = modified_ol_w1(&setting, &re, &setting.level, 30).unwrap();
        let w = modified_w_k(&setting, &re, 1, &setting.level, &IdealIndex::one(), 30).unwrap();
        assert!(olw.eq_up_to_bound(&ring, &setting, &w));
    }

    #[test]
    fn ol_w1_coefficients_at_squarefree_pba() {
        // P_ba = {p3}: coefficient at a | P_ba of olW1(Psi_{n P'}) equals
        // prod over p | P_ba of (1 + nu_I (1 + delta_{p|a} psi(p)))
        let g = FinAbGroup::new(vec![2, 9], vec![1, 0]).unwrap();
        let i3 = g.subgroup(&[vec![0, 3]]).unwrap(); // order 3 inside Z/9
        let places = vec![
            PlaceData::new("p3", 3, i3.clone(), vec![0, 1], true, 1, 3).unwrap(),
            PlaceData::new("l2", 2, g.subgroup(&[]).unwrap(), vec![1, 1], false, 0, 3).unwrap(),
        ];
        let level = IdealIndex::from_pairs(&[("p3", 1)]);
        let setting = ArithmeticSetting::new(g.clone(), 3, 1, places, level).unwrap();
        let split = PrimeSplit::new(&g, 3).unwrap();
        let chi = Character::new(split.prime_to_p.clone(), vec![1]).unwrap();
        let re = ChiRealization::new(&setting, 8, &chi).unwrap();
        let ring = re.ring().clone();
        assert_eq!(
            setting.hall_p_group_decomposition(&setting.level),
            IdealIndex::from_pairs(&[("p3", 1)])
        );
        let olw = modified_ol_w1(&setting, &re, &setting.level, 30).unwrap();
        // nu_{I_p} inside the chi-component
        let nu = crate::group_ring::norm_element(
            &re.comp.ring,
            &re.comp
                .ring
                .group
                .subgroup(&[vec![3]])
                .unwrap(),
        );
        let psi_p = re.psi_of(&setting.place("p3").unwrap().frobenius);
        // a = 1: 1 + nu * (1 + 0) since p3 does not divide 1... delta = 0
        let expect_one = ring.add(&ring.one(), &nu);
        assert_eq!(olw.coeff(&ring, &IdealIndex::one()), expect_one);
        // a = p3: 1 + nu (1 + psi(p3))
        let expect_p = ring.add(
            &ring.one(),
            &ring.mul(&nu, &ring.add(&ring.one(), &psi_p)),
        );
        assert_eq!(olw.coeff(&ring, &IdealIndex::prime("p3")), expect_p);
    }
}
