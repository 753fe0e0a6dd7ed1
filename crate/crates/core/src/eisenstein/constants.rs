//! Constant terms of the modified series at abstract cusps, evaluated per
//! character with the Gauss sum left as a formal invertible symbol. A value
//! is a pair (tau_part, zero_part) representing
//!
//!   tau_part * tau(psi) L(psi^{-1}, 1-k) 2^{-d}  +  zero_part * L(psi, 0) 2^{-d},
//!
//! which is enough because every identity checked here is homogeneous in the
//! two symbols.

use super::setting::{ArithmeticSetting, CuspData, IdealIndex};
use crate::error::{CsError, Result};
use crate::group::Character;
use crate::rings::cyclotomic::CycField;
use crate::rings::Ring;
use num_bigint::BigInt;
use num_rational::BigRational;

type K = <CycField as Ring>::Elem;

#[derive(Clone, Debug, PartialEq)]
pub struct ConstantTerm {
    pub tau_part: K,
    pub zero_part: K,
}

/// psi(v): the Frobenius value when psi is unramified at v, zero otherwise.
pub fn psi_at_place(
    setting: &ArithmeticSetting,
    field: &CycField,
    psi: &Character,
    label: &str,
) -> Result<K> {
    let pl = setting.place(label)?;
    if !psi.is_trivial_on(&pl.inertia) {
        return Ok(field.zero());
    }
    Ok(psi.value(field, &pl.frobenius))
}

pub fn psi_at_ideal(
    setting: &ArithmeticSetting,
    field: &CycField,
    psi: &Character,
    a: &IdealIndex,
) -> Result<K> {
    let mut acc = field.one();
    for (l, e) in &a.0 {
        let v = psi_at_place(setting, field, psi, l)?;
        acc = field.mul(&acc, &field.pow(&v, *e as u64));
    }
    Ok(acc)
}

/// The conductor of psi in the abstract setting: the places where psi
/// ramifies, with the declared conductor exponents.
pub fn conductor_of_psi(setting: &ArithmeticSetting, psi: &Character) -> Result<IdealIndex> {
    let mut f = IdealIndex::one();
    for pl in &setting.places {
        if pl.is_ramified() && !psi.is_trivial_on(&pl.inertia) {
            f = f.mul(&IdealIndex::from_pairs(&[(&pl.label, pl.cond_exp)]));
        }
    }
    Ok(f)
}

/// The decomposition n = f_psi * Q_psi * L_psi.
pub struct PsiDecomposition {
    pub f_psi: IdealIndex,
    pub q_psi: IdealIndex,
    pub l_psi: IdealIndex,
}

pub fn psi_decomposition(
    setting: &ArithmeticSetting,
    psi: &Character,
    n: &IdealIndex,
) -> Result<PsiDecomposition> {
    let f_psi = conductor_of_psi(setting, psi)?;
    if !f_psi.divides(n) {
        return Err(CsError::Setting(
            "modulus must be divisible by the psi-conductor".into(),
        ));
    }
    let rest = n.div(&f_psi).unwrap();
    let q_psi = setting.p_part(&rest);
    let l_psi = rest.div(&q_psi).unwrap();
    if !l_psi.is_squarefree() || !l_psi.coprime(&f_psi) {
        return Err(CsError::Setting(
            "psi-decomposition violates the star shape".into(),
        ));
    }
    Ok(PsiDecomposition { f_psi, q_psi, l_psi })
}

fn rational(field: &CycField, num: i64, den: i64) -> K {
    field.from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// Constant term of W_k(psi_n, 1) at the cusp (the weight-k formula with
/// the group-theoretic data of the setting).
pub fn w_k_constant_term(
    setting: &ArithmeticSetting,
    field: &CycField,
    psi: &Character,
    k: u32,
    n: &IdealIndex,
    cusp: &CuspData,
) -> Result<ConstantTerm> {
    let dec = psi_decomposition(setting, psi, n)?;
    let psi_inv = psi.inverse();

    // tau part
    let mut tau_part = field.zero();
    if cusp.in_c0(&dec.f_psi.mul(&dec.q_psi)) {
        let nf = setting.norm_of(&dec.f_psi)? as i64;
        let mut acc = rational(field, cusp.sgn_neg_c, pow_i64(nf, k));
        acc = field.mul(&acc, &psi_at_ideal(setting, field, psi, &cusp.c_ideal)?);
        for l in dec.q_psi.support() {
            let np = setting.place(&l)?.norm as i64;
            let term = field.sub(
                &field.one(),
                &field.mul(
                    &psi_at_place(setting, field, psi, &l)?,
                    &rational(field, 1, pow_i64(np, k)),
                ),
            );
            acc = field.mul(&acc, &term);
        }
        for q in dec.l_psi.support() {
            let nq = setting.place(&q)?.norm as i64;
            let qi = IdealIndex::prime(&q);
            if cusp.in_c0(&qi) {
                let term = field.sub(&field.one(), &psi_at_place(setting, field, psi, &q)?);
                acc = field.mul(&acc, &term);
            } else {
                debug_assert!(cusp.in_cinf(&qi));
                let term = field.sub(&field.one(), &field.from_i64(pow_i64(nq, k)));
                acc = field.mul(&acc, &term);
            }
        }
        tau_part = acc;
    }

    // zero part (only in weight one)
    let mut zero_part = field.zero();
    if k == 1 && cusp.in_cinf(&dec.f_psi.mul(&dec.l_psi)) {
        let mut acc = rational(field, cusp.sgn_a, 1);
        acc = field.mul(&acc, &psi_at_ideal(setting, field, &psi_inv, &cusp.a_over_b)?);
        // the smoothing factors of L^{L_psi}(psi, 0)
        for q in dec.l_psi.support() {
            let nq = setting.place(&q)?.norm as i64;
            let term = field.sub(
                &field.one(),
                &field.mul(
                    &field.from_i64(nq),
                    &psi_at_place(setting, field, psi, &q)?,
                ),
            );
            acc = field.mul(&acc, &term);
        }
        for l in dec.q_psi.support() {
            let np = setting.place(&l)?.norm as i64;
            let li = IdealIndex::prime(&l);
            if cusp.in_c0(&li) {
                acc = field.mul(&acc, &rational(field, np - 1, np));
            } else {
                debug_assert!(cusp.in_cinf(&li));
                let term = field.sub(&field.one(), &psi_at_place(setting, field, psi, &l)?);
                acc = field.mul(&acc, &term);
            }
        }
        zero_part = acc;
    }
    Ok(ConstantTerm { tau_part, zero_part })
}

/// psi(h_v^sharp) = 1 - psi(v) + #I_v for psi unramified at v, 1 otherwise.
pub fn psi_h_sharp(
    setting: &ArithmeticSetting,
    field: &CycField,
    psi: &Character,
    label: &str,
) -> Result<K> {
    let pl = setting.place(label)?;
    if !psi.is_trivial_on(&pl.inertia) {
        return Ok(field.one());
    }
    let v = psi.value(field, &pl.frobenius);
    Ok(field.add(
        &field.sub(&field.one(), &v),
        &field.from_i64(pl.inertia.size() as i64),
    ))
}

/// psi(1 - (nu/#I) phi_v) = 1 - psi(v) for psi unramified at v, 1 otherwise.
pub fn psi_dk_factor(
    setting: &ArithmeticSetting,
    field: &CycField,
    psi: &Character,
    label: &str,
) -> Result<K> {
    let pl = setting.place(label)?;
    if !psi.is_trivial_on(&pl.inertia) {
        return Ok(field.one());
    }
    let v = psi.value(field, &pl.frobenius);
    Ok(field.sub(&field.one(), &v))
}

/// Direct formula for the constant term of olW1(psi_n, 1) on the locus
/// [A] in C_infty(P, n).
pub fn ol_w1_constant_term_direct(
    setting: &ArithmeticSetting,
    field: &CycField,
    psi: &Character,
    n: &IdealIndex,
    cusp: &CuspData,
) -> Result<ConstantTerm> {
    let p_all = setting.p_part(n);
    if !cusp.in_cinf(&p_all) {
        return Err(CsError::BadInput(
            "the direct formula requires the cusp to lie in C_infty(P, n)".into(),
        ));
    }
    let dec = psi_decomposition(setting, psi, n)?;
    let p_ba = setting.hall_p_group_decomposition(n);
    let psi_inv = psi.inverse();

    // tau part
    let mut tau_part = field.zero();
    let f_prime_to_p = dec.f_psi.gcd(&p_all).is_one();
    if f_prime_to_p && p_ba == p_all && cusp.in_c0(&dec.f_psi) {
        let nf = setting.norm_of(&dec.f_psi)? as i64;
        let mut acc = rational(field, cusp.sgn_neg_c, nf);
        let iop = setting.inertia_order_product(&p_all)? as i64;
        acc = field.mul(&acc, &field.from_i64(iop));
        acc = field.mul(&acc, &psi_at_ideal(setting, field, psi, &cusp.c_ideal)?);
        for q in dec.l_psi.support() {
            let nq = setting.place(&q)?.norm as i64;
            let qi = IdealIndex::prime(&q);
            if cusp.in_c0(&qi) {
                let term = field.sub(&field.one(), &psi_at_place(setting, field, psi, &q)?);
                acc = field.mul(&acc, &term);
            } else {
                let term = field.sub(&field.one(), &field.from_i64(nq));
                acc = field.mul(&acc, &term);
            }
        }
        tau_part = acc;
    }

    // zero part: psi(theta^sharp) expanded as L^{Sigma'}(psi,0)-smoothing
    // factors times the h^sharp products, times the unit correction at the
    // places of P/P_ba
    let mut zero_part = field.zero();
    if cusp.in_cinf(n) {
        let mut acc = rational(field, cusp.sgn_a, 1);
        acc = field.mul(&acc, &psi_at_ideal(setting, field, &psi_inv, &cusp.a_over_b)?);
        // Sigma' = prim(n / P): smoothing factors (1 - N(q) psi(q)) for q
        // prime to f_psi (others contribute 1 via psi(q) = 0)
        let sigma_prime = n.div(&p_all).unwrap();
        for q in sigma_prime.support() {
            let nq = setting.place(&q)?.norm as i64;
            let term = field.sub(
                &field.one(),
                &field.mul(
                    &field.from_i64(nq),
                    &psi_at_place(setting, field, psi, &q)?,
                ),
            );
            acc = field.mul(&acc, &term);
        }
        // prod over p | P of psi(h_p^sharp)
        for l in p_all.support() {
            acc = field.mul(&acc, &psi_h_sharp(setting, field, psi, &l)?);
        }
        // prod over p | P/P_ba of psi((1 - (nu/#I) phi) / h^sharp)
        for l in p_all.support() {
            if p_ba.ord(&l) > 0 {
                continue;
            }
            let num = psi_dk_factor(setting, field, psi, &l)?;
            let den = psi_h_sharp(setting, field, psi, &l)?;
            let den_inv = field
                .try_inv(&den)
                .ok_or_else(|| CsError::ZeroDivisor("psi(h^sharp) is nonzero".into()))?;
            acc = field.mul(&acc, &field.mul(&num, &den_inv));
        }
        zero_part = acc;
    }
    Ok(ConstantTerm { tau_part, zero_part })
}

/// The derived route: sum the W_1 constant terms at the moduli n/Q over the
/// Hall divisors Q of P_ba, weighted by psi(nu_Q).
pub fn ol_w1_constant_term_summed(
    setting: &ArithmeticSetting,
    field: &CycField,
    psi: &Character,
    n: &IdealIndex,
    cusp: &CuspData,
) -> Result<ConstantTerm> {
    let p_ba = setting.hall_p_group_decomposition(n);
    let labels: Vec<String> = p_ba.support().into_iter().collect();
    let mut tau_part = field.zero();
    let mut zero_part = field.zero();
    for q_sub in super::family::subsets(&labels) {
        let q = IdealIndex(q_sub.iter().map(|l| (l.clone(), n.ord(l))).collect());
        // psi(nu_Q): product of #I_p when psi is unramified at every p | Q
        let mut weight = field.one();
        let mut vanished = false;
        for l in &q_sub {
            let pl = setting.place(l)?;
            if !psi.is_trivial_on(&pl.inertia) {
                vanished = true;
                break;
            }
            weight = field.mul(&weight, &field.from_i64(pl.inertia.size() as i64));
        }
        if vanished {
            continue;
        }
        let n_sub = n.div(&q).unwrap();
        let term = w_k_constant_term(setting, field, psi, 1, &n_sub, cusp)?;
        tau_part = field.add(&tau_part, &field.mul(&weight, &term.tau_part));
        zero_part = field.add(&zero_part, &field.mul(&weight, &term.zero_part));
    }
    Ok(ConstantTerm { tau_part, zero_part })
}

/// The closed-form Euler factor sum used in the derived route:
/// sum over Q || P_ba prime to f_psi of (prod #I_p) prod_{p | P/Q} (1 - psi(p))
/// equals prod_{p | P/P_ba} psi(1 - (nu/#I)phi_p) * prod_{p | P_ba} psi(h_p^sharp).
pub fn euler_sum_identity_holds(
    setting: &ArithmeticSetting,
    field: &CycField,
    psi: &Character,
    n: &IdealIndex,
) -> Result<bool> {
    let p_all = setting.p_part(n);
    let p_ba = setting.hall_p_group_decomposition(n);
    let f_psi = conductor_of_psi(setting, psi)?;
    let labels: Vec<String> = p_ba.support().into_iter().collect();
    let mut lhs = field.zero();
    for q_sub in super::family::subsets(&labels) {
        let q = IdealIndex(q_sub.iter().map(|l| (l.clone(), n.ord(l))).collect());
        if !q.gcd(&f_psi).is_one() {
            continue;
        }
        let mut term = field.one();
        for l in &q_sub {
            term = field.mul(
                &term,
                &field.from_i64(setting.place(l)?.inertia.size() as i64),
            );
        }
        for l in p_all.support() {
            if q.ord(&l) > 0 {
                continue;
            }
            let factor = field.sub(&field.one(), &psi_at_place(setting, field, psi, &l)?);
            term = field.mul(&term, &factor);
        }
        lhs = field.add(&lhs, &term);
    }
    let mut rhs = field.one();
    for l in p_all.support() {
        if p_ba.ord(&l) == 0 {
            rhs = field.mul(&rhs, &psi_dk_factor(setting, field, psi, &l)?);
        }
    }
    for l in p_ba.support() {
        rhs = field.mul(&rhs, &psi_h_sharp(setting, field, psi, &l)?);
    }
    Ok(lhs == rhs)
}

fn pow_i64(base: i64, e: u32) -> i64 {
    base.pow(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FinAbGroup;
    use crate::stickelberger::PlaceData;

    fn setting() -> ArithmeticSetting {
        let g = FinAbGroup::new(vec![2, 9], vec![1, 0]).unwrap();
        let i3 = g.subgroup(&[vec![0, 3]]).unwrap();
        let i_wild = g.subgroup(&[vec![0, 1]]).unwrap();
        let places = vec![
            // P_ba member
            PlaceData::new("p3", 3, i3, vec![0, 1], true, 1, 3).unwrap(),
            // p-adic, ramified, decomposition group not a p-group
            PlaceData::new("pw", 3, i_wild, vec![1, 0], true, 1, 3).unwrap(),
            // tame auxiliary prime in Sigma'
            PlaceData::new("q5", 5, g.subgroup(&[]).unwrap(), vec![1, 2], false, 0, 3).unwrap(),
        ];
        let level = IdealIndex::from_pairs(&[("p3", 1), ("pw", 1), ("q5", 1)]);
        ArithmeticSetting::new(g, 3, 1, places, level).unwrap()
    }

    fn odd_psis(s: &ArithmeticSetting) -> Vec<Character> {
        Character::odd_characters(&s.group)
    }

    #[test]
    fn euler_sum_identity() {
        let s = setting();
        let field = CycField::new(s.group.exponent());
        for psi in odd_psis(&s) {
            assert!(euler_sum_identity_holds(&s, &field, &psi, &s.level).unwrap());
        }
    }

    #[test]
    fn ol_w1_constant_term_consistency() {
        let s = setting();
        let field = CycField::new(s.group.exponent());
        let p_all = s.p_part(&s.level);
        let cusps = vec![
            CuspData {
                b_ideal: IdealIndex::one(),
                c_ideal: s.level.clone(),
                sgn_a: 1,
                sgn_neg_c: -1,
                a_over_b: IdealIndex::one(),
                class_index: 0,
            },
            CuspData {
                b_ideal: IdealIndex::prime("q5"),
                c_ideal: p_all.clone(),
                sgn_a: -1,
                sgn_neg_c: 1,
                a_over_b: IdealIndex::prime("q5"),
                class_index: 1,
            },
        ];
        for cusp in &cusps {
            for psi in odd_psis(&s) {
                let direct =
                    ol_w1_constant_term_direct(&s, &field, &psi, &s.level, cusp).unwrap();
                let summed =
                    ol_w1_constant_term_summed(&s, &field, &psi, &s.level, cusp).unwrap();
                assert_eq!(direct.tau_part, summed.tau_part, "tau parts at {:?}", psi.exps);
                assert_eq!(
                    direct.zero_part, summed.zero_part,
                    "zero parts at {:?}",
                    psi.exps
                );
            }
        }
        // off the C_infty(P, n) locus the direct formula refuses
        let off = CuspData {
            b_ideal: IdealIndex::one(),
            c_ideal: IdealIndex::prime("p3"),
            sgn_a: 1,
            sgn_neg_c: 1,
            a_over_b: IdealIndex::one(),
            class_index: 0,
        };
        let psi = odd_psis(&s).remove(0);
        assert!(ol_w1_constant_term_direct(&s, &field, &psi, &s.level, &off).is_err());
    }

    #[test]
    fn vanishing_off_both_loci() {
        let s = setting();
        let field = CycField::new(s.group.exponent());
        // a cusp in neither C_0(f_psi Q_psi, n) nor C_infty(n)
        let cusp = CuspData {
            b_ideal: IdealIndex::one(),
            c_ideal: IdealIndex::from_pairs(&[("pw", 1)]),
            sgn_a: 1,
            sgn_neg_c: 1,
            a_over_b: IdealIndex::one(),
            class_index: 0,
        };
        for psi in odd_psis(&s) {
            let dec = psi_decomposition(&s, &psi, &s.level).unwrap();
            if cusp.in_c0(&dec.f_psi.mul(&dec.q_psi)) || cusp.in_cinf(&s.level) {
                continue;
            }
            let ct = w_k_constant_term(&s, &field, &psi, 1, &s.level, &cusp).unwrap();
            assert!(field.is_zero(&ct.tau_part));
            assert!(field.is_zero(&ct.zero_part));
        }
    }
}
