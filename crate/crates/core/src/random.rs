//! Deterministic random generation of test instances: abstract settings with
//! their chi-components, local places, decomposition configurations and
//! presented modules. Every generator consumes a counter-derived RNG so that
//! individual failing cases can be replayed by index.

use crate::eisenstein::{ArithmeticSetting, ChiRealization, IdealIndex};
use crate::error::Result;
use crate::group::{Character, FinAbGroup, GElem, PrimeSplit, Subgroup};
use crate::group_ring::GrElem;
use crate::rings::{Ring, UnramRing};
use crate::ritter_weiss::LocalPlace;
use crate::stickelberger::{DecompositionConfig, PlaceData};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Counter-based splittable RNG: case i of a seeded run is independent and
/// reproducible.
pub fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, xs: &'a [T]) -> &'a T {
    &xs[rng.gen_range(0..xs.len())]
}

/// A random nontrivial subgroup of the p-part (possibly the whole of it).
fn random_p_subgroup(rng: &mut ChaCha8Rng, p_part: &FinAbGroup) -> Subgroup {
    let elems = p_part.elements();
    let nontrivial: Vec<&GElem> = elems.iter().filter(|e| !p_part.is_identity(e)).collect();
    if nontrivial.is_empty() {
        return p_part.subgroup(&[]).unwrap();
    }
    let g = (*pick(rng, &nontrivial)).clone();
    p_part.subgroup(&[g]).unwrap()
}

pub struct RandomSetting {
    pub setting: ArithmeticSetting,
    pub chi: Character,
}

/// A random abstract setting: cyclic prime-to-p part carrying the
/// conjugation, a p-group part, a table mixing ramified/unramified and
/// p-adic/tame places, and a level of the (star) shape. When `force_ba` is
/// set the table contains at least one place whose decomposition group is a
/// p-group.
pub fn random_setting(
    rng: &mut ChaCha8Rng,
    p: u64,
    force_ba: bool,
    max_group: u64,
) -> Result<RandomSetting> {
    let eprime: u32 = *pick(rng, &[2u32, 4, 6, 2]);
    let eprime = if eprime as u64 % p == 0 { 2 } else { eprime };
    let p_rank = if rng.gen_bool(0.3) { 2 } else { 1 };
    let mut orders = vec![eprime];
    let mut p_order_total = 1u64;
    for _ in 0..p_rank {
        let a = if rng.gen_bool(0.75) { 1 } else { 2 };
        let sz = p.pow(a) as u32;
        if eprime as u64 * p_order_total * sz as u64 > max_group {
            break;
        }
        p_order_total *= sz as u64;
        orders.push(sz);
    }
    let mut conj = vec![0u32; orders.len()];
    conj[0] = eprime / 2;
    let group = FinAbGroup::new(orders, conj)?;
    let split = PrimeSplit::new(&group, p)?;
    let pp = &split.p_part;

    let embed_p = |s: &Subgroup| -> Subgroup {
        let gens: Vec<GElem> = s
            .elements
            .iter()
            .map(|x| split.combine(&split.prime_to_p.identity(), x))
            .collect();
        group.subgroup(&gens).unwrap()
    };
    let lift = |gp: &GElem, gq: &GElem| split.combine(gp, gq);

    let mut places: Vec<PlaceData> = vec![];
    let mut level_pairs: Vec<(String, u32)> = vec![];

    // p-adic places
    let n_padic = rng.gen_range(1..=2);
    for i in 0..n_padic {
        let label = format!("p{}", i);
        let norm = if rng.gen_bool(0.7) { p } else { p * p };
        let kind = if force_ba && i == 0 {
            0
        } else {
            rng.gen_range(0..4)
        };
        match kind {
            0 => {
                // decomposition group a p-group (P_ba when in the level)
                let inertia_p = loop {
                    let s = random_p_subgroup(rng, pp);
                    if !s.is_trivial() {
                        break s;
                    }
                };
                let frob = lift(&split.prime_to_p.identity(), pick(rng, &pp.elements()));
                let cond = 1 + rng.gen_range(0..2) as u32;
                places.push(PlaceData::new(&label, norm, embed_p(&inertia_p), frob, true, cond, p)?);
                let extra = rng.gen_range(0..2) as u32;
                level_pairs.push((label, cond + extra));
            }
            1 => {
                // inertia a p-group, Frobenius with a prime-to-p component
                let inertia_p = loop {
                    let s = random_p_subgroup(rng, pp);
                    if !s.is_trivial() {
                        break s;
                    }
                };
                let gp = split
                    .prime_to_p
                    .elements()
                    .into_iter()
                    .find(|x| !split.prime_to_p.is_identity(x))
                    .unwrap();
                let frob = lift(&gp, pick(rng, &pp.elements()));
                let cond = 1 + rng.gen_range(0..2) as u32;
                places.push(PlaceData::new(&label, norm, embed_p(&inertia_p), frob, true, cond, p)?);
                level_pairs.push((label, cond));
            }
            2 => {
                // inertia not a p-group (contains the conjugation)
                let mut gens = vec![group.conj().clone()];
                if rng.gen_bool(0.5) {
                    gens.push(lift(
                        &split.prime_to_p.identity(),
                        pick(rng, &pp.elements()),
                    ));
                }
                let inertia = group.subgroup(&gens)?;
                let frob = pick(rng, &group.elements()).clone();
                let cond = 1 + rng.gen_range(0..2) as u32;
                places.push(PlaceData::new(&label, norm, inertia, frob, true, cond, p)?);
                level_pairs.push((label, cond));
            }
            _ => {
                // unramified p-adic place (the P'-part)
                let frob = pick(rng, &group.elements()).clone();
                places.push(PlaceData::new(
                    &label,
                    norm,
                    group.subgroup(&[])?,
                    frob,
                    true,
                    0,
                    p,
                )?);
            }
        }
    }

    // a tamely ramified place with p-group inertia (enters n_p)
    if rng.gen_bool(0.7) {
        let inertia_p = loop {
            let s = random_p_subgroup(rng, pp);
            if !s.is_trivial() {
                break s;
            }
        };
        let isz = inertia_p.size();
        let norm = 1 + isz * (1 + rng.gen_range(0..3));
        let frob = pick(rng, &group.elements()).clone();
        places.push(PlaceData::new(
            "qt", norm, embed_p(&inertia_p), frob, false, 1, p,
        )?);
        level_pairs.push(("qt".into(), 1));
    }

    // a ramified tame place with non-p-group inertia
    if rng.gen_bool(0.5) {
        let mut gens = vec![group.conj().clone()];
        if rng.gen_bool(0.4) {
            gens.push(lift(
                &split.prime_to_p.identity(),
                pick(rng, &pp.elements()),
            ));
        }
        let inertia = group.subgroup(&gens)?;
        // the p-part of #I forces a congruence on the norm
        let mut ppart = 1u64;
        let mut s = inertia.size();
        while s % p == 0 {
            s /= p;
            ppart *= p;
        }
        let norm = 1 + ppart * (1 + rng.gen_range(0..4));
        let norm = if norm < 2 { 2 } else { norm };
        let frob = pick(rng, &group.elements()).clone();
        let cond = 1 + rng.gen_range(0..2) as u32;
        places.push(PlaceData::new("qr", norm, inertia, frob, false, cond, p)?);
        level_pairs.push(("qr".into(), cond));
    }

    // unramified auxiliary places (the square-free tame part)
    for (j, norm) in [(0usize, 2u64), (1, 5)].iter() {
        if rng.gen_bool(0.8) {
            let label = format!("l{j}");
            let frob = pick(rng, &group.elements()).clone();
            places.push(PlaceData::new(
                &label,
                *norm + rng.gen_range(0..2) * 9,
                group.subgroup(&[])?,
                frob,
                false,
                0,
                p,
            )?);
            if rng.gen_bool(0.7) {
                level_pairs.push((label, 1));
            }
        }
    }

    let level = IdealIndex::from_pairs(
        &level_pairs
            .iter()
            .map(|(l, e)| (l.as_str(), *e))
            .collect::<Vec<_>>(),
    );
    let degree = 1 + rng.gen_range(0..2) as u32;
    let setting = ArithmeticSetting::new(group, p, degree, places, level)?;
    // faithful odd character of the cyclic prime-to-p part
    let chi = Character::new(split.prime_to_p.clone(), vec![1])?;
    Ok(RandomSetting { setting, chi })
}

/// Keep drawing until a valid setting appears (constructor constraints can
/// reject a draw).
pub fn random_setting_retry(
    seed: u64,
    case: u64,
    p: u64,
    force_ba: bool,
    max_group: u64,
) -> RandomSetting {
    for attempt in 0..100 {
        let mut rng = case_rng(seed, case * 1000 + attempt);
        if let Ok(s) = random_setting(&mut rng, p, force_ba, max_group) {
            return s;
        }
    }
    panic!("setting generation failed repeatedly");
}

pub fn chi_realization(s: &RandomSetting, precision: u32) -> Result<ChiRealization> {
    ChiRealization::new(&s.setting, precision, &s.chi)
}

/// Random local place model: a group generated by its inertia subgroup and
/// one Frobenius, for the lattice fuzz.
pub fn random_local_place(rng: &mut ChaCha8Rng, p: u64) -> Result<LocalPlace> {
    // G = Z/a x Z/b with designated c of order <= 2 when possible
    let a: u32 = *pick(rng, &[2u32, 3, 4, 6]);
    let b: u32 = *pick(rng, &[1u32, 2, 3]);
    let orders = if b == 1 { vec![a] } else { vec![a, b] };
    let conj = {
        let mut c = vec![0u32; orders.len()];
        if a % 2 == 0 {
            c[0] = a / 2;
        }
        c
    };
    let group = FinAbGroup::new(orders.clone(), conj)?;
    // inertia: random subgroup; Frobenius must generate the quotient
    let elems = group.elements();
    for _ in 0..60 {
        let mut rng2 = rng.clone();
        let igens: Vec<GElem> = (0..rng2.gen_range(0..=1))
            .map(|_| pick(&mut rng2, &elems).clone())
            .collect();
        let inertia = group.subgroup(&igens)?;
        let frob = pick(&mut rng2, &elems).clone();
        *rng = rng2;
        // norm congruent to 1 modulo the p-part of #I
        let mut ppart = 1u64;
        let mut s = inertia.size();
        while s % p == 0 {
            s /= p;
            ppart *= p;
        }
        let norm = 1 + ppart * (1 + rng.gen_range(0..4));
        let norm = norm.max(2);
        let cond = if inertia.is_trivial() { 0 } else { 1 };
        let place = PlaceData::new("v", norm, inertia, frob, false, cond, p)?;
        if let Ok(lp) = LocalPlace::new(group.clone(), place) {
            return Ok(lp);
        }
    }
    Err(crate::error::CsError::Setting(
        "no local model found for these draws".into(),
    ))
}

/// Random decomposition configuration for the condition-equivalence fuzz.
pub fn random_decomposition_config(rng: &mut ChaCha8Rng, p: u64) -> Result<DecompositionConfig> {
    let eprime: u32 = *pick(rng, &[2u32, 4, 6]);
    let eprime = if eprime as u64 % p == 0 { 2 } else { eprime };
    let extra: u32 = *pick(rng, &[1u32, 2, 3]);
    let pa: u32 = *pick(rng, &[1u32, p as u32, (p * p) as u32]);
    let mut orders = vec![eprime];
    if extra > 1 {
        orders.push(extra);
    }
    if pa > 1 {
        orders.push(pa);
    }
    let mut conj = vec![0u32; orders.len()];
    conj[0] = eprime / 2;
    let group = FinAbGroup::new(orders, conj)?;
    let elems = group.elements();
    let n_places = rng.gen_range(1..=3);
    let mut p_adic = vec![];
    for _ in 0..n_places {
        let igens: Vec<GElem> = (0..rng.gen_range(0..=2))
            .map(|_| pick(rng, &elems).clone())
            .collect();
        let inertia = group.subgroup(&igens)?;
        let frob = pick(rng, &elems).clone();
        p_adic.push((inertia, frob));
    }
    Ok(DecompositionConfig { group, p, p_adic })
}

/// A random unit of the chi-component ring (residue nonzero), plus random
/// elements, for Fitting-suite matrices.
pub fn random_gr_elem(
    rng: &mut ChaCha8Rng,
    gr: &crate::group_ring::GroupRing<UnramRing>,
    unit: bool,
) -> GrElem<UnramRing> {
    loop {
        let mut x = GrElem::zero();
        for g in gr.group.elements() {
            if rng.gen_bool(0.6) {
                let c = rng.gen_range(-6i64..=6);
                gr.insert(&mut x, g.clone(), gr.ring.from_i64(c));
            }
        }
        if !unit {
            if !x.is_zero() {
                return x;
            }
            continue;
        }
        if crate::group_ring::try_invert(gr, &x).is_some() {
            return x;
        }
        // adjust: add 1 to make the residue nonzero more often
        let y = gr.add(&x, &gr.one());
        if crate::group_ring::try_invert(gr, &y).is_some() {
            return y;
        }
    }
}

/// A random non-zero-divisor of the split ring (all chain components
/// nonzero), for pd <= 1 presentations.
pub fn random_nzd(
    rng: &mut ChaCha8Rng,
    ring: &crate::fitting::SplitGroupRing,
    max_val: u32,
) -> GrElem<UnramRing> {
    let gr = &ring.gr;
    loop {
        let u = random_gr_elem(rng, gr, true);
        let k = rng.gen_range(0..=max_val);
        let x = gr.scale(&gr.ring.pow(&gr.ring.from_i64(ring.gr.ring.p() as i64), k as u64), &u);
        // optionally mix in a non-unit NZD shape: u * (p^k + (g - 1))
        let y = if rng.gen_bool(0.5) {
            let g = pick(rng, &gr.group.elements()).clone();
            let shift = gr.sub(&gr.group_elem(g), &gr.one());
            gr.add(&x, &gr.mul(&u, &gr.mul(&shift, &shift)))
        } else {
            x
        };
        if !y.is_zero() && ring.is_nzd(&y) {
            return y;
        }
    }
}
