//! Stickelberger elements over abelian extensions of Q: the Euler factors
//! h_v, h'_v and their scalar variants, the smoothed equivariant L-value
//! omega, the element theta with its integrality checks, analytic
//! functoriality under quotients, the hypothesis checkers, and the elements
//! x_k used by the weight-raising arguments.

use crate::dirichlet::{self, DirichletCharacter, UnitGroup};
use crate::error::{CsError, Result};
use crate::group::{Character, FinAbGroup, GElem, QuotientMap, Subgroup};
use crate::group_ring::{self, GrElem, GroupRing};
use crate::rings::cyclotomic::CycField;
use crate::rings::{rational_val_p, Rationals, Ring};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Local data of a finite place: norm, inertia, a Frobenius representative
/// (well-defined modulo inertia), and whether the place lies above the
/// working prime p.
#[derive(Clone, Debug)]
pub struct PlaceData {
    pub label: String,
    pub norm: u64,
    pub inertia: Subgroup,
    pub frobenius: GElem,
    pub above_p: bool,
    /// conductor exponent (0 iff unramified)
    pub cond_exp: u32,
}

impl PlaceData {
    pub fn new(
        label: impl Into<String>,
        norm: u64,
        inertia: Subgroup,
        frobenius: GElem,
        above_p: bool,
        cond_exp: u32,
        p: u64,
    ) -> Result<PlaceData> {
        if norm < 2 {
            return Err(CsError::BadInput("place norm must be at least 2".into()));
        }
        let pd = PlaceData {
            label: label.into(),
            norm,
            inertia,
            frobenius,
            above_p,
            cond_exp,
        };
        if (pd.cond_exp == 0) != pd.inertia.is_trivial() {
            return Err(CsError::BadInput(
                "conductor exponent must be zero exactly for unramified places".into(),
            ));
        }
        if !pd.above_p {
            // local class field theory: N(v) = 1 mod p^{v_p(#I_v)}
            let mut need = 1u64;
            let mut size = pd.inertia.size();
            while size % p == 0 {
                size /= p;
                need *= p;
            }
            if (pd.norm - 1) % need != 0 {
                return Err(CsError::Invariant(format!(
                    "N({}) = {} is not 1 mod p-part of inertia order",
                    pd.label, pd.norm
                )));
            }
        }
        Ok(pd)
    }

    pub fn is_ramified(&self) -> bool {
        !self.inertia.is_trivial()
    }

    /// Decomposition group: generated by inertia and the Frobenius.
    pub fn decomposition_group(&self, g: &FinAbGroup) -> Subgroup {
        let mut gens: Vec<GElem> = self.inertia.elements.clone();
        gens.push(self.frobenius.clone());
        g.subgroup(&gens).unwrap()
    }
}

/// The kind of local Euler factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EulerKind {
    /// h_v = 1 - (nu/#I)(phi^{-1} - #I)
    H,
    /// h'_v = 1 - N(v) (nu/#I) phi^{-1}
    HPrime,
    /// h-bar_v(c) = 1 - (nu/#I)(phi^{-1} - c #I)
    HBar(i64),
    /// the Dasgupta-Kakde normalization 1 - (nu/#I) phi^{-1}
    DkFactor,
}

/// The Euler factor as an element of Q[G].
pub fn euler_factor(
    gr: &GroupRing<Rationals>,
    place: &PlaceData,
    kind: EulerKind,
) -> GrElem<Rationals> {
    let size = place.inertia.size() as i64;
    let nu = group_ring::norm_element(gr, &place.inertia);
    let inv_size = BigRational::new(BigInt::one(), BigInt::from(size));
    let phi_inv = gr.group_elem(gr.group.neg(&place.frobenius));
    let term = match kind {
        EulerKind::H => {
            // (nu/#I)(phi^{-1} - #I)
            let inner = gr.sub(&phi_inv, &gr.from_i64(size));
            gr.scale(&inv_size, &gr.mul(&nu, &inner))
        }
        EulerKind::HPrime => {
            let scaled = BigRational::new(BigInt::from(place.norm as i64), BigInt::from(size));
            gr.scale(&scaled, &gr.mul(&nu, &phi_inv))
        }
        EulerKind::HBar(c) => {
            let inner = gr.sub(&phi_inv, &gr.from_i64(c * size));
            gr.scale(&inv_size, &gr.mul(&nu, &inner))
        }
        EulerKind::DkFactor => gr.scale(&inv_size, &gr.mul(&nu, &phi_inv)),
    };
    gr.sub(&gr.one(), &term)
}

/// psi(h_v)-style values in a cyclotomic field, for per-character work.
pub fn euler_factor_value(
    field: &CycField,
    psi: &Character,
    place: &PlaceData,
    kind: EulerKind,
) -> <CycField as Ring>::Elem {
    let unramified_for_psi = psi.is_trivial_on(&place.inertia);
    if !unramified_for_psi {
        return field.one();
    }
    let size = place.inertia.size() as i64;
    let phi_inv = psi.value(field, &psi.group.neg(&place.frobenius));
    match kind {
        EulerKind::H => {
            // 1 - phi^{-1} + #I
            field.add(&field.sub(&field.one(), &phi_inv), &field.from_i64(size))
        }
        EulerKind::HPrime => field.sub(
            &field.one(),
            &field.mul(&field.from_i64(place.norm as i64), &phi_inv),
        ),
        EulerKind::HBar(c) => field.add(
            &field.sub(&field.one(), &phi_inv),
            &field.from_i64(c * size),
        ),
        EulerKind::DkFactor => field.sub(&field.one(), &phi_inv),
    }
}

// ---------------------------------------------------------------------------
// Extensions of Q realized inside cyclotomic fields

/// An abelian extension H/Q realized as (a quotient of) Gal(Q(zeta_m)/Q),
/// with per-prime inertia and Frobenius computed from the modulus.
#[derive(Clone, Debug)]
pub struct CycExtension {
    pub m: u64,
    pub p: u64,
    pub units: UnitGroup,
    pub group: FinAbGroup,
    /// projection from the full unit group when this is a proper quotient
    pub proj: Option<QuotientMap>,
    pub places: Vec<PlaceData>,
}

impl CycExtension {
    /// The full cyclotomic field Q(zeta_m); places for every prime dividing m,
    /// for p, and for the requested auxiliary primes.
    pub fn new(m: u64, p: u64, aux_primes: &[u64]) -> Result<CycExtension> {
        if p == 2 {
            return Err(CsError::PrimeTwo);
        }
        let units = UnitGroup::new(m)?;
        let group = units.group.clone();
        if group.is_identity(group.conj()) && m > 2 {
            return Err(CsError::Invariant("conjugation must be nontrivial".into()));
        }
        let mut primes: Vec<u64> = crate::rings::padic::prime_divisors(m);
        if !primes.contains(&p) {
            primes.push(p);
        }
        for &q in aux_primes {
            if !primes.contains(&q) {
                primes.push(q);
            }
        }
        primes.sort_unstable();
        let mut places = vec![];
        for l in primes {
            places.push(Self::place_for_prime(&units, m, l, p)?);
        }
        Ok(CycExtension {
            m,
            p,
            units,
            group,
            proj: None,
            places,
        })
    }

    fn place_for_prime(units: &UnitGroup, m: u64, l: u64, p: u64) -> Result<PlaceData> {
        let mut a = 0u32;
        let mut m_prime = m;
        while m_prime % l == 0 {
            m_prime /= l;
            a += 1;
        }
        let group = &units.group;
        let (inertia, frob) = if a == 0 {
            let f = units
                .dlog(l % m)
                .ok_or_else(|| CsError::BadInput("prime divides the modulus".into()))?;
            (group.subgroup(&[])?, f)
        } else {
            // inertia: units congruent to 1 mod m/l^a
            let gens: Vec<GElem> = group
                .elements()
                .into_iter()
                .filter(|x| units.residue(x) % m_prime.max(1) == 1 % m_prime.max(1))
                .collect();
            let inertia = group.subgroup(&gens)?;
            // Frobenius: any unit congruent to l mod m/l^a
            let frob = group
                .elements()
                .into_iter()
                .find(|x| units.residue(x) % m_prime.max(1) == l % m_prime.max(1))
                .ok_or_else(|| CsError::Invariant("Frobenius class is nonempty".into()))?;
            (inertia, frob)
        };
        PlaceData::new(format!("{}", l), l, inertia, frob, l == p, a, p)
    }

    /// The fixed field of a subgroup, with induced place data.
    pub fn quotient(&self, n: &Subgroup) -> Result<CycExtension> {
        let (q, map) = self.group.quotient(n)?;
        let mut places = vec![];
        for pl in &self.places {
            let gens: Vec<GElem> = pl
                .inertia
                .elements
                .iter()
                .map(|x| map.apply_raw(x))
                .collect();
            let inertia = q.subgroup(&gens)?;
            let frob = map.apply_raw(&pl.frobenius);
            let cond_exp = if inertia.is_trivial() { 0 } else { pl.cond_exp.max(1) };
            places.push(PlaceData::new(
                pl.label.clone(),
                pl.norm,
                inertia,
                frob,
                pl.above_p,
                cond_exp,
                self.p,
            )?);
        }
        // compose projections when quotienting twice
        if self.proj.is_some() {
            return Err(CsError::BadInput("iterated quotients not supported; quotient the full extension".into()));
        }
        Ok(CycExtension {
            m: self.m,
            p: self.p,
            units: self.units.clone(),
            group: q,
            proj: Some(map),
            places,
        })
    }

    pub fn place(&self, label: &str) -> Result<&PlaceData> {
        self.places
            .iter()
            .find(|p| p.label == label)
            .ok_or_else(|| CsError::BadInput(format!("unknown place {label}")))
    }

    /// Pull a character of the (possibly quotient) Galois group back to a
    /// Dirichlet character mod m.
    pub fn pullback(&self, psi: &Character) -> Result<DirichletCharacter> {
        let ug = &self.units.group;
        let lq = psi.group.exponent();
        let mut exps = vec![];
        for (i, &n) in ug.orders().iter().enumerate() {
            let mut e = ug.identity();
            e[i] = 1;
            let image = match &self.proj {
                None => e,
                Some(map) => map.apply_raw(&e),
            };
            let k = psi.value_exponent(&image);
            // zeta_lq^k = zeta_L^{t * L / n} requires t = k * n / lq
            let num = k as u128 * n as u128;
            debug_assert_eq!(num % lq as u128, 0);
            exps.push(((num / lq as u128) % n as u128) as u32);
        }
        DirichletCharacter::new(self.units.clone(), exps)
    }

    /// L^{smooth}(psi^{-1}, 1-k): depletion at the listed primes and
    /// smoothing at the listed primes, both via the attached primitive
    /// Dirichlet character.
    pub fn l_value_of(
        &self,
        field: &CycField,
        psi: &Character,
        k: u32,
        deplete: &[u64],
        smooth: &[u64],
    ) -> Result<<CycField as Ring>::Elem> {
        let chi = self.pullback(psi)?;
        let big = CycField::new(self.units.group.exponent().lcm(&field.order()));
        let v = dirichlet::l_value(&chi, k, deplete, smooth, &big);
        // re-express in the requested field: the value lies in Q(zeta_ord psi)
        restrict_cyc(&big, field, &v)
    }
}

/// Express an element of a larger cyclotomic field in a smaller one when it
/// actually lies there, via the zeta-power embedding zeta_small =
/// zeta_big^{big/small}).
pub fn restrict_cyc(
    big: &CycField,
    small: &CycField,
    x: &<CycField as Ring>::Elem,
) -> Result<<CycField as Ring>::Elem> {
    if big.order() == small.order() {
        return Ok(x.clone());
    }
    assert_eq!(big.order() % small.order(), 0);
    let step = (big.order() / small.order()) as usize;
    // solve sum_j a_j zeta_big^{j*step} = x by linear algebra over Q on the
    // power basis of the big field
    let deg_small = small.degree();
    let deg_big = big.degree();
    let mut cols: Vec<Vec<BigRational>> = vec![];
    for j in 0..deg_small {
        cols.push(big.zeta_pow((j * step) as i64));
    }
    // gaussian elimination for the overdetermined system
    let mut aug: Vec<Vec<BigRational>> = (0..deg_big)
        .map(|r| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(x[r].clone());
            row
        })
        .collect();
    let mut sol = vec![BigRational::zero(); deg_small];
    let mut row = 0usize;
    let mut pivots = vec![];
    for col in 0..deg_small {
        let piv = (row..deg_big).find(|&r| !aug[r][col].is_zero());
        let piv = match piv {
            None => continue,
            Some(p) => p,
        };
        aug.swap(row, piv);
        let inv = aug[row][col].recip();
        for c in col..=deg_small {
            aug[row][c] = &aug[row][c] * &inv;
        }
        for r in 0..deg_big {
            if r != row && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in col..=deg_small {
                    let t = &f * &aug[row][c];
                    aug[r][c] = &aug[r][c] - t;
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    for &(r, c) in &pivots {
        sol[c] = aug[r][deg_small].clone();
    }
    // consistency: remaining rows must be zero
    for r in row..deg_big {
        if !aug[r][deg_small].is_zero() {
            return Err(CsError::Invariant(
                "value does not lie in the target cyclotomic field".into(),
            ));
        }
    }
    Ok(sol)
}

// ---------------------------------------------------------------------------
// The Stickelberger elements

#[derive(Clone, Debug)]
pub struct StickelbergerOutput {
    /// omega^{Sigma'}: the smoothed equivariant L-value at 0.
    pub omega: GrElem<Rationals>,
    /// theta = prod_{v in Sigma_f} h_v * omega^{Sigma'}.
    pub theta: GrElem<Rationals>,
    /// The Dasgupta-Kakde normalization prod (1 - (nu/#I) phi^{-1}) * omega.
    pub theta_dk: GrElem<Rationals>,
    /// per odd character value psi(theta), for non-zero-divisor accounting
    pub character_values: Vec<(Character, <CycField as Ring>::Elem)>,
    pub field: CycField,
}

fn assemble_from_character_values(
    gr: &GroupRing<Rationals>,
    field: &CycField,
    values: &[(Character, <CycField as Ring>::Elem)],
) -> Result<GrElem<Rationals>> {
    // sum_psi value_psi e_psi has coefficient at g equal to
    // (1/#G) sum_psi value_psi psi(g^{-1}).
    let size_inv = BigRational::new(BigInt::one(), BigInt::from(gr.group.size() as i64));
    let mut out = GrElem::zero();
    for g in gr.group.elements() {
        let mut acc = field.zero();
        for (psi, v) in values {
            let c = psi.value(field, &gr.group.neg(&g));
            acc = field.add(&acc, &field.mul(v, &c));
        }
        let r = field
            .to_rational(&acc)
            .ok_or_else(|| CsError::Invariant("equivariant value must have rational coefficients".into()))?;
        gr.insert(&mut out, g, r * &size_inv);
    }
    Ok(out)
}

/// Build omega^{Sigma'}, theta_Sigma^{Sigma'} and the DK normalization for a
/// cyclotomic extension. `sigma_f` and `sigma_prime` are place labels;
/// infinite places are implicitly in Sigma (H2). Hypotheses (H1), (H2) are
/// enforced.
pub fn stickelberger_element(
    ext: &CycExtension,
    sigma_f: &[String],
    sigma_prime: &[String],
) -> Result<StickelbergerOutput> {
    for s in sigma_f {
        if sigma_prime.contains(s) {
            return Err(CsError::Hypothesis(format!("H1 fails: {s} in both Sigma and Sigma'")));
        }
    }
    let field = CycField::new(ext.group.exponent());
    let gr = GroupRing::new(ext.group.clone(), Rationals);
    let smooth: Vec<u64> = sigma_prime
        .iter()
        .map(|s| ext.place(s).map(|p| p.norm))
        .collect::<Result<_>>()?;
    let mut omega_vals = vec![];
    let mut theta_vals = vec![];
    for psi in Character::odd_characters(&ext.group) {
        let psi_inv = psi.inverse();
        let lval = ext.l_value_of(&field, &psi_inv, 1, &[], &smooth)?;
        let mut tv = lval.clone();
        for s in sigma_f {
            let place = ext.place(s)?;
            tv = field.mul(&tv, &euler_factor_value(&field, &psi, place, EulerKind::H));
        }
        if field.is_zero(&tv) {
            return Err(CsError::ZeroDivisor(
                "theta must be a non-zero-divisor (odd L-values are nonzero)".into(),
            ));
        }
        omega_vals.push((psi.clone(), lval));
        theta_vals.push((psi, tv));
    }
    let omega = assemble_from_character_values(&gr, &field, &omega_vals)?;
    let theta = assemble_from_character_values(&gr, &field, &theta_vals)?;
    // DK normalization
    let mut dk_vals = vec![];
    for (psi, lval) in &omega_vals {
        let mut tv = lval.clone();
        for s in sigma_f {
            let place = ext.place(s)?;
            tv = field.mul(&tv, &euler_factor_value(&field, psi, place, EulerKind::DkFactor));
        }
        dk_vals.push((psi.clone(), tv));
    }
    let theta_dk = assemble_from_character_values(&gr, &field, &dk_vals)?;
    Ok(StickelbergerOutput {
        omega,
        theta,
        theta_dk,
        character_values: theta_vals,
        field,
    })
}

/// The weight-k equivariant value Theta_n(1-k) = sum_psi L(psi_n^{-1}, 1-k)
/// e_psi, depleted at the primes dividing n (given by labels).
pub fn theta_weight_k(
    ext: &CycExtension,
    n_support: &[String],
    k: u32,
) -> Result<GrElem<Rationals>> {
    let field = CycField::new(ext.group.exponent());
    let gr = GroupRing::new(ext.group.clone(), Rationals);
    let deplete: Vec<u64> = n_support
        .iter()
        .map(|s| ext.place(s).map(|p| p.norm))
        .collect::<Result<_>>()?;
    let mut vals = vec![];
    for psi in Character::odd_characters(&ext.group) {
        let v = ext.l_value_of(&field, &psi.inverse(), k, &deplete, &[])?;
        vals.push((psi, v));
    }
    assemble_from_character_values(&gr, &field, &vals)
}

/// Minimal p-adic valuation over the coefficients of a rational group-ring
/// element (None for the zero element).
pub fn min_coefficient_valuation(x: &GrElem<Rationals>, p: u64) -> Option<i64> {
    let mut best: Option<i64> = None;
    for c in x.coeffs.values() {
        if let Some(v) = rational_val_p(c, p) {
            best = Some(best.map_or(v, |b| b.min(v)));
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Analytic functoriality

#[derive(Debug)]
pub struct FunctorialityReport {
    pub holds: bool,
    /// pi(h_{v,H}) = hbar_{v,K} with c_v = #I_{v,H/K}, per place in Sigma_f
    pub euler_projection_holds: bool,
}

/// Check pi_{H/K}(theta_H) * prod h_{v,K} = prod pi(h_{v,H}) * theta_K
/// exactly in Q[Gal(K/F)].
pub fn verify_theta_functoriality(
    ext: &CycExtension,
    n: &Subgroup,
    sigma_f: &[String],
    sigma_prime: &[String],
) -> Result<FunctorialityReport> {
    let sub = ext.quotient(n)?;
    if sub.group.is_identity(sub.group.conj()) {
        return Err(CsError::Invariant("quotient field must stay CM".into()));
    }
    let th_h = stickelberger_element(ext, sigma_f, sigma_prime)?;
    let th_k = stickelberger_element(&sub, sigma_f, sigma_prime)?;
    let gr_k = GroupRing::new(sub.group.clone(), Rationals);
    let map = sub.proj.as_ref().unwrap();
    let project = |x: &GrElem<Rationals>| -> GrElem<Rationals> {
        let mut out = GrElem::zero();
        for (g, c) in &x.coeffs {
            gr_k.insert(&mut out, map.apply_raw(g), c.clone());
        }
        out
    };
    let mut lhs = project(&th_h.theta);
    let mut rhs = th_k.theta.clone();
    let mut euler_projection_holds = true;
    for s in sigma_f {
        let pl_h = ext.place(s)?;
        let pl_k = sub.place(s)?;
        let h_k = euler_factor(&gr_k, pl_k, EulerKind::H);
        let h_h_proj = {
            let gr_h = GroupRing::new(ext.group.clone(), Rationals);
            project(&euler_factor(&gr_h, pl_h, EulerKind::H))
        };
        lhs = gr_k.mul(&lhs, &h_k);
        rhs = gr_k.mul(&rhs, &h_h_proj);
        // the projection identity pi(h_{v,H}) = hbar_{v,K}(#I_{v,H/K})
        let c_v = pl_h
            .inertia
            .elements
            .iter()
            .filter(|x| n.contains(x))
            .count() as i64;
        let hbar = euler_factor(&gr_k, pl_k, EulerKind::HBar(c_v));
        if hbar != h_h_proj {
            euler_projection_holds = false;
        }
    }
    Ok(FunctorialityReport {
        holds: lhs == rhs,
        euler_projection_holds,
    })
}

// ---------------------------------------------------------------------------
// Hypotheses

#[derive(Clone, Debug, serde::Serialize)]
pub struct HypothesisReport {
    pub h1: bool,
    pub h2: bool,
    pub h3: Option<bool>,
    pub h3_prime: Option<bool>,
    pub h3_prime_p: Option<bool>,
    pub h4: bool,
    pub h4_p: bool,
    pub s_ram: Vec<String>,
    pub s_wild: Vec<String>,
    pub s_bad: Vec<String>,
    pub sigma_prime_ur: Vec<String>,
}

/// Evaluate the hypotheses for a cyclotomic extension. The mu-conditions use
/// the explicit roots of unity of Q(zeta_m) and its subfields.
pub fn check_hypotheses(
    ext: &CycExtension,
    sigma_f: &[String],
    sigma_prime: &[String],
) -> Result<HypothesisReport> {
    let h1 = sigma_f.iter().all(|s| !sigma_prime.contains(s));
    let h2 = true; // infinite places are implicitly included in Sigma
    let p = ext.p;

    let s_ram: Vec<String> = ext
        .places
        .iter()
        .filter(|pl| pl.is_ramified())
        .map(|pl| pl.label.clone())
        .collect();
    let s_wild: Vec<String> = ext
        .places
        .iter()
        .filter(|pl| pl.is_ramified() && pl.inertia.size() % pl.norm_char() == 0)
        .map(|pl| pl.label.clone())
        .collect();
    // S_bad: p | #I_v and H^{I_v'} is a CM-field, i.e. c not in the intersection of I_v and G'
    let split = crate::group::PrimeSplit::new(&ext.group, p)?;
    let s_bad: Vec<String> = ext
        .places
        .iter()
        .filter(|pl| {
            if pl.inertia.size() % p != 0 {
                return false;
            }
            // I_v-cap-G-prime: check whether c is in it
            let c = ext.group.conj();
            let c_in_iv = pl.inertia.contains(c);
            let _ = &split;
            !c_in_iv
        })
        .map(|pl| pl.label.clone())
        .collect();

    let sigma_prime_ur: Vec<String> = sigma_prime
        .iter()
        .filter(|s| !s_ram.contains(s))
        .cloned()
        .collect();

    let h4 = s_ram
        .iter()
        .all(|v| sigma_f.contains(v) || sigma_prime.contains(v))
        && s_wild.iter().all(|v| sigma_f.contains(v));
    let h4_p = s_bad
        .iter()
        .all(|v| sigma_f.contains(v) || sigma_prime.contains(v))
        && s_bad
            .iter()
            .filter(|v| ext.place(v).map(|pl| pl.above_p).unwrap_or(false))
            .all(|v| sigma_f.contains(v));

    // mu-conditions over Q: the surviving part of mu(H)^{S} is trivial when S
    // contains two distinct primes; equals the q-primary part when S = {q};
    // equals all of mu(H) when S is empty.
    let mu_order = ext.mu_order()?; // order of mu(H), as lcm(2, m-tilde)
    let survivor = |s: &[String]| -> Result<u64> {
        let qs: Vec<u64> = s
            .iter()
            .map(|l| ext.place(l).map(|pl| pl.norm))
            .collect::<Result<_>>()?;
        let distinct: std::collections::BTreeSet<u64> = qs.iter().copied().collect();
        Ok(match distinct.len() {
            0 => mu_order,
            1 => {
                let q = *distinct.iter().next().unwrap();
                let mut part = 1u64;
                let mut m = mu_order;
                while m % q == 0 {
                    m /= q;
                    part *= q;
                }
                part
            }
            _ => 1,
        })
    };
    // (H3): odd part of mu(H)^{Sigma'_ur, -} trivial (2 is inverted)
    let h3_survivor = survivor(sigma_prime)?;
    let h3 = Some(odd_part(h3_survivor) == 1);
    let h3p_survivor = survivor(&sigma_prime_ur)?;
    let h3_prime = Some(odd_part(h3p_survivor) == 1);
    // (H3')_p: the p-primary part of mu(H)^{Sigma'_ur}
    let h3_prime_p = Some(p_part(h3p_survivor, p) == 1);

    Ok(HypothesisReport {
        h1,
        h2,
        h3,
        h3_prime,
        h3_prime_p,
        h4,
        h4_p,
        s_ram,
        s_wild,
        s_bad,
        sigma_prime_ur,
    })
}

impl PlaceData {
    /// residue characteristic read off the norm (prime power)
    fn norm_char(&self) -> u64 {
        let n = self.norm;
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return d;
            }
            d += 1;
        }
        n
    }
}

impl CycExtension {
    /// Order of mu(H): for the full field this is lcm(2, m); for a quotient
    /// field H^N it keeps zeta_d exactly when N fixes it.
    pub fn mu_order(&self) -> Result<u64> {
        let full = self.m.lcm(&2);
        match &self.proj {
            None => Ok(full),
            Some(_) => {
                let mut keep = 2u64; // -1 and 1 always
                for d in crate::rings::padic::prime_divisors(full) {
                    let mut dk = d;
                    loop {
                        // zeta_{dk} in H^N iff N acts trivially on it, i.e.
                        // every n in the kernel subgroup has residue = 1 mod dk
                        if full % dk != 0 {
                            break;
                        }
                        if self.fixes_root_of_unity(dk)? {
                            keep = keep.lcm(&dk);
                            dk *= d;
                        } else {
                            break;
                        }
                    }
                }
                Ok(keep)
            }
        }
    }

    fn fixes_root_of_unity(&self, dk: u64) -> Result<bool> {
        if dk <= 2 {
            return Ok(true);
        }
        if self.m % dk != 0 {
            // zeta_dk in Q(zeta_m) iff dk | m or (dk = 2d', odd d' | m)
            let half = if dk % 2 == 0 { dk / 2 } else { dk };
            if half % 2 == 1 && self.m % half == 0 {
                // zeta_{2d'} = -zeta_{d'}: fixed iff zeta_{d'} is
                return self.fixes_root_of_unity(half);
            }
            return Ok(false);
        }
        let map = self.proj.as_ref().unwrap();
        // kernel of the projection: elements mapping to identity
        for x in self.units.group.elements() {
            if self.group.is_identity(&map.apply_raw(&x)) {
                let r = self.units.residue(&x);
                if r % dk != 1 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn odd_part(mut n: u64) -> u64 {
    while n % 2 == 0 {
        n /= 2;
    }
    n
}

fn p_part(mut n: u64, p: u64) -> u64 {
    let mut out = 1;
    while n % p == 0 {
        n /= p;
        out *= p;
    }
    out
}

// ---------------------------------------------------------------------------
// Main-theorem condition checkers on abstract decomposition data

/// Abstract decomposition configuration: just the group with c and the
/// p-adic places.
#[derive(Clone, Debug)]
pub struct DecompositionConfig {
    pub group: FinAbGroup,
    pub p: u64,
    /// (inertia, frobenius) of each p-adic place
    pub p_adic: Vec<(Subgroup, GElem)>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct ConditionReport {
    /// (i): some p-adic place is at most tamely ramified.
    pub tame_p_adic_place: bool,
    /// (ii): the maximal extension of F in H totally split at all p-adic
    /// primes is totally real.
    pub split_field_totally_real: bool,
    /// (a): no odd character chi of G' has "all p-adic decomposition groups
    /// in H^chi are p-groups and all p-adic places ramify in H^chi".
    pub condition_a: bool,
    pub equivalence_holds: bool,
}

pub fn check_main_theorem_conditions(cfg: &DecompositionConfig) -> Result<ConditionReport> {
    if cfg.p_adic.is_empty() {
        return Err(CsError::BadInput("at least one p-adic place required".into()));
    }
    let g = &cfg.group;
    let p = cfg.p;
    // (i)
    let tame = cfg.p_adic.iter().any(|(i, _)| i.size() % p != 0);
    // (ii): c lies in the subgroup generated by all p-adic decomposition groups
    let mut gens: Vec<GElem> = vec![];
    for (i, f) in &cfg.p_adic {
        gens.extend(i.elements.iter().cloned());
        gens.push(f.clone());
    }
    let g_p = g.subgroup(&gens)?;
    let split_real = g_p.contains(g.conj());
    // (a): iterate over odd characters of G'
    let split = crate::group::PrimeSplit::new(g, p)?;
    let gprime = &split.prime_to_p;
    let mut condition_a = true;
    for chi in Character::all(gprime) {
        if !chi.is_odd() {
            continue;
        }
        // H^chi: quotient of G by ker(chi) viewed inside G-prime
        let ker_gens: Vec<GElem> = gprime
            .elements()
            .into_iter()
            .filter(|x| chi.value_exponent(x) == 0)
            .map(|x| split.combine(&x, &split.p_part.identity()))
            .collect();
        let ker = g.subgroup(&ker_gens)?;
        let (q, map) = g.quotient(&ker)?;
        let mut all_bad = true;
        for (inertia, frob) in &cfg.p_adic {
            // image of the decomposition group
            let mut dgens: Vec<GElem> = inertia
                .elements
                .iter()
                .map(|x| map.apply_raw(x))
                .collect();
            dgens.push(map.apply_raw(frob));
            let dec_img = q.subgroup(&dgens)?;
            let iner_img = q.subgroup(
                &inertia
                    .elements
                    .iter()
                    .map(|x| map.apply_raw(x))
                    .collect::<Vec<_>>(),
            )?;
            let dec_is_p_group = is_p_power(dec_img.size(), p);
            let ramified = !iner_img.is_trivial();
            if !(dec_is_p_group && ramified) {
                all_bad = false;
                break;
            }
        }
        if all_bad {
            condition_a = false;
            break;
        }
    }
    let b = tame || split_real;
    Ok(ConditionReport {
        tame_p_adic_place: tame,
        split_field_totally_real: split_real,
        condition_a,
        equivalence_holds: condition_a == b,
    })
}

fn is_p_power(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

// ---------------------------------------------------------------------------
// x_k

#[derive(Clone, Debug)]
pub struct XkReport {
    /// x_k as a full minus element with rational coefficients.
    pub element: GrElem<Rationals>,
    /// minimal p-adic valuation over coefficients
    pub min_valuation: i64,
    pub integral: bool,
    /// true when psi(x_k) != 0 for every odd psi
    pub non_zero_divisor: bool,
}

/// x_k = Theta(H^P/F, 1-k) / Theta(H^P/F, 0) per odd character, assembled as
/// a minus group-ring element; `ext` must already be the extension H^P/F
/// (no p-adic ramification). k must be odd and > 1.
pub fn x_k_element(ext: &CycExtension, k: u32, p: u64) -> Result<XkReport> {
    if k % 2 == 0 || k <= 1 {
        return Err(CsError::BadInput("k must be odd and > 1".into()));
    }
    let field = CycField::new(ext.group.exponent());
    let gr = GroupRing::new(ext.group.clone(), Rationals);
    let mut vals = vec![];
    let mut nzd = true;
    for psi in Character::odd_characters(&ext.group) {
        let psi_inv = psi.inverse();
        let num = ext.l_value_of(&field, &psi_inv, k, &[], &[])?;
        let den = ext.l_value_of(&field, &psi_inv, 1, &[], &[])?;
        let den_inv = field
            .try_inv(&den)
            .ok_or_else(|| CsError::ZeroDivisor("denominator L-value vanishes".into()))?;
        let ratio = field.mul(&num, &den_inv);
        if field.is_zero(&ratio) {
            nzd = false;
        }
        vals.push((psi, ratio));
    }
    let element = assemble_from_character_values(&gr, &field, &vals)?;
    let minv = min_coefficient_valuation(&element, p).unwrap_or(0);
    Ok(XkReport {
        element,
        min_valuation: minv,
        integral: minv >= 0,
        non_zero_divisor: nzd,
    })
}

/// The minimal j such that x_{1 + (p-1) p^j} is p-integral, searching up to
/// `max_depth` (the op reports the observed congruence depth).
pub fn x_k_integrality_depth(ext: &CycExtension, p: u64, max_depth: u32) -> Result<Option<u32>> {
    for j in 0..=max_depth {
        let k = 1 + (p - 1) as u32 * p.pow(j) as u32;
        let rep = x_k_element(ext, k, p)?;
        if rep.integral {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn euler_factor_shapes() {
        // conductor 4: G = Z/2, unramified place 5
        let ext = CycExtension::new(4, 3, &[5]).unwrap();
        let gr = GroupRing::new(ext.group.clone(), Rationals);
        let p5 = ext.place("5").unwrap();
        // I trivial: h_v = 2 - phi^{-1}
        let h = euler_factor(&gr, p5, EulerKind::H);
        let expect = gr.sub(&gr.from_i64(2), &gr.group_elem(ext.group.neg(&p5.frobenius)));
        assert_eq!(h, expect);
        // h' = 1 - N(v) phi^{-1}
        let hp = euler_factor(&gr, p5, EulerKind::HPrime);
        let expect2 = gr.sub(
            &gr.one(),
            &gr.scale(
                &BigRational::from(BigInt::from(5)),
                &gr.group_elem(ext.group.neg(&p5.frobenius)),
            ),
        );
        assert_eq!(hp, expect2);
        // c_v = 1 degenerates to h
        let p2 = ext.place("2").unwrap();
        assert_eq!(
            euler_factor(&gr, p2, EulerKind::HBar(1)),
            euler_factor(&gr, p2, EulerKind::H)
        );
    }

    #[test]
    fn theta_for_conductor_four() {
        // G = Gal(Q(i)/Q) = Z/2, Sigma = {infinity}, Sigma' = {}:
        // theta = L(psi, 0) e_psi-part = 1/2 * (1 - c)/2 * 2 = (1 - c)/4... NO:
        // theta = sum over odd psi of L(psi^{-1},0) e_psi = (1/2) e_psi
        // with e_psi = (1 - c)/2, so coefficients are (1/4, -1/4).
        let ext = CycExtension::new(4, 3, &[]).unwrap();
        let out = stickelberger_element(&ext, &[], &[]).unwrap();
        let gr = GroupRing::new(ext.group.clone(), Rationals);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let e_minus = group_ring::minus_projection(&gr, &gr.one()).unwrap();
        let expect = gr.scale(&half, &e_minus);
        assert_eq!(out.theta, expect);
        assert_eq!(out.omega, expect);
    }

    #[test]
    fn sigma_variance_is_definitional() {
        let ext = CycExtension::new(4, 3, &[5, 13]).unwrap();
        let base = stickelberger_element(&ext, &[], &[]).unwrap();
        let gr = GroupRing::new(ext.group.clone(), Rationals);
        // adding v to Sigma multiplies theta by h_v (on the minus part)
        let with5 = stickelberger_element(&ext, &labels(&["5"]), &[]).unwrap();
        let h5 = euler_factor(&gr, ext.place("5").unwrap(), EulerKind::H);
        assert_eq!(with5.theta, gr.mul(&h5, &base.theta));
        // adding v to Sigma' multiplies by h'_v
        let smooth13 = stickelberger_element(&ext, &[], &labels(&["13"])).unwrap();
        let hp13 = euler_factor(&gr, ext.place("13").unwrap(), EulerKind::HPrime);
        assert_eq!(smooth13.theta, gr.mul(&hp13, &base.theta));
    }

    #[test]
    fn integrality_23_3() {
        let ext = CycExtension::new(23, 3, &[5]).unwrap();
        let out = stickelberger_element(&ext, &labels(&["23"]), &labels(&["5"])).unwrap();
        let v = min_coefficient_valuation(&out.theta, 3).unwrap();
        assert!(v >= 0, "theta coefficients must be 3-integral, got {v}");
    }

    #[test]
    fn functoriality_9_to_3() {
        // m = 9 -> quotient to conductor 3 (G = Z/6 -> Z/2)
        let ext = CycExtension::new(9, 3, &[]).unwrap();
        // N = unique subgroup of order 3
        let g3 = ext
            .group
            .elements()
            .into_iter()
            .find(|x| ext.group.element_order(x) == 3)
            .unwrap();
        let n = ext.group.subgroup(&[g3]).unwrap();
        let rep = verify_theta_functoriality(&ext, &n, &labels(&["3"]), &[]).unwrap();
        assert!(rep.holds);
        assert!(rep.euler_projection_holds);
    }

    #[test]
    fn hypotheses_examples() {
        // m = 23, p = 3, Sigma = {inf, 23}, Sigma' = {5}
        let ext = CycExtension::new(23, 3, &[5]).unwrap();
        let rep = check_hypotheses(&ext, &labels(&["23"]), &labels(&["5"])).unwrap();
        assert!(rep.h1 && rep.h2);
        assert_eq!(rep.h3_prime_p, Some(true));
        assert!(rep.h4_p);
        assert!(rep.s_bad.is_empty());
        // H1 violated when Sigma and Sigma' intersect
        let bad = check_hypotheses(&ext, &labels(&["5"]), &labels(&["5"])).unwrap();
        assert!(!bad.h1);
        // m = 9, p = 3, Sigma = {inf}: plain (H4) fails (3 wildly ramified,
        // not in Sigma), while S_bad is empty since H^{I_3'} is totally real
        let ext9 = CycExtension::new(9, 3, &[]).unwrap();
        let rep9 = check_hypotheses(&ext9, &[], &[]).unwrap();
        assert!(!rep9.h4);
        assert!(rep9.s_wild.contains(&"3".to_string()));
        assert!(rep9.s_bad.is_empty());
        assert!(rep9.h4_p);
        // m = 63, p = 3: 7 is in S_bad (3 | #I_7 = 6 and H^{I_7'} is CM)
        let ext63 = CycExtension::new(63, 3, &[]).unwrap();
        let rep63 = check_hypotheses(&ext63, &[], &[]).unwrap();
        assert!(rep63.s_bad.contains(&"7".to_string()));
        assert!(!rep63.h4_p);
    }

    #[test]
    fn condition_checkers() {
        // G = Z/2 = {1, c}, one p-adic place with full decomposition group:
        // unramified, so (i) true; c in G_p so (ii) true
        let g = FinAbGroup::new(vec![2], vec![1]).unwrap();
        let cfg = DecompositionConfig {
            group: g.clone(),
            p: 3,
            p_adic: vec![(g.subgroup(&[]).unwrap(), vec![1])],
        };
        let rep = check_main_theorem_conditions(&cfg).unwrap();
        assert!(rep.tame_p_adic_place);
        assert!(rep.split_field_totally_real);
        assert!(rep.equivalence_holds);
        // wildly ramified at the single p-adic place of a Z/(2p) group with
        // trivial-Frobenius: (i) false; c not in G_p unless included
        let g6 = FinAbGroup::new(vec![6], vec![3]).unwrap();
        let i3 = g6.subgroup(&[vec![2]]).unwrap(); // order 3
        let cfg2 = DecompositionConfig {
            group: g6.clone(),
            p: 3,
            p_adic: vec![(i3, vec![0])],
        };
        let rep2 = check_main_theorem_conditions(&cfg2).unwrap();
        assert!(!rep2.tame_p_adic_place);
        assert!(!rep2.split_field_totally_real);
        assert!(rep2.equivalence_holds);
        assert!(!rep2.condition_a);
    }

    #[test]
    fn x_k_small_case() {
        // m = 4, p = 3: P = gcd(4, 3^inf) = 1 so H^P = H; x_7 per the odd
        // character is L(psi,-6)/L(psi,0) = -61 (Euler numbers E_6/E_0)
        let ext = CycExtension::new(4, 3, &[]).unwrap();
        let rep = x_k_element(&ext, 7, 3).unwrap();
        assert!(rep.integral);
        assert!(rep.non_zero_divisor);
        let gr = GroupRing::new(ext.group.clone(), Rationals);
        let e_minus = group_ring::minus_projection(&gr, &gr.one()).unwrap();
        let expect = gr.scale(&BigRational::from(BigInt::from(-61)), &e_minus);
        assert_eq!(rep.element, expect);
    }
}
