//! Sparse group-ring arithmetic over any exact coefficient ring, and the
//! structural elements built from group elements: norm elements, minus
//! projections, the sharp involution, character idempotents, chi-components
//! and the split coefficient ring Z_p[G]_(N).

use crate::error::{CsError, Result};
use crate::group::{Character, FinAbGroup, GElem, PrimeSplit, Subgroup};
use crate::linalg;
use crate::rings::cyclotomic::CycField;
use crate::rings::{ChainRing, Ring, UnramRing, Zmod};
use std::collections::BTreeMap;

/// An element of R[G], canonical form: no stored zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct GrElem<R: Ring> {
    pub coeffs: BTreeMap<GElem, R::Elem>,
}

impl<R: Ring> GrElem<R> {
    pub fn zero() -> Self {
        GrElem { coeffs: BTreeMap::new() }
    }
    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn coeff(&self, ring: &R, g: &GElem) -> R::Elem {
        self.coeffs.get(g).cloned().unwrap_or_else(|| ring.zero())
    }
}

/// R[G] as a ring handle. Implements `Ring`, so group rings can serve as
/// coefficient rings themselves (the chi-component rings O_chi[P]).
#[derive(Clone, Debug, PartialEq)]
pub struct GroupRing<R: Ring> {
    pub group: FinAbGroup,
    pub ring: R,
}

impl<R: Ring> GroupRing<R> {
    pub fn new(group: FinAbGroup, ring: R) -> Self {
        GroupRing { group, ring }
    }

    pub fn insert(&self, x: &mut GrElem<R>, g: GElem, c: R::Elem) {
        if self.ring.is_zero(&c) {
            return;
        }
        match x.coeffs.entry(g) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.ring.add(e.get(), &c);
                if self.ring.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn group_elem(&self, g: GElem) -> GrElem<R> {
        let mut x = GrElem::zero();
        self.insert(&mut x, g, self.ring.one());
        x
    }

    pub fn scalar(&self, c: R::Elem) -> GrElem<R> {
        let mut x = GrElem::zero();
        self.insert(&mut x, self.group.identity(), c);
        x
    }

    pub fn scale(&self, c: &R::Elem, x: &GrElem<R>) -> GrElem<R> {
        let mut out = GrElem::zero();
        for (g, a) in &x.coeffs {
            self.insert(&mut out, g.clone(), self.ring.mul(c, a));
        }
        out
    }

    pub fn translate(&self, g: &GElem, x: &GrElem<R>) -> GrElem<R> {
        let mut out = GrElem::zero();
        for (h, a) in &x.coeffs {
            self.insert(&mut out, self.group.add(g, h), a.clone());
        }
        out
    }
}

impl<R: Ring> Ring for GroupRing<R> {
    type Elem = GrElem<R>;

    fn zero(&self) -> GrElem<R> {
        GrElem::zero()
    }
    fn one(&self) -> GrElem<R> {
        self.group_elem(self.group.identity())
    }
    fn add(&self, a: &GrElem<R>, b: &GrElem<R>) -> GrElem<R> {
        let mut out = a.clone();
        for (g, c) in &b.coeffs {
            self.insert(&mut out, g.clone(), c.clone());
        }
        out
    }
    fn neg(&self, a: &GrElem<R>) -> GrElem<R> {
        GrElem {
            coeffs: a
                .coeffs
                .iter()
                .map(|(g, c)| (g.clone(), self.ring.neg(c)))
                .collect(),
        }
    }
    fn mul(&self, a: &GrElem<R>, b: &GrElem<R>) -> GrElem<R> {
        let mut out = GrElem::zero();
        for (g, c) in &a.coeffs {
            for (h, d) in &b.coeffs {
                self.insert(&mut out, self.group.add(g, h), self.ring.mul(c, d));
            }
        }
        out
    }
    fn from_i64(&self, n: i64) -> GrElem<R> {
        self.scalar(self.ring.from_i64(n))
    }
    fn is_zero(&self, a: &GrElem<R>) -> bool {
        a.is_zero()
    }
    fn try_inv(&self, a: &GrElem<R>) -> Option<GrElem<R>> {
        // Generic route: solve the linear system a*y = 1 on the regular
        // representation. Only implemented over chain-ring coefficients via
        // `try_invert`; group elements and their negatives invert directly.
        if a.coeffs.len() == 1 {
            let (g, c) = a.coeffs.iter().next().unwrap();
            if let Some(ci) = self.ring.try_inv(c) {
                let mut out = GrElem::zero();
                self.insert(&mut out, self.group.neg(g), ci);
                return Some(out);
            }
        }
        None
    }
}

// ---------------------------------------------------------------------------
// The named operations

/// Convolution product (checked variant of `mul` for the public API).
pub fn gr_multiply<R: Ring>(
    gr: &GroupRing<R>,
    a: &GrElem<R>,
    b: &GrElem<R>,
) -> GrElem<R> {
    gr.mul(a, b)
}

/// ((1 - c)/2) * x. Requires 2 invertible in the coefficient ring.
pub fn minus_projection<R: Ring>(gr: &GroupRing<R>, x: &GrElem<R>) -> Result<GrElem<R>> {
    let two = gr.ring.from_i64(2);
    let half = gr.ring.try_inv(&two).ok_or(CsError::TwoNotInvertible)?;
    let cx = gr.translate(gr.group.conj(), x);
    let diff = gr.sub(x, &cx);
    Ok(gr.scale(&half, &diff))
}

/// The involution inverting every group element.
pub fn sharp_involution<R: Ring>(gr: &GroupRing<R>, x: &GrElem<R>) -> GrElem<R> {
    let mut out = GrElem::zero();
    for (g, c) in &x.coeffs {
        gr.insert(&mut out, gr.group.neg(g), c.clone());
    }
    out
}

/// nu_N = sum of the elements of N.
pub fn norm_element<R: Ring>(gr: &GroupRing<R>, n: &Subgroup) -> GrElem<R> {
    let mut out = GrElem::zero();
    for g in &n.elements {
        gr.insert(&mut out, g.clone(), gr.ring.one());
    }
    out
}

/// e_psi = (1/#G) sum_sigma psi(sigma) sigma^{-1} over Q(zeta_{exp G}).
pub fn character_idempotent(
    gr: &GroupRing<CycField>,
    psi: &Character,
) -> GrElem<CycField> {
    let field = &gr.ring;
    let size_inv = field
        .try_inv(&field.from_i64(gr.group.size() as i64))
        .unwrap();
    let mut out = GrElem::zero();
    for g in gr.group.elements() {
        let v = psi.value(field, &g);
        gr.insert(&mut out, gr.group.neg(&g), field.mul(&size_inv, &v));
    }
    out
}

// ---------------------------------------------------------------------------
// chi-components

/// The chi-component ring O_chi[P] at precision p^N, with the split of G into
/// its prime-to-p and p-parts that defines the substitution map.
#[derive(Clone, Debug)]
pub struct ChiComponent {
    pub split: PrimeSplit,
    pub chi: Character,
    pub ochi: UnramRing,
    pub ring: GroupRing<UnramRing>,
}

impl PartialEq for ChiComponent {
    fn eq(&self, other: &Self) -> bool {
        self.chi == other.chi && self.ochi == other.ochi
    }
}

impl ChiComponent {
    /// Build the chi-component machinery for a character chi of the maximal
    /// prime-to-p subgroup of G. Requires p odd, p not dividing ord(chi).
    pub fn new(group: &FinAbGroup, p: u64, precision: u32, chi: &Character) -> Result<Self> {
        if p == 2 {
            return Err(CsError::PrimeTwo);
        }
        let split = PrimeSplit::new(group, p)?;
        if chi.group != split.prime_to_p {
            return Err(CsError::GroupMismatch);
        }
        let e = chi.order();
        if e % p == 0 {
            return Err(CsError::WildCharacter);
        }
        let ochi = crate::rings::hensel_factor_of_cyclotomic(e, p, precision);
        let ring = GroupRing::new(split.p_part.clone(), ochi.clone());
        Ok(ChiComponent {
            split: split.clone(),
            chi: chi.clone(),
            ochi,
            ring,
        })
    }

    /// chi(g') as an element of O_chi (fixed root of the Hensel factor).
    pub fn chi_value(&self, gp: &GElem) -> <UnramRing as Ring>::Elem {
        let l = self.chi.group.exponent();
        let e = self.chi.order();
        let k = self.chi.value_exponent(gp);
        debug_assert_eq!(k * e % l, 0);
        self.ochi.root_pow((k * e / l) as i64)
    }

    /// Image of a group element of G in O_chi[P].
    pub fn image_of_group_elem(&self, g: &GElem) -> GrElem<UnramRing> {
        let (gp, gq) = self.split.split(g);
        let c = self.chi_value(&gp);
        let mut out = GrElem::zero();
        self.ring.insert(&mut out, gq, c);
        out
    }

    /// The substitution map Z/p^N[G] -> O_chi[P].
    pub fn map(&self, zn: &Zmod, x: &GrElem<Zmod>) -> GrElem<UnramRing> {
        debug_assert_eq!(zn.p(), self.ochi.p());
        let mut out = GrElem::zero();
        for (g, c) in &x.coeffs {
            let (gp, gq) = self.split.split(g);
            let v = self.chi_value(&gp);
            let cv = self.ochi.mul(&v, &self.ochi.from_base(c.clone()));
            self.ring.insert(&mut out, gq, cv);
        }
        out
    }

    /// Invert the p-part of every group element (the sharp involution viewed
    /// inside the component).
    pub fn sharp_p(&self, x: &GrElem<UnramRing>) -> GrElem<UnramRing> {
        sharp_involution(&self.ring, x)
    }
}

/// chi_component(x) for x over Z/p^N: substitutes chi(g') for the prime-to-p
/// part of each group element.
pub fn chi_component(
    comp: &ChiComponent,
    zn: &Zmod,
    x: &GrElem<Zmod>,
) -> GrElem<UnramRing> {
    comp.map(zn, x)
}

/// Inversion in the local ring (O_chi/p^N)[P]: x is a unit iff its image in
/// the residue field (augment P -> 1, reduce mod p) is nonzero. Returns the
/// inverse or None.
pub fn try_invert(
    gr: &GroupRing<UnramRing>,
    x: &GrElem<UnramRing>,
) -> Option<GrElem<UnramRing>> {
    let ochi = &gr.ring;
    // residue image: sum of coefficients, mod p
    let aug = ochi.sum(x.coeffs.values().cloned());
    if ochi.val(&aug).map_or(true, |v| v > 0) {
        return None;
    }
    // Newton iteration y <- y(2 - x y) starting from aug^{-1} * identity.
    let y0 = ochi.try_inv(&aug)?;
    let mut y = gr.scalar(y0);
    let two = gr.from_i64(2);
    // radical is nilpotent: (p, augmentation ideal of the p-group); iterate
    // until exact.
    let max_iter = 64;
    for _ in 0..max_iter {
        let xy = gr.mul(x, &y);
        if gr.is_one(&xy) {
            return Some(y);
        }
        y = gr.mul(&y, &gr.sub(&two, &xy));
    }
    let xy = gr.mul(x, &y);
    if gr.is_one(&xy) {
        Some(y)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// The split ring Z_p[G]_(N) = Z_p[G/N] x Z_p[G]/(nu_N)

/// Both components of the image of x in Z_p[G]_(N): the quotient-group image
/// and the class modulo (nu_N), the latter in a canonical reduced form.
pub struct SplitImage {
    pub on_quotient: GrElem<Zmod>,
    pub quotient_ring: GroupRing<Zmod>,
    pub mod_norm: GrElem<Zmod>,
}

pub fn ring_with_n_split(
    gr: &GroupRing<Zmod>,
    x: &GrElem<Zmod>,
    n: &Subgroup,
) -> Result<SplitImage> {
    let (q, qmap) = gr.group.quotient(n)?;
    let qr = GroupRing::new(q, gr.ring.clone());
    let mut on_quotient = GrElem::zero();
    for (g, c) in &x.coeffs {
        qr.insert(&mut on_quotient, qmap.apply_raw(g), c.clone());
    }
    // reduce modulo (nu_N): the ideal is spanned by {g nu_N : g in T} for any
    // transversal T. Canonical form: in each coset pick the largest element
    // (BTreeMap order) and clear its coefficient by subtracting c * nu_N
    // translated.
    let mut rep = x.clone();
    let nu = norm_element(gr, n);
    // cosets: iterate over elements grouped by coset of N
    let mut seen = std::collections::BTreeSet::new();
    let elements: Vec<GElem> = gr.group.elements();
    for g in &elements {
        if seen.contains(g) {
            continue;
        }
        let coset: Vec<GElem> = n.elements.iter().map(|h| gr.group.add(g, h)).collect();
        for e in &coset {
            seen.insert(e.clone());
        }
        let pivot = coset.iter().max().unwrap().clone();
        let c = rep.coeff(&gr.ring, &pivot);
        if !gr.ring.is_zero(&c) {
            // subtract c * (coset sum through the pivot)
            let corr = gr.scale(&c, &gr.translate(&pivot, &nu));
            rep = gr.sub(&rep, &corr);
        }
    }
    Ok(SplitImage {
        on_quotient,
        quotient_ring: qr,
        mod_norm: rep,
    })
}

/// Kernel check for the combined map x -> (x mod N-quotient, x mod (nu_N)):
/// returns the minimal valuation among kernel generators, which certifies
/// injectivity up to p-adic precision max_len - v_p(#N).
pub fn split_injectivity_margin(gr: &GroupRing<Zmod>, n: &Subgroup) -> Result<u32> {
    let ring = &gr.ring;
    let elements = gr.group.elements();
    let dim = elements.len();
    let index: BTreeMap<GElem, usize> = elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, g)| (g, i))
        .collect();
    // rows: quotient coordinates + mod-nu coordinates, columns: G-coordinates
    let (q, qmap) = gr.group.quotient(n)?;
    let qelems = q.elements();
    let qindex: BTreeMap<GElem, usize> = qelems
        .iter()
        .cloned()
        .enumerate()
        .map(|(g, i)| (i, g))
        .collect();
    let mut mat: Vec<Vec<<Zmod as Ring>::Elem>> = vec![vec![ring.zero(); dim]; qelems.len() + dim];
    for (j, g) in elements.iter().enumerate() {
        // quotient image
        let qi = qindex[&qmap.apply_raw(g)];
        mat[qi][j] = ring.add(&mat[qi][j], &ring.one());
        // mod-nu image: canonical reduction of the basis vector
        let e = gr.group_elem(g.clone());
        let s = ring_with_n_split(gr, &e, n)?;
        for (h, c) in &s.mod_norm.coeffs {
            let hi = index[h];
            mat[qelems.len() + hi][j] = ring.add(&mat[qelems.len() + hi][j], c);
        }
    }
    let ker = linalg::kernel_chain(ring, &mat);
    let mut margin = ring.max_len();
    for gen in &ker {
        for c in gen {
            if let Some(v) = ring.val(c) {
                margin = margin.min(v);
            }
        }
    }
    Ok(margin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Rationals;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn z2q() -> GroupRing<Rationals> {
        GroupRing::new(FinAbGroup::new(vec![2], vec![1]).unwrap(), Rationals)
    }

    #[test]
    fn convolution_identities() {
        let gr = z2q();
        let one = gr.one();
        let c = gr.group_elem(vec![1]);
        let x = gr.add(&gr.from_i64(3), &gr.scale(&BigRational::from(BigInt::from(5)), &c));
        // identity case
        assert_eq!(gr.mul(&one, &x), x);
        // (1+c)(1-c) = 0
        let a = gr.add(&one, &c);
        let b = gr.sub(&one, &c);
        assert!(gr.mul(&a, &b).is_zero());
        // nu^2 = 2 nu for N = {1, c}
        let n = gr.group.full_subgroup();
        let nu = norm_element(&gr, &n);
        assert_eq!(gr.mul(&nu, &nu), gr.scale(&BigRational::from(BigInt::from(2)), &nu));
    }

    #[test]
    fn minus_projection_examples() {
        let gr = z2q();
        let one = gr.one();
        let c = gr.group_elem(vec![1]);
        let p1 = minus_projection(&gr, &one).unwrap();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let expect = gr.scale(&half, &gr.sub(&one, &c));
        assert_eq!(p1, expect);
        let pc = minus_projection(&gr, &c).unwrap();
        assert_eq!(pc, gr.neg(&expect));
        // idempotent
        let again = minus_projection(&gr, &p1).unwrap();
        assert_eq!(again, p1);
    }

    #[test]
    fn sharp_is_involutive_automorphism() {
        let g = FinAbGroup::new(vec![5], vec![0]).unwrap();
        let gr = GroupRing::new(g, Rationals);
        let x = gr.add(&gr.group_elem(vec![2]), &gr.from_i64(7));
        let y = gr.sub(&gr.group_elem(vec![4]), &gr.group_elem(vec![1]));
        assert_eq!(sharp_involution(&gr, &sharp_involution(&gr, &x)), x);
        let lhs = sharp_involution(&gr, &gr.mul(&x, &y));
        let rhs = gr.mul(&sharp_involution(&gr, &x), &sharp_involution(&gr, &y));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn idempotents_of_z6() {
        let g = FinAbGroup::new(vec![6], vec![3]).unwrap();
        let f = CycField::new(6);
        let gr = GroupRing::new(g.clone(), f.clone());
        let chars = Character::all(&g);
        let idems: Vec<_> = chars.iter().map(|ch| character_idempotent(&gr, ch)).collect();
        for (i, ei) in idems.iter().enumerate() {
            assert_eq!(gr.mul(ei, ei), *ei);
            for (j, ej) in idems.iter().enumerate() {
                if i != j {
                    assert!(gr.mul(ei, ej).is_zero());
                }
            }
        }
        // sum of all = 1; odd ones sum to (1-c)/2
        let total = idems.iter().fold(gr.zero(), |a, b| gr.add(&a, b));
        assert_eq!(total, gr.one());
        let odd_sum = chars
            .iter()
            .zip(&idems)
            .filter(|(ch, _)| ch.is_odd())
            .fold(gr.zero(), |a, (_, e)| gr.add(&a, e));
        let minus_one = minus_projection(&gr, &gr.one()).unwrap();
        assert_eq!(odd_sum, minus_one);
    }

    #[test]
    fn chi_component_is_ring_hom() {
        // G = Z/4 x Z/3, p = 3: G' = Z/4, P = Z/3
        let g = FinAbGroup::new(vec![4, 3], vec![2, 0]).unwrap();
        let zn = Zmod::new(3, 12);
        let gr = GroupRing::new(g.clone(), zn.clone());
        let sp = PrimeSplit::new(&g, 3).unwrap();
        let chi = Character::new(sp.prime_to_p.clone(), vec![1]).unwrap();
        let comp = ChiComponent::new(&g, 3, 12, &chi).unwrap();
        let x = gr.add(&gr.group_elem(vec![1, 2]), &gr.from_i64(5));
        let y = gr.sub(&gr.group_elem(vec![3, 1]), &gr.group_elem(vec![2, 0]));
        let fx = comp.map(&zn, &x);
        let fy = comp.map(&zn, &y);
        let fxy = comp.map(&zn, &gr.mul(&x, &y));
        assert_eq!(comp.ring.mul(&fx, &fy), fxy);
        // nu_{G'} with chi nontrivial -> 0
        let gprime = g.subgroup(&[vec![1, 0]]).unwrap();
        let nu = norm_element(&gr, &gprime);
        assert!(comp.map(&zn, &nu).is_zero());
        // trivial chi on G'-supported element -> sum of coefficients
        let chi0 = Character::trivial(sp.prime_to_p.clone());
        let comp0 = ChiComponent::new(&g, 3, 12, &chi0).unwrap();
        let img = comp0.map(&zn, &nu);
        assert_eq!(img, comp0.ring.from_i64(4));
    }

    #[test]
    fn local_ring_inversion() {
        // P = Z/3, p = 3, N = 4: x = 1 + nu_P is a unit
        let g = FinAbGroup::new(vec![4, 3], vec![2, 0]).unwrap();
        let sp = PrimeSplit::new(&g, 3).unwrap();
        let chi = Character::new(sp.prime_to_p.clone(), vec![1]).unwrap();
        let comp = ChiComponent::new(&g, 3, 4, &chi).unwrap();
        let gr = &comp.ring;
        let nu = norm_element(gr, &gr.group.full_subgroup());
        let x = gr.add(&gr.one(), &nu);
        let y = try_invert(gr, &x).expect("unit");
        assert!(gr.is_one(&gr.mul(&x, &y)));
        // x = p is not a unit; nu_P is not a unit
        assert!(try_invert(gr, &gr.from_i64(3)).is_none());
        assert!(try_invert(gr, &nu).is_none());
        assert!(gr.is_one(&try_invert(gr, &gr.one()).unwrap()));
    }

    #[test]
    fn split_ring_components() {
        let g = FinAbGroup::new(vec![2], vec![1]).unwrap();
        let zn = Zmod::new(3, 6);
        let gr = GroupRing::new(g.clone(), zn.clone());
        let n = g.full_subgroup();
        let nu = norm_element(&gr, &n);
        let s = ring_with_n_split(&gr, &nu, &n).unwrap();
        // nu -> (#N, 0)
        assert_eq!(s.on_quotient, s.quotient_ring.from_i64(2));
        assert!(s.mod_norm.is_zero());
        let s1 = ring_with_n_split(&gr, &gr.one(), &n).unwrap();
        assert_eq!(s1.on_quotient, s1.quotient_ring.one());
        assert!(!s1.mod_norm.is_zero());
        // margin: kernel valuations >= N - v_p(#N) = 6 - 0... #N = 2, v_3 = 0
        let margin = split_injectivity_margin(&gr, &n).unwrap();
        assert!(margin >= 6);
    }
}
