//! Normal forms and reduced Groebner bases via Buchberger's algorithm with
//! the Gebauer-Moeller pair criteria.
//!
//! This kernel is deliberately classical: instance sizes in this engine stay
//! within a handful of variables and moderate degrees, where a careful
//! Buchberger implementation is fast enough and easy to audit.  Quotient
//! rings are handled one layer up (the ideal layer appends the defining
//! ideal's basis); this module is quotient-agnostic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Coeff;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Polynomial;
use crate::ring::RingCore;

/// A reduced Groebner basis: monic elements, pairwise auto-reduced, sorted
/// ascending by leading monomial.  For a fixed ideal and order this
/// representation is unique, so equality of bases is equality of ideals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    core: Arc<RingCore>,
    elements: Vec<Polynomial>,
    index: DivisorIndex,
}

impl GroebnerBasis {
    fn assemble(core: Arc<RingCore>, mut elements: Vec<Polynomial>) -> GroebnerBasis {
        let order = core.order();
        elements.sort_unstable_by(|a, b| {
            order.compare(
                a.leading_monomial().expect("no zero elements"),
                b.leading_monomial().expect("no zero elements"),
            )
        });
        let mut index = DivisorIndex::new(order);
        for i in 0..elements.len() {
            index.insert(&elements, i);
        }
        GroebnerBasis {
            core,
            elements,
            index,
        }
    }

    /// Wrap elements already known to form a reduced basis (monic, pairwise
    /// auto-reduced): minimal generators of a monomial ideal, for instance.
    pub(crate) fn from_reduced_unchecked(
        core: Arc<RingCore>,
        elements: Vec<Polynomial>,
    ) -> GroebnerBasis {
        GroebnerBasis::assemble(core, elements)
    }

    pub fn core(&self) -> &Arc<RingCore> {
        &self.core
    }

    pub fn order(&self) -> MonomialOrder {
        self.core.order()
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].degree() == 0
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.elements.iter().filter_map(|g| g.leading_monomial())
    }

    /// Membership test: `f` lies in the ideal iff its normal form vanishes.
    pub fn contains(&self, f: &Polynomial) -> bool {
        normal_form(f, self).is_zero()
    }
}

fn support_mask(m: &Monomial) -> u64 {
    let mut mask = 0u64;
    for (i, &e) in m.exps().iter().enumerate() {
        if e > 0 {
            mask |= 1 << (i as u64 & 63);
        }
    }
    mask
}

/// Divisor lookup over a growing set of leading terms.  Holds indices only,
/// so the polynomial storage can keep growing next to it.
#[derive(Debug, Clone, PartialEq, Eq)]
struct DivisorIndex {
    order: MonomialOrder,
    /// Indices sorted ascending by leading monomial.
    sorted: Vec<u32>,
    /// Support masks of the leading monomials, parallel to `sorted`.
    masks: Vec<u64>,
}

impl DivisorIndex {
    fn new(order: MonomialOrder) -> DivisorIndex {
        DivisorIndex {
            order,
            sorted: Vec::new(),
            masks: Vec::new(),
        }
    }

    fn insert(&mut self, polys: &[Polynomial], idx: usize) {
        let lm = polys[idx].leading_monomial().expect("nonzero");
        let pos = self.sorted.partition_point(|&j| {
            self.order
                .compare(polys[j as usize].leading_monomial().unwrap(), lm)
                == Ordering::Less
        });
        self.sorted.insert(pos, idx as u32);
        self.masks.insert(pos, support_mask(lm));
    }

    /// Find some element whose leading monomial divides `m`.  Only the
    /// prefix with `LT <= m` can contain divisors, because a divisor never
    /// exceeds its multiple in a multiplicative order.
    fn find_divisor(&self, polys: &[Polynomial], m: &Monomial, mask: u64) -> Option<usize> {
        let end = self.sorted.partition_point(|&j| {
            self.order
                .compare(polys[j as usize].leading_monomial().unwrap(), m)
                != Ordering::Greater
        });
        for k in 0..end {
            if self.masks[k] & !mask != 0 {
                continue;
            }
            let j = self.sorted[k] as usize;
            if polys[j].leading_monomial().unwrap().divides(m) {
                return Some(j);
            }
        }
        None
    }
}

/// Full normal form of `f` against a set of monic reducers.  Returns the
/// remainder and the maximum total degree of any product `m * g` used, which
/// certifies the degree at which a representation of `f - nf` exists.
fn reduce_full(f: &Polynomial, polys: &[Polynomial], index: &DivisorIndex) -> (Polynomial, u32) {
    let core = f.core();
    let field = core.field().clone();
    let order = index.order;
    let mut cert_degree = 0u32;
    let mut out: Vec<(Monomial, Coeff)> = Vec::new();
    let mut work: Vec<(Monomial, Coeff)> = f.terms().to_vec();
    let mut cursor = 0usize;
    let mut scratch: Vec<(Monomial, Coeff)> = Vec::new();

    while cursor < work.len() {
        let (lm, lc) = work[cursor].clone();
        let mask = support_mask(&lm);
        match index.find_divisor(polys, &lm, mask) {
            None => {
                out.push((lm, lc));
                cursor += 1;
            }
            Some(gi) => {
                let g = &polys[gi];
                let q = g.leading_monomial().unwrap().div_into(&lm);
                cert_degree = cert_degree.max(lm.degree());
                // work[cursor+1..] minus lc * q * tail(g), merged; heads cancel.
                scratch.clear();
                let gt = &g.terms()[1..];
                let (mut i, mut j) = (cursor + 1, 0usize);
                while i < work.len() && j < gt.len() {
                    let gm = gt[j].0.mul(&q);
                    match order.compare(&work[i].0, &gm) {
                        Ordering::Greater => {
                            scratch.push(work[i].clone());
                            i += 1;
                        }
                        Ordering::Less => {
                            scratch.push((gm, field.neg(&field.mul(&lc, &gt[j].1))));
                            j += 1;
                        }
                        Ordering::Equal => {
                            let c = field.sub(&work[i].1, &field.mul(&lc, &gt[j].1));
                            if !c.is_zero() {
                                scratch.push((gm, c));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                }
                scratch.extend_from_slice(&work[i..]);
                for (gm, gc) in &gt[j..] {
                    scratch.push((gm.mul(&q), field.neg(&field.mul(&lc, gc))));
                }
                std::mem::swap(&mut work, &mut scratch);
                cursor = 0;
            }
        }
    }
    // `out` was emitted in descending order already.
    (Polynomial::from_terms(core, out), cert_degree)
}

/// Normal form of `f` modulo `basis`: no term of the result is divisible by
/// any leading monomial of the basis, and `f - nf` lies in the ideal.
pub fn normal_form(f: &Polynomial, basis: &GroebnerBasis) -> Polynomial {
    normal_form_with_cert(f, basis).0
}

/// Normal form plus the certificate degree (see [`reduce_full`]).
pub fn normal_form_with_cert(f: &Polynomial, basis: &GroebnerBasis) -> (Polynomial, u32) {
    reduce_full(f, &basis.elements, &basis.index)
}

/// Checked variant of [`normal_form`] for the public operation surface.
pub fn try_normal_form(f: &Polynomial, basis: &GroebnerBasis) -> Result<Polynomial> {
    if !Arc::ptr_eq(f.core(), basis.core()) && *f.core() != *basis.core() {
        return Err(Error::RingMismatch);
    }
    Ok(normal_form(f, basis))
}

#[derive(Clone, PartialEq, Eq)]
struct Pair {
    degree: u32,
    lcm: Monomial,
    i: u32,
    j: u32,
}

impl Ord for Pair {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed so the BinaryHeap pops the smallest (degree, lcm, i, j).
        other
            .degree
            .cmp(&self.degree)
            .then_with(|| other.lcm.exps().cmp(self.lcm.exps()))
            .then_with(|| other.i.cmp(&self.i))
            .then_with(|| other.j.cmp(&self.j))
    }
}
impl PartialOrd for Pair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Buchberger {
    core: Arc<RingCore>,
    basis: Vec<Polynomial>,
    index: DivisorIndex,
    queue: BinaryHeap<Pair>,
}

impl Buchberger {
    fn lt(&self, i: usize) -> &Monomial {
        self.basis[i].leading_monomial().expect("nonzero basis element")
    }

    fn make_pair(&self, i: usize, j: usize) -> Pair {
        let lcm = self.lt(i).lcm(self.lt(j));
        Pair {
            degree: lcm.degree(),
            lcm,
            i: i as u32,
            j: j as u32,
        }
    }

    /// Push a nonzero, monic element and refresh the pair queue via the
    /// Gebauer-Moeller criteria.
    fn install(&mut self, h: Polynomial) {
        self.basis.push(h);
        let t = self.basis.len() - 1;
        self.index.insert(&self.basis, t);
        let lt_t = self.lt(t).clone();

        // Candidate pairs (i, t), pruned among themselves: drop a candidate
        // when another candidate's lcm properly divides it (keep exactly one
        // survivor per repeated lcm).
        let cand: Vec<Pair> = (0..t).map(|i| self.make_pair(i, t)).collect();
        let mut keep = vec![true; cand.len()];
        for a in 0..cand.len() {
            if !keep[a] {
                continue;
            }
            for b in 0..cand.len() {
                if a == b || !keep[b] {
                    continue;
                }
                if cand[b].lcm.divides(&cand[a].lcm) && (cand[b].lcm != cand[a].lcm || b < a) {
                    keep[a] = false;
                    break;
                }
            }
        }

        // Chain criterion against the existing queue: an old pair (i, j) is
        // redundant once LT(t) divides its lcm and both mixed lcms differ.
        let old = std::mem::take(&mut self.queue);
        for p in old.into_vec() {
            if lt_t.divides(&p.lcm) {
                let li = self.lt(p.i as usize).lcm(&lt_t);
                let lj = self.lt(p.j as usize).lcm(&lt_t);
                if li != p.lcm && lj != p.lcm {
                    continue;
                }
            }
            self.queue.push(p);
        }

        // Coprime-lead criterion last, per Gebauer-Moeller.
        for (p, k) in cand.into_iter().zip(keep) {
            if k && !self.lt(p.i as usize).gcd_is_one(&lt_t) {
                self.queue.push(p);
            }
        }
    }

    fn s_polynomial(&self, p: &Pair) -> Polynomial {
        let (i, j) = (p.i as usize, p.j as usize);
        // Elements are monic, so no coefficient scaling is needed.
        let qf = self.lt(i).div_into(&p.lcm);
        let qg = self.lt(j).div_into(&p.lcm);
        let one = self.core.field().one();
        self.basis[i]
            .mul_term(&qf, &one)
            .sub(&self.basis[j].mul_term(&qg, &one))
            .expect("same ring")
    }

    /// Process pairs until exhaustion; returns `true` if the ideal is `(1)`.
    fn complete(&mut self) -> bool {
        while let Some(pair) = self.queue.pop() {
            let s = self.s_polynomial(&pair);
            let (nf, _) = reduce_full(&s, &self.basis, &self.index);
            if nf.is_zero() {
                continue;
            }
            if nf.degree() == 0 {
                return true;
            }
            self.install(nf.monic());
        }
        false
    }
}

/// Compute the reduced Groebner basis of the ideal generated by `gens`.
pub fn reduced_groebner(core: &Arc<RingCore>, gens: Vec<Polynomial>) -> GroebnerBasis {
    buchberger_seeded(core, &[], gens)
}

/// Compute the reduced Groebner basis of `(seed) + (extra)` where `seed` is
/// already known to be a Groebner basis.  Pairs internal to the seed reduce
/// to zero by assumption and are never enqueued, which makes incremental
/// constructions (power plus one element, defining ideal plus generators)
/// much cheaper.
pub fn buchberger_seeded(
    core: &Arc<RingCore>,
    seed: &[Polynomial],
    extra: Vec<Polynomial>,
) -> GroebnerBasis {
    debug_assert!(seed.iter().all(|g| !g.is_zero()));
    let mut state = Buchberger {
        core: Arc::clone(core),
        basis: seed.to_vec(),
        index: DivisorIndex::new(core.order()),
        queue: BinaryHeap::new(),
    };
    for i in 0..state.basis.len() {
        state.index.insert(&state.basis, i);
    }

    // Interreduce the incoming generators against everything accepted so
    // far; zero remainders are redundant and dropped.
    let mut extra: Vec<Polynomial> = extra.into_iter().filter(|g| !g.is_zero()).collect();
    extra.sort_by(|a, b| {
        core.order().compare(
            a.leading_monomial().unwrap(),
            b.leading_monomial().unwrap(),
        )
    });
    let mut unit = false;
    for g in extra {
        let (nf, _) = reduce_full(&g, &state.basis, &state.index);
        if nf.is_zero() {
            continue;
        }
        if nf.degree() == 0 {
            unit = true;
            break;
        }
        state.install(nf.monic());
    }

    if unit || (!state.basis.is_empty() && state.complete()) {
        return GroebnerBasis::assemble(Arc::clone(core), vec![Polynomial::one(core)]);
    }
    if state.basis.is_empty() {
        return GroebnerBasis::assemble(Arc::clone(core), Vec::new());
    }

    // Minimalize: keep only elements whose leading monomial is not divisible
    // by another kept leading monomial.
    let mut idx: Vec<usize> = (0..state.basis.len()).collect();
    idx.sort_by(|&a, &b| core.order().compare(state.lt(a), state.lt(b)));
    let mut kept: Vec<usize> = Vec::new();
    'outer: for &i in &idx {
        for &k in &kept {
            if state.lt(k).divides(state.lt(i)) {
                continue 'outer;
            }
        }
        kept.push(i);
    }

    // Tail-reduce each kept element against the others; leading monomials
    // are pairwise non-divisible so they stay fixed.
    let minimal: Vec<Polynomial> = kept.iter().map(|&i| state.basis[i].clone()).collect();
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let mut index = DivisorIndex::new(core.order());
        for j in 0..minimal.len() {
            if j != i {
                index.insert(&minimal, j);
            }
        }
        let (nf, _) = reduce_full(&minimal[i], &minimal, &index);
        debug_assert!(!nf.is_zero());
        reduced.push(nf.monic());
    }

    GroebnerBasis::assemble(Arc::clone(core), reduced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CoeffField;
    use crate::parse::parse_polynomial;

    fn core2() -> Arc<RingCore> {
        RingCore::new(
            vec!["x".into(), "y".into()],
            CoeffField::Rationals,
            MonomialOrder::Grevlex,
        )
    }

    fn gb(core: &Arc<RingCore>, gens: &[&str]) -> GroebnerBasis {
        let polys = gens
            .iter()
            .map(|s| parse_polynomial(s, core).unwrap())
            .collect();
        reduced_groebner(core, polys)
    }

    #[test]
    fn conjugate_generators_give_variables() {
        let c = core2();
        let basis = gb(&c, &["x - y", "x + y"]);
        let strs: Vec<String> = basis.elements().iter().map(|g| g.to_string()).collect();
        assert_eq!(strs, vec!["y", "x"]);
    }

    #[test]
    fn single_monomial_is_its_own_basis() {
        let c = core2();
        let basis = gb(&c, &["x^2"]);
        assert_eq!(basis.elements().len(), 1);
        assert_eq!(basis.elements()[0].to_string(), "x^2");
    }

    #[test]
    fn normal_form_examples() {
        let c = core2();
        // f = x^2 - y^2 reduces to 0 modulo (x - y, x + y).
        let basis = gb(&c, &["x - y", "x + y"]);
        let f = parse_polynomial("x^2 - y^2", &c).unwrap();
        assert!(normal_form(&f, &basis).is_zero());

        // No reduction applies.
        let basis = gb(&c, &["y"]);
        let f = parse_polynomial("x", &c).unwrap();
        assert_eq!(normal_form(&f, &basis), f);

        // One-step reduction: x^2 -> y modulo (x^2 - y).
        let basis = gb(&c, &["x^2 - y"]);
        let f = parse_polynomial("x^2", &c).unwrap();
        assert_eq!(normal_form(&f, &basis).to_string(), "y");
    }

    #[test]
    fn reduced_basis_is_permutation_invariant() {
        let c = core2();
        let b1 = gb(&c, &["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"]);
        let b2 = gb(&c, &["x^2*y - 2*y^2 + x", "x^3 - 2*x*y"]);
        assert_eq!(b1, b2);
        // Known reduced basis for this classic pair.
        let strs: Vec<String> = b1.elements().iter().map(|g| g.to_string()).collect();
        assert_eq!(strs, vec!["y^2 - 1/2*x", "x*y", "x^2"]);
    }

    #[test]
    fn s_polynomials_of_output_reduce_to_zero() {
        let c = core2();
        let basis = gb(&c, &["x^3 - 2*x*y", "x^2*y - 2*y^2 + x", "x^2 + y^3"]);
        let elems = basis.elements();
        for i in 0..elems.len() {
            for j in (i + 1)..elems.len() {
                let lti = elems[i].leading_monomial().unwrap();
                let ltj = elems[j].leading_monomial().unwrap();
                let lcm = lti.lcm(ltj);
                let one = c.field().one();
                let s = elems[i]
                    .mul_term(&lti.div_into(&lcm), &one)
                    .sub(&elems[j].mul_term(&ltj.div_into(&lcm), &one))
                    .unwrap();
                assert!(normal_form(&s, &basis).is_zero(), "pair ({i},{j})");
            }
        }
    }

    #[test]
    fn unit_ideal_collapses() {
        let c = core2();
        let basis = gb(&c, &["x", "x + 1"]);
        assert!(basis.is_unit_ideal());
    }

    #[test]
    fn seeded_matches_fresh() {
        let c = core2();
        let b1 = gb(&c, &["x^2 - y", "y^2 - 3"]);
        let extra = parse_polynomial("x*y - 1", &c).unwrap();
        let seeded = buchberger_seeded(&c, b1.elements(), vec![extra]);
        let fresh = gb(&c, &["x^2 - y", "y^2 - 3", "x*y - 1"]);
        assert_eq!(seeded, fresh);
    }
}
