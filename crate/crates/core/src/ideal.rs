//! The ideal calculus: sums, products, powers, colons, intersections,
//! membership and equality, Artinian colengths, m-primary certificates and
//! monomial integral closure.
//!
//! Ideals in a quotient ring `R = S/K` are represented by lifted generators;
//! every operation transparently adjoins the reduced basis of `K`, so
//! membership and equality are modulo `K` by construction.
//!
//! Ideals generated by monomials in a polynomial ring take combinatorial
//! fast paths throughout: products, colons, intersections and closures of
//! monomial ideals never touch Buchberger.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::groebner::{self, GroebnerBasis};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::ring::AmbientRing;
use crate::simplex::lp_feasible;

/// An ideal of an [`AmbientRing`], with its reduced Groebner basis cached
/// write-once behind an `Arc` (clones share the cache).
#[derive(Clone)]
pub struct Ideal {
    ring: Arc<AmbientRing>,
    gens: Vec<Polynomial>,
    basis: Arc<OnceLock<Arc<GroebnerBasis>>>,
    colen: Arc<OnceLock<Option<u64>>>,
}

/// Witness that an ideal is primary to the irrelevant maximal ideal:
/// for each variable, the least `N_i` with `x_i^{N_i}` in the ideal.
/// Every certified membership can be re-verified by a normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimaryCertificate {
    pub exponents: Vec<u16>,
}

/// Outcome of the m-primary test.  The decision itself is exact (pure
/// variable powers appear in the leading-term ideal iff the colength is
/// finite); `Undetermined` is kept for the certificate search budget only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimaryOutcome {
    Primary(PrimaryCertificate),
    NotPrimary { var: String },
    Undetermined { var: String, cap: u32 },
}

impl PrimaryOutcome {
    pub fn is_primary(&self) -> bool {
        matches!(self, PrimaryOutcome::Primary(_))
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", strs.join(", "))
    }
}

/// Pack an exponent vector into 16-bit lanes of a `u128`; exponents must
/// stay below `2^15` so the lane guard bit is free.  Componentwise
/// divisibility then becomes two integer operations.
#[inline]
fn pack_exps(exps: &[u16]) -> u128 {
    debug_assert!(exps.len() <= 8);
    let mut acc = 0u128;
    for (i, &e) in exps.iter().enumerate() {
        debug_assert!(e < 0x8000);
        acc |= (e as u128) << (16 * i);
    }
    acc
}

const LANE_GUARDS: u128 = {
    let mut g = 0u128;
    let mut i = 0;
    while i < 8 {
        g |= 0x8000u128 << (16 * i);
        i += 1;
    }
    g
};

/// `a` divides `b` lane-wise: no lane of `b - a` borrows.
#[inline]
fn packed_divides(a: u128, b: u128) -> bool {
    ((b | LANE_GUARDS).wrapping_sub(a)) & LANE_GUARDS == LANE_GUARDS
}

/// Dominance filter on packed exponent vectors sorted by (degree, value):
/// returns the indices of the minimal elements, in order.
fn packed_minimal(packed: &[u128], degrees: &[u32]) -> Vec<u32> {
    let mut order: Vec<u32> = (0..packed.len() as u32).collect();
    order.sort_unstable_by(|&x, &y| {
        degrees[x as usize]
            .cmp(&degrees[y as usize])
            .then_with(|| packed[x as usize].cmp(&packed[y as usize]))
    });
    let mut kept: Vec<u32> = Vec::new();
    let mut kept_packed: Vec<u128> = Vec::new();
    let mut last: Option<u128> = None;
    'outer: for &i in &order {
        let p = packed[i as usize];
        if last == Some(p) {
            continue;
        }
        last = Some(p);
        for &k in &kept_packed {
            if packed_divides(k, p) {
                continue 'outer;
            }
        }
        kept.push(i);
        kept_packed.push(p);
    }
    kept
}

/// Remove monomials divisible by another one; sorts for determinism.
pub fn minimalize_monomials(mons: Vec<Monomial>) -> Vec<Monomial> {
    if mons.is_empty() {
        return mons;
    }
    if mons[0].nvars() <= 8 {
        let packed: Vec<u128> = mons.iter().map(|m| pack_exps(m.exps())).collect();
        let degrees: Vec<u32> = mons.iter().map(|m| m.degree()).collect();
        return packed_minimal(&packed, &degrees)
            .into_iter()
            .map(|i| mons[i as usize].clone())
            .collect();
    }
    let mut mons = mons;
    mons.sort_unstable();
    mons.dedup();
    mons.sort_unstable_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.exps().cmp(b.exps())));
    let mut out: Vec<Monomial> = Vec::new();
    'outer: for m in mons {
        for k in &out {
            if k.divides(&m) {
                continue 'outer;
            }
        }
        out.push(m);
    }
    out
}

fn packed_degree(m: u128, nvars: usize) -> u32 {
    (0..nvars).map(|i| ((m >> (16 * i)) & 0xffff) as u32).sum()
}

fn minimalize_packed(v: Vec<u128>, nvars: usize) -> Vec<u128> {
    let degrees: Vec<u32> = v.iter().map(|&m| packed_degree(m, nvars)).collect();
    packed_minimal(&v, &degrees)
        .into_iter()
        .map(|i| v[i as usize])
        .collect()
}

/// Standard-monomial count under the staircase of a minimal monomial
/// generating set, by slicing off the last variable.  `None` when some
/// variable has no pure power (infinite count).
fn count_standard(mins: &[Vec<u16>], nvars: usize) -> Option<u64> {
    assert!(nvars <= 8, "colength counting supports up to 8 variables");
    let packed: Vec<u128> = mins.iter().map(|m| pack_exps(m)).collect();
    count_standard_packed(&packed, nvars)
}

fn count_standard_packed(mins: &[u128], nvars: usize) -> Option<u64> {
    if mins.iter().any(|&m| m == 0) {
        return Some(0);
    }
    if nvars == 0 {
        return Some(1);
    }
    let last = nvars - 1;
    let shift = 16 * last;
    let lane_mask: u128 = 0xffffu128 << shift;
    let cap = mins
        .iter()
        .filter(|&&m| m & !lane_mask == 0)
        .map(|&m| ((m >> shift) & 0xffff) as u16)
        .min()?;
    let mut total = 0u64;
    for e in 0..cap {
        let slice: Vec<u128> = mins
            .iter()
            .filter(|&&m| ((m >> shift) & 0xffff) as u16 <= e)
            .map(|&m| m & !lane_mask)
            .collect();
        let slice = minimalize_packed(slice, last);
        total += count_standard_packed(&slice, last)?;
    }
    Some(total)
}

impl Ideal {
    pub fn new(ring: Arc<AmbientRing>, gens: Vec<Polynomial>) -> Result<Ideal> {
        for g in &gens {
            if !Arc::ptr_eq(g.core(), ring.core()) && **g.core() != **ring.core() {
                return Err(Error::RingMismatch);
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal {
            ring,
            gens,
            basis: Arc::new(OnceLock::new()),
            colen: Arc::new(OnceLock::new()),
        })
    }

    pub fn from_texts(ring: &Arc<AmbientRing>, texts: &[&str]) -> Result<Ideal> {
        let gens = texts
            .iter()
            .map(|t| crate::parse::parse_polynomial(t, ring.core()))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(Arc::clone(ring), gens)
    }

    pub fn zero(ring: &Arc<AmbientRing>) -> Ideal {
        Ideal::new(Arc::clone(ring), Vec::new()).expect("zero ideal")
    }

    pub fn unit(ring: &Arc<AmbientRing>) -> Ideal {
        Ideal::new(Arc::clone(ring), vec![Polynomial::one(ring.core())]).expect("unit ideal")
    }

    /// The irrelevant maximal ideal `(x_1, .., x_n)`.
    pub fn maximal(ring: &Arc<AmbientRing>) -> Ideal {
        Ideal::new(Arc::clone(ring), ring.variable_polys()).expect("maximal ideal")
    }

    pub fn ring(&self) -> &Arc<AmbientRing> {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    fn check_ring(&self, other: &Ideal) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    /// Exponent vectors of the generators if this is a monomial ideal in a
    /// plain polynomial ring.
    pub fn monomial_gens(&self) -> Option<Vec<Monomial>> {
        if self.ring.is_quotient() {
            return None;
        }
        self.gens
            .iter()
            .map(|g| {
                if g.num_terms() == 1 {
                    Some(g.terms()[0].0.clone())
                } else {
                    None
                }
            })
            .collect()
    }

    fn from_monomials(ring: &Arc<AmbientRing>, mons: Vec<Monomial>) -> Ideal {
        let mins = minimalize_monomials(mons);
        let core = ring.core();
        let one = ring.field().one();
        let gens: Vec<Polynomial> = mins
            .into_iter()
            .map(|m| Polynomial::monomial(core, m, one.clone()))
            .collect();
        Ideal::new(Arc::clone(ring), gens).expect("monomials live on the ring core")
    }

    /// The reduced Groebner basis of this ideal plus the ring's defining
    /// ideal.  Cached write-once; concurrent first access is safe.
    pub fn basis(&self) -> Arc<GroebnerBasis> {
        self.basis
            .get_or_init(|| {
                if let Some(mons) = self.monomial_gens() {
                    let mins = minimalize_monomials(mons);
                    let core = self.ring.core();
                    let one = self.ring.field().one();
                    let elems = mins
                        .into_iter()
                        .map(|m| Polynomial::monomial(core, m, one.clone()))
                        .collect();
                    return Arc::new(GroebnerBasis::from_reduced_unchecked(
                        Arc::clone(core),
                        elems,
                    ));
                }
                let seed = self.ring.defining_basis();
                Arc::new(groebner::buchberger_seeded(
                    self.ring.core(),
                    seed.elements(),
                    self.gens.clone(),
                ))
            })
            .clone()
    }

    /// Basis elements that are not already in the defining ideal: a reduced
    /// generating set of the ideal modulo the quotient, used to keep
    /// products and colons small.
    pub fn generating_set(&self) -> Vec<Polynomial> {
        let basis = self.basis();
        if !self.ring.is_quotient() {
            return basis.elements().to_vec();
        }
        let k = self.ring.defining_basis();
        basis
            .elements()
            .iter()
            .filter(|g| !k.contains(g))
            .cloned()
            .collect()
    }

    /// Normal form of `f` modulo this ideal (and the defining ideal).
    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        groebner::normal_form(f, &self.basis())
    }

    /// Membership modulo the quotient.
    pub fn contains_poly(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    /// A small generating set without forcing a basis computation: the
    /// reduced basis if it is already cached, the raw generators otherwise.
    pub fn cheap_gens(&self) -> Vec<Polynomial> {
        match self.basis.get() {
            Some(b) if b.elements().len() < self.gens.len() || self.gens.is_empty() => {
                b.elements().to_vec()
            }
            _ => self.gens.clone(),
        }
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        self.check_ring(other)?;
        let basis = self.basis();
        Ok(other.cheap_gens().iter().all(|g| basis.contains(g)))
    }

    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        self.check_ring(other)?;
        Ok(self.basis() == other.basis())
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.basis().is_zero_ideal()
            || self
                .gens
                .iter()
                .all(|g| self.ring.reduce_mod_defining(g).is_zero())
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.basis().is_unit_ideal()
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        if let (Some(a), Some(b)) = (self.monomial_gens(), other.monomial_gens()) {
            let mut mons = a;
            mons.extend(b);
            return Ok(Ideal::from_monomials(&self.ring, mons));
        }
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&other.gens);
        Ideal::new(Arc::clone(&self.ring), gens)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        if let (Some(a), Some(b)) = (self.monomial_gens(), other.monomial_gens()) {
            let a = minimalize_monomials(a);
            let b = minimalize_monomials(b);
            let mut mons = Vec::with_capacity(a.len() * b.len());
            for ma in &a {
                for mb in &b {
                    mons.push(ma.mul(mb));
                }
            }
            return Ok(Ideal::from_monomials(&self.ring, mons));
        }
        let a = self.generating_set();
        let b = other.generating_set();
        let mut gens = Vec::with_capacity(a.len() * b.len());
        for fa in &a {
            for fb in &b {
                gens.push(fa.mul(fb)?);
            }
        }
        Ideal::new(Arc::clone(&self.ring), gens)
    }

    /// `I^n` by repeated product with intermediate basis reduction;
    /// `I^0 = (1)` by convention.
    pub fn power(&self, n: u32) -> Result<Ideal> {
        if n == 0 {
            return Ok(Ideal::unit(&self.ring));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    /// Exact ideal quotient `(self : other)`, computed generator-by-generator
    /// as an intersection of single-element colons.
    pub fn colon(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        if other.is_zero_ideal() {
            return Err(Error::ZeroIdeal);
        }
        if other.is_unit_ideal() {
            return Ok(self.clone());
        }
        if let (Some(a), Some(b)) = (self.monomial_gens(), other.monomial_gens()) {
            let a = minimalize_monomials(a);
            let mut acc: Option<Ideal> = None;
            for m in minimalize_monomials(b) {
                let shifted: Vec<Monomial> = a
                    .iter()
                    .map(|g| {
                        // g / gcd(g, m)
                        let gcd = Monomial::new(
                            g.exps()
                                .iter()
                                .zip(m.exps())
                                .map(|(x, y)| *x.min(y))
                                .collect::<smallvec::SmallVec<[u16; 8]>>(),
                        );
                        gcd.div_into(g)
                    })
                    .collect();
                let part = Ideal::from_monomials(&self.ring, shifted);
                acc = Some(match acc {
                    None => part,
                    Some(prev) => prev.intersect(&part)?,
                });
            }
            return Ok(acc.expect("nonzero ideal has at least one generator"));
        }
        let mut acc: Option<Ideal> = None;
        for b in other.generating_set() {
            if b.is_zero() {
                continue;
            }
            let part = self.colon_element(&b)?;
            acc = Some(match acc {
                None => part,
                Some(prev) => prev.intersect(&part)?,
            });
        }
        acc.ok_or(Error::ZeroIdeal)
    }

    /// `(self : f)` for one nonzero element, via `(A cap (f)) / f` and the
    /// auxiliary-variable elimination construction.
    pub fn colon_element(&self, f: &Polynomial) -> Result<Ideal> {
        if f.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        let core = self.ring.core();
        let ext = core.with_aux_front(1);
        let t = Polynomial::var(&ext, 0);
        let fe = f.transport(&ext, 1);
        let mut gens = Vec::new();
        for a in self.basis().elements() {
            gens.push(a.transport(&ext, 1).mul(&t)?);
        }
        gens.push(fe.sub(&fe.mul(&t)?)?);
        let gb = groebner::reduced_groebner(&ext, gens);
        let mut out = Vec::new();
        for g in gb.elements() {
            let lt = g.leading_monomial().expect("nonzero");
            if lt.exps()[0] != 0 {
                continue;
            }
            let stripped = g.strip_front(core, 1);
            let q = stripped
                .div_exact(f)
                .ok_or_else(|| Error::Inconsistency("colon witness is not a multiple".into()))?;
            out.push(q);
        }
        Ideal::new(Arc::clone(&self.ring), out)
    }

    /// Exact intersection via the standard one-auxiliary-variable elimination.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        if let (Some(a), Some(b)) = (self.monomial_gens(), other.monomial_gens()) {
            let a = minimalize_monomials(a);
            let b = minimalize_monomials(b);
            let mut mons = Vec::with_capacity(a.len() * b.len());
            for ma in &a {
                for mb in &b {
                    mons.push(ma.lcm(mb));
                }
            }
            return Ok(Ideal::from_monomials(&self.ring, mons));
        }
        let core = self.ring.core();
        let ext = core.with_aux_front(1);
        let t = Polynomial::var(&ext, 0);
        let mut gens = Vec::new();
        for a in self.basis().elements() {
            gens.push(a.transport(&ext, 1).mul(&t)?);
        }
        for b in other.basis().elements() {
            let be = b.transport(&ext, 1);
            gens.push(be.sub(&be.mul(&t)?)?);
        }
        let gb = groebner::reduced_groebner(&ext, gens);
        let out: Vec<Polynomial> = gb
            .elements()
            .iter()
            .filter(|g| g.leading_monomial().expect("nonzero").exps()[0] == 0)
            .map(|g| g.strip_front(core, 1))
            .collect();
        Ideal::new(Arc::clone(&self.ring), out)
    }

    /// Decide whether this ideal is primary to the irrelevant maximal ideal.
    ///
    /// The decision is exact: the colength is finite iff the leading-term
    /// ideal contains a pure power of every variable.  The certificate
    /// records, per variable, the least exponent `N` with `x_i^N` in the
    /// ideal (binary search; membership in `N` is monotone).
    pub fn is_m_primary(&self) -> PrimaryOutcome {
        let basis = self.basis();
        let n = self.ring.nvars();
        let mut lt_pure: Vec<Option<u16>> = vec![None; n];
        for lm in basis.leading_monomials() {
            let support: Vec<usize> = lm
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, _)| i)
                .collect();
            if lm.is_one() {
                // unit ideal: every variable is present at exponent 1
                for v in lt_pure.iter_mut() {
                    *v = Some(1);
                }
                break;
            }
            if support.len() == 1 {
                let i = support[0];
                let e = lm.exps()[i];
                if lt_pure[i].map_or(true, |p| e < p) {
                    lt_pure[i] = Some(e);
                }
            }
        }
        for (i, p) in lt_pure.iter().enumerate() {
            if p.is_none() {
                return PrimaryOutcome::NotPrimary {
                    var: self.ring.core().var_name(i).to_string(),
                };
            }
        }
        if basis.is_unit_ideal() {
            return PrimaryOutcome::Primary(PrimaryCertificate {
                exponents: vec![1; n],
            });
        }

        // Finite colength; now certify pure-power memberships.
        let colen = self
            .colength()
            .expect("finite colength was just established");
        let hi_default = (colen + 1).min(u16::MAX as u64) as u16;
        let mut exponents = Vec::with_capacity(n);
        for i in 0..n {
            let lo = lt_pure[i].expect("checked above");
            let mut hi = lo.max(1);
            // Grow until membership holds (bounded by the nilpotency index).
            while !self.contains_poly(&self.ring.var_power(i, hi)) {
                if hi >= hi_default {
                    return PrimaryOutcome::Undetermined {
                        var: self.ring.core().var_name(i).to_string(),
                        cap: hi as u32,
                    };
                }
                hi = (hi * 2).min(hi_default);
            }
            // Binary search the least exponent with membership.
            let mut lo = lo;
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if self.contains_poly(&self.ring.var_power(i, mid)) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            exponents.push(hi);
        }
        PrimaryOutcome::Primary(PrimaryCertificate { exponents })
    }

    /// `l(R/I)`: the number of standard monomials outside the leading-term
    /// ideal.  Errors when the length is infinite.  Cached per ideal.
    pub fn colength(&self) -> Result<u64> {
        let cached = *self.colen.get_or_init(|| {
            let basis = self.basis();
            if basis.is_unit_ideal() {
                return Some(0);
            }
            let mins: Vec<Vec<u16>> =
                basis.leading_monomials().map(|m| m.exps().to_vec()).collect();
            count_standard(&mins, self.ring.nvars())
        });
        match cached {
            Some(c) => Ok(c),
            None => {
                let basis = self.basis();
                let var = (0..self.ring.nvars())
                    .find(|&i| {
                        !basis.leading_monomials().any(|m| {
                            m.exps().iter().enumerate().all(|(j, &e)| (j == i) || e == 0)
                                && m.exps()[i] > 0
                        })
                    })
                    .map(|i| self.ring.core().var_name(i).to_string())
                    .unwrap_or_default();
                Err(Error::NotMPrimary { var, cap: 0 })
            }
        }
    }

    /// `l(A/B)` for `B` contained in `A`, both of finite colength.
    pub fn length_between(&self, sub: &Ideal) -> Result<u64> {
        self.check_ring(sub)?;
        if !self.contains_ideal(sub)? {
            return Err(Error::ContainmentFailed(format!(
                "{sub} is not contained in {self}"
            )));
        }
        let a = self.colength()?;
        let b = sub.colength()?;
        Ok(b - a)
    }

    /// Integral closure of a monomial ideal: all monomials whose exponent
    /// vector lies in the Newton polyhedron `conv(exponents) + R_{>=0}^d`,
    /// decided by exact linear programming.  Idempotent.
    pub fn monomial_integral_closure(&self) -> Result<Ideal> {
        let mons = self.monomial_gens().ok_or_else(|| {
            let bad = self
                .gens
                .iter()
                .find(|g| g.num_terms() != 1)
                .map(|g| g.to_string())
                .unwrap_or_else(|| "quotient ring".into());
            Error::NonMonomialGenerator(bad)
        })?;
        let mins = minimalize_monomials(mons);
        if mins.is_empty() {
            return Ok(self.clone());
        }
        let d = self.ring.nvars();
        let bound: Vec<u16> = (0..d)
            .map(|j| mins.iter().map(|m| m.exps()[j]).max().unwrap_or(0))
            .collect();

        let mut closure: Vec<Monomial> = Vec::new();
        let mut point = vec![0u16; d];
        'points: loop {
            let v = Monomial::new(smallvec::SmallVec::from_slice(&point));
            let inside = mins.iter().any(|m| m.divides(&v)) || newton_member(&mins, &v);
            if inside {
                closure.push(v);
            }
            // advance odometer
            for j in 0..d {
                if point[j] < bound[j] {
                    point[j] += 1;
                    continue 'points;
                }
                point[j] = 0;
            }
            break;
        }
        Ok(Ideal::from_monomials(&self.ring, closure))
    }
}

/// Is `v` in `conv(mins) + R_{>=0}^d`?  Feasibility of
/// `sum lambda_i a_i <= v`, `sum lambda_i = 1`, `lambda >= 0`.
fn newton_member(mins: &[Monomial], v: &Monomial) -> bool {
    let g = mins.len();
    let d = v.nvars();
    let big = |x: u16| BigRational::from(BigInt::from(x));
    let mut rows = Vec::with_capacity(d + 1);
    for j in 0..d {
        let mut row = Vec::with_capacity(g + d);
        for m in mins {
            row.push(big(m.exps()[j]));
        }
        for k in 0..d {
            row.push(if k == j {
                BigRational::one()
            } else {
                BigRational::from(BigInt::from(0))
            });
        }
        rows.push((row, big(v.exps()[j])));
    }
    let mut row = vec![BigRational::one(); g];
    row.extend(std::iter::repeat(BigRational::from(BigInt::from(0))).take(d));
    rows.push((row, BigRational::one()));
    lp_feasible(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CoeffField;
    use crate::monomial::MonomialOrder;

    fn ring(vars: &[&str]) -> Arc<AmbientRing> {
        AmbientRing::polynomial_ring(
            vars.iter().map(|s| s.to_string()).collect(),
            CoeffField::Rationals,
            MonomialOrder::Grevlex,
        )
    }

    fn ideal(r: &Arc<AmbientRing>, gens: &[&str]) -> Ideal {
        Ideal::from_texts(r, gens).unwrap()
    }

    #[test]
    fn square_of_maximal_ideal() {
        let r = ring(&["x", "y"]);
        let m2 = Ideal::maximal(&r).power(2).unwrap();
        let expected = ideal(&r, &["x^2", "x*y", "y^2"]);
        assert!(m2.equals(&expected).unwrap());
    }

    #[test]
    fn zeroth_power_is_unit() {
        let r = ring(&["x", "y"]);
        let i = ideal(&r, &["x^2", "y^3"]);
        assert!(i.power(0).unwrap().is_unit_ideal());
    }

    #[test]
    fn conjugate_generators_equal_maximal() {
        let r = ring(&["x", "y"]);
        let a = ideal(&r, &["x - y", "x + y"]);
        assert!(a.equals(&Ideal::maximal(&r)).unwrap());
    }

    #[test]
    fn colon_examples() {
        let r = ring(&["x", "y"]);
        // (x^2) : (x) = (x)
        let a = ideal(&r, &["x^2"]).colon(&ideal(&r, &["x"])).unwrap();
        assert!(a.equals(&ideal(&r, &["x"])).unwrap());
        // (A : (1)) = A
        let i = ideal(&r, &["x*y", "y^2"]);
        assert!(i.colon(&Ideal::unit(&r)).unwrap().equals(&i).unwrap());
        // ((xy, y^2) : (y)) = (x, y)
        let c = i.colon(&ideal(&r, &["y"])).unwrap();
        assert!(c.equals(&Ideal::maximal(&r)).unwrap());
    }

    #[test]
    fn colon_general_polynomials() {
        let r = ring(&["x", "y"]);
        // ((x) * (x + y) : (x + y)) recovers (x) even without monomial paths.
        let a = ideal(&r, &["x^2 + x*y"]);
        let c = a.colon(&ideal(&r, &["x + y"])).unwrap();
        assert!(c.equals(&ideal(&r, &["x"])).unwrap());
    }

    #[test]
    fn intersection_examples() {
        let r = ring(&["x", "y"]);
        let xy = ideal(&r, &["x"]).intersect(&ideal(&r, &["y"])).unwrap();
        assert!(xy.equals(&ideal(&r, &["x*y"])).unwrap());

        let a = ideal(&r, &["x^2", "y"]);
        assert!(a.intersect(&a).unwrap().equals(&a).unwrap());

        let b = a.intersect(&ideal(&r, &["x"])).unwrap();
        assert!(b.equals(&ideal(&r, &["x^2", "x*y"])).unwrap());
    }

    #[test]
    fn primary_certificates() {
        let r = ring(&["x", "y"]);
        match ideal(&r, &["x^2", "y^3"]).is_m_primary() {
            PrimaryOutcome::Primary(c) => assert_eq!(c.exponents, vec![2, 3]),
            other => panic!("expected primary, got {other:?}"),
        }
        assert!(matches!(
            ideal(&r, &["x"]).is_m_primary(),
            PrimaryOutcome::NotPrimary { .. }
        ));
        // (xy, x+y) is primary: x^2 = x(x+y) - xy.
        match ideal(&r, &["x*y", "x + y"]).is_m_primary() {
            PrimaryOutcome::Primary(c) => assert_eq!(c.exponents, vec![2, 2]),
            other => panic!("expected primary, got {other:?}"),
        }
    }

    #[test]
    fn colength_examples() {
        let r3 = ring(&["x", "y", "z"]);
        assert_eq!(Ideal::maximal(&r3).colength().unwrap(), 1);
        let r2 = ring(&["x", "y"]);
        assert_eq!(Ideal::maximal(&r2).power(2).unwrap().colength().unwrap(), 3);
        assert!(ideal(&r2, &["x"]).colength().is_err());
    }

    #[test]
    fn running_monomial_example_colengths() {
        // l(R/I) = 30 and l(R/J) = 64 for the degree-four instance.
        let r = ring(&["x", "y", "z"]);
        let i = ideal(
            &r,
            &[
                "x^4", "y^4", "z^4", "x^3*y", "x*y^3", "y^3*z", "y*z^3", "x^3*z", "x*z^3",
            ],
        );
        assert_eq!(i.colength().unwrap(), 30);
        let j = ideal(&r, &["x^4", "y^4", "z^4"]);
        assert_eq!(j.colength().unwrap(), 64);
        assert_eq!(j.length_between(&i).err().map(|_| ()), Some(()));
        assert_eq!(i.length_between(&j).unwrap(), 34);
    }

    #[test]
    fn closure_of_two_pure_powers() {
        let r = ring(&["x", "y"]);
        let i = ideal(&r, &["x^3", "y^3"]);
        let c = i.monomial_integral_closure().unwrap();
        let expected = ideal(&r, &["x^3", "x^2*y", "x*y^2", "y^3"]);
        assert!(c.equals(&expected).unwrap());
        // Idempotent.
        let cc = c.monomial_integral_closure().unwrap();
        assert!(cc.equals(&c).unwrap());
    }

    #[test]
    fn powers_of_maximal_are_closed() {
        let r = ring(&["x", "y", "z"]);
        for k in 1..4 {
            let mk = Ideal::maximal(&r).power(k).unwrap();
            assert!(mk.monomial_integral_closure().unwrap().equals(&mk).unwrap());
        }
    }

    #[test]
    fn closure_rejects_non_monomial() {
        let r = ring(&["x", "y"]);
        assert!(ideal(&r, &["x + y"]).monomial_integral_closure().is_err());
    }

    #[test]
    fn product_contained_in_intersection() {
        let r = ring(&["x", "y"]);
        let a = ideal(&r, &["x^2", "x*y"]);
        let b = ideal(&r, &["y^2", "x + y"]);
        let prod = a.product(&b).unwrap();
        let inter = a.intersect(&b).unwrap();
        assert!(inter.contains_ideal(&prod).unwrap());
        assert!(a.contains_ideal(&inter).unwrap());
        assert!(b.contains_ideal(&inter).unwrap());
    }

    #[test]
    fn quotient_ring_membership() {
        // R = k[x,y]/(x^2 - y): x^2 and y coincide.
        let r = ring(&["x", "y"]);
        let f = crate::parse::parse_polynomial("x^2 - y", r.core()).unwrap();
        let q = r.mod_elements(&[f]).unwrap();
        let i = ideal(&q, &["x^2"]);
        let y = crate::parse::parse_polynomial("y", q.core()).unwrap();
        assert!(i.contains_poly(&y));
    }
}
