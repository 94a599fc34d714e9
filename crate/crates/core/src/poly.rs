//! Exact multivariate polynomials in canonical form.
//!
//! A polynomial stores its terms sorted in *descending* monomial order, with
//! no zero coefficients; the leading term is `terms[0]`.  Canonical form is
//! unique per ring and order, so structural equality is mathematical
//! equality.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Coeff;
use crate::monomial::Monomial;
use crate::ring::RingCore;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    core: Arc<RingCore>,
    /// Descending in the ring's monomial order; no zero coefficients.
    terms: Vec<(Monomial, Coeff)>,
}

impl Polynomial {
    pub fn zero(core: &Arc<RingCore>) -> Polynomial {
        Polynomial {
            core: Arc::clone(core),
            terms: Vec::new(),
        }
    }

    pub fn one(core: &Arc<RingCore>) -> Polynomial {
        Polynomial::constant(core, core.field().one())
    }

    pub fn constant(core: &Arc<RingCore>, c: Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(core);
        }
        Polynomial {
            core: Arc::clone(core),
            terms: vec![(Monomial::one(core.nvars()), c)],
        }
    }

    pub fn monomial(core: &Arc<RingCore>, m: Monomial, c: Coeff) -> Polynomial {
        Polynomial::from_terms(core, vec![(m, c)])
    }

    pub fn var(core: &Arc<RingCore>, i: usize) -> Polynomial {
        Polynomial::monomial(
            core,
            Monomial::var_pow(core.nvars(), i, 1),
            core.field().one(),
        )
    }

    /// Canonicalize an arbitrary term list: sort descending, merge equal
    /// monomials, drop zeros.
    pub fn from_terms(core: &Arc<RingCore>, mut terms: Vec<(Monomial, Coeff)>) -> Polynomial {
        let order = core.order();
        terms.sort_unstable_by(|a, b| order.compare(&b.0, &a.0));
        let mut out: Vec<(Monomial, Coeff)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 = core.field().add(&last.1, &c);
                    if last.1.is_zero() {
                        out.pop();
                    }
                    continue;
                }
            }
            if !c.is_zero() {
                out.push((m, c));
            }
        }
        Polynomial {
            core: Arc::clone(core),
            terms: out,
        }
    }

    pub fn core(&self) -> &Arc<RingCore> {
        &self.core
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; zero polynomial reports 0.
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Coeff)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn same_ring(&self, other: &Polynomial) -> bool {
        Arc::ptr_eq(&self.core, &other.core) || *self.core == *other.core
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &Polynomial, negate_other: bool) -> Polynomial {
        let field = self.core.field();
        let order = self.core.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match order.compare(ma, mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate_other { field.neg(cb) } else { cb.clone() };
                    out.push((mb.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other {
                        field.sub(ca, cb)
                    } else {
                        field.add(ca, cb)
                    };
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        for (mb, cb) in &other.terms[j..] {
            let c = if negate_other { field.neg(cb) } else { cb.clone() };
            out.push((mb.clone(), c));
        }
        Polynomial {
            core: Arc::clone(&self.core),
            terms: out,
        }
    }

    pub fn neg(&self) -> Polynomial {
        let field = self.core.field();
        Polynomial {
            core: Arc::clone(&self.core),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), field.neg(c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.core));
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return Ok(self.mul_term(m, c));
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return Ok(other.mul_term(m, c));
        }
        let field = self.core.field();
        let mut cross = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                cross.push((ma.mul(mb), field.mul(ca, cb)));
            }
        }
        Ok(Polynomial::from_terms(&self.core, cross))
    }

    /// Multiply by a single term; order is multiplicative so sortedness is
    /// preserved.
    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.core);
        }
        let field = self.core.field();
        Polynomial {
            core: Arc::clone(&self.core),
            terms: self
                .terms
                .iter()
                .map(|(tm, tc)| (tm.mul(m), field.mul(tc, c)))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        self.mul_term(&Monomial::one(self.core.nvars()), c)
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.leading_term() {
            None => self.clone(),
            Some((_, lc)) => {
                if lc.is_one() {
                    self.clone()
                } else {
                    self.scale(&self.core.field().inv(lc))
                }
            }
        }
    }

    /// `self - c * m * g`, the workhorse of polynomial reduction.
    pub fn sub_scaled(&self, c: &Coeff, m: &Monomial, g: &Polynomial) -> Polynomial {
        let scaled = g.mul_term(m, c);
        self.merge(&scaled, true)
    }

    /// Exact division by a monomial; returns `None` when any term is not
    /// divisible.
    pub fn div_monomial_exact(&self, m: &Monomial) -> Option<Polynomial> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (tm, tc) in &self.terms {
            if !m.divides(tm) {
                return None;
            }
            terms.push((m.div_into(tm), tc.clone()));
        }
        Some(Polynomial {
            core: Arc::clone(&self.core),
            terms,
        })
    }

    /// Re-interpret this polynomial in another ring with the same field,
    /// inserting `extra_front` fresh variables at the front (used by the
    /// elimination constructions) or just changing the monomial order.
    pub fn transport(&self, target: &Arc<RingCore>, extra_front: usize) -> Polynomial {
        debug_assert_eq!(self.core.nvars() + extra_front, target.nvars());
        debug_assert_eq!(self.core.field(), target.field());
        Polynomial::from_terms(
            target,
            self.terms
                .iter()
                .map(|(m, c)| (m.extend_at(0, extra_front), c.clone()))
                .collect(),
        )
    }

    /// Inverse of [`Polynomial::transport`]: drop the first `count` variables,
    /// which must not occur in any term.
    pub fn strip_front(&self, target: &Arc<RingCore>, count: usize) -> Polynomial {
        debug_assert!(self
            .terms
            .iter()
            .all(|(m, _)| m.exps()[..count].iter().all(|&e| e == 0)));
        Polynomial::from_terms(
            target,
            self.terms
                .iter()
                .map(|(m, c)| (m.strip_front(count), c.clone()))
                .collect(),
        )
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.core);
        for _ in 0..n {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Exact quotient `self / f` when `self` is a polynomial multiple of `f`
    /// (single-divisor long division); `None` if the division leaves a
    /// remainder.
    pub fn div_exact(&self, f: &Polynomial) -> Option<Polynomial> {
        let (flm, flc) = f.leading_term()?;
        let field = self.core.field();
        let order = self.core.order();
        let mut rem = self.clone();
        let mut quo: Vec<(Monomial, Coeff)> = Vec::new();
        while let Some((rlm, rlc)) = rem.leading_term().cloned() {
            if !flm.divides(&rlm) {
                return None;
            }
            let qm = flm.div_into(&rlm);
            let qc = field.div(&rlc, flc);
            rem = rem.sub_scaled(&qc, &qm, f);
            debug_assert!(rem
                .leading_monomial()
                .map_or(true, |m| order.compare(m, &rlm) == Ordering::Less));
            quo.push((qm, qc));
        }
        Some(Polynomial::from_terms(&self.core, quo))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let field = self.core.field();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_display_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = if neg { field.neg(c) } else { c.clone() };
            let coeff_str = field.format(&abs);
            if m.is_one() {
                write!(f, "{coeff_str}")?;
            } else {
                let mut first = coeff_str != "1";
                if first {
                    write!(f, "{coeff_str}")?;
                }
                for (vi, &e) in m.exps().iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if first {
                        write!(f, "*")?;
                    }
                    first = true;
                    write!(f, "{}", self.core.var_name(vi))?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CoeffField;
    use crate::monomial::MonomialOrder;
    use crate::ring::RingCore;

    fn core2() -> Arc<RingCore> {
        RingCore::new(
            vec!["x".into(), "y".into()],
            CoeffField::Rationals,
            MonomialOrder::Grevlex,
        )
    }

    fn p(core: &Arc<RingCore>, s: &str) -> Polynomial {
        crate::parse::parse_polynomial(s, core).unwrap()
    }

    #[test]
    fn product_of_conjugates() {
        let c = core2();
        let f = p(&c, "x + y").mul(&p(&c, "x - y")).unwrap();
        assert_eq!(f, p(&c, "x^2 - y^2"));
    }

    #[test]
    fn additive_identity() {
        let c = core2();
        let f = p(&c, "3*x^2*y - 7");
        assert_eq!(f.add(&Polynomial::zero(&c)).unwrap(), f);
        assert!(f.sub(&f).unwrap().is_zero());
    }

    #[test]
    fn fp_coefficients_wrap() {
        let c = RingCore::new(
            vec!["x".into()],
            CoeffField::prime(5).unwrap(),
            MonomialOrder::Grevlex,
        );
        let f = p(&c, "3*x").mul(&p(&c, "2*x")).unwrap();
        assert_eq!(f, p(&c, "x^2"));
    }

    #[test]
    fn display_roundtrips() {
        let c = core2();
        for s in ["x^2 - y^2", "0", "1", "-x", "3/2*x*y + y^2 - 1/7"] {
            let f = p(&c, s);
            assert_eq!(p(&c, &f.to_string()), f, "roundtrip failed for {s}");
        }
    }
}
