//! Ambient rings: polynomial rings `k[x_1..x_n]` and their quotients
//! `k[x_1..x_n]/K`, always considered locally at the irrelevant maximal
//! ideal.
//!
//! Localization is implicit: every ideal this engine measures is certified
//! primary to `(x_1,..,x_n)`, and then each length equals the corresponding
//! global colength, so no local arithmetic is ever needed.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::groebner::{self, GroebnerBasis};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Polynomial;

/// The data polynomials themselves depend on: variables, field, order.
/// Kept separate from [`AmbientRing`] so that the defining ideal of a
/// quotient (a list of polynomials) does not self-reference.
#[derive(Debug, PartialEq, Eq)]
pub struct RingCore {
    vars: Vec<String>,
    field: CoeffField,
    order: MonomialOrder,
}

impl RingCore {
    pub fn new(vars: Vec<String>, field: CoeffField, order: MonomialOrder) -> Arc<RingCore> {
        assert!(!vars.is_empty(), "ring needs at least one variable");
        let mut seen = vars.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), vars.len(), "variable names must be unique");
        Arc::new(RingCore { vars, field, order })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_name(&self, i: usize) -> &str {
        &self.vars[i]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    /// Same variables and field under a different monomial order.
    pub fn with_order(&self, order: MonomialOrder) -> Arc<RingCore> {
        Arc::new(RingCore {
            vars: self.vars.clone(),
            field: self.field.clone(),
            order,
        })
    }

    /// Core with `count` auxiliary variables prepended, under the block
    /// elimination order that eliminates them.
    pub fn with_aux_front(&self, count: usize) -> Arc<RingCore> {
        let mut vars = Vec::with_capacity(self.vars.len() + count);
        for i in 0..count {
            // '@' is not a legal identifier character in the grammar, so no clash.
            vars.push(format!("@t{i}"));
        }
        vars.extend(self.vars.iter().cloned());
        Arc::new(RingCore {
            vars,
            field: self.field.clone(),
            order: MonomialOrder::Elimination { block: count },
        })
    }
}

/// A polynomial ring or a quotient of one, with the reduced Groebner basis
/// of the defining ideal and the Krull dimension cached lazily.
#[derive(Debug)]
pub struct AmbientRing {
    core: Arc<RingCore>,
    defining: Vec<Polynomial>,
    quot_basis: OnceLock<Arc<GroebnerBasis>>,
    dim: OnceLock<usize>,
}

impl PartialEq for AmbientRing {
    fn eq(&self, other: &Self) -> bool {
        *self.core == *other.core && self.defining == other.defining
    }
}
impl Eq for AmbientRing {}

impl AmbientRing {
    pub fn polynomial_ring(
        vars: Vec<String>,
        field: CoeffField,
        order: MonomialOrder,
    ) -> Arc<AmbientRing> {
        Arc::new(AmbientRing {
            core: RingCore::new(vars, field, order),
            defining: Vec::new(),
            quot_basis: OnceLock::new(),
            dim: OnceLock::new(),
        })
    }

    /// Quotient by the ideal generated by `defining`; generators must live on
    /// `core`.
    pub fn quotient_ring(core: Arc<RingCore>, defining: Vec<Polynomial>) -> Result<Arc<AmbientRing>> {
        for g in &defining {
            if !Arc::ptr_eq(g.core(), &core) && **g.core() != *core {
                return Err(Error::RingMismatch);
            }
        }
        let defining: Vec<Polynomial> = defining.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Arc::new(AmbientRing {
            core,
            defining,
            quot_basis: OnceLock::new(),
            dim: OnceLock::new(),
        }))
    }

    /// The quotient of this ring by additional elements (e.g. a superficial
    /// element): same variables, defining ideal enlarged.
    pub fn mod_elements(self: &Arc<Self>, extra: &[Polynomial]) -> Result<Arc<AmbientRing>> {
        let mut defining = self.defining.clone();
        defining.extend_from_slice(extra);
        AmbientRing::quotient_ring(Arc::clone(&self.core), defining)
    }

    pub fn core(&self) -> &Arc<RingCore> {
        &self.core
    }

    pub fn nvars(&self) -> usize {
        self.core.nvars()
    }

    pub fn field(&self) -> &CoeffField {
        self.core.field()
    }

    pub fn order(&self) -> MonomialOrder {
        self.core.order()
    }

    pub fn is_quotient(&self) -> bool {
        !self.defining.is_empty()
    }

    pub fn defining(&self) -> &[Polynomial] {
        &self.defining
    }

    /// Reduced Groebner basis of the defining ideal (empty for polynomial
    /// rings).  Computed once, shared afterwards.
    pub fn defining_basis(&self) -> &Arc<GroebnerBasis> {
        self.quot_basis.get_or_init(|| {
            Arc::new(groebner::reduced_groebner(&self.core, self.defining.clone()))
        })
    }

    /// Krull dimension of the ring, computed as the maximum number of
    /// variables independent modulo the leading-term ideal of the defining
    /// ideal.  For a polynomial ring this is the variable count.
    pub fn dim(&self) -> usize {
        *self.dim.get_or_init(|| {
            if self.defining.is_empty() {
                return self.core.nvars();
            }
            let basis = self.defining_basis();
            let supports: Vec<Vec<usize>> = basis
                .elements()
                .iter()
                .filter_map(|g| g.leading_monomial())
                .map(|m| {
                    m.exps()
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, _)| i)
                        .collect()
                })
                .collect();
            let n = self.core.nvars();
            assert!(n <= 20, "independent-set search is exponential in variables");
            let mut best = 0usize;
            for mask in 0u32..(1u32 << n) {
                let size = mask.count_ones() as usize;
                if size <= best {
                    continue;
                }
                let independent = supports
                    .iter()
                    .all(|sup| !sup.iter().all(|&i| mask & (1 << i) != 0));
                if independent {
                    best = size;
                }
            }
            best
        })
    }

    /// The irrelevant maximal ideal's generators: the variable images.
    pub fn variable_polys(self: &Arc<Self>) -> Vec<Polynomial> {
        (0..self.nvars())
            .map(|i| Polynomial::var(&self.core, i))
            .collect()
    }

    /// Image of a polynomial in the quotient: its normal form modulo the
    /// defining ideal.  Identity for polynomial rings.
    pub fn reduce_mod_defining(&self, f: &Polynomial) -> Polynomial {
        if self.defining.is_empty() {
            return f.clone();
        }
        groebner::normal_form(f, self.defining_basis())
    }

    /// One monomial per residue-class basis element would be overkill here;
    /// this only checks whether two polynomials represent the same element.
    pub fn elements_equal(&self, f: &Polynomial, g: &Polynomial) -> bool {
        if self.defining.is_empty() {
            return f == g;
        }
        let diff = f.sub(g).expect("same ring");
        self.reduce_mod_defining(&diff).is_zero()
    }

    pub fn same_ring(&self, other: &AmbientRing) -> bool {
        std::ptr::eq(self, other) || self == other
    }

    /// Pure power `x_i^k` as a polynomial.
    pub fn var_power(&self, i: usize, k: u16) -> Polynomial {
        Polynomial::monomial(
            &self.core,
            Monomial::var_pow(self.nvars(), i, k),
            self.field().one(),
        )
    }
}

impl fmt::Display for AmbientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.field().name(), self.core.vars().join(","))?;
        if self.is_quotient() {
            let gens: Vec<String> = self.defining.iter().map(|g| g.to_string()).collect();
            write!(f, "/({})", gens.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn ring3() -> Arc<AmbientRing> {
        AmbientRing::polynomial_ring(
            vec!["x".into(), "y".into(), "z".into()],
            CoeffField::Rationals,
            MonomialOrder::Grevlex,
        )
    }

    #[test]
    fn polynomial_ring_dimension_is_nvars() {
        assert_eq!(ring3().dim(), 3);
    }

    #[test]
    fn hypersurface_quotient_drops_dimension() {
        let r = ring3();
        let f = parse_polynomial("x^2 - y*z", r.core()).unwrap();
        let q = r.mod_elements(&[f]).unwrap();
        assert_eq!(q.dim(), 2);
    }

    #[test]
    fn element_images_respect_defining_ideal() {
        let r = ring3();
        let f = parse_polynomial("x^2 - y*z", r.core()).unwrap();
        let q = r.mod_elements(&[f]).unwrap();
        let a = parse_polynomial("x^2", q.core()).unwrap();
        let b = parse_polynomial("y*z", q.core()).unwrap();
        assert!(q.elements_equal(&a, &b));
        assert!(!r.elements_equal(&a, &b));
    }
}
