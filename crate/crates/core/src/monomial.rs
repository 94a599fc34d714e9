//! Monomials as dense exponent vectors, and the classical monomial orders.

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Exponent vector of a monomial; the length always matches the ambient
/// variable count.  Exponents fit `u16` comfortably for everything this
/// engine does (total degrees stay well below a thousand).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: SmallVec<[u16; 8]>,
}

impl Monomial {
    pub fn new(exps: impl Into<SmallVec<[u16; 8]>>) -> Monomial {
        Monomial { exps: exps.into() }
    }

    pub fn one(nvars: usize) -> Monomial {
        Monomial {
            exps: SmallVec::from_elem(0, nvars),
        }
    }

    /// The monomial `x_i^k`.
    pub fn var_pow(nvars: usize, i: usize, k: u16) -> Monomial {
        let mut m = Monomial::one(nvars);
        m.exps[i] = k;
        m
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.nvars(), other.nvars());
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller must ensure divisibility.
    pub fn div_into(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        Monomial {
            exps: other
                .exps
                .iter()
                .zip(&self.exps)
                .map(|(b, a)| b - a)
                .collect(),
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    pub fn gcd_is_one(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Insert `count` fresh variables (exponent 0) at position `at`.
    pub fn extend_at(&self, at: usize, count: usize) -> Monomial {
        let mut exps = SmallVec::with_capacity(self.exps.len() + count);
        exps.extend_from_slice(&self.exps[..at]);
        exps.extend(std::iter::repeat(0).take(count));
        exps.extend_from_slice(&self.exps[at..]);
        Monomial { exps }
    }

    /// Drop the first `count` variables; caller must know they are unused.
    pub fn strip_front(&self, count: usize) -> Monomial {
        Monomial {
            exps: SmallVec::from_slice(&self.exps[count..]),
        }
    }
}

/// A multiplicative total well-order on monomials.
///
/// `Elimination { block }` is the internal block order used for elimination
/// constructions (intersections, colons): it compares the first `block`
/// variables grevlex first, so the first block dominates and the order
/// eliminates those variables.  The instance grammar only ever names the
/// three classical orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    GradedLex,
    Elimination { block: usize },
}

impl Default for MonomialOrder {
    fn default() -> Self {
        MonomialOrder::Grevlex
    }
}

fn grevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    // Same degree: smaller last nonzero difference wins.
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => {}
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

fn lex(a: &[u16], b: &[u16]) -> Ordering {
    for i in 0..a.len() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), b.nvars());
        let (a, b) = (a.exps(), b.exps());
        match self {
            MonomialOrder::Grevlex => grevlex(a, b),
            MonomialOrder::Lex => lex(a, b),
            MonomialOrder::GradedLex => {
                let da: u32 = a.iter().map(|&e| e as u32).sum();
                let db: u32 = b.iter().map(|&e| e as u32).sum();
                da.cmp(&db).then_with(|| lex(a, b))
            }
            MonomialOrder::Elimination { block } => {
                grevlex(&a[..*block], &b[..*block]).then_with(|| grevlex(&a[*block..], &b[*block..]))
            }
        }
    }

    /// Checked comparison for the public surface.
    pub fn try_compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        if a.nvars() != b.nvars() {
            return Err(Error::LengthMismatch(a.nvars(), b.nvars()));
        }
        Ok(self.compare(a, b))
    }

    pub fn name(&self) -> &'static str {
        match self {
            MonomialOrder::Grevlex => "grevlex",
            MonomialOrder::Lex => "lex",
            MonomialOrder::GradedLex => "graded-lex",
            MonomialOrder::Elimination { .. } => "elimination",
        }
    }

    pub fn parse(s: &str) -> Result<MonomialOrder> {
        match s {
            "grevlex" => Ok(MonomialOrder::Grevlex),
            "lex" => Ok(MonomialOrder::Lex),
            "graded-lex" | "grlex" => Ok(MonomialOrder::GradedLex),
            other => Err(Error::BadInstance(format!("unknown monomial order `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::new(SmallVec::from_slice(e))
    }

    #[test]
    fn grevlex_same_degree_tiebreak() {
        // x^2 vs xy in k[x,y]: grevlex says x^2 > xy.
        let o = MonomialOrder::Grevlex;
        assert_eq!(o.compare(&m(&[2, 0]), &m(&[1, 1])), Ordering::Greater);
        // degree dominates
        assert_eq!(o.compare(&m(&[0, 3]), &m(&[2, 0])), Ordering::Greater);
    }

    #[test]
    fn lex_ignores_degree() {
        let o = MonomialOrder::Lex;
        // x > y^5
        assert_eq!(o.compare(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
    }

    #[test]
    fn equal_iff_same_exponents() {
        for o in [MonomialOrder::Grevlex, MonomialOrder::Lex, MonomialOrder::GradedLex] {
            assert_eq!(o.compare(&m(&[1, 2]), &m(&[1, 2])), Ordering::Equal);
            assert_ne!(o.compare(&m(&[1, 2]), &m(&[2, 1])), Ordering::Equal);
        }
    }

    #[test]
    fn length_mismatch_is_reported() {
        let o = MonomialOrder::Grevlex;
        assert!(o.try_compare(&m(&[1, 2]), &m(&[1, 2, 3])).is_err());
    }

    #[test]
    fn elimination_block_dominates() {
        // t > any power of x when t is the (single) eliminated block.
        let o = MonomialOrder::Elimination { block: 1 };
        assert_eq!(o.compare(&m(&[1, 0]), &m(&[0, 9])), Ordering::Greater);
    }

    #[test]
    fn grevlex_three_vars_classic() {
        // In k[x,y,z]: x*z > y^2 is false under grevlex (y^2 has smaller last exponent).
        let o = MonomialOrder::Grevlex;
        assert_eq!(o.compare(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
    }
}
