//! The polynomial text grammar.
//!
//! An expression is a sequence of terms joined by `+`/`-`.  A term is an
//! optional coefficient (`123` or `123/456`) followed by `*`-separated
//! variable powers `v^k` (`^1` optional, `k >= 1`).  Whitespace is
//! insignificant, parentheses are not supported, identifiers match
//! `[a-zA-Z][a-zA-Z0-9_]*`.

use num_bigint::BigInt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::ring::RingCore;

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("digits are ascii");
        Ok(text.parse().expect("digits parse as BigInt"))
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.src.len() || !self.src[self.pos].is_ascii_alphabetic() {
            return Err(self.err("expected a variable name"));
        }
        self.pos += 1;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .expect("identifier is ascii")
            .to_string())
    }
}

/// Parse `text` into a canonical polynomial on `core`.
pub fn parse_polynomial(text: &str, core: &Arc<RingCore>) -> Result<Polynomial> {
    let mut lx = Lexer::new(text);
    let mut terms: Vec<(Monomial, crate::field::Coeff)> = Vec::new();
    let field = core.field().clone();
    let nvars = core.nvars();

    let mut first = true;
    loop {
        // Sign (mandatory between terms, optional before the first).
        let mut negative = false;
        match lx.peek() {
            Some(b'+') => {
                lx.bump();
            }
            Some(b'-') => {
                lx.bump();
                negative = true;
            }
            Some(_) if first => {}
            None if first => return Err(lx.err("empty expression")),
            None => return Err(lx.err("trailing operator")),
            Some(c) => {
                return Err(lx.err(format!("expected `+` or `-`, found `{}`", c as char)))
            }
        }
        first = false;

        // Optional coefficient.
        let mut coeff = None;
        if matches!(lx.peek(), Some(c) if c.is_ascii_digit()) {
            let num = lx.integer()?;
            let den = if lx.peek() == Some(b'/') {
                lx.bump();
                let d = lx.integer()?;
                if d == BigInt::from(0) {
                    return Err(lx.err("zero denominator"));
                }
                d
            } else {
                BigInt::from(1)
            };
            coeff = Some(field.from_fraction(&num, &den)?);
            // optional `*` between coefficient and variables
            if lx.peek() == Some(b'*') {
                lx.bump();
                if !matches!(lx.peek(), Some(c) if c.is_ascii_alphabetic()) {
                    return Err(lx.err("expected a variable after `*`"));
                }
            }
        }

        // Variable powers.
        let mut mono = Monomial::one(nvars);
        let mut saw_var = false;
        while matches!(lx.peek(), Some(c) if c.is_ascii_alphabetic()) {
            let name = lx.ident()?;
            let idx = core
                .var_index(&name)
                .ok_or(Error::UnknownVariable(name.clone()))?;
            let exp: u16 = if lx.peek() == Some(b'^') {
                lx.bump();
                let e = lx.integer()?;
                let e: u32 = e
                    .try_into()
                    .map_err(|_| lx.err("exponent out of range"))?;
                if e < 1 {
                    return Err(lx.err("exponent must be at least 1"));
                }
                e.try_into().map_err(|_| lx.err("exponent out of range"))?
            } else {
                1
            };
            let mut exps = mono.exps().to_vec();
            exps[idx] += exp;
            mono = Monomial::new(smallvec::SmallVec::from_vec(exps));
            saw_var = true;
            if lx.peek() == Some(b'*') {
                lx.bump();
                if !matches!(lx.peek(), Some(c) if c.is_ascii_alphabetic()) {
                    return Err(lx.err("expected a variable after `*`"));
                }
            } else {
                break;
            }
        }

        if coeff.is_none() && !saw_var {
            return Err(lx.err("expected a coefficient or a variable"));
        }
        let mut c = coeff.unwrap_or_else(|| field.one());
        if negative {
            c = field.neg(&c);
        }
        terms.push((mono, c));

        match lx.peek() {
            None => break,
            Some(b'+') | Some(b'-') => continue,
            Some(c) => return Err(lx.err(format!("unexpected character `{}`", c as char))),
        }
    }

    Ok(Polynomial::from_terms(core, terms))
}

/// Parse a list of generator strings on `core`.
pub fn parse_generators(texts: &[String], core: &Arc<RingCore>) -> Result<Vec<Polynomial>> {
    texts.iter().map(|t| parse_polynomial(t, core)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CoeffField;
    use crate::monomial::MonomialOrder;

    fn core3() -> Arc<RingCore> {
        RingCore::new(
            vec!["x".into(), "y".into(), "z".into()],
            CoeffField::Rationals,
            MonomialOrder::Grevlex,
        )
    }

    #[test]
    fn two_term_difference() {
        let c = core3();
        let f = parse_polynomial("x^2 - y^2", &c).unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.to_string(), "x^2 - y^2");
    }

    #[test]
    fn zero_literal_is_zero_polynomial() {
        let c = core3();
        assert!(parse_polynomial("0", &c).unwrap().is_zero());
    }

    #[test]
    fn like_terms_collect() {
        let c = core3();
        let f = parse_polynomial("x*y + y*x", &c).unwrap();
        assert_eq!(f.to_string(), "2*x*y");
    }

    #[test]
    fn unknown_variable_is_reported() {
        let c = core3();
        match parse_polynomial("x + w", &c) {
            Err(Error::UnknownVariable(v)) => assert_eq!(v, "w"),
            other => panic!("expected unknown-variable error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_error_carries_position() {
        let c = core3();
        match parse_polynomial("x^2 + ^3", &c) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn fractions_and_implicit_star() {
        let c = core3();
        let f = parse_polynomial("3/4x*y^2 - 2", &c).unwrap();
        assert_eq!(f.to_string(), "3/4*x*y^2 - 2");
    }

    #[test]
    fn rejects_parentheses_and_bad_exponent() {
        let c = core3();
        assert!(parse_polynomial("(x+y)", &c).is_err());
        assert!(parse_polynomial("x^0", &c).is_err());
        assert!(parse_polynomial("", &c).is_err());
        assert!(parse_polynomial("x + ", &c).is_err());
    }

    #[test]
    fn underscored_identifiers() {
        let c = RingCore::new(
            vec!["z_1".into(), "z_2".into()],
            CoeffField::Rationals,
            MonomialOrder::Grevlex,
        );
        let f = parse_polynomial("z_1^2*z_2", &c).unwrap();
        assert_eq!(f.to_string(), "z_1^2*z_2");
    }
}
