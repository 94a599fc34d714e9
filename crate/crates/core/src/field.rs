//! Exact coefficient arithmetic over the rationals or a prime field.
//!
//! A [`CoeffField`] is a runtime value (instances choose their field), so
//! coefficients are carried as a small enum and all arithmetic goes through
//! the field, which knows the modulus in the prime case.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// The coefficient field of an ambient ring: `Q` or `F_p` for a prime `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoeffField {
    Rationals,
    Prime(u64),
}

/// An element of a [`CoeffField`].  `Fp` values are kept reduced to `0..p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coeff {
    Q(BigRational),
    Fp(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl CoeffField {
    /// Default prime used by the `Fp` speed mode.
    pub const DEFAULT_PRIME: u64 = 32003;

    pub fn prime(p: u64) -> Result<CoeffField> {
        if !is_prime(p) {
            return Err(Error::BadCoefficient(
                format!("Fp:{p}"),
                "modulus is not prime".into(),
            ));
        }
        Ok(CoeffField::Prime(p))
    }

    pub fn zero(&self) -> Coeff {
        match self {
            CoeffField::Rationals => Coeff::Q(BigRational::zero()),
            CoeffField::Prime(_) => Coeff::Fp(0),
        }
    }

    pub fn one(&self) -> Coeff {
        match self {
            CoeffField::Rationals => Coeff::Q(BigRational::one()),
            CoeffField::Prime(_) => Coeff::Fp(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Coeff {
        match self {
            CoeffField::Rationals => Coeff::Q(BigRational::from(BigInt::from(n))),
            CoeffField::Prime(p) => Coeff::Fp(n.rem_euclid(*p as i64) as u64),
        }
    }

    /// Build a coefficient from an integer fraction; fails in `F_p` when the
    /// denominator is divisible by `p`.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<Coeff> {
        if den.is_zero() {
            return Err(Error::BadCoefficient(self.name(), "zero denominator".into()));
        }
        match self {
            CoeffField::Rationals => Ok(Coeff::Q(BigRational::new(num.clone(), den.clone()))),
            CoeffField::Prime(p) => {
                let p_big = BigInt::from(*p);
                let n = ((num % &p_big) + &p_big) % &p_big;
                let d = ((den % &p_big) + &p_big) % &p_big;
                let n: u64 = n.try_into().expect("reduced residue fits u64");
                let d: u64 = d.try_into().expect("reduced residue fits u64");
                if d == 0 {
                    return Err(Error::BadCoefficient(
                        self.name(),
                        format!("denominator {den} is zero mod {p}"),
                    ));
                }
                Ok(Coeff::Fp(mod_mul(n, mod_inv(d, *p), *p)))
            }
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (CoeffField::Rationals, Coeff::Q(x), Coeff::Q(y)) => Coeff::Q(x + y),
            (CoeffField::Prime(p), Coeff::Fp(x), Coeff::Fp(y)) => {
                let s = x + y;
                Coeff::Fp(if s >= *p { s - p } else { s })
            }
            _ => unreachable!("coefficient/field kind mismatch"),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (CoeffField::Rationals, Coeff::Q(x), Coeff::Q(y)) => Coeff::Q(x - y),
            (CoeffField::Prime(p), Coeff::Fp(x), Coeff::Fp(y)) => {
                Coeff::Fp(if x >= y { x - y } else { x + p - y })
            }
            _ => unreachable!("coefficient/field kind mismatch"),
        }
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (CoeffField::Rationals, Coeff::Q(x), Coeff::Q(y)) => Coeff::Q(x * y),
            (CoeffField::Prime(p), Coeff::Fp(x), Coeff::Fp(y)) => Coeff::Fp(mod_mul(*x, *y, *p)),
            _ => unreachable!("coefficient/field kind mismatch"),
        }
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (CoeffField::Rationals, Coeff::Q(x)) => Coeff::Q(-x),
            (CoeffField::Prime(p), Coeff::Fp(x)) => Coeff::Fp(if *x == 0 { 0 } else { p - x }),
            _ => unreachable!("coefficient/field kind mismatch"),
        }
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (CoeffField::Rationals, Coeff::Q(x)) => {
                assert!(!x.is_zero(), "inverse of zero");
                Coeff::Q(x.recip())
            }
            (CoeffField::Prime(p), Coeff::Fp(x)) => {
                assert!(*x != 0, "inverse of zero");
                Coeff::Fp(mod_inv(*x, *p))
            }
            _ => unreachable!("coefficient/field kind mismatch"),
        }
    }

    pub fn div(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.mul(a, &self.inv(b))
    }

    pub fn name(&self) -> String {
        match self {
            CoeffField::Rationals => "Q".into(),
            CoeffField::Prime(p) => format!("Fp:{p}"),
        }
    }

    /// Render a coefficient in the instance grammar (`a` or `a/b`).
    pub fn format(&self, c: &Coeff) -> String {
        match c {
            Coeff::Q(x) => {
                if x.denom().is_one() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
            Coeff::Fp(x) => x.to_string(),
        }
    }
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Q(x) => x.is_zero(),
            Coeff::Fp(x) => *x == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Q(x) => x.is_one(),
            Coeff::Fp(x) => *x == 1,
        }
    }

    /// True when the coefficient prints with a leading minus sign.
    pub fn is_display_negative(&self) -> bool {
        match self {
            Coeff::Q(x) => x.is_negative(),
            Coeff::Fp(_) => false,
        }
    }
}

impl fmt::Display for CoeffField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, p);
        }
        base = mod_mul(base, base, p);
        exp >>= 1;
    }
    acc
}

fn mod_inv(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = CoeffField::prime(5).unwrap();
        let three = f.from_i64(3);
        let two = f.from_i64(2);
        // 3 * 2 = 6 = 1 mod 5
        assert!(f.mul(&three, &two).is_one());
        assert_eq!(f.add(&three, &two), f.zero());
        assert_eq!(f.mul(&two, &f.inv(&two)), f.one());
    }

    #[test]
    fn rational_fraction_parses_exactly() {
        let f = CoeffField::Rationals;
        let c = f
            .from_fraction(&BigInt::from(6), &BigInt::from(4))
            .unwrap();
        assert_eq!(f.format(&c), "3/2");
    }

    #[test]
    fn fp_rejects_denominator_divisible_by_p() {
        let f = CoeffField::prime(5).unwrap();
        assert!(f.from_fraction(&BigInt::from(1), &BigInt::from(10)).is_err());
        let c = f.from_fraction(&BigInt::from(1), &BigInt::from(3)).unwrap();
        assert_eq!(f.mul(&c, &f.from_i64(3)), f.one());
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(CoeffField::prime(32001).is_err());
        assert!(CoeffField::prime(32003).is_ok());
    }

    #[test]
    fn negative_i64_reduces_into_range() {
        let f = CoeffField::prime(7).unwrap();
        assert_eq!(f.from_i64(-1), Coeff::Fp(6));
    }
}
