//! Ratliff-Rush closures and their numerical invariants.
//!
//! The closure of `I^n` is the stable value of the ascending chain
//! `(I^{n+t} : I^t)`; iterated single colons `(A : I^t) = ((A : I) : ...)`
//! keep the computation to colons by the small generator set of `I`.
//! On top of the closures: the filtration coefficients, the reduction
//! number of the closure filtration, the invariants `b_I` and `s_I`, and
//! the behaves-well predicate with its two independent routes.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::hilbert::{self, binomial, HilbertData, HilbertOptions};
use crate::ideal::Ideal;
use crate::reduction::SuperficialStep;

/// How one closure chain stabilized, for the per-n audit table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StabilizationRecord {
    /// Colengths of `I^n = A_0 <= A_1 <= ...` along the chain (descending
    /// numbers since the ideals grow).
    pub chain_colengths: Vec<u64>,
    /// Chain index at which the stable value first appeared.
    pub stable_at: u32,
}

/// Hard cap on the chain index before giving up.
const CHAIN_CAP: u32 = 24;

/// The Ratliff-Rush closure of `I^n`, sharing `adic` as the power cache.
/// Stability is declared after `window` consecutive equal steps; the chain
/// is verified to be ascending and the result to contain `I^n` (and, for
/// monomial ideals, to sit inside the integral closure of `I^n`).
pub fn rr_closure_of_power(
    base: &Ideal,
    adic: &Filtration,
    n: u32,
    window: u32,
) -> Result<(Ideal, StabilizationRecord)> {
    let window = window.max(1);
    let mut current = (*adic.nth(n)?).clone();
    let mut chain_colengths = vec![current.colength()?];
    let mut equal_run = 0u32;
    let mut stable_at = 0u32;
    let mut t = 0u32;
    while equal_run < window {
        t += 1;
        if t > CHAIN_CAP {
            return Err(Error::HorizonExhausted {
                what: format!("ratliff-rush chain for n = {n}"),
                horizon: CHAIN_CAP,
            });
        }
        let next = colon_by_power(&adic.nth(n + t)?, base, t)?;
        if !next.contains_ideal(&current)? {
            return Err(Error::Inconsistency(format!(
                "ratliff-rush chain not ascending at n = {n}, t = {t}"
            )));
        }
        let equal = next.equals(&current)?;
        chain_colengths.push(next.colength()?);
        if equal {
            equal_run += 1;
        } else {
            equal_run = 0;
            stable_at = t;
            current = next;
        }
    }

    // Sandwich checks: I^n inside the closure, closure inside the integral
    // closure for monomial ideals.
    let power_n = adic.nth(n)?;
    if !current.contains_ideal(&power_n)? {
        return Err(Error::Inconsistency(format!(
            "ratliff-rush closure of power {n} does not contain the power"
        )));
    }
    if base.monomial_gens().is_some() {
        let power = adic.nth(n)?;
        if power.monomial_gens().is_some() {
            let closure = power.monomial_integral_closure()?;
            if !closure.contains_ideal(&current)? {
                return Err(Error::Inconsistency(format!(
                    "ratliff-rush closure of power {n} exceeds the integral closure"
                )));
            }
        }
    }

    Ok((
        current,
        StabilizationRecord {
            chain_colengths,
            stable_at,
        },
    ))
}

/// Standalone closure of `I^n` (fresh power cache).
pub fn rr_closure(ideal: &Ideal, n: u32, window: u32) -> Result<(Ideal, StabilizationRecord)> {
    let adic = Filtration::adic(ideal.clone());
    rr_closure_of_power(ideal, &adic, n, window)
}

/// `(a : I^t)` through `t` iterated colons by `I`.
fn colon_by_power(a: &Arc<Ideal>, base: &Ideal, t: u32) -> Result<Ideal> {
    let mut acc = (**a).clone();
    for _ in 0..t {
        acc = acc.colon(base)?;
    }
    Ok(acc)
}

/// The Ratliff-Rush filtration `{closure(I^n)}` of `I` as a lazy filtration.
pub fn rr_filtration(ideal: &Ideal, window: u32) -> Filtration {
    Filtration::ratliff_rush(Filtration::adic(ideal.clone()), window)
}

/// Largest `n` with `closure_n != J * closure_{n-1}`, located by upward scan;
/// the scan must end in `tail` consecutive equalities before the horizon.
pub fn rr_reduction_number(
    rr: &Filtration,
    j: &Ideal,
    horizon: u32,
    tail: u32,
) -> Result<u32> {
    let mut last_neq = 0u32;
    let mut run = 0u32;
    for n in 1..=horizon {
        let target = rr.nth(n)?;
        let prev = rr.nth(n - 1)?;
        let jprev = j.product(&prev)?;
        let equal = jprev.contains_ideal(&target)?;
        if equal {
            run += 1;
            if run >= tail.max(1) {
                return Ok(last_neq);
            }
        } else {
            last_neq = n;
            run = 0;
        }
    }
    Err(Error::HorizonExhausted {
        what: "ratliff-rush reduction number scan".into(),
        horizon,
    })
}

/// A summed per-n length table, stopping after the terms vanish and stay
/// zero through the requested run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LengthTable {
    pub per_n: Vec<u64>,
    pub total: u64,
}

/// `b_I = sum_n l((I^{n+1}:x)/I^n)` from a certified superficial element's
/// colon-length table.
pub fn b_invariant(step: &SuperficialStep, zero_run: u32, cap: u32) -> Result<LengthTable> {
    let mut per_n = Vec::new();
    let mut run = 0u32;
    let min_top = step.cert.window.1;
    let mut n = 0u32;
    loop {
        let t = step.t_n(n)?;
        per_n.push(t);
        if t == 0 {
            run += 1;
        } else {
            run = 0;
        }
        if run >= zero_run && n >= min_top {
            break;
        }
        n += 1;
        if n > cap {
            return Err(Error::HorizonExhausted {
                what: "b_I summation window never reached".into(),
                horizon: cap,
            });
        }
    }
    let total = per_n.iter().sum();
    Ok(LengthTable { per_n, total })
}

/// `s_I = sum_n l(closure(I'^{n+1})/I'^{n+1})` in `R' = R/(x)`, computed
/// from the Ratliff-Rush filtration of the image.
pub fn s_invariant(
    step: &SuperficialStep,
    rr_of_image: &Filtration,
    zero_run: u32,
    cap: u32,
) -> Result<LengthTable> {
    let mut per_n = Vec::new();
    let mut run = 0u32;
    let mut n = 0u32;
    loop {
        let m = n + 1;
        let plain = hilbert::hilbert_function(&step.image_adic, m)?;
        let closed = rr_of_image.nth(m)?.colength()?;
        if closed > plain {
            return Err(Error::Inconsistency(format!(
                "closure of image power {m} has larger colength"
            )));
        }
        per_n.push(plain - closed);
        if plain == closed {
            run += 1;
        } else {
            run = 0;
        }
        if run >= zero_run && n >= step.cert.window.1 {
            break;
        }
        n += 1;
        if n > cap {
            return Err(Error::HorizonExhausted {
                what: "s_I summation window never reached".into(),
                horizon: cap,
            });
        }
    }
    let total = per_n.iter().sum();
    Ok(LengthTable { per_n, total })
}

/// Verdict of the behaves-well predicate, carrying both routes: the
/// numerical one (`b_I = s_I`) and the direct per-n comparison of
/// `closure(I^n) R'` against `closure(I^n R')`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BehavesWellVerdict {
    pub element: String,
    pub b: u64,
    pub s: u64,
    pub b_table: Vec<u64>,
    pub s_table: Vec<u64>,
    /// Per-n outcome of the direct equality check.
    pub directly_checked: Vec<(u32, bool)>,
    pub verdict: bool,
}

/// Decide whether the Ratliff-Rush filtration of `I` behaves well modulo the
/// certified superficial element in `step`.  The two routes must agree; a
/// disagreement is a fatal internal error.
pub fn behaves_well(
    rr_base: &Filtration,
    step: &SuperficialStep,
    rr_of_image: &Filtration,
    direct_horizon: u32,
) -> Result<BehavesWellVerdict> {
    let d = rr_base.ring().dim();
    let zero_run = d as u32 + 2;
    let cap = 64;
    let b = b_invariant(step, zero_run, cap)?;
    let s = s_invariant(step, rr_of_image, zero_run, cap)?;
    if b.total > s.total {
        return Err(Error::Inconsistency(format!(
            "b_I = {} exceeds s_I = {}",
            b.total, s.total
        )));
    }

    let mut directly_checked = Vec::new();
    for n in 1..=direct_horizon {
        let image_of_closure = Ideal::new(
            Arc::clone(&step.quotient),
            rr_base.nth(n)?.generating_set(),
        )?;
        let closure_of_image = rr_of_image.nth(n)?;
        directly_checked.push((n, image_of_closure.equals(&closure_of_image)?));
    }
    let direct_ok = directly_checked.iter().all(|(_, ok)| *ok);
    let verdict = b.total == s.total;
    if verdict != direct_ok {
        return Err(Error::Inconsistency(format!(
            "behaves-well routes disagree: b = s is {verdict}, direct check is {direct_ok}"
        )));
    }
    Ok(BehavesWellVerdict {
        element: step.cert.element.clone(),
        b: b.total,
        s: s.total,
        b_table: b.per_n,
        s_table: s.per_n,
        directly_checked,
        verdict,
    })
}

/// The exact dimension-three identity `e_3(I) = e3~(I') + b_I - s_I`,
/// cross-checked two further ways: `e3~(I')` against the weighted-sum
/// formula over a minimal reduction containing `x`, and
/// `e_3(I) = e_3(I') + b_I`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct E3Identity {
    pub e3: i64,
    pub e3_tilde_image: i64,
    pub b: u64,
    pub s: u64,
    pub holds: bool,
    /// Weighted-sum recomputation of `e3~(I')`.
    pub sum_formula: i64,
    pub sum_agrees: bool,
    /// `e_3(I') + b_I` must also give `e_3(I)`.
    pub via_image_e3: i64,
    pub via_image_agrees: bool,
}

pub fn e3_identity_check(
    base: &HilbertData,
    step: &SuperficialStep,
    rr_of_image: &Filtration,
    rr_image_hilbert: &HilbertData,
    j_containing_x: &Ideal,
    b: u64,
    s: u64,
) -> Result<E3Identity> {
    if base.dim != 3 {
        return Err(Error::WrongDimension {
            needs: "3".into(),
            found: base.dim,
        });
    }
    let e3 = base.coefficient(3);
    let e3_tilde = rr_image_hilbert.coefficient(3);
    let holds = e3 == e3_tilde + b as i64 - s as i64;

    // Weighted-sum route for e3~(I'): sum C(n,2) * l(closure^{n+1}/J' closure^n).
    let jprime = Ideal::new(
        Arc::clone(&step.quotient),
        j_containing_x.gens().to_vec(),
    )?;
    let mut sum = 0i64;
    let mut n = 2u32;
    let mut zero_run = 0u32;
    loop {
        let upper = rr_of_image.nth(n + 1)?;
        let closure_n = rr_of_image.nth(n)?;
        let lower = jprime.product(&closure_n)?;
        let len = upper.length_between(&lower)?;
        if len == 0 {
            zero_run += 1;
        } else {
            zero_run = 0;
        }
        sum += binomial(n as i64, 2)
            .to_i64()
            .expect("small binomial")
            * len as i64;
        if zero_run >= 4 && n as i64 >= base.eta + 4 {
            break;
        }
        n += 1;
        if n > 40 {
            return Err(Error::HorizonExhausted {
                what: "weighted-sum formula for e3~".into(),
                horizon: 40,
            });
        }
    }
    let sum_agrees = sum == e3_tilde;

    let via_image_e3 = step.image_hilbert.coefficient(3) + b as i64;
    let via_image_agrees = via_image_e3 == e3;

    Ok(E3Identity {
        e3,
        e3_tilde_image: e3_tilde,
        b,
        s,
        holds,
        sum_formula: sum,
        sum_agrees,
        via_image_e3,
        via_image_agrees,
    })
}

/// `e_i` of the Ratliff-Rush filtration of `I`, for the agreement invariant
/// `e_i(closure filtration) = e_i(adic filtration)`.
pub fn rr_hilbert(
    adic: &Filtration,
    window: u32,
    opts: &HilbertOptions,
) -> Result<(Filtration, HilbertData)> {
    let rr = Filtration::ratliff_rush(adic.clone(), window);
    let data = hilbert::compute(&rr, opts)?;
    Ok((rr, data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CoeffField;
    use crate::monomial::MonomialOrder;
    use crate::ring::AmbientRing;

    fn ring(vars: &[&str]) -> Arc<AmbientRing> {
        AmbientRing::polynomial_ring(
            vars.iter().map(|s| s.to_string()).collect(),
            CoeffField::Rationals,
            MonomialOrder::Grevlex,
        )
    }

    #[test]
    fn integrally_closed_powers_are_rr_closed() {
        let r = ring(&["x", "y"]);
        let m2 = Ideal::maximal(&r).power(2).unwrap();
        for n in 1..3 {
            let (c, rec) = rr_closure(&m2, n, 3).unwrap();
            assert!(c.equals(&m2.power(n).unwrap()).unwrap());
            assert_eq!(rec.stable_at, 0);
        }
    }

    #[test]
    fn two_planes_example_has_rr_gap() {
        // I = (x^4, x^3 y, x y^3, y^4): x^2 y^2 lies in the closure of I but
        // not in I (classical example).
        let r = ring(&["x", "y"]);
        let i = Ideal::from_texts(&r, &["x^4", "x^3*y", "x*y^3", "y^4"]).unwrap();
        let (c, _) = rr_closure(&i, 1, 3).unwrap();
        let probe = crate::parse::parse_polynomial("x^2*y^2", r.core()).unwrap();
        assert!(!i.contains_poly(&probe));
        assert!(c.contains_poly(&probe));
    }

    #[test]
    fn rr_filtration_serves_adic_after_agreement() {
        let r = ring(&["x", "y"]);
        let m = Ideal::maximal(&r);
        let rr = rr_filtration(&m, 3);
        for n in 1..5 {
            assert!(rr
                .nth(n)
                .unwrap()
                .equals(&m.power(n).unwrap())
                .unwrap());
        }
        // after two consecutive agreements the adic power is served directly
        let records = rr.rr_records();
        assert!(records.len() <= 2, "records = {}", records.len());
    }

    #[test]
    fn rr_reduction_number_of_regular_maximal() {
        let r = ring(&["x", "y"]);
        let m = Ideal::maximal(&r);
        let rr = rr_filtration(&m, 3);
        let rn = rr_reduction_number(&rr, &m, 8, 3).unwrap();
        assert_eq!(rn, 0);
    }
}
