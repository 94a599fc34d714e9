//! Hilbert-Samuel functions, numerator polynomials, Hilbert coefficients,
//! postulation numbers and the power-rescaling identities.
//!
//! For an admissible filtration `{I_n}` with `H(n) = l(R/I_n)`, the series
//! `sum l(I_n/I_{n+1}) t^n` equals `h(t)/(1-t)^d`; the engine computes the
//! integer coefficient list of `h`, reads off `e_i = h^(i)(1)/i!` (always an
//! exact integer), and certifies stabilization by a run of vanishing
//! numerator coefficients plus an independent binomial-basis fit of the
//! computed values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::ideal::Ideal;

/// Generalized binomial coefficient `C(a, m)` via the falling factorial;
/// exact for negative `a` as well.
pub fn binomial(a: i64, m: u32) -> BigInt {
    let mut num = BigInt::one();
    for k in 0..m as i64 {
        num *= BigInt::from(a - k);
    }
    let mut den = BigInt::one();
    for k in 1..=m as i64 {
        den *= BigInt::from(k);
    }
    num / den
}

/// `P(n) = sum_i (-1)^i e_i C(n+d-1-i, d-i)` evaluated exactly.
pub fn eval_hilbert_poly(e: &[i64], d: usize, n: i64) -> BigInt {
    let mut acc = BigInt::zero();
    for (i, &ei) in e.iter().take(d + 1).enumerate() {
        let term = BigInt::from(ei) * binomial(n + d as i64 - 1 - i as i64, (d - i) as u32);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Computation budget for one Hilbert table.
#[derive(Debug, Clone)]
pub struct HilbertOptions {
    /// Hard cap on the number of computed values of `H`.
    pub horizon: u32,
    /// Consecutive zero numerator coefficients required; defaults to `d + 2`.
    pub zero_window: Option<u32>,
    /// Reduction number, when known: the table is extended to at least
    /// `r + d + 2` so downstream scans are covered.
    pub reduction_number: Option<u32>,
}

impl Default for HilbertOptions {
    fn default() -> Self {
        HilbertOptions {
            horizon: 12,
            zero_window: None,
            reduction_number: None,
        }
    }
}

impl HilbertOptions {
    pub fn with_horizon(horizon: u32) -> HilbertOptions {
        HilbertOptions {
            horizon,
            ..Default::default()
        }
    }

    /// Default horizon rule: `max(12, 2r + d + 4)` once `r` is known.
    pub fn for_reduction(r: u32, d: usize) -> HilbertOptions {
        HilbertOptions {
            horizon: 12u32.max(2 * r + d as u32 + 4),
            zero_window: None,
            reduction_number: Some(r),
        }
    }
}

/// The numerical shadow of a filtration: values, numerator, coefficients,
/// postulation number and a stabilization certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HilbertData {
    /// `H(n) = l(R/I_n)` for `n = 0..=top`.
    pub values: Vec<u64>,
    /// Integer coefficients of the numerator polynomial `h(t)`.
    pub h: Vec<i64>,
    /// `e_0 .. e_{max(d, deg h)}`; entries beyond `deg h` are zero.
    pub e: Vec<i64>,
    /// Postulation number: least `n` with `H(m) = P(m)` for all `m >= n`.
    pub eta: i64,
    /// Ring dimension used for the `(1-t)^d` normalization.
    pub dim: usize,
    /// `[start, end]` of the verified stabilization window (indices of `H`).
    pub window: (u32, u32),
    /// All cross-checks passed (zero run, binomial fit agreement).
    pub verified: bool,
}

impl HilbertData {
    /// `e_i`, defined for every `i >= 0` (zero beyond the numerator degree).
    pub fn coefficient(&self, i: usize) -> i64 {
        self.e.get(i).copied().unwrap_or(0)
    }

    pub fn e0(&self) -> i64 {
        self.coefficient(0)
    }

    /// `l(R/I_1)`, the constant coefficient of the numerator.
    pub fn colength_of_first(&self) -> u64 {
        self.values[1]
    }

    /// `e_2 - e_1 + e_0 - l(R/I_1)`, the pivot quantity of the bound suite.
    pub fn discrepancy(&self) -> i64 {
        self.coefficient(2) - self.coefficient(1) + self.coefficient(0)
            - self.values[1] as i64
    }

    pub fn hilbert_polynomial_at(&self, n: i64) -> BigInt {
        eval_hilbert_poly(&self.e, self.dim, n)
    }
}

/// `H(n) = l(R/I_n)`; errors when `I_1` is not m-primary.
pub fn hilbert_function(f: &Filtration, n: u32) -> Result<u64> {
    f.nth(n)?.colength()
}

/// `H2(n) = sum_{i<=n} H(i)`, the second Hilbert function.
pub fn second_hilbert(f: &Filtration, n: u32) -> Result<u64> {
    let mut acc = 0u64;
    for i in 0..=n {
        acc += hilbert_function(f, i)?;
    }
    Ok(acc)
}

fn delta_h(values: &[u64], m: i64) -> i64 {
    let at = |k: i64| -> i64 {
        if k <= 0 {
            0
        } else {
            values[k as usize] as i64
        }
    };
    at(m + 1) - at(m)
}

/// Compute the full Hilbert table of a filtration with stabilization
/// certificate; see the module docs for the normalization.
pub fn compute(f: &Filtration, opts: &HilbertOptions) -> Result<HilbertData> {
    let d = f.ring().dim();
    let window = opts.zero_window.unwrap_or(d as u32 + 2).max(1);
    let min_top = opts
        .reduction_number
        .map(|r| r + d as u32 + 2)
        .unwrap_or(0);
    let horizon = opts.horizon.max(min_top + 1);

    let mut values: Vec<u64> = vec![0];
    let mut coeffs: Vec<i64> = Vec::new();
    // c_n depends on H up to n+1.
    let mut zero_run = 0u32;
    let mut top: Option<u32> = None;
    for n in 0..horizon {
        values.push(hilbert_function(f, n + 1)?);
        let c: i64 = (0..=d as i64)
            .map(|j| {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                let b: i64 = binomial(d as i64, j as u32)
                    .to_i64()
                    .expect("small binomial");
                sign * b * delta_h(&values, n as i64 - j)
            })
            .sum();
        coeffs.push(c);
        if c == 0 {
            zero_run += 1;
        } else {
            zero_run = 0;
        }
        if zero_run >= window && n + 1 >= min_top {
            top = Some(n + 1);
            break;
        }
    }
    let top = top.ok_or_else(|| Error::HorizonExhausted {
        what: format!(
            "hilbert numerator did not stabilize; partial H = {:?}, partial h = {:?}",
            values, coeffs
        ),
        horizon,
    })?;

    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    let h = coeffs;

    // e_i = sum_j h_j * C(j, i), exact integers.
    let deg_h = h.len().saturating_sub(1);
    let e_len = d.max(deg_h).max(4) + 1;
    let mut e = Vec::with_capacity(e_len);
    for i in 0..e_len {
        let mut acc = BigInt::zero();
        for (j, &hj) in h.iter().enumerate() {
            acc += BigInt::from(hj) * binomial(j as i64, i as u32);
        }
        e.push(acc.to_i64().ok_or_else(|| {
            Error::Inconsistency("hilbert coefficient overflows i64".into())
        })?);
    }

    // Independent cross-check: fit e_0..e_d from d+1 consecutive values in
    // the stabilized window and compare.
    let win_start = top.saturating_sub(window.max(d as u32 + 1));
    let fit = fit_window(&values, d, win_start, top);
    let mut verified = fit.as_deref() == Some(&e[..=d]);

    // Postulation number: scan downward from the window.
    let matches = |n: i64| -> bool {
        let hv = if n <= 0 {
            BigInt::zero()
        } else if (n as usize) < values.len() {
            BigInt::from(values[n as usize])
        } else {
            return true;
        };
        eval_hilbert_poly(&e, d, n) == hv
    };
    let mut eta = top as i64 + 1;
    let floor = -(2 * d as i64 + 4);
    while eta > floor && matches(eta - 1) {
        eta -= 1;
    }
    if eta > top as i64 {
        verified = false;
    }

    // h(0) = l(R/I_1) and h(1) = e_0 must hold on every instance.
    if h.first().copied().unwrap_or(0) != values[1] as i64 {
        return Err(Error::Inconsistency(format!(
            "h(0) = {:?} disagrees with l(R/I_1) = {}",
            h.first(),
            values[1]
        )));
    }
    if h.iter().sum::<i64>() != e[0] {
        return Err(Error::Inconsistency(
            "sum of numerator coefficients disagrees with e_0".into(),
        ));
    }

    Ok(HilbertData {
        values,
        h,
        e,
        eta,
        dim: d,
        window: (win_start, top),
        verified,
    })
}

/// Solve for `e_0..e_d` from `d+1` consecutive table values by exact
/// elimination in the binomial basis; `None` if the window is too short.
fn fit_window(values: &[u64], d: usize, start: u32, end: u32) -> Option<Vec<i64>> {
    let n0 = start.max(1) as i64;
    if (end as i64) - n0 < d as i64 {
        return None;
    }
    // Unknowns x_i = (-1)^i e_i; equations P(n) = H(n).
    let m = d + 1;
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for k in 0..m {
        let n = n0 + k as i64;
        let mut row: Vec<BigRational> = (0..m)
            .map(|i| BigRational::from(binomial(n + d as i64 - 1 - i as i64, (d - i) as u32)))
            .collect();
        row.push(BigRational::from(BigInt::from(values[n as usize])));
        rows.push(row);
    }
    // Gaussian elimination.
    for col in 0..m {
        let pivot = (col..m).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, pivot);
        let p = rows[col][col].clone();
        for v in rows[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..m {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..=m {
                    let delta = &f * &rows[col][c];
                    rows[r][c] -= delta;
                }
            }
        }
    }
    let mut e = Vec::with_capacity(m);
    for (i, row) in rows.iter().enumerate() {
        let x = &row[m];
        if !x.denom().is_one() {
            return None;
        }
        let v = x.numer().to_i64()?;
        e.push(if i % 2 == 0 { v } else { -v });
    }
    Some(e)
}

/// Outcome of the power-rescaling identities relating `e_i(I)` and
/// `e_i(I^q)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PowerIdentities {
    pub q: u32,
    pub applicable: bool,
    /// `e_i(I^q)` recomputed from scratch.
    pub direct: Vec<i64>,
    /// Closed forms predicted from `e_i(I)` (dimension 4 only); rationals
    /// rendered exactly.
    pub predicted: Vec<String>,
    /// Dimension 3: `e_2(I^q) - e_1(I^q) + e_0(I^q) - l(R/I^q)`.
    pub e3_via_power: Option<i64>,
    /// Dimension 4: `eps_3 - eps_2 + eps_1 - eps_0 + l(R/I^q)`.
    pub e4_via_power: Option<i64>,
    pub agree: bool,
}

/// Evaluate the rescaling identities for `I^q`.
///
/// For `q >= eta(I)` in dimension 3 this checks
/// `e_3(I) = e_2(I^q) - e_1(I^q) + e_0(I^q) - l(R/I^q)`; in dimension 4 it
/// evaluates the closed forms for `e_i(I^q)` and the alternating-sum
/// expression for `e_4(I)`.  Below the postulation number the identities are
/// reported as not applicable rather than checked.
pub fn power_identities(
    ideal: &Ideal,
    q: u32,
    base: &HilbertData,
) -> Result<PowerIdentities> {
    if q < 1 {
        return Err(Error::BadInstance("power identities need q >= 1".into()));
    }
    let d = base.dim;
    if d != 3 && d != 4 {
        return Err(Error::WrongDimension {
            needs: "3 or 4".into(),
            found: d,
        });
    }
    let applicable = (q as i64) >= base.eta;

    let power = ideal.power(q)?;
    let pf = Filtration::adic(power);
    let pdata = compute(&pf, &HilbertOptions::default())?;
    let direct: Vec<i64> = (0..=d).map(|i| pdata.coefficient(i)).collect();
    let l_q = if (q as usize) < base.values.len() {
        base.values[q as usize]
    } else {
        hilbert_function(&Filtration::adic(ideal.clone()), q)?
    } as i64;

    let qi = q as i64;
    let e = |i: usize| base.coefficient(i);
    let mut predicted_vals: Vec<BigRational> = Vec::new();
    let mut agree = true;
    let mut e3_via_power = None;
    let mut e4_via_power = None;

    if d == 4 {
        let r = |n: i64, den: i64| BigRational::new(BigInt::from(n), BigInt::from(den));
        let eps0 = r(e(0) * qi.pow(4), 1);
        let eps1 = r(3 * e(0) * (qi.pow(4) - qi.pow(3)), 2) + r(e(1) * qi.pow(3), 1);
        let eps2 = r(e(0) * (11 * qi.pow(2) + 7 * qi.pow(4) - 18 * qi.pow(3)), 12)
            + r(e(1) * (qi.pow(3) - qi.pow(2)), 1)
            + r(e(2) * qi.pow(2), 1);
        let eps3 = BigRational::from(
            BigInt::from(e(0)) * binomial(qi, 4)
                + BigInt::from(e(1)) * binomial(qi, 3)
                + BigInt::from(e(2)) * binomial(qi, 2)
                + BigInt::from(e(3)) * binomial(qi, 1),
        );
        let eps4 = &eps3 - &eps2 + &eps1 - &eps0 + BigRational::from(BigInt::from(l_q));
        predicted_vals = vec![eps0, eps1, eps2, eps3, eps4.clone()];
        if applicable {
            for (i, p) in predicted_vals.iter().enumerate() {
                if *p != BigRational::from(BigInt::from(direct[i])) {
                    agree = false;
                }
            }
            if eps4.denom().is_one() {
                e4_via_power = eps4.numer().to_i64();
            } else {
                agree = false;
            }
            if e4_via_power != Some(e(4)) {
                agree = false;
            }
        }
    } else {
        // d == 3
        let v = direct[2] - direct[1] + direct[0] - l_q;
        e3_via_power = Some(v);
        if applicable && v != e(3) {
            agree = false;
        }
        // q = 1 sanity: all coefficients coincide.
        if q == 1 && direct[..=3] != [e(0), e(1), e(2), e(3)] {
            agree = false;
        }
    }

    Ok(PowerIdentities {
        q,
        applicable,
        direct,
        predicted: predicted_vals
            .iter()
            .map(|x| {
                if x.denom().is_one() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            })
            .collect(),
        e3_via_power,
        e4_via_power,
        agree: agree && applicable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CoeffField;
    use crate::monomial::MonomialOrder;
    use crate::ring::AmbientRing;
    use std::sync::Arc;

    fn ring(vars: &[&str]) -> Arc<AmbientRing> {
        AmbientRing::polynomial_ring(
            vars.iter().map(|s| s.to_string()).collect(),
            CoeffField::Rationals,
            MonomialOrder::Grevlex,
        )
    }

    #[test]
    fn binomial_basics() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 3), BigInt::from(0));
        assert_eq!(binomial(-1, 2), BigInt::from(1));
        assert_eq!(binomial(7, 0), BigInt::from(1));
    }

    #[test]
    fn maximal_ideal_three_vars() {
        let r = ring(&["x", "y", "z"]);
        let f = Filtration::adic(Ideal::maximal(&r));
        // H(2) = number of monomials of degree < 2 = 4.
        assert_eq!(hilbert_function(&f, 2).unwrap(), 4);
        assert_eq!(hilbert_function(&f, 0).unwrap(), 0);
        let data = compute(&f, &HilbertOptions::default()).unwrap();
        assert_eq!(data.h, vec![1]);
        assert_eq!(&data.e[..4], &[1, 0, 0, 0]);
        assert!(data.eta <= 0);
        assert!(data.verified);
    }

    #[test]
    fn second_hilbert_cumulates() {
        let r = ring(&["x", "y"]);
        let f = Filtration::adic(Ideal::maximal(&r));
        // H(0)+H(1)+H(2) = 0+1+3.
        assert_eq!(second_hilbert(&f, 2).unwrap(), 4);
        assert_eq!(second_hilbert(&f, 0).unwrap(), 0);
        // Delta(H2)(n) = H(n+1).
        for n in 0..4 {
            let lhs = second_hilbert(&f, n + 1).unwrap() - second_hilbert(&f, n).unwrap();
            assert_eq!(lhs, hilbert_function(&f, n + 1).unwrap());
        }
    }

    #[test]
    fn parameter_ideal_coefficients() {
        // (x^2, y^3, z^5): e_0 = 30, higher coefficients vanish.
        let r = ring(&["x", "y", "z"]);
        let i = Ideal::from_texts(&r, &["x^2", "y^3", "z^5"]).unwrap();
        let f = Filtration::adic(i);
        let data = compute(&f, &HilbertOptions::default()).unwrap();
        assert_eq!(&data.e[..4], &[30, 0, 0, 0]);
        assert!(data.eta <= 0);
        assert!(data.verified);
    }

    #[test]
    fn power_identity_q1_is_identity() {
        let r = ring(&["x", "y", "z"]);
        let i = Ideal::from_texts(&r, &["x^2", "y^2", "z^2", "x*y"]).unwrap();
        let f = Filtration::adic(i.clone());
        let data = compute(&f, &HilbertOptions::default()).unwrap();
        let p = power_identities(&i, 1, &data).unwrap();
        assert!(p.applicable);
        assert!(p.agree);
        assert_eq!(p.e3_via_power, Some(data.coefficient(3)));
    }
}
