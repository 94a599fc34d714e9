//! Minimal reductions, reduction numbers, superficial elements with
//! finite-evidence certificates, `v_n` values and the numerical depth lower
//! bound for the associated graded ring via the Valabrega-Valla equalities.
//!
//! The central length used everywhere here is
//! `t_n = l((I^{n+1} : x) / I^n)`, computed without any colon ideal through
//! the exact sequence of multiplication by `x`:
//! `t_n = l(R/I^n) - l(R/I^{n+1}) + l(R'/I'^{n+1})` with `R' = R/(x)`.
//! Superficiality windows, the `b_I` table and the Valabrega-Valla test are
//! all read off this table (for a nonzerodivisor `x`, `I^{n+1} cap (x) =
//! x I^n` iff `t_n = 0`).

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Coeff;
use crate::filtration::Filtration;
use crate::hilbert::{self, HilbertData, HilbertOptions};
use crate::ideal::Ideal;
use crate::poly::Polynomial;
use crate::ring::AmbientRing;

const MAX_DRAWS: u32 = 24;

/// Draw a random combination of the generators with small positive
/// coefficients; the range widens with the retry counter.
pub fn random_combination(ideal: &Ideal, rng: &mut ChaCha8Rng, attempt: u32) -> Polynomial {
    let hi = 7i64 << (attempt / 6).min(3);
    let core = ideal.ring().core();
    let field = core.field();
    let mut acc = Polynomial::zero(core);
    for g in ideal.gens() {
        let c: i64 = rng.random_range(1..=hi);
        acc = acc
            .add(&g.scale(&field.from_i64(c)))
            .expect("same ring");
    }
    acc
}

/// Certificate for a reduction `J` of the adic filtration of `I`:
/// `I^{r+1} = J I^r` holds, `I^r != J I^{r-1}`, and equality was re-verified
/// one step above `r` (upward propagation).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReductionWitness {
    pub n: u32,
    pub equal: bool,
}

#[derive(Debug, Clone)]
pub struct ReductionCertificate {
    pub ideal: Ideal,
    pub r: u32,
    pub witness: Vec<ReductionWitness>,
    pub seed: u64,
    pub draw: u32,
    /// `l(R/J)`; must equal `e_0(I)` for a minimal reduction.
    pub colength: u64,
}

/// First `n` with `I^{n+1} = J I^n`, scanning upward; the spec convention
/// `r_J = 0` covers `J = I`.  Equality at `r` is re-checked at `r + 1`.
pub fn reduction_number(
    adic: &Filtration,
    j: &Ideal,
    horizon: u32,
) -> Result<(u32, Vec<ReductionWitness>)> {
    let i1 = adic.nth(1)?;
    if !i1.contains_ideal(j)? {
        return Err(Error::ContainmentFailed("J is not contained in I".into()));
    }
    let mut witness = Vec::new();
    let mut r: Option<u32> = None;
    for n in 0..=horizon {
        let power_n = adic.nth(n)?;
        let power_n1 = adic.nth(n + 1)?;
        let jin = j.product(&power_n)?;
        let equal = jin.contains_ideal(&power_n1)?;
        witness.push(ReductionWitness { n, equal });
        if equal {
            r = Some(n);
            break;
        }
    }
    let r = r.ok_or(Error::NotAReduction(horizon))?;
    // Upward propagation check one step above.
    let power_r1 = adic.nth(r + 1)?;
    let power_r2 = adic.nth(r + 2)?;
    let jin = j.product(&power_r1)?;
    if !jin.contains_ideal(&power_r2)? {
        return Err(Error::Inconsistency(format!(
            "equality I^(n+1) = J I^n at n = {r} failed to propagate to n = {}",
            r + 1
        )));
    }
    witness.push(ReductionWitness {
        n: r + 1,
        equal: true,
    });
    Ok((r, witness))
}

/// Search for a minimal reduction by drawing `dim R` random combinations of
/// the generators of `I`.  When `pinned` is given, those generators are used
/// as-is (and still fully verified).
pub fn find_minimal_reduction(
    ideal: &Ideal,
    adic: &Filtration,
    seed: u64,
    horizon: u32,
    pinned: Option<&Ideal>,
) -> Result<ReductionCertificate> {
    let d = ideal.ring().dim();
    if let Some(j) = pinned {
        if j.num_gens() != d {
            return Err(Error::BadInstance(format!(
                "pinned reduction has {} generators, dimension is {d}",
                j.num_gens()
            )));
        }
        let (r, witness) = reduction_number(adic, j, horizon)?;
        let colength = j.colength()?;
        return Ok(ReductionCertificate {
            ideal: j.clone(),
            r,
            witness,
            seed,
            draw: 0,
            colength,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last_err: Option<Error> = None;
    for draw in 0..MAX_DRAWS {
        let gens: Vec<Polynomial> = (0..d)
            .map(|_| random_combination(ideal, &mut rng, draw))
            .collect();
        let j = Ideal::new(Arc::clone(ideal.ring()), gens)?;
        match reduction_number(adic, &j, horizon) {
            Ok((r, witness)) => {
                let colength = match j.colength() {
                    Ok(c) => c,
                    Err(e) => {
                        last_err = Some(e);
                        continue;
                    }
                };
                return Ok(ReductionCertificate {
                    ideal: j,
                    r,
                    witness,
                    seed,
                    draw,
                    colength,
                });
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(Error::RetriesExhausted {
        what: format!(
            "minimal reduction search (last failure: {})",
            last_err.map(|e| e.to_string()).unwrap_or_default()
        ),
        tries: MAX_DRAWS,
    })
}

/// `v_n = l(I_{n+1} / J I_n)`.
pub fn v_n(f: &Filtration, j: &Ideal, n: u32) -> Result<u64> {
    let upper = f.nth(n + 1)?;
    let base_n = f.nth(n)?;
    let lower = j.product(&base_n)?;
    upper.length_between(&lower)
}

/// One certified superficial element together with the quotient data needed
/// downstream: the quotient ring `R' = R/(x)`, the image ideal and its adic
/// filtration, and the full Hilbert table of the image.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuperficialCertificate {
    pub element: String,
    /// `t_n` for `n = 0..=top`; zero entries are the superficiality/VV
    /// evidence.
    pub colon_table: Vec<u64>,
    /// `[n0, n1]`: the window over which `t_n = 0` was required and held.
    pub window: (u32, u32),
    /// `(e_i(I), e_i(I'))` for `0 <= i <= d-1`.
    pub e_check: Vec<(i64, i64)>,
    pub e_check_ok: bool,
    /// Krull dimension dropped by exactly one (certifies `x` is a
    /// nonzerodivisor in the Cohen-Macaulay setting).
    pub dim_drop_ok: bool,
    pub seed: u64,
    pub draw: u32,
}

#[derive(Clone)]
pub struct SuperficialStep {
    pub cert: SuperficialCertificate,
    pub element: Polynomial,
    pub quotient: Arc<AmbientRing>,
    pub image: Ideal,
    pub base_adic: Filtration,
    pub image_adic: Filtration,
    pub image_hilbert: HilbertData,
}

impl SuperficialStep {
    /// `t_n = l((I^{n+1}:x)/I^n)` through the two Hilbert tables.
    pub fn t_n(&self, n: u32) -> Result<u64> {
        let h_n = hilbert::hilbert_function(&self.base_adic, n)?;
        let h_n1 = hilbert::hilbert_function(&self.base_adic, n + 1)?;
        let hq_n1 = hilbert::hilbert_function(&self.image_adic, n + 1)?;
        let t = h_n as i64 - h_n1 as i64 + hq_n1 as i64;
        if t < 0 {
            return Err(Error::Inconsistency(format!(
                "negative colon length t_{n} = {t}"
            )));
        }
        Ok(t as u64)
    }
}

/// Try one candidate element for superficiality; `Ok(None)` means the
/// candidate failed its certificate (caller redraws).
fn certify_candidate(
    ideal: &Ideal,
    adic: &Filtration,
    base: &HilbertData,
    x: Polynomial,
    window: (u32, u32),
    seed: u64,
    draw: u32,
) -> Result<Option<SuperficialStep>> {
    let ring = ideal.ring();
    let d = ring.dim();
    let xr = ring.reduce_mod_defining(&x);
    if xr.is_zero() {
        return Ok(None);
    }
    let quotient = ring.mod_elements(&[x.clone()])?;
    if quotient.dim() != d - 1 {
        return Ok(None);
    }
    let image = Ideal::new(Arc::clone(&quotient), ideal.gens().to_vec())?;
    let image_adic = Filtration::image(adic.clone(), Arc::clone(&quotient));
    let image_hilbert = match hilbert::compute(
        &image_adic,
        &HilbertOptions {
            horizon: (base.values.len() as u32).max(12),
            zero_window: None,
            reduction_number: None,
        },
    ) {
        Ok(h) => h,
        // e.g. the image failed to be primary; just reject the draw
        Err(Error::NotMPrimary { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };

    let e_check: Vec<(i64, i64)> = (0..d)
        .map(|i| (base.coefficient(i), image_hilbert.coefficient(i)))
        .collect();
    let e_check_ok = e_check.iter().all(|(a, b)| a == b);
    if !e_check_ok {
        return Ok(None);
    }

    let step = SuperficialStep {
        cert: SuperficialCertificate {
            element: x.to_string(),
            colon_table: Vec::new(),
            window,
            e_check,
            e_check_ok,
            dim_drop_ok: true,
            seed,
            draw,
        },
        element: x,
        quotient,
        image,
        base_adic: adic.clone(),
        image_adic,
        image_hilbert,
    };

    // The zero window past the reduction number.
    let top = window.1.max(window.0);
    let mut table = Vec::with_capacity(top as usize + 1);
    for n in 0..=top {
        table.push(step.t_n(n)?);
    }
    let ok = (window.0..=window.1).all(|n| table[n as usize] == 0);
    if !ok {
        return Ok(None);
    }
    let mut step = step;
    step.cert.colon_table = table;
    Ok(Some(step))
}

/// Find one certified superficial element for `I`, preferring candidates
/// from `preferred` (e.g. the generators of a pinned reduction) before
/// random combinations.
pub fn find_superficial(
    ideal: &Ideal,
    adic: &Filtration,
    base: &HilbertData,
    r_hint: u32,
    seed: u64,
    preferred: &[Polynomial],
) -> Result<SuperficialStep> {
    let d = ideal.ring().dim();
    if d == 0 {
        return Err(Error::WrongDimension {
            needs: "at least 1".into(),
            found: 0,
        });
    }
    let window = (r_hint + 1, r_hint + d as u32 + 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5f5f5f5f);
    for draw in 0..MAX_DRAWS {
        let x = match preferred.get(draw as usize) {
            Some(p) => p.clone(),
            None => random_combination(ideal, &mut rng, draw),
        };
        if let Some(step) = certify_candidate(ideal, adic, base, x, window, seed, draw)? {
            return Ok(step);
        }
    }
    Err(Error::RetriesExhausted {
        what: "superficial element search".into(),
        tries: MAX_DRAWS,
    })
}

/// A certified superficial sequence `x_1, .., x_count`, each element
/// certified in the quotient by the previous ones.
pub fn find_superficial_sequence(
    ideal: &Ideal,
    count: usize,
    seed: u64,
    r_hint: u32,
) -> Result<Vec<SuperficialStep>> {
    let d = ideal.ring().dim();
    if count > d {
        return Err(Error::WrongDimension {
            needs: format!("sequence length at most {d}"),
            found: count,
        });
    }
    let mut steps = Vec::with_capacity(count);
    let mut current = ideal.clone();
    let mut current_adic = Filtration::adic(current.clone());
    let mut current_hilbert = hilbert::compute(
        &current_adic,
        &HilbertOptions::for_reduction(r_hint, d),
    )?;
    for k in 0..count {
        let step = find_superficial(
            &current,
            &current_adic,
            &current_hilbert,
            r_hint,
            seed.wrapping_add(k as u64),
            &[],
        )?;
        current = step.image.clone();
        current_adic = step.image_adic.clone();
        current_hilbert = step.image_hilbert.clone();
        steps.push(step);
    }
    Ok(steps)
}

/// Valabrega-Valla test for a certified superficial element: `x*` is a
/// regular element of the associated graded ring iff
/// `I^{n+1} cap (x) = x I^n` for all `n`, which for a certified
/// nonzerodivisor is exactly `t_n = 0`.  Returns the per-n table; `true`
/// means all checks up to the horizon passed.
pub fn valabrega_valla(step: &SuperficialStep, horizon: u32) -> Result<(bool, Vec<(u32, u64)>)> {
    let mut table = Vec::with_capacity(horizon as usize);
    let mut all_zero = true;
    for n in 1..=horizon {
        let t = step.t_n(n)?;
        table.push((n, t));
        if t != 0 {
            all_zero = false;
            break;
        }
    }
    Ok((all_zero, table))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DepthRound {
    pub round: usize,
    pub passed: bool,
    pub element: Option<String>,
    /// Failing `(n, t_n)` witnesses per rejected draw.
    pub failures: Vec<Vec<(u32, u64)>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DepthBound {
    pub bound: usize,
    pub rounds: Vec<DepthRound>,
    /// Horizon each Valabrega-Valla scan ran to.
    pub horizon: u32,
}

/// Greedy certified lower bound for `depth G(I)`: find a superficial element
/// passing the Valabrega-Valla test, descend to `R/(x)`, repeat.  Each
/// successful round certifies one more unit of depth ("verified to horizon").
pub fn depth_lower_bound(
    ideal: &Ideal,
    adic: &Filtration,
    base: &HilbertData,
    r_hint: u32,
    seed: u64,
    horizon: u32,
) -> Result<DepthBound> {
    let d = ideal.ring().dim();
    let mut rounds = Vec::new();
    let mut current = ideal.clone();
    let mut current_adic = adic.clone();
    let mut current_hilbert = base.clone();
    let mut bound = 0usize;

    for round in 0..d {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(round as u64 * 101));
        let mut failures = Vec::new();
        let mut advanced = false;
        let draws = 6u32;
        for draw in 0..draws {
            let x = random_combination(&current, &mut rng, draw);
            let window = (r_hint + 1, r_hint + d as u32 + 2);
            let step = match certify_candidate(
                &current,
                &current_adic,
                &current_hilbert,
                x,
                window,
                seed,
                draw,
            )? {
                Some(s) => s,
                None => continue,
            };
            let (pass, table) = valabrega_valla(&step, horizon)?;
            if pass {
                rounds.push(DepthRound {
                    round,
                    passed: true,
                    element: Some(step.cert.element.clone()),
                    failures: std::mem::take(&mut failures),
                });
                bound += 1;
                current = step.image.clone();
                current_adic = step.image_adic.clone();
                current_hilbert = step.image_hilbert.clone();
                advanced = true;
                break;
            }
            failures.push(table);
        }
        if !advanced {
            rounds.push(DepthRound {
                round,
                passed: false,
                element: None,
                failures,
            });
            break;
        }
    }
    Ok(DepthBound {
        bound,
        rounds,
        horizon,
    })
}

/// Extend a certified superficial element `x` to a candidate minimal
/// reduction `J = (x, y_2, .., y_d)`; used for identities that need the
/// image of `J` in `R/(x)` to be a (d-1)-generated reduction.
pub fn extend_to_reduction(
    ideal: &Ideal,
    adic: &Filtration,
    x: &Polynomial,
    seed: u64,
    horizon: u32,
) -> Result<ReductionCertificate> {
    let d = ideal.ring().dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa5a5a5a5);
    let mut last_err: Option<Error> = None;
    for draw in 0..MAX_DRAWS {
        let mut gens = vec![x.clone()];
        gens.extend((1..d).map(|_| random_combination(ideal, &mut rng, draw)));
        let j = Ideal::new(Arc::clone(ideal.ring()), gens)?;
        match reduction_number(adic, &j, horizon) {
            Ok((r, witness)) => {
                let colength = j.colength()?;
                return Ok(ReductionCertificate {
                    ideal: j,
                    r,
                    witness,
                    seed,
                    draw,
                    colength,
                });
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(Error::RetriesExhausted {
        what: format!(
            "reduction extension of a superficial element (last failure: {})",
            last_err.map(|e| e.to_string()).unwrap_or_default()
        ),
        tries: MAX_DRAWS,
    })
}

/// Scale a polynomial list into the image ring, dropping zero images.
pub fn image_polys(ring: &Arc<AmbientRing>, polys: &[Polynomial]) -> Vec<Polynomial> {
    polys
        .iter()
        .map(|p| ring.reduce_mod_defining(p))
        .filter(|p| !p.is_zero())
        .collect()
}

/// Coefficient helper used in tests.
pub fn coeff_i64(field: &crate::field::CoeffField, n: i64) -> Coeff {
    field.from_i64(n)
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

    #[test]
    fn parameter_ideal_reduces_itself() {
        let r = ring(&["x", "y"]);
        let i = Ideal::from_texts(&r, &["x^2", "y^3"]).unwrap();
        let adic = Filtration::adic(i.clone());
        let (rn, _) = reduction_number(&adic, &i, 8).unwrap();
        assert_eq!(rn, 0);
    }

    #[test]
    fn maximal_ideal_reduction_in_two_vars() {
        // J = (x, y) = m gives r = 0; J = (x^2...) is not inside m^1? use m itself.
        let r = ring(&["x", "y"]);
        let m = Ideal::maximal(&r);
        let adic = Filtration::adic(m.clone());
        let cert = find_minimal_reduction(&m, &adic, 7, 8, None).unwrap();
        assert_eq!(cert.r, 0);
        assert_eq!(cert.colength, 1);
    }

    #[test]
    fn running_example_pinned_reduction_number() {
        let r = ring(&["x", "y", "z"]);
        let i = Ideal::from_texts(
            &r,
            &[
                "x^4", "y^4", "z^4", "x^3*y", "x*y^3", "y^3*z", "y*z^3", "x^3*z", "x*z^3",
            ],
        )
        .unwrap();
        let j = Ideal::from_texts(&r, &["x^4", "y^4", "z^4"]).unwrap();
        let adic = Filtration::adic(i);
        let (rn, witness) = reduction_number(&adic, &j, 8).unwrap();
        assert_eq!(rn, 4);
        // The scan must have seen strict inequality below r.
        assert!(witness.iter().take(4).all(|w| !w.equal));
    }

    #[test]
    fn v_n_vanishes_past_reduction_number() {
        let r = ring(&["x", "y"]);
        let i = Ideal::from_texts(&r, &["x^2", "x*y", "y^2"]).unwrap();
        let adic = Filtration::adic(i.clone());
        let cert = find_minimal_reduction(&i, &adic, 3, 8, None).unwrap();
        for n in cert.r..cert.r + 3 {
            assert_eq!(v_n(&adic, &cert.ideal, n).unwrap(), 0);
        }
    }

    #[test]
    fn superficial_element_in_regular_ring() {
        let r = ring(&["x", "y"]);
        let m = Ideal::maximal(&r);
        let adic = Filtration::adic(m.clone());
        let base = hilbert::compute(&adic, &HilbertOptions::default()).unwrap();
        let step = find_superficial(&m, &adic, &base, 0, 42, &[]).unwrap();
        assert!(step.cert.e_check_ok);
        assert!(step.cert.colon_table.iter().all(|&t| t == 0));
        let (pass, _) = valabrega_valla(&step, 8).unwrap();
        assert!(pass);
    }

    #[test]
    fn depth_of_regular_ring_is_full() {
        let r = ring(&["x", "y"]);
        let m = Ideal::maximal(&r);
        let adic = Filtration::adic(m.clone());
        let base = hilbert::compute(&adic, &HilbertOptions::default()).unwrap();
        let db = depth_lower_bound(&m, &adic, &base, 0, 5, 8).unwrap();
        assert_eq!(db.bound, 2);
    }

    #[test]
    fn squared_maximal_superficial_square() {
        // I = m^2 in k[x,y]; x^2 is superficial for I.
        let r = ring(&["x", "y"]);
        let i = Ideal::maximal(&r).power(2).unwrap();
        let adic = Filtration::adic(i.clone());
        let base = hilbert::compute(&adic, &HilbertOptions::default()).unwrap();
        let x2 = crate::parse::parse_polynomial("x^2", r.core()).unwrap();
        let step = certify_candidate(&i, &adic, &base, x2, (1, 4), 0, 0)
            .unwrap()
            .expect("x^2 is superficial for m^2");
        for n in 0..4 {
            assert_eq!(step.t_n(n).unwrap(), 0, "t_{n}");
        }
    }
}
