//! Structured verdicts for the bound-and-identity suite.
//!
//! Every verdict carries both sides as exact rationals, the list of
//! hypotheses with their verification status, and an applicability flag:
//! a bound whose hypothesis failed is reported "not applicable", never
//! "refuted".  Logical-coherence checks (equality in a bound forcing the
//! behaves-well property and conversely) are emitted as verdicts with 0/1
//! sides so they land in the same report table.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::filtration::Filtration;
use crate::hilbert::HilbertData;
use crate::ideal::Ideal;
use crate::ratliff_rush;
use crate::reduction::SuperficialStep;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HypStatus {
    Verified,
    Assumed,
    Failed,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub status: HypStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub hypotheses: Vec<Hypothesis>,
    /// Exact rational, rendered `p` or `p/q`.
    pub lhs: String,
    pub rhs: String,
    pub relation: Relation,
    /// `None` when not applicable.
    pub holds: Option<bool>,
    pub equality_attained: Option<bool>,
    pub applicable: bool,
    pub notes: String,
}

fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

fn half(n: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(2))
}

fn fmt_rat(x: &BigRational) -> String {
    if x.denom() == &BigInt::from(1) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn hyp(name: &str, status: HypStatus) -> Hypothesis {
    Hypothesis {
        name: name.into(),
        status,
    }
}

fn make(
    name: &str,
    hypotheses: Vec<Hypothesis>,
    lhs: BigRational,
    rhs: BigRational,
    relation: Relation,
    notes: impl Into<String>,
) -> Verdict {
    let applicable = hypotheses.iter().all(|h| h.status != HypStatus::Failed);
    let holds = if applicable {
        Some(match relation {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
        })
    } else {
        None
    };
    let equality_attained = if applicable { Some(lhs == rhs) } else { None };
    Verdict {
        name: name.into(),
        hypotheses,
        lhs: fmt_rat(&lhs),
        rhs: fmt_rat(&rhs),
        relation,
        holds,
        equality_attained,
        applicable,
        notes: notes.into(),
    }
}

fn bool_rat(b: bool) -> BigRational {
    rat(if b { 1 } else { 0 })
}

/// Everything the bound suite reads from one analyzed instance.
pub struct BoundContext<'a> {
    pub hilbert: &'a HilbertData,
    pub r_j: u32,
    /// Status of the "I is integrally closed" hypothesis.
    pub closed: HypStatus,
    /// Behaves-well verdict when it was computed (dimension 3).
    pub behaves_well: Option<bool>,
}

impl<'a> BoundContext<'a> {
    fn e(&self, i: usize) -> i64 {
        self.hilbert.coefficient(i)
    }
    fn ell(&self) -> i64 {
        self.hilbert.values[1] as i64
    }
    /// `e_2 - e_1 + e_0 - l(R/I)`.
    fn disc(&self) -> i64 {
        self.hilbert.discrepancy()
    }
    fn e3(&self) -> BigRational {
        rat(self.e(3))
    }
    fn behaves_hyp(&self, name: &str) -> Hypothesis {
        match self.behaves_well {
            Some(true) => hyp(name, HypStatus::Verified),
            Some(false) => hyp(name, HypStatus::Failed),
            None => hyp(name, HypStatus::Assumed),
        }
    }
}

/// Lower bound `e_3 >= e_2 - e_1 + e_0 - l(R/I)` under the behaves-well
/// hypothesis, plus (dimension 3, discrepancy at most 1, integrally closed)
/// the boundary characterization: equality holds iff the filtration behaves
/// well.
pub fn check_e3_lower(ctx: &BoundContext<'_>) -> Vec<Verdict> {
    let mut out = Vec::new();
    let d = ctx.hilbert.dim;
    out.push(make(
        "e3-lower",
        vec![ctx.behaves_hyp("ratliff-rush filtration behaves well modulo a superficial sequence")],
        ctx.e3(),
        rat(ctx.disc()),
        Relation::Ge,
        "",
    ));
    if d == 3 && ctx.disc() <= 1 {
        let mut hyps = vec![hyp("integrally closed", ctx.closed)];
        hyps.push(hyp(
            "e2 - e1 + e0 - l(R/I) <= 1",
            HypStatus::Verified,
        ));
        if let Some(bw) = ctx.behaves_well {
            out.push(make(
                "e3-lower-boundary",
                hyps,
                bool_rat(ctx.e(3) == ctx.disc()),
                bool_rat(bw),
                Relation::Eq,
                "equality in the lower bound holds iff the filtration behaves well",
            ));
        }
    }
    out
}

/// The three upper bounds for `e_3` of an integrally closed ideal, the
/// `(e_2 - 1)^2 / 2` corollary, the four-condition corollary, and the
/// boundary coherence checks in dimension 3.
pub fn check_e3_upper_bounds(ctx: &BoundContext<'_>) -> Vec<Verdict> {
    let mut out = Vec::new();
    let d = ctx.hilbert.dim;
    let disc = rat(ctx.disc());
    let closed = hyp("integrally closed", ctx.closed);
    let e3 = ctx.e3();

    let b1 = half(ctx.r_j as i64 - 1) * &disc;
    let b2 = half(ctx.e(1) - ctx.e(0) + ctx.ell()) * &disc;
    let b3 = half(ctx.e(2) - 1) * &disc;
    let b4 = half(ctx.e(2) - 1) * rat(ctx.e(2) - 1);
    out.push(make(
        "e3-upper-1",
        vec![closed.clone()],
        e3.clone(),
        b1.clone(),
        Relation::Le,
        "rhs = (r_J - 1)/2 * (e2 - e1 + e0 - l)",
    ));
    out.push(make(
        "e3-upper-2",
        vec![closed.clone()],
        e3.clone(),
        b2.clone(),
        Relation::Le,
        "rhs = (e1 - e0 + l)/2 * (e2 - e1 + e0 - l)",
    ));
    out.push(make(
        "e3-upper-3",
        vec![closed.clone()],
        e3.clone(),
        b3.clone(),
        Relation::Le,
        "rhs = (e2 - 1)/2 * (e2 - e1 + e0 - l)",
    ));
    out.push(make(
        "e3-upper-square",
        vec![closed.clone()],
        e3.clone(),
        b4,
        Relation::Le,
        "rhs = (e2 - 1)^2 / 2",
    ));

    // Four-condition corollary: e3 <= disc under any of the side conditions.
    let conds = [
        (ctx.r_j <= 3, "r_J <= 3"),
        (ctx.disc() <= 1, "e2 - e1 + e0 - l <= 1"),
        (ctx.e(1) - ctx.e(0) + ctx.ell() <= 2, "e1 - e0 + l <= 2"),
        (ctx.e(2) <= 3, "e2 <= 3"),
    ];
    let any = conds.iter().any(|(c, _)| *c);
    let names: Vec<&str> = conds
        .iter()
        .filter(|(c, _)| *c)
        .map(|(_, n)| *n)
        .collect();
    out.push(make(
        "e3-upper-corollary",
        vec![
            closed.clone(),
            hyp(
                "one of: r_J <= 3, disc <= 1, e1 - e0 + l <= 2, e2 <= 3",
                if any { HypStatus::Verified } else { HypStatus::Failed },
            ),
        ],
        e3.clone(),
        disc.clone(),
        Relation::Le,
        if any {
            format!("holds via: {}", names.join(", "))
        } else {
            String::new()
        },
    ));
    if ctx.e(1) - ctx.e(0) + ctx.ell() == 2 {
        out.push(make(
            "e3-equality-at-two",
            vec![closed.clone(), hyp("e1 - e0 + l = 2", HypStatus::Verified)],
            e3.clone(),
            disc.clone(),
            Relation::Eq,
            "",
        ));
    }

    // Boundary coherence in dimension 3.
    if d == 3 && ctx.closed != HypStatus::Failed {
        if let Some(bw) = ctx.behaves_well {
            let eq1 = e3 == b1;
            let eq2 = e3 == b2;
            let eq3 = e3 == b3;
            if eq1 || eq2 || eq3 {
                out.push(make(
                    "boundary-forward",
                    vec![closed.clone()],
                    bool_rat(true),
                    bool_rat(bw),
                    Relation::Eq,
                    "equality in an upper bound forces the behaves-well property",
                ));
            }
            let converse: [(bool, bool, &str); 3] = [
                (ctx.r_j <= 3, eq1, "r_J <= 3 forces equality in bound 1"),
                (
                    ctx.e(1) - ctx.e(0) + ctx.ell() <= 2,
                    eq2,
                    "e1 - e0 + l <= 2 forces equality in bound 2",
                ),
                (ctx.e(2) <= 3, eq3, "e2 <= 3 forces equality in bound 3"),
            ];
            for (i, (cond, eq, note)) in converse.iter().enumerate() {
                if bw && *cond {
                    out.push(make(
                        &format!("boundary-converse-{}", i + 1),
                        vec![closed.clone(), ctx.behaves_hyp("behaves well")],
                        bool_rat(*eq),
                        bool_rat(true),
                        Relation::Eq,
                        *note,
                    ));
                }
            }
        }
    }
    out
}

/// Reduction-number bounds: Rossi's bound under behaves-well, the
/// `e_2 * disc` improvement under `depth G(I) >= d - 3`, the older
/// `e_2(e_2 - 1)` variant, and the `v_n`-sum inequality.
pub struct ReductionBoundContext<'a> {
    pub base: BoundContext<'a>,
    /// Certified lower bound for `depth G(I)`.
    pub depth_lower: usize,
    /// `sum_n v_n` of the Ratliff-Rush filtration, when computed.
    pub vn_sum: Option<u64>,
}

pub fn check_reduction_bounds(ctx: &ReductionBoundContext<'_>) -> Vec<Verdict> {
    let b = &ctx.base;
    let d = b.hilbert.dim;
    let mut out = Vec::new();
    let r = rat(b.r_j as i64);
    let rossi_rhs = rat(b.e(1) - b.e(0) + b.ell() + 1);

    out.push(make(
        "rossi-bound",
        vec![b.behaves_hyp("ratliff-rush filtration behaves well modulo a superficial element")],
        r.clone(),
        rossi_rhs.clone(),
        Relation::Le,
        "r_J <= e1 - e0 + l + 1",
    ));

    let depth_hyp = if ctx.depth_lower + 3 >= d {
        HypStatus::Verified
    } else {
        HypStatus::Assumed
    };
    let improved = rat(b.e(1) - b.e(0) + b.ell() + 1 + b.e(2) * b.disc() - b.e(3));
    out.push(make(
        "reduction-bound-e2disc",
        vec![
            hyp("integrally closed", b.closed),
            hyp("depth G(I) >= d - 3", depth_hyp),
        ],
        r.clone(),
        improved,
        Relation::Le,
        "r_J <= e1 - e0 + l + 1 + e2*(e2 - e1 + e0 - l) - e3",
    ));
    let prior = rat(b.e(1) - b.e(0) + b.ell() + 1 + b.e(2) * (b.e(2) - 1) - b.e(3));
    out.push(make(
        "reduction-bound-prior",
        vec![hyp("depth G(I) >= d - 3", depth_hyp)],
        r.clone(),
        prior,
        Relation::Le,
        "r_J <= e1 - e0 + l + 1 + e2*(e2 - 1) - e3",
    ));
    if let Some(vs) = ctx.vn_sum {
        out.push(make(
            "vn-sum-bound",
            vec![],
            r.clone(),
            rat(vs as i64 - b.e(0) + b.ell() + 1),
            Relation::Le,
            "r_J <= sum v_n(closure filtration) - e0 + l + 1",
        ));
    }
    out
}

/// Dimension-2 bound `r~_J <= e2 - e1 + e0 - l(R/I_1) + 2` for a filtration
/// with integrally closed `I_1`.
pub fn check_lemma_dim2(
    hilbert: &HilbertData,
    rr_reduction_number: u32,
    closed: HypStatus,
) -> Verdict {
    let e = |i: usize| hilbert.coefficient(i);
    let ell = hilbert.values[1] as i64;
    make(
        "rr-reduction-bound-dim2",
        vec![hyp("I_1 integrally closed", closed), hyp("dim = 2", HypStatus::Verified)],
        rat(rr_reduction_number as i64),
        rat(e(2) - e(1) + e(0) - ell + 2),
        Relation::Le,
        "r~_J <= e2 - e1 + e0 - l + 2",
    )
}

/// `e_3 <= l(I^3/J I^2) + l((J cap I^3)/J I^2)` for integrally closed `I`
/// with `r_J <= 3`; with `r_J <= 2` additionally `e_3 = 0`.
pub fn check_koszul_e3_bound(
    ctx: &BoundContext<'_>,
    adic: &Filtration,
    j: &Ideal,
) -> Result<Vec<Verdict>> {
    let mut out = Vec::new();
    let rj_hyp = if ctx.r_j <= 3 {
        HypStatus::Verified
    } else {
        HypStatus::Failed
    };
    let i2 = adic.nth(2)?;
    let i3 = adic.nth(3)?;
    let ji2 = j.product(&i2)?;
    let a = i3.length_between(&ji2)?;
    let jcap = j.intersect(&i3)?;
    let b = jcap.length_between(&ji2)?;
    out.push(make(
        "e3-koszul-bound",
        vec![
            hyp("integrally closed", ctx.closed),
            hyp("r_J <= 3", rj_hyp),
        ],
        ctx.e3(),
        rat(a as i64 + b as i64),
        Relation::Le,
        "rhs = l(I^3/JI^2) + l((J cap I^3)/JI^2)",
    ));
    if ctx.r_j <= 2 {
        out.push(make(
            "e3-vanishes-small-reduction",
            vec![
                hyp("integrally closed", ctx.closed),
                hyp("r_J <= 2", HypStatus::Verified),
            ],
            ctx.e3(),
            rat(0),
            Relation::Eq,
            "",
        ));
    }
    Ok(out)
}

/// Signature checks for `e_4` in dimension 4.
pub struct E4Context<'a> {
    pub hilbert: &'a HilbertData,
    pub q: u32,
    /// Status of "I^q is integrally closed" for the chosen q >= eta.
    pub closed_power: HypStatus,
    pub r_j: u32,
    /// Certified depth lower bound for `G(I^q)`, when computed.
    pub depth_lower_power: Option<usize>,
}

pub fn check_e4(ctx: &E4Context<'_>) -> Vec<Verdict> {
    let mut out = Vec::new();
    let e4 = rat(ctx.hilbert.coefficient(4));
    let q_ok = (ctx.q as i64) >= ctx.hilbert.eta;
    let q_hyp = if q_ok {
        HypStatus::Verified
    } else {
        HypStatus::Failed
    };

    // Part 1: depth G(I^q) >= 3 forces e4 >= 0.
    let depth_hyp = match ctx.depth_lower_power {
        Some(b) if b >= 3 => HypStatus::Verified,
        Some(_) => HypStatus::Failed,
        None => HypStatus::Assumed,
    };
    out.push(make(
        "e4-nonnegative",
        vec![hyp("depth G(I^q) >= 3", depth_hyp), hyp("q >= eta", q_hyp)],
        e4.clone(),
        rat(0),
        Relation::Ge,
        "",
    ));

    // Contrapositive: e4 < 0 forces depth G(I^n) <= 2 for n >> 0; the
    // certified lower bound must stay consistent with that cap.
    if ctx.hilbert.coefficient(4) < 0 {
        if let Some(b) = ctx.depth_lower_power {
            out.push(make(
                "e4-negative-depth-cap",
                vec![hyp("e4 < 0", HypStatus::Verified)],
                rat(b as i64),
                rat(2),
                Relation::Le,
                "depth lower bound of G(I^q) must not exceed 2",
            ));
        } else {
            out.push(make(
                "e4-negative-depth-cap",
                vec![hyp("e4 < 0", HypStatus::Verified)],
                rat(0),
                rat(2),
                Relation::Le,
                "depth of G(I^q) not evaluated; implication recorded",
            ));
        }
    }

    // Part 2: integrally closed power with small reduction number.
    let rj_hyp = if ctx.r_j <= 3 {
        HypStatus::Verified
    } else {
        HypStatus::Failed
    };
    out.push(make(
        "e4-nonpositive",
        vec![
            hyp("I^q integrally closed", ctx.closed_power),
            hyp("q >= eta", q_hyp),
            hyp("r_J <= 3", rj_hyp),
        ],
        e4,
        rat(0),
        Relation::Le,
        "",
    ));
    out
}

/// Closed-form Koszul homology lengths of the modified complex:
/// `H_3` for the adic filtration in dimension 3 with a parameter reduction
/// `J`, and `H_2` for a dimension-2 filtration with two parameters.
pub fn koszul_h3(adic: &Filtration, j: &Ideal, n: i64) -> Result<u64> {
    let at = |m: i64| -> Result<std::sync::Arc<Ideal>> {
        if m <= 0 {
            Ok(std::sync::Arc::new(Ideal::unit(adic.ring())))
        } else {
            adic.nth(m as u32)
        }
    };
    let num = at(n - 2)?.colon(j)?;
    let den = at(n - 3)?;
    num.length_between(&den)
}

pub fn koszul_h2(filt: &Filtration, params: &Ideal, n: i64) -> Result<u64> {
    let at = |m: i64| -> Result<std::sync::Arc<Ideal>> {
        if m <= 0 {
            Ok(std::sync::Arc::new(Ideal::unit(filt.ring())))
        } else {
            filt.nth(m as u32)
        }
    };
    let num = at(n - 1)?.colon(params)?;
    let den = at(n - 2)?;
    num.length_between(&den)
}

/// The per-instance pair of closed-form homology lengths: `H_3` of the adic
/// complex and `H_2` of the image of the closure filtration.
pub fn koszul_pair(
    adic: &Filtration,
    j_full: &Ideal,
    step: &SuperficialStep,
    rr_of_image: &Filtration,
    n: i64,
) -> Result<(u64, u64)> {
    let h3 = koszul_h3(adic, j_full, n)?;
    let jp = Ideal::new(
        std::sync::Arc::clone(&step.quotient),
        j_full.gens().to_vec(),
    )?;
    let h2 = koszul_h2(rr_of_image, &jp, n)?;
    Ok((h2, h3))
}

/// Verify the logical coherence constraints across a set of verdicts; a
/// violation is an engine bug, not a mathematical finding.
pub fn coherence_violations(verdicts: &[Verdict]) -> Vec<String> {
    let mut bad = Vec::new();
    for v in verdicts {
        if let (Some(holds), true) = (v.holds, v.applicable) {
            if !holds && v.name.starts_with("boundary-") {
                bad.push(format!("{} failed", v.name));
            }
        }
    }
    bad
}

pub use ratliff_rush::BehavesWellVerdict;

#[cfg(test)]
mod tests {
    use super::*;

    fn data(h: Vec<i64>, values: Vec<u64>, dim: usize) -> HilbertData {
        // build coefficients from h
        let e_len = dim.max(4) + 1;
        let e: Vec<i64> = (0..e_len)
            .map(|i| {
                h.iter()
                    .enumerate()
                    .map(|(j, &c)| {
                        use num_traits::ToPrimitive;
                        c * crate::hilbert::binomial(j as i64, i as u32)
                            .to_i64()
                            .unwrap()
                    })
                    .sum()
            })
            .collect();
        HilbertData {
            values,
            h,
            e,
            eta: 0,
            dim,
            window: (0, 0),
            verified: true,
        }
    }

    #[test]
    fn negative_control_bounds_not_applicable() {
        // h = [30,12,22,8,-2,-12,6]: e = (64,48,4,0), disc = -10, r_J = 4.
        let hd = data(vec![30, 12, 22, 8, -2, -12, 6], vec![0, 30], 3);
        let ctx = BoundContext {
            hilbert: &hd,
            r_j: 4,
            closed: HypStatus::Failed,
            behaves_well: None,
        };
        let vs = check_e3_upper_bounds(&ctx);
        let b1 = vs.iter().find(|v| v.name == "e3-upper-1").unwrap();
        assert!(!b1.applicable);
        assert_eq!(b1.holds, None);
        assert_eq!(b1.rhs, "-15");
        let b2 = vs.iter().find(|v| v.name == "e3-upper-2").unwrap();
        assert_eq!(b2.rhs, "-70");
        let b3 = vs.iter().find(|v| v.name == "e3-upper-3").unwrap();
        assert_eq!(b3.rhs, "-15");
    }

    #[test]
    fn rational_halves_render_exactly() {
        // h = [31,43,1,1]: e = (76,48,4,1), disc = 1, r_J = 3.
        let hd = data(vec![31, 43, 1, 1], vec![0, 31], 3);
        let ctx = BoundContext {
            hilbert: &hd,
            r_j: 3,
            closed: HypStatus::Verified,
            behaves_well: Some(true),
        };
        let vs = check_e3_upper_bounds(&ctx);
        let b1 = vs.iter().find(|v| v.name == "e3-upper-1").unwrap();
        assert_eq!(b1.rhs, "1");
        assert_eq!(b1.equality_attained, Some(true));
        let b2 = vs.iter().find(|v| v.name == "e3-upper-2").unwrap();
        assert_eq!(b2.rhs, "3/2");
        let b3 = vs.iter().find(|v| v.name == "e3-upper-3").unwrap();
        assert_eq!(b3.rhs, "3/2");
    }
}
