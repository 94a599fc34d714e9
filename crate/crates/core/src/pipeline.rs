//! The per-instance analysis pipeline: hilbert data, minimal reduction,
//! superficial element, Ratliff-Rush analytics, depth bound, verdicts.
//!
//! Stages are failure-isolated: a stage that errors records the failure and
//! the later stages that depend on it are skipped; everything computed so
//! far stays in the report.  Internal cross-check failures poison the run
//! status but still produce a (partial) report for diagnosis.

use std::sync::Arc;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::hilbert::{self, HilbertData, HilbertOptions};
use crate::ideal::{Ideal, PrimaryOutcome};
use crate::instance::{BuiltInstance, InstanceSpec};
use crate::ratliff_rush::{self, BehavesWellVerdict};
use crate::reduction::{self, ReductionCertificate, SuperficialStep};
use crate::report::{
    HilbertBlock, Meta, ReductionBlock, Report, RrBlock, RunStatus, StageError,
};
use crate::theorems::{self, BoundContext, HypStatus, ReductionBoundContext};

/// Everything the pipeline produced, including live objects the report
/// cannot carry (filtrations, ideals).  Tests use this; the CLI uses the
/// embedded report.
pub struct Analysis {
    pub report: Report,
    pub built: BuiltInstance,
    pub adic: Option<Filtration>,
    pub hilbert: Option<HilbertData>,
    pub reduction: Option<ReductionCertificate>,
    pub superficial: Option<SuperficialStep>,
    pub j_containing_x: Option<ReductionCertificate>,
    pub rr_base: Option<Filtration>,
    pub rr_hilbert: Option<HilbertData>,
    pub rr_of_image: Option<Filtration>,
    pub behaves: Option<BehavesWellVerdict>,
}

macro_rules! stage {
    ($self:ident, $name:expr, $body:expr) => {{
        let t0 = Instant::now();
        let result = (|| $body)();
        $self
            .report
            .meta
            .timings_ms
            .insert($name.to_string(), t0.elapsed().as_millis() as u64);
        match result {
            Ok(v) => Some(v),
            Err(e) => {
                $self.record_error($name, e);
                None
            }
        }
    }};
}

impl Analysis {
    fn record_error(&mut self, stage: &str, e: Error) {
        self.report.meta.errors.push(StageError {
            stage: stage.into(),
            message: e.to_string(),
            internal: e.is_internal(),
        });
    }
}

/// Resolution of the integrally-closed hypothesis for an instance.
fn closed_status(built: &BuiltInstance) -> Result<(HypStatus, String)> {
    match built.spec.flags.integrally_closed.as_str() {
        "assert" => Ok((HypStatus::Assumed, "assumed".into())),
        "off" => Ok((HypStatus::Failed, "not-claimed".into())),
        "verify" => {
            let closure = built.ideal.monomial_integral_closure()?;
            if closure.equals(&built.ideal)? {
                Ok((HypStatus::Verified, "verified".into()))
            } else {
                Ok((HypStatus::Failed, "failed-verification".into()))
            }
        }
        other => Err(Error::BadInstance(format!("bad closure flag `{other}`"))),
    }
}

/// Run the full pipeline.  `Err` is returned only for malformed instances
/// (usage errors); every computational failure lands inside the report.
pub fn run_instance(spec: &InstanceSpec) -> Result<Analysis> {
    let built = spec.build()?;
    let field_name = built.ring.field().name();
    let mut a = Analysis {
        report: Report::skeleton(spec.clone(), field_name),
        built,
        adic: None,
        hilbert: None,
        reduction: None,
        superficial: None,
        j_containing_x: None,
        rr_base: None,
        rr_hilbert: None,
        rr_of_image: None,
        behaves: None,
    };
    run_stages(&mut a);
    a.report.finalize_status();
    Ok(a)
}

fn run_stages(a: &mut Analysis) {
    let seed = a.built.spec.seed;
    let d = a.built.ring.dim();
    let user_horizon = a.built.spec.limits.horizon;
    let w_rr = a.built.spec.limits.rr_window.unwrap_or(3);
    let superficial_on = a.built.spec.flags.superficial == "auto" && d >= 2;
    let depth_on = a.built.spec.flags.depth == "auto";
    let rr_on = a.built.spec.flags.ratliff_rush == "auto";

    // --- hilbert ---------------------------------------------------------
    let adic = Filtration::adic(a.built.ideal.clone());
    a.adic = Some(adic.clone());
    let primary = a.built.ideal.is_m_primary();
    if !primary.is_primary() {
        a.record_error(
            "hilbert",
            match primary {
                PrimaryOutcome::NotPrimary { var } => Error::NotMPrimary { var, cap: 0 },
                PrimaryOutcome::Undetermined { var, cap } => {
                    Error::PrimaryUndetermined { var, cap }
                }
                PrimaryOutcome::Primary(_) => unreachable!(),
            },
        );
        return;
    }
    let base = match stage!(a, "hilbert", {
        hilbert::compute(
            &adic,
            &HilbertOptions::with_horizon(user_horizon.unwrap_or(12)),
        )
    }) {
        Some(h) => h,
        None => return,
    };
    a.hilbert = Some(base);

    // --- integrally-closed hypothesis ------------------------------------
    let (closed, closed_note) = match stage!(a, "closure-flag", closed_status(&a.built)) {
        Some(v) => v,
        None => (HypStatus::Failed, "verification errored".to_string()),
    };

    // --- minimal reduction ------------------------------------------------
    let reduction_horizon = user_horizon.unwrap_or(12);
    let pinned = a.built.pinned_reduction.clone();
    let cert = stage!(a, "reduction", {
        reduction::find_minimal_reduction(
            &a.built.ideal,
            &adic,
            seed,
            reduction_horizon,
            pinned.as_ref(),
        )
    });

    // Extend the hilbert table when the reduction number demands it.
    if let Some(c) = &cert {
        let needed = 2 * c.r + d as u32 + 4;
        let current_top = a.hilbert.as_ref().map(|h| h.values.len() as u32 - 1).unwrap_or(0);
        if user_horizon.is_none() && current_top < needed {
            if let Some(h2) = stage!(a, "hilbert-extend", {
                hilbert::compute(&adic, &HilbertOptions::for_reduction(c.r, d))
            }) {
                a.hilbert = Some(h2);
            }
        }
        // Multiplicity cross-check: l(R/J) = e_0.
        let e0 = a.hilbert.as_ref().map(|h| h.e0()).unwrap_or(0);
        if c.colength as i64 != e0 {
            a.record_error(
                "reduction",
                Error::Inconsistency(format!(
                    "l(R/J) = {} but e_0 = {e0}",
                    c.colength
                )),
            );
        }
    }
    let base = a.hilbert.clone().expect("hilbert stage succeeded");

    a.report.reduction = cert.as_ref().map(|c| ReductionBlock {
        generators: c.ideal.gens().iter().map(|g| g.to_string()).collect(),
        r: c.r,
        colength: c.colength,
        pinned: pinned.is_some(),
        seed: c.seed,
        draw: c.draw,
        witness: c.witness.clone(),
        multiplicity_check: c.colength as i64 == base.e0(),
    });
    a.reduction = cert;

    // --- superficial element ----------------------------------------------
    let r_hint = a.reduction.as_ref().map(|c| c.r).unwrap_or_else(|| {
        base.eta.max(1) as u32
    });
    if superficial_on && a.reduction.is_some() {
        let pinned_sup = a.built.pinned_superficial.clone();
        if let Some(step) = stage!(a, "superficial", {
            reduction::find_superficial(&a.built.ideal, &adic, &base, r_hint, seed, &pinned_sup)
        }) {
            // Extend x to a minimal reduction containing it, for the
            // image-filtration identities.
            a.j_containing_x = stage!(a, "superficial-reduction", {
                reduction::extend_to_reduction(
                    &a.built.ideal,
                    &adic,
                    &step.element,
                    seed,
                    reduction_horizon,
                )
            });
            a.superficial = Some(step);
        }
    }

    // --- ratliff-rush base analytics ---------------------------------------
    let mut rr_block = RrBlock {
        gap_witness: None,
        e_closure: None,
        e_agreement: None,
        postulation_agreement: None,
        rr_reduction_number: None,
        vn_sum: None,
        stabilization: Vec::new(),
        superficial: a.superficial.as_ref().map(|s| s.cert.clone()),
        behaves_well: None,
        e3_identity: None,
        depth_bound: None,
        koszul: Vec::new(),
    };

    if rr_on {
        let rr_base = Filtration::ratliff_rush(adic.clone(), w_rr);
        if let Some((gap, rr_data)) = stage!(a, "ratliff-rush", {
            let rr1 = rr_base.nth(1)?;
            let gap = if rr1.equals(&a.built.ideal)? {
                None
            } else {
                rr1.generating_set()
                    .iter()
                    .find(|g| !a.built.ideal.contains_poly(g))
                    .map(|g| g.to_string())
            };
            let opts = HilbertOptions {
                horizon: (base.values.len() as u32 - 1).max(12),
                zero_window: None,
                reduction_number: a.reduction.as_ref().map(|c| c.r),
            };
            let rr_data = hilbert::compute(&rr_base, &opts)?;
            Ok::<_, Error>((gap, rr_data))
        }) {
            let agree = (0..=d).all(|i| rr_data.coefficient(i) == base.coefficient(i));
            if !agree {
                a.record_error(
                    "ratliff-rush",
                    Error::Inconsistency(format!(
                        "closure filtration coefficients {:?} disagree with adic {:?}",
                        &rr_data.e[..=d],
                        &base.e[..=d]
                    )),
                );
            }
            // l(R/closure(I^n)) = P(n) for computed n >= eta.
            let mut post_ok = true;
            let from = base.eta.max(1) as usize;
            for n in from..rr_data.values.len() {
                if num_bigint::BigInt::from(rr_data.values[n]) != base.hilbert_polynomial_at(n as i64)
                {
                    post_ok = false;
                }
            }
            if !post_ok {
                a.record_error(
                    "ratliff-rush",
                    Error::Inconsistency(
                        "closure filtration values disagree with the hilbert polynomial past eta"
                            .into(),
                    ),
                );
            }
            rr_block.gap_witness = gap;
            rr_block.e_closure = Some(rr_data.e.clone());
            rr_block.e_agreement = Some(agree);
            rr_block.postulation_agreement = Some(post_ok);
            rr_block.stabilization = rr_base.rr_records();
            a.rr_hilbert = Some(rr_data);
        }

        if let Some(c) = a.reduction.clone() {
            if let Some(rtilde) = stage!(a, "rr-reduction", {
                ratliff_rush::rr_reduction_number(
                    &rr_base,
                    &c.ideal,
                    (2 * c.r + d as u32 + 4).max(12),
                    d as u32 + 2,
                )
            }) {
                rr_block.rr_reduction_number = Some(rtilde);
                let vn_sum = stage!(a, "vn-sum", {
                    let mut acc = 0u64;
                    for n in 0..=rtilde {
                        acc += reduction::v_n(&rr_base, &c.ideal, n)?;
                    }
                    Ok::<_, Error>(acc)
                });
                rr_block.vn_sum = vn_sum;
            }
        }
        a.rr_base = Some(rr_base);
    }

    // --- b/s invariants, behaves-well, e3 identity --------------------------
    if let (Some(step), Some(rr_base)) = (a.superficial.clone(), a.rr_base.clone()) {
        let rr_of_image = Filtration::ratliff_rush(step.image_adic.clone(), w_rr);
        let direct_horizon = (r_hint + d as u32 + 2).min(12);
        if let Some(bw) = stage!(a, "behaves-well", {
            ratliff_rush::behaves_well(&rr_base, &step, &rr_of_image, direct_horizon)
        }) {
            rr_block.behaves_well = Some(bw.clone());
            a.behaves = Some(bw);
        }

        if d == 3 {
            if let (Some(bw), Some(jx)) = (a.behaves.clone(), a.j_containing_x.clone()) {
                if let Some(id) = stage!(a, "e3-identity", {
                    let rr_img_h = hilbert::compute(
                        &rr_of_image,
                        &HilbertOptions {
                            horizon: (base.values.len() as u32 - 1).max(12),
                            zero_window: None,
                            reduction_number: a.reduction.as_ref().map(|c| c.r),
                        },
                    )?;
                    ratliff_rush::e3_identity_check(
                        &base,
                        &step,
                        &rr_of_image,
                        &rr_img_h,
                        &jx.ideal,
                        bw.b,
                        bw.s,
                    )
                }) {
                    if !id.holds || !id.sum_agrees || !id.via_image_agrees {
                        a.record_error(
                            "e3-identity",
                            Error::Inconsistency(format!(
                                "e3 identity failed: {id:?}"
                            )),
                        );
                    }
                    rr_block.e3_identity = Some(id);
                }
            }

            // Koszul closed-form table for small n.  H_3 uses the main
            // reduction (monomial when pinned so), H_2 the parameters of the
            // reduction containing x.
            if let (Some(jx), Some(jc)) = (a.j_containing_x.clone(), a.reduction.clone()) {
                if let Some(table) = stage!(a, "koszul", {
                    let top = (r_hint as i64 + 1).min(4);
                    let mut rows = Vec::new();
                    for n in 1..=top {
                        let h3 = theorems::koszul_h3(&adic, &jc.ideal, n)?;
                        let jp = Ideal::new(
                            Arc::clone(&step.quotient),
                            jx.ideal.gens().to_vec(),
                        )?;
                        let h2 = theorems::koszul_h2(&rr_of_image, &jp, n)?;
                        rows.push((n, h2, h3));
                    }
                    Ok::<_, Error>(rows)
                }) {
                    rr_block.koszul = table;
                }
            }
        }
        a.rr_of_image = Some(rr_of_image);
    }

    // --- depth lower bound ---------------------------------------------------
    if depth_on && superficial_on && a.reduction.is_some() {
        let vv_horizon = {
            let from_eta = base.eta.max(0) as u32 + d as u32 + 2;
            let from_r = r_hint + d as u32 + 2;
            from_eta.max(from_r)
        };
        rr_block.depth_bound = stage!(a, "depth", {
            reduction::depth_lower_bound(&a.built.ideal, &adic, &base, r_hint, seed, vv_horizon)
        });
    }

    // --- power identities ------------------------------------------------------
    let mut power_block = None;
    if let Some(q0) = a.built.spec.limits.power_q {
        if d == 3 || d == 4 {
            let q = if q0 == 0 { base.eta.max(1) as u32 } else { q0 };
            power_block = stage!(a, "power-identities", {
                hilbert::power_identities(&a.built.ideal, q, &base)
            });
            if let Some(p) = &power_block {
                if p.applicable && !p.agree {
                    a.record_error(
                        "power-identities",
                        Error::Inconsistency("power rescaling identities disagree".into()),
                    );
                }
            }
        }
    }

    a.report.hilbert = Some(HilbertBlock {
        dim: d,
        values: base.values.clone(),
        h: base.h.clone(),
        e: base.e.clone(),
        eta: base.eta,
        window: base.window,
        verified: base.verified,
        power_identities: power_block.clone(),
    });

    // --- verdicts ------------------------------------------------------------
    let behaves_flag = a.behaves.as_ref().map(|b| b.verdict);
    if let Some(c) = a.reduction.clone() {
        let ctx = BoundContext {
            hilbert: &base,
            r_j: c.r,
            closed,
            behaves_well: behaves_flag,
        };
        let mut verdicts = Vec::new();
        if d >= 3 {
            verdicts.extend(theorems::check_e3_lower(&ctx));
            verdicts.extend(theorems::check_e3_upper_bounds(&ctx));
            let rctx = ReductionBoundContext {
                base: BoundContext {
                    hilbert: &base,
                    r_j: c.r,
                    closed,
                    behaves_well: behaves_flag,
                },
                depth_lower: rr_block.depth_bound.as_ref().map(|b| b.bound).unwrap_or(0),
                vn_sum: rr_block.vn_sum,
            };
            verdicts.extend(theorems::check_reduction_bounds(&rctx));
            match theorems::check_koszul_e3_bound(&ctx, &adic, &c.ideal) {
                Ok(vs) => verdicts.extend(vs),
                Err(e) => a.record_error("verdicts", e),
            }
        }
        if d == 2 {
            if let Some(rtilde) = rr_block.rr_reduction_number {
                verdicts.push(theorems::check_lemma_dim2(&base, rtilde, closed));
            }
        }
        if d == 4 {
            let q = a.built.spec.limits.power_q.map(|q0| {
                if q0 == 0 {
                    base.eta.max(1) as u32
                } else {
                    q0
                }
            });
            if let Some(q) = q {
                // For monomial ideals the closedness of the power is decided
                // exactly; otherwise the instance flag carries over.
                let closed_power = match a.built.ideal.power(q) {
                    Ok(pq) => match pq.monomial_gens() {
                        Some(_) => match pq
                            .monomial_integral_closure()
                            .and_then(|cl| cl.equals(&pq))
                        {
                            Ok(true) => HypStatus::Verified,
                            Ok(false) => HypStatus::Failed,
                            Err(_) => closed,
                        },
                        None => closed,
                    },
                    Err(_) => closed,
                };
                let ectx = theorems::E4Context {
                    hilbert: &base,
                    q,
                    closed_power,
                    r_j: c.r,
                    depth_lower_power: None,
                };
                verdicts.extend(theorems::check_e4(&ectx));
            }
        }
        for bad in theorems::coherence_violations(&verdicts) {
            a.record_error("verdicts", Error::Inconsistency(bad));
        }
        a.report.verdicts = verdicts;
    }

    if rr_block.gap_witness.is_some()
        || rr_block.e_closure.is_some()
        || rr_block.superficial.is_some()
        || rr_block.depth_bound.is_some()
        || rr_block.rr_reduction_number.is_some()
    {
        a.report.ratliff_rush = Some(rr_block);
    }

    a.report.meta.integrally_closed = closed_note;
    let total = a.report.meta.timings_ms.values().sum();
    a.report.meta.timings_ms.insert("total".into(), total);
}

/// Convenience wrapper returning just the report.
pub fn run_report(spec: &InstanceSpec) -> Result<Report> {
    Ok(run_instance(spec)?.report)
}

/// Map a pipeline-level error (not a stage error) onto the CLI exit code.
pub fn usage_exit(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::UnknownVariable(_)
        | Error::BadCoefficient(..)
        | Error::BadInstance(_)
        | Error::Io(_) => 2,
        _ => 4,
    }
}

pub fn status_of(report: &Report) -> RunStatus {
    report.meta.status
}

/// Meta echo for the closed-hypothesis resolution (reported by the CLI).
pub fn describe_meta(meta: &Meta) -> String {
    format!(
        "field={} seed={} status={:?} errors={}",
        meta.field,
        meta.seed,
        meta.status,
        meta.errors.len()
    )
}
