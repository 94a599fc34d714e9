//! The structured run report.  Every mathematical field is reproducible
//! from the embedded instance and seed; timings are informational only and
//! excluded from the reproducibility contract.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::hilbert::PowerIdentities;
use crate::instance::InstanceSpec;
use crate::ratliff_rush::{BehavesWellVerdict, E3Identity, StabilizationRecord};
use crate::reduction::{DepthBound, ReductionWitness, SuperficialCertificate};
use crate::theorems::Verdict;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub instance: InstanceSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hilbert: Option<HilbertBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratliff_rush: Option<RrBlock>,
    pub verdicts: Vec<Verdict>,
    pub meta: Meta,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HilbertBlock {
    pub dim: usize,
    /// `H(n) = l(R/I^n)` for `n = 0..=top`.
    pub values: Vec<u64>,
    pub h: Vec<i64>,
    pub e: Vec<i64>,
    pub eta: i64,
    pub window: (u32, u32),
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power_identities: Option<PowerIdentities>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReductionBlock {
    pub generators: Vec<String>,
    pub r: u32,
    pub colength: u64,
    pub pinned: bool,
    pub seed: u64,
    pub draw: u32,
    pub witness: Vec<ReductionWitness>,
    /// `l(R/J) = e_0(I)` held.
    pub multiplicity_check: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RrBlock {
    /// A generator of the closure of `I` that is not in `I`, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_witness: Option<String>,
    /// `e_i` of the closure filtration (must match the adic values).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_closure: Option<Vec<i64>>,
    pub e_agreement: Option<bool>,
    /// `l(R/closure(I^n)) = P(n)` for computed `n >= eta`.
    pub postulation_agreement: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rr_reduction_number: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vn_sum: Option<u64>,
    pub stabilization: Vec<(u32, StabilizationRecord)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub superficial: Option<SuperficialCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub behaves_well: Option<BehavesWellVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e3_identity: Option<E3Identity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth_bound: Option<DepthBound>,
    /// Closed-form Koszul homology lengths `(n, H_2, H_3)` for small `n`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub koszul: Vec<(i64, u64, u64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Clean,
    Finding,
    HypothesisUnverified,
    Internal,
}

impl RunStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            RunStatus::Clean => 0,
            RunStatus::Finding => 3,
            RunStatus::HypothesisUnverified => 5,
            RunStatus::Internal => 4,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageError {
    pub stage: String,
    pub message: String,
    pub internal: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Meta {
    pub version: String,
    pub field: String,
    pub seed: u64,
    /// How the integrally-closed hypothesis was resolved: `verified`,
    /// `failed-verification`, `assumed` or `not-claimed`.
    pub integrally_closed: String,
    pub status: RunStatus,
    pub errors: Vec<StageError>,
    /// Wall-clock stage timings; excluded from reproducibility guarantees.
    pub timings_ms: BTreeMap<String, u64>,
}

impl Report {
    pub fn skeleton(instance: InstanceSpec, field: String) -> Report {
        let seed = instance.seed;
        Report {
            instance,
            hilbert: None,
            reduction: None,
            ratliff_rush: None,
            verdicts: Vec::new(),
            meta: Meta {
                version: env!("CARGO_PKG_VERSION").to_string(),
                field,
                seed,
                integrally_closed: "not-claimed".into(),
                status: RunStatus::Clean,
                errors: Vec::new(),
                timings_ms: BTreeMap::new(),
            },
        }
    }

    /// Derive the final status: internal beats finding beats unverified.
    pub fn finalize_status(&mut self) {
        let mut status = RunStatus::Clean;
        let assumed = self.verdicts.iter().any(|v| {
            v.applicable
                && v.hypotheses
                    .iter()
                    .any(|h| h.status == crate::theorems::HypStatus::Assumed)
        });
        if assumed {
            status = RunStatus::HypothesisUnverified;
        }
        if self
            .verdicts
            .iter()
            .any(|v| v.applicable && v.holds == Some(false))
        {
            status = RunStatus::Finding;
        }
        if self.meta.errors.iter().any(|e| e.internal) {
            status = RunStatus::Internal;
        }
        self.meta.status = status;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> crate::error::Result<Report> {
        serde_json::from_str(text)
            .map_err(|e| crate::error::Error::BadInstance(format!("report json: {e}")))
    }

    /// Equality of all mathematical fields (timings ignored).
    pub fn math_eq(&self, other: &Report) -> bool {
        let strip = |r: &Report| {
            let mut c = r.clone();
            c.meta.timings_ms.clear();
            serde_json::to_value(&c).expect("serializable")
        };
        strip(self) == strip(other)
    }
}
