//! Instance files: a single TOML or JSON document describing the ring, the
//! ideal, optional pinned data and the run limits.  All polynomials are
//! strings in the polynomial grammar.

use serde::{Deserialize, Serialize};
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::ideal::Ideal;
use crate::monomial::MonomialOrder;
use crate::parse;
use crate::poly::Polynomial;
use crate::ring::AmbientRing;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InstanceSpec {
    pub ring: RingSpec,
    pub ideal: IdealSpec,
    #[serde(default, skip_serializing_if = "PinSpec::is_empty")]
    pub pin: PinSpec,
    #[serde(default)]
    pub flags: FlagSpec,
    #[serde(default)]
    pub limits: LimitSpec,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RingSpec {
    /// `"Q"` or `"Fp:<prime>"` (or just `"Fp"` for the default prime).
    pub field: String,
    pub vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub quotient: Vec<String>,
    /// `grevlex` (default), `lex` or `graded-lex`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct IdealSpec {
    pub gens: Vec<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
pub struct PinSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reduction: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub superficial: Vec<String>,
}

impl PinSpec {
    pub fn is_empty(&self) -> bool {
        self.reduction.is_empty() && self.superficial.is_empty()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FlagSpec {
    /// `assert` (user-supplied hypothesis), `verify` (monomial check) or
    /// `off`.
    #[serde(default = "default_closed")]
    pub integrally_closed: String,
    /// Gate the superficial-element stage (certificates, b/s, behaves-well).
    #[serde(default = "default_auto")]
    pub superficial: String,
    /// Gate the depth lower bound stage.
    #[serde(default = "default_auto")]
    pub depth: String,
    /// Gate the Ratliff-Rush filtration analytics.
    #[serde(default = "default_auto")]
    pub ratliff_rush: String,
}

fn default_closed() -> String {
    "off".into()
}
fn default_auto() -> String {
    "auto".into()
}

impl Default for FlagSpec {
    fn default() -> Self {
        FlagSpec {
            integrally_closed: default_closed(),
            superficial: default_auto(),
            depth: default_auto(),
            ratliff_rush: default_auto(),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
pub struct LimitSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rr_window: Option<u32>,
    /// Evaluate the power-rescaling identities at this `q`
    /// (`0` means "use the postulation number").
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_q: Option<u32>,
}

/// A parsed and validated instance: the ring, the ideal and the pinned data
/// as live objects.
pub struct BuiltInstance {
    pub spec: InstanceSpec,
    pub ring: Arc<AmbientRing>,
    pub ideal: Ideal,
    pub pinned_reduction: Option<Ideal>,
    pub pinned_superficial: Vec<Polynomial>,
}

impl InstanceSpec {
    pub fn from_path(path: &Path) -> Result<InstanceSpec> {
        let text = std::fs::read_to_string(path)?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => serde_json::from_str(&text)
                .map_err(|e| Error::BadInstance(format!("json: {e}"))),
            _ => toml::from_str(&text).map_err(|e| Error::BadInstance(format!("toml: {e}"))),
        }
    }

    pub fn from_toml(text: &str) -> Result<InstanceSpec> {
        toml::from_str(text).map_err(|e| Error::BadInstance(format!("toml: {e}")))
    }

    pub fn parse_field(&self) -> Result<CoeffField> {
        match self.ring.field.as_str() {
            "Q" | "q" => Ok(CoeffField::Rationals),
            "Fp" | "fp" => CoeffField::prime(CoeffField::DEFAULT_PRIME),
            s => {
                if let Some(p) = s.strip_prefix("Fp:").or_else(|| s.strip_prefix("fp:")) {
                    let p: u64 = p
                        .parse()
                        .map_err(|_| Error::BadInstance(format!("bad prime in `{s}`")))?;
                    CoeffField::prime(p)
                } else {
                    Err(Error::BadInstance(format!(
                        "unknown field `{s}` (expected Q or Fp:<prime>)"
                    )))
                }
            }
        }
    }

    pub fn build(&self) -> Result<BuiltInstance> {
        let field = self.parse_field()?;
        let order = match &self.ring.order {
            None => MonomialOrder::Grevlex,
            Some(s) => MonomialOrder::parse(s)?,
        };
        if self.ring.vars.is_empty() {
            return Err(Error::BadInstance("ring needs at least one variable".into()));
        }
        let mut seen = self.ring.vars.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.ring.vars.len() {
            return Err(Error::BadInstance("duplicate variable names".into()));
        }

        let base = AmbientRing::polynomial_ring(self.ring.vars.clone(), field, order);
        let ring = if self.ring.quotient.is_empty() {
            base
        } else {
            let defining = parse::parse_generators(&self.ring.quotient, base.core())?;
            AmbientRing::quotient_ring(Arc::clone(base.core()), defining)?
        };

        if self.ideal.gens.is_empty() {
            return Err(Error::BadInstance("ideal needs at least one generator".into()));
        }
        let gens = parse::parse_generators(&self.ideal.gens, ring.core())?;
        let ideal = Ideal::new(Arc::clone(&ring), gens)?;

        for flag in [
            &self.flags.superficial,
            &self.flags.depth,
            &self.flags.ratliff_rush,
        ] {
            if flag != "auto" && flag != "off" {
                return Err(Error::BadInstance(format!(
                    "stage flag must be auto or off, got `{flag}`"
                )));
            }
        }
        match self.flags.integrally_closed.as_str() {
            "assert" | "off" => {}
            "verify" => {
                if ideal.monomial_gens().is_none() {
                    return Err(Error::BadInstance(
                        "integrally_closed = \"verify\" requires monomial generators".into(),
                    ));
                }
            }
            other => {
                return Err(Error::BadInstance(format!(
                    "integrally_closed must be assert, verify or off, got `{other}`"
                )))
            }
        }

        let pinned_reduction = if self.pin.reduction.is_empty() {
            None
        } else {
            let jg = parse::parse_generators(&self.pin.reduction, ring.core())?;
            Some(Ideal::new(Arc::clone(&ring), jg)?)
        };
        let pinned_superficial = parse::parse_generators(&self.pin.superficial, ring.core())?;

        Ok(BuiltInstance {
            spec: self.clone(),
            ring,
            ideal,
            pinned_reduction,
            pinned_superficial,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_roundtrip_and_build() {
        let text = r#"
seed = 7
[ring]
field = "Q"
vars = ["x", "y", "z"]
[ideal]
gens = ["x^2", "y^2", "z^2", "x*y"]
[flags]
integrally_closed = "verify"
[limits]
horizon = 10
"#;
        let spec = InstanceSpec::from_toml(text).unwrap();
        assert_eq!(spec.seed, 7);
        let built = spec.build().unwrap();
        assert_eq!(built.ring.dim(), 3);
        assert_eq!(built.ideal.num_gens(), 4);
        // json round-trip preserves the spec
        let js = serde_json::to_string(&spec).unwrap();
        let back: InstanceSpec = serde_json::from_str(&js).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn bad_field_and_unknown_variable() {
        let text = r#"
[ring]
field = "R"
vars = ["x"]
[ideal]
gens = ["x"]
"#;
        assert!(InstanceSpec::from_toml(text).unwrap().build().is_err());
        let text2 = r#"
[ring]
field = "Q"
vars = ["x"]
[ideal]
gens = ["x + w"]
"#;
        let err = match InstanceSpec::from_toml(text2).unwrap().build() {
            Err(e) => e,
            Ok(_) => panic!("expected unknown-variable error"),
        };
        assert!(matches!(err, Error::UnknownVariable(_)));
    }

    #[test]
    fn verify_flag_requires_monomials() {
        let text = r#"
[ring]
field = "Q"
vars = ["x", "y"]
[ideal]
gens = ["x + y", "y^2"]
[flags]
integrally_closed = "verify"
"#;
        assert!(InstanceSpec::from_toml(text).unwrap().build().is_err());
    }
}
