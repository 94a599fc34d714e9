//! Seeded random-instance generation and the batch runner.
//!
//! Instances are m-primary monomial ideals: a pure power of every variable
//! is forced in, then a few random monomials are added.  With `closure` on,
//! each ideal is replaced by its monomial integral closure, so the
//! integrally-closed hypothesis is verified by construction.  Generation is
//! deterministic per seed.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::ideal::Ideal;
use crate::instance::{FlagSpec, IdealSpec, InstanceSpec, LimitSpec, PinSpec, RingSpec};
use crate::monomial::{Monomial, MonomialOrder};
use crate::pipeline;
use crate::report::Report;
use crate::ring::AmbientRing;

#[derive(Debug, Clone)]
pub struct BatchParams {
    pub variables: usize,
    pub max_degree: u16,
    pub count: usize,
    pub closure: bool,
    pub field: String,
}

impl Default for BatchParams {
    fn default() -> Self {
        BatchParams {
            variables: 3,
            max_degree: 5,
            count: 10,
            closure: true,
            field: "Q".into(),
        }
    }
}

const VAR_NAMES: [&str; 4] = ["x", "y", "z", "w"];

/// Generate `count` instance specs, deterministically from `seed`.
pub fn batch_generate(params: &BatchParams, seed: u64) -> Result<Vec<InstanceSpec>> {
    if params.variables < 1 || params.variables > 4 {
        return Err(Error::BadInstance("variables must be 1..=4".into()));
    }
    if params.max_degree < 1 || params.max_degree > 8 {
        return Err(Error::BadInstance("max_degree must be 1..=8".into()));
    }
    if params.count > 10_000 {
        return Err(Error::BadInstance("count must be at most 10000".into()));
    }
    let vars: Vec<String> = VAR_NAMES[..params.variables]
        .iter()
        .map(|s| s.to_string())
        .collect();
    // Closure computation is field-independent; use Q internally.
    let scratch = AmbientRing::polynomial_ring(
        vars.clone(),
        CoeffField::Rationals,
        MonomialOrder::Grevlex,
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(params.count);
    for _ in 0..params.count {
        let d = params.variables;
        let mut mons: Vec<Monomial> = (0..d)
            .map(|i| Monomial::var_pow(d, i, rng.random_range(1..=params.max_degree)))
            .collect();
        let extras = rng.random_range(0..=(d as u32 + 2));
        for _ in 0..extras {
            for _attempt in 0..50 {
                let exps: Vec<u16> = (0..d)
                    .map(|_| rng.random_range(0..=params.max_degree))
                    .collect();
                let m = Monomial::new(smallvec::SmallVec::from_vec(exps));
                let deg = m.degree();
                if deg >= 1 && deg <= params.max_degree as u32 {
                    mons.push(m);
                    break;
                }
            }
        }
        let one = scratch.field().one();
        let gens: Vec<_> = mons
            .iter()
            .map(|m| crate::poly::Polynomial::monomial(scratch.core(), m.clone(), one.clone()))
            .collect();
        let mut ideal = Ideal::new(std::sync::Arc::clone(&scratch), gens)?;
        if params.closure {
            ideal = ideal.monomial_integral_closure()?;
        }
        let gen_strings: Vec<String> = ideal
            .basis()
            .elements()
            .iter()
            .map(|g| g.to_string())
            .collect();

        out.push(InstanceSpec {
            ring: RingSpec {
                field: params.field.clone(),
                vars: vars.clone(),
                quotient: Vec::new(),
                order: None,
            },
            ideal: IdealSpec { gens: gen_strings },
            pin: PinSpec::default(),
            flags: FlagSpec {
                integrally_closed: if params.closure {
                    "verify".into()
                } else {
                    "off".into()
                },
                ..FlagSpec::default()
            },
            limits: LimitSpec::default(),
            seed: rng.random(),
        });
    }
    Ok(out)
}

/// Run a batch across `jobs` worker threads; reports come back in instance
/// order regardless of completion order.
pub fn run_batch(specs: &[InstanceSpec], jobs: usize) -> Vec<Result<Report>> {
    let jobs = jobs.max(1).min(specs.len().max(1));
    if jobs == 1 {
        return specs.iter().map(pipeline::run_report).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<Report>>>> =
        specs.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= specs.len() {
                    break;
                }
                let report = pipeline::run_report(&specs[i]);
                *slots[i].lock().unwrap() = Some(report);
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.into_inner().unwrap().expect("worker filled slot"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let params = BatchParams {
            count: 5,
            ..Default::default()
        };
        let a = batch_generate(&params, 7).unwrap();
        let b = batch_generate(&params, 7).unwrap();
        assert_eq!(a, b);
        let c = batch_generate(&params, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn closure_instances_verify() {
        let params = BatchParams {
            variables: 2,
            max_degree: 4,
            count: 6,
            closure: true,
            field: "Q".into(),
        };
        for spec in batch_generate(&params, 3).unwrap() {
            let built = spec.build().unwrap();
            let cl = built.ideal.monomial_integral_closure().unwrap();
            assert!(cl.equals(&built.ideal).unwrap());
            assert!(built.ideal.is_m_primary().is_primary());
        }
    }

    #[test]
    fn parameter_validation() {
        let mut p = BatchParams::default();
        p.variables = 5;
        assert!(batch_generate(&p, 0).is_err());
    }
}
