//! Lazily evaluated ideal filtrations `{I_n}`.
//!
//! Built-ins: the adic filtration of an ideal, its Ratliff-Rush filtration,
//! the image of a filtration in a quotient ring, and an explicit head with
//! an adic tail.  Values are cached per index; the Ratliff-Rush kind serves
//! `I^n` directly once agreement with the adic filtration has been witnessed
//! at two consecutive indices (and keeps that decision auditable in its
//! stabilization records).

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::ratliff_rush;
use crate::ring::AmbientRing;

#[derive(Clone)]
pub struct Filtration {
    inner: Arc<Inner>,
}

struct Inner {
    ring: Arc<AmbientRing>,
    kind: Kind,
    cache: Mutex<BTreeMap<u32, Arc<Ideal>>>,
}

enum Kind {
    Adic(Ideal),
    RatliffRush {
        adic: Filtration,
        window: u32,
        state: Mutex<RrState>,
    },
    Image {
        of: Filtration,
    },
    Explicit {
        head: Vec<Ideal>,
    },
}

#[derive(Default)]
struct RrState {
    /// Indices `n` where the closure was computed and found equal to `I^n`.
    agreements: Vec<u32>,
    /// Once two consecutive agreements are seen, serve `I^n` beyond this.
    settled_from: Option<u32>,
    /// Chain stabilization records per computed index.
    records: BTreeMap<u32, ratliff_rush::StabilizationRecord>,
}

impl Filtration {
    /// The `I`-adic filtration `{I^n}`.
    pub fn adic(ideal: Ideal) -> Filtration {
        let ring = Arc::clone(ideal.ring());
        Filtration {
            inner: Arc::new(Inner {
                ring,
                kind: Kind::Adic(ideal),
                cache: Mutex::new(BTreeMap::new()),
            }),
        }
    }

    /// The Ratliff-Rush filtration of `{I^n}`; shares the adic power cache.
    pub fn ratliff_rush(adic: Filtration, window: u32) -> Filtration {
        let ring = Arc::clone(adic.ring());
        Filtration {
            inner: Arc::new(Inner {
                ring,
                kind: Kind::RatliffRush {
                    adic,
                    window,
                    state: Mutex::new(RrState::default()),
                },
                cache: Mutex::new(BTreeMap::new()),
            }),
        }
    }

    /// Image filtration `{I_n R'}` in a quotient `R'` of the current ring.
    pub fn image(of: Filtration, ring: Arc<AmbientRing>) -> Filtration {
        Filtration {
            inner: Arc::new(Inner {
                ring,
                kind: Kind::Image { of },
                cache: Mutex::new(BTreeMap::new()),
            }),
        }
    }

    /// Explicit head `I_0, I_1, .., I_k` continued by the adic rule
    /// `I_n = I_k * I_1^{n-k}` for `n > k`.
    pub fn explicit(head: Vec<Ideal>) -> Result<Filtration> {
        if head.len() < 2 {
            return Err(Error::BadInstance(
                "explicit filtration needs I_0 and I_1".into(),
            ));
        }
        if !head[0].is_unit_ideal() {
            return Err(Error::BadInstance("I_0 must be the unit ideal".into()));
        }
        let ring = Arc::clone(head[0].ring());
        Ok(Filtration {
            inner: Arc::new(Inner {
                ring,
                kind: Kind::Explicit { head },
                cache: Mutex::new(BTreeMap::new()),
            }),
        })
    }

    pub fn ring(&self) -> &Arc<AmbientRing> {
        &self.inner.ring
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.inner.kind {
            Kind::Adic(_) => "adic",
            Kind::RatliffRush { .. } => "ratliff-rush",
            Kind::Image { .. } => "image",
            Kind::Explicit { .. } => "explicit",
        }
    }

    /// `I_1`, the ideal the filtration is admissible for.
    pub fn first(&self) -> Result<Arc<Ideal>> {
        self.nth(1)
    }

    pub fn nth(&self, n: u32) -> Result<Arc<Ideal>> {
        if let Some(hit) = self.inner.cache.lock().unwrap().get(&n) {
            return Ok(Arc::clone(hit));
        }
        let value = self.compute(n)?;
        let mut cache = self.inner.cache.lock().unwrap();
        Ok(Arc::clone(cache.entry(n).or_insert_with(|| Arc::new(value))))
    }

    fn compute(&self, n: u32) -> Result<Ideal> {
        if n == 0 {
            return Ok(Ideal::unit(&self.inner.ring));
        }
        match &self.inner.kind {
            Kind::Adic(ideal) => {
                if n == 1 {
                    return Ok(ideal.clone());
                }
                let prev = self.nth(n - 1)?;
                prev.product(ideal)
            }
            Kind::RatliffRush {
                adic,
                window,
                state,
            } => {
                let adic_n = adic.nth(n)?;
                if let Some(from) = state.lock().unwrap().settled_from {
                    if n >= from {
                        return Ok((*adic_n).clone());
                    }
                }
                let base = adic.nth(1)?;
                let (closure, record) =
                    ratliff_rush::rr_closure_of_power(&base, adic, n, *window)?;
                let equal = closure.equals(&adic_n)?;
                let mut st = state.lock().unwrap();
                st.records.insert(n, record);
                if equal {
                    st.agreements.push(n);
                    st.agreements.sort_unstable();
                    st.agreements.dedup();
                    if st.settled_from.is_none() {
                        if let Some(w) = st.agreements.windows(2).find(|w| w[1] == w[0] + 1) {
                            st.settled_from = Some(w[1]);
                        }
                    }
                }
                Ok(closure)
            }
            Kind::Image { of } => {
                let src = of.nth(n)?;
                Ideal::new(Arc::clone(&self.inner.ring), src.generating_set())
            }
            Kind::Explicit { head } => {
                let k = head.len() - 1;
                if (n as usize) <= k {
                    return Ok(head[n as usize].clone());
                }
                let prev = self.nth(n - 1)?;
                prev.product(&head[1])
            }
        }
    }

    /// Stabilization records collected by a Ratliff-Rush filtration.
    pub fn rr_records(&self) -> Vec<(u32, ratliff_rush::StabilizationRecord)> {
        match &self.inner.kind {
            Kind::RatliffRush { state, .. } => state
                .lock()
                .unwrap()
                .records
                .iter()
                .map(|(n, r)| (*n, r.clone()))
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Verify the admissibility axioms on all indices up to `horizon`:
    /// `I_{n+1} <= I_n`, `I_m I_n <= I_{m+n}` (spot-checked with m = 1),
    /// and `I^n <= I_n <= I^{n-k}` for a witnessed `k`.
    pub fn check_admissible(&self, horizon: u32) -> Result<u32> {
        let i1 = self.nth(1)?;
        let adic = Filtration::adic((*i1).clone());
        let mut k_witness = 0u32;
        for n in 1..=horizon {
            let cur = self.nth(n)?;
            let next = self.nth(n + 1)?;
            if !cur.contains_ideal(&next)? {
                return Err(Error::Inconsistency(format!(
                    "filtration not descending at n = {n}"
                )));
            }
            let prod = cur.product(&i1)?;
            if !next.contains_ideal(&prod)? {
                return Err(Error::Inconsistency(format!(
                    "filtration not multiplicative at n = {n}"
                )));
            }
            let adic_n = adic.nth(n)?;
            if !cur.contains_ideal(&adic_n)? {
                return Err(Error::Inconsistency(format!(
                    "I^{n} not inside I_{n}"
                )));
            }
            let mut k = k_witness;
            loop {
                if n <= k {
                    break;
                }
                let loose = adic.nth(n - k)?;
                if loose.contains_ideal(&cur)? {
                    break;
                }
                k += 1;
                if k > horizon {
                    return Err(Error::HorizonExhausted {
                        what: format!("admissibility witness k at n = {n}"),
                        horizon,
                    });
                }
            }
            k_witness = k;
        }
        Ok(k_witness)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CoeffField;
    use crate::monomial::MonomialOrder;

    fn ring2() -> Arc<AmbientRing> {
        AmbientRing::polynomial_ring(
            vec!["x".into(), "y".into()],
            CoeffField::Rationals,
            MonomialOrder::Grevlex,
        )
    }

    #[test]
    fn adic_powers_cache_and_match() {
        let r = ring2();
        let m = Ideal::maximal(&r);
        let f = Filtration::adic(m.clone());
        assert!(f.nth(0).unwrap().is_unit_ideal());
        let m3 = f.nth(3).unwrap();
        assert!(m3.equals(&m.power(3).unwrap()).unwrap());
        // cached value is shared
        assert!(Arc::ptr_eq(&f.nth(3).unwrap(), &m3));
    }

    #[test]
    fn adic_is_admissible() {
        let r = ring2();
        let i = Ideal::from_texts(&r, &["x^2", "y^3", "x*y"]).unwrap();
        let f = Filtration::adic(i);
        assert_eq!(f.check_admissible(4).unwrap(), 0);
    }

    #[test]
    fn explicit_head_with_adic_tail() {
        let r = ring2();
        let m = Ideal::maximal(&r);
        let head = vec![Ideal::unit(&r), m.power(2).unwrap()];
        let f = Filtration::explicit(head).unwrap();
        // I_n = (m^2)^n here
        assert!(f.nth(3).unwrap().equals(&m.power(6).unwrap()).unwrap());
    }
}
