//! `samuel` is an exact computer-algebra engine for the local multiplicity
//! theory of m-primary ideals in (quotients of) polynomial rings.
//!
//! Everything is computed over exact coefficient fields (arbitrary-precision
//! rationals or a prime field): reduced Groebner bases, colengths, ideal
//! quotients and intersections, Hilbert-Samuel functions and coefficients,
//! minimal reductions and reduction numbers, Ratliff-Rush closures, and the
//! numerical invariants `b_I`/`s_I` that detect whether the Ratliff-Rush
//! filtration behaves well modulo a superficial element.  On top of the
//! kernel, [`theorems`] evaluates a family of inequalities and identities
//! relating `e_3`, `e_4` and reduction numbers, producing structured
//! [`theorems::Verdict`] records, and [`pipeline`] drives the whole analysis
//! for an instance file.
//!
//! There is no floating point anywhere in this crate.

pub mod batch;
pub mod error;
pub mod field;
pub mod filtration;
pub mod golden;
pub mod groebner;
pub mod hilbert;
pub mod ideal;
pub mod instance;
pub mod monomial;
pub mod parse;
pub mod pipeline;
pub mod poly;
pub mod ratliff_rush;
pub mod reduction;
pub mod report;
pub mod ring;
pub mod simplex;
pub mod theorems;

pub use error::{Error, Result};
pub use field::{Coeff, CoeffField};
pub use filtration::Filtration;
pub use groebner::GroebnerBasis;
pub use ideal::Ideal;
pub use monomial::{Monomial, MonomialOrder};
pub use poly::Polynomial;
pub use ring::{AmbientRing, RingCore};
