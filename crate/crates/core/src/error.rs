use thiserror::Error;

/// Crate-wide error type.
///
/// The CLI maps these onto exit codes: malformed input is a usage error,
/// `Inconsistency` is an internal cross-check failure and aborts the run,
/// everything else is reported per stage inside a partial report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("coefficient not representable in {0}: {1}")]
    BadCoefficient(String, String),

    #[error("operands live in different rings")]
    RingMismatch,

    #[error("monomials have different variable counts ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("negative exponent {0} for ideal power")]
    NegativePower(i64),

    #[error("colon by the zero ideal")]
    ZeroIdeal,

    #[error("ideal is not m-primary: no power of `{var}` found up to degree {cap}")]
    NotMPrimary { var: String, cap: u32 },

    #[error("m-primary test undetermined for `{var}` at degree cap {cap}")]
    PrimaryUndetermined { var: String, cap: u32 },

    #[error("containment failed: {0}")]
    ContainmentFailed(String),

    #[error("generator is not a monomial: {0}")]
    NonMonomialGenerator(String),

    #[error("horizon {horizon} exhausted: {what}")]
    HorizonExhausted { what: String, horizon: u32 },

    #[error("not a reduction within horizon {0}")]
    NotAReduction(u32),

    #[error("random search exhausted after {tries} draws: {what}")]
    RetriesExhausted { what: String, tries: u32 },

    #[error("dimension is {found}, operation requires {needs}")]
    WrongDimension { needs: String, found: usize },

    #[error("internal consistency failure: {0}")]
    Inconsistency(String),

    #[error("invalid instance: {0}")]
    BadInstance(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that indicate a bug in the engine itself rather than
    /// bad input or an exhausted search budget.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Inconsistency(_))
    }
}
