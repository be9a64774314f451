use thiserror::Error;

/// Errors shared across the crate.
///
/// Numeric verdicts that merely fail to decide (a sign staying `Unknown`, an
/// empty relation list) are not errors; they are encoded in the result types.
/// Errors are reserved for violated preconditions and exhausted escalation.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside an operation's mathematical domain (e.g. log of a ball
    /// not certified positive).
    #[error("domain error: {0}")]
    Domain(String),

    /// Structural precondition violated (e.g. skew-symmetry shortcut on an
    /// even dimension).
    #[error("structure error: {0}")]
    Structure(String),

    /// Malformed input (zero polynomial, dependent rows, bad flag value).
    #[error("input error: {0}")]
    Input(String),

    /// Precision escalation hit the configured cap while a candidate was
    /// still ambiguous.
    #[error("precision exhausted at {prec_bits} bits: {context}")]
    PrecisionExhausted { prec_bits: u32, context: String },

    /// A defining polynomial was found (or could not be certified not) to be
    /// reducible over ℚ.
    #[error("reducible polynomial: {0}")]
    Reducible(String),

    /// The field does not contain all roots of its defining polynomial.
    #[error("field is not Galois: {0}")]
    NotGalois(String),

    /// An element claimed to be a unit is not one.
    #[error("not a unit: {0}")]
    NotUnit(String),

    /// A generating set has the wrong rank or count.
    #[error("rank error: {0}")]
    Rank(String),

    /// A search returned nothing inside the requested bound.
    #[error("search empty: {0}")]
    SearchEmpty(String),

    /// The torus admits a ℚ-rational character, so it has no embedding into
    /// a product of norm-one tori.
    #[error("isotropic torus: {0}")]
    Isotropic(String),

    /// Text input failed to parse; `pos` is a byte offset into the input.
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// Division by zero in exact arithmetic.
    #[error("division by zero")]
    DivisionByZero,

    /// Internal invariant violation. Indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub(crate) fn structure(msg: impl Into<String>) -> Self {
        Error::Structure(msg.into())
    }
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
