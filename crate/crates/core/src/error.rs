use crate::field::FieldSpec;

/// Errors shared across the crate.
///
/// Validation-style operations (`validate_algebra`, `validate_module`,
/// `validate_context`) do not use this type; they return reports listing
/// every defect instead of failing on the first one.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("matrix is singular")]
    Singular,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not central")]
    NotCentral,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("block weight must be nonzero")]
    ZeroWeight,
    #[error("algebra is not semisimple")]
    NotSemisimple,
    #[error("algebra does not split over its ground field: {0}")]
    NotSplit(String),
    #[error(
        "splitting search exhausted its budget; idempotent data unavailable for this presentation"
    )]
    SplitSearchExhausted,
    #[error("operation requires characteristic 0 (the regular trace criterion is invalid in characteristic p)")]
    UnsupportedCharacteristic,
    #[error("the functional is not a Frobenius form (degenerate pairing)")]
    NotFrobenius,
    #[error("the Frobenius form is not symmetric")]
    AsymmetricForm,
    #[error("the dual-basis map is singular (module is not projective over this algebra)")]
    SingularPsi,
    #[error("operands live over different algebras")]
    AlgebraMismatch,
    #[error("matrix does not intertwine the module actions")]
    NotIntertwiner,
    #[error("module is not a generator: {0}")]
    NotGenerator(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid multiplication table: {0}")]
    InvalidGroupTable(String),
    #[error("invalid Morita context: {0}")]
    InvalidContext(String),
    #[error("block weights do not express the form (inconsistent input)")]
    InconsistentWeights,
}

pub type Result<T> = std::result::Result<T, Error>;
