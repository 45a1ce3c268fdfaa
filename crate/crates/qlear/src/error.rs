//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the library.
#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    /// An operation that needs at least one vector received none.
    #[error("input contains no vectors")]
    EmptyInput,

    /// Vector or matrix dimensions do not agree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A vector component is NaN or infinite.
    #[error("input contains a non-finite component")]
    NonFiniteInput,

    /// The accumulator trace is zero (all accumulated vectors were zero), so
    /// no trace-one state exists.
    #[error("accumulator trace is zero; no density matrix can be formed")]
    ZeroTrace,

    /// The iterative eigensolver did not converge; the input matrix is
    /// corrupt or numerically degenerate.
    #[error("eigensolver failed to converge")]
    EigensolverFailure,

    /// A matrix supplied as symmetric is not, beyond tolerance.
    #[error("matrix is not symmetric")]
    NotSymmetric,

    /// A density matrix must have unit trace.
    #[error("matrix trace {trace} is not 1 within tolerance")]
    InvalidTrace { trace: f64 },

    /// A matrix required to be positive semidefinite has a significantly
    /// negative eigenvalue.
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    /// The entropy order is outside the valid range (`q > 0`, `q != 1`).
    #[error("entropy order q = {0} is invalid: q must be finite, > 0 and != 1")]
    InvalidQ(f64),

    /// A direction vector for a projector must have unit norm.
    #[error("direction vector norm {norm} deviates from 1 beyond tolerance")]
    NonUnitVector { norm: f64 },

    /// More neighbors were requested than the pool contains.
    #[error("k = {k} exceeds pool size {pool}")]
    KTooLarge { k: usize, pool: usize },

    /// A class pool with no vectors.
    #[error("class pool {label:?} is empty")]
    EmptyPool { label: String },

    /// Classification needs at least two classes.
    #[error("at least two classes are required")]
    SingleClass,

    /// Two pools carry the same label.
    #[error("duplicate class label {0:?}")]
    DuplicateLabel(String),

    /// A structurally invalid parameter value.
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    /// A sampling fraction outside its valid range.
    #[error("fraction {0} is outside the valid range")]
    InvalidFraction(f64),

    /// A class has too few samples for the requested operation.
    #[error("class {label:?} has {got} samples; at least {need} are required")]
    ClassTooSmall {
        label: String,
        got: usize,
        need: usize,
    },

    /// A pool has too few vectors for the requested operation.
    #[error("pool {label:?} has {got} vectors; at least {need} are required")]
    PoolTooSmall {
        label: String,
        got: usize,
        need: usize,
    },

    /// A test label that none of the pools carries.
    #[error("label {0:?} is not present in the pools")]
    UnknownLabel(String),

    /// A parameter grid axis with no values.
    #[error("parameter grid axis {0:?} is empty")]
    EmptyGrid(&'static str),

    /// A batch element failed; the index points at the offending sample.
    #[error("sample {index}: {source}")]
    SampleFailed {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    /// An operation that needs at least two samples received one.
    #[error("at least two samples are required")]
    SingleSample,

    /// A dataset file with no data rows.
    #[error("dataset contains no rows")]
    EmptyFile,

    /// A cell that does not parse as a number.
    #[error("row {row}, column {column}: cannot parse {value:?} as a number")]
    ParseError {
        row: u64,
        column: usize,
        value: String,
    },

    /// A row whose field count differs from the first row's.
    #[error("row {row} has {got} fields; expected {expected}")]
    InconsistentColumns {
        row: u64,
        expected: usize,
        got: usize,
    },

    /// A label column index outside the file's columns.
    #[error("label column {index} is out of range for {columns} columns")]
    InvalidLabelColumn { index: usize, columns: usize },

    /// CSV structure error not covered by a more specific variant.
    #[error("malformed CSV: {0}")]
    MalformedCsv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
