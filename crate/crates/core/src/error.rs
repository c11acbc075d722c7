use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("entry array has length {found}, expected {expected}")]
    EntryCount { expected: usize, found: usize },

    #[error("non-finite matrix entry at index {index}")]
    NonFinite { index: usize },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("POVM completeness violated: Kraus matrices do not sum up to the identity (deviation {deviation:e})")]
    PovmIncomplete { deviation: f64 },

    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("column {column} sums to {sum}, expected 1")]
    ColumnSum { column: usize, sum: f64 },

    #[error("entry ({row}, {col}) is negative")]
    NegativeEntry { row: usize, col: usize },

    #[error("operator is not trace preserving (deviation {deviation:e})")]
    NotTracePreserving { deviation: f64 },

    #[error("zero vector has no pure state")]
    ZeroVector,

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("empty scale")]
    EmptyScale,

    #[error("duplicate symbol {0:?}")]
    DuplicateSymbol(String),

    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),

    #[error("word enumeration of {count} words exceeds the cap of {cap}")]
    EnumerationCap { count: u128, cap: u64 },

    #[error("outcome probability {probability:e} is too small to condition on")]
    ZeroProbability { probability: f64 },

    #[error("not observable: {0}")]
    NotObservable(String),

    #[error("Cesaro average did not reach residual {tol:e} within {doublings} doublings (last residual {residual:e})")]
    CesaroNotConverged {
        tol: f64,
        doublings: usize,
        residual: f64,
    },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("edge ({0}, {1}) references a node outside the graph")]
    NodeOutOfRange(usize, usize),

    #[error("graph is not a disjoint union of cycles: {0}")]
    NotCycleCover(String),

    #[error("empty hidden-state space")]
    EmptySpace,

    #[error("duplicate hidden state {0:?}")]
    DuplicateState(String),

    #[error("hidden-state spaces differ")]
    SpaceMismatch,

    #[error("scale value {0:?} is not numeric")]
    NonNumericSymbol(String),

    #[error("scale value {0:?} is not -1 or +1")]
    NotPlusMinusOne(String),

    #[error("components sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },

    #[error("word {word:?} has negative probability {probability:e}")]
    NegativeProbability { word: String, probability: f64 },

    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// True when the error reports malformed or inconsistent input rather
    /// than a failed analysis.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::NoConvergence { .. }
                | Error::EnumerationCap { .. }
                | Error::ZeroProbability { .. }
                | Error::NotObservable(_)
                | Error::CesaroNotConverged { .. }
                | Error::NegativeProbability { .. }
        )
    }
}
