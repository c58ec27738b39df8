use thiserror::Error;

use crate::irreducible::IrreducibilityStatus;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("trinomial needs d > j > 0, got d={d}, j={j}")]
    InvalidTrinomial { d: u32, j: u32 },

    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,

    #[error("polynomial {0} is not monic")]
    NotMonic(String),

    #[error("polynomial must have degree at least {min}, got {got}")]
    DegreeTooSmall { min: usize, got: usize },

    #[error("degree {degree} exceeds the supported maximum {max}")]
    UnsupportedDegree { degree: usize, max: usize },

    #[error("polynomial is not squarefree: gcd(p, p') = {gcd}")]
    NotSquarefree { gcd: String },

    #[error("could not certify root enclosures for {poly} at {bits} bits")]
    CertificationFailure { poly: String, bits: u32 },

    #[error("annulus boundary {boundary} meets the modulus interval of root {index} at the precision cap")]
    BoundaryOverlap { boundary: String, index: usize },

    #[error("annulus bounds must satisfy 0 < low < high")]
    InvalidAnnulus,

    #[error("epsilon {epsilon} outside the admissible range ({low}, {high})")]
    EpsilonOutOfRange {
        epsilon: String,
        low: String,
        high: String,
    },

    #[error("|h| = {0} is below 3")]
    SmallH(i64),

    #[error("a modulus interval still contains 0 at the precision cap")]
    ModulusContainsZero,

    #[error("need d > k >= 1, got k={k}, d={d}")]
    InvalidDimension { k: usize, d: usize },

    #[error("row {row} has a non-positive coefficient")]
    NonPositiveCoefficient { row: usize },

    #[error("skew condition fails for rows {i} and {j}")]
    SkewViolation { i: usize, j: usize },

    #[error("half-space system has {a} a-values but {b} b-values")]
    MismatchedRows { a: usize, b: usize },

    #[error("vertex enumeration produced {found} vertices, expected {expected}")]
    VertexCount { found: usize, expected: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("exponent {index} is negative")]
    NegativeExponent { index: usize },

    #[error("input rejected: irreducibility verdict is {0}")]
    NotIrreducible(IrreducibilityStatus),

    #[error("|p(0)| must be 1 for this check, polynomial is {0}")]
    NotUnit(String),

    #[error("polynomial {0} is cyclotomic")]
    RootOfUnity(String),

    #[error("subset {subset} is not applicable: {reason}")]
    InvalidSubset { subset: String, reason: String },

    #[error("all moduli are tied; there is no gap to report")]
    NoGap,

    #[error("precision cap {bits} reached before |alpha_{index}| could be separated from the smallest modulus")]
    GapIndeterminate { index: usize, bits: u32 },

    #[error("hypothesis d > 3k fails for d={d}, k={k}")]
    BoundsHypothesis { d: u32, k: u32 },

    #[error("exponent fit: {0}")]
    Fit(String),

    #[error("consistency failure: {0}")]
    Consistency(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by exhausting the precision ladder rather than
    /// by bad input.
    pub fn is_precision_cap(&self) -> bool {
        matches!(
            self,
            Error::CertificationFailure { .. }
                | Error::BoundaryOverlap { .. }
                | Error::ModulusContainsZero
                | Error::GapIndeterminate { .. }
                | Error::NotIrreducible(IrreducibilityStatus::Unknown)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
