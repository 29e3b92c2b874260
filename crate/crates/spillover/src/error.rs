//! Crate-wide error type. Every named failure mode gets its own variant so
//! callers can match on the condition instead of parsing messages.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    // ---- data ingestion ----
    #[error("column `{column}` not found in {context}")]
    MissingColumn { column: String, context: String },
    #[error("dates not strictly increasing: `{prev}` followed by `{next}`")]
    NonMonotoneDates { prev: String, next: String },
    #[error("gap in monthly dates: `{prev}` followed by `{next}`")]
    MonthGap { prev: String, next: String },
    #[error("non-positive value {value} under log transform in column `{column}` at {date}")]
    NonPositiveLog {
        column: String,
        date: String,
        value: f64,
    },
    #[error("bad value `{raw}` in column `{column}` at row {row}")]
    BadValue {
        column: String,
        row: usize,
        raw: String,
    },
    #[error("bad date `{raw}`: {reason}")]
    BadDate { raw: String, reason: String },
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("event {date} outside range {start}..{end}")]
    EventOutsideRange {
        date: String,
        start: String,
        end: String,
    },

    // ---- remote fetch ----
    #[error("http status {status} from {endpoint}")]
    HttpStatus { status: u16, endpoint: String },
    #[error("series not found (404) at {endpoint}")]
    SeriesNotFound { endpoint: String },
    #[error("transport failure for {endpoint}: {reason}")]
    Transport { endpoint: String, reason: String },
    #[error("malformed payload from {endpoint}: {reason}")]
    MalformedPayload { endpoint: String, reason: String },
    #[error("empty result from {endpoint}")]
    EmptyRemoteResult { endpoint: String },

    // ---- identification ----
    #[error("need at least 2 events for covariance, got {0}")]
    TooFewEvents(usize),
    #[error("zero-variance {column} surprise column")]
    ZeroVariance { column: String },
    #[error("matrix is not symmetric positive definite: {reason}")]
    NotSpd { reason: String },
    #[error("no grid angle satisfies all four sign restrictions")]
    EmptyAdmissibleSet,
    #[error("admissible set is not a contiguous arc (grid too coarse or degenerate covariance)")]
    NonContiguousAdmissibleSet,
    #[error("angle {angle} violates the sign restrictions")]
    AngleNotAdmissible { angle: f64 },

    // ---- estimation ----
    #[error("insufficient observations: need {needed}, have {got}")]
    InsufficientObservations { needed: usize, got: usize },
    #[error("non-positive residual scale for variable `{variable}`; cannot build prior")]
    NonPositiveScale { variable: String },
    #[error("numerically singular system in {context}")]
    SingularSystem { context: String },
    #[error("posterior degrees of freedom {dof} not greater than n-1 = {min}")]
    InvalidDof { dof: f64, min: f64 },
    #[error("empty regression design after lag/horizon trimming (T={t}, h={h})")]
    EmptyDesign { t: usize, h: usize },
    #[error("design matrix rank-deficient in {context} even after ridge fallback")]
    RankDeficient { context: String },
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    // ---- pipeline ----
    #[error("config error: {0}")]
    Config(String),
    #[error("unknown config key `{0}`")]
    UnknownConfigKey(String),
    #[error("DGP is unstable: companion spectral radius {rho} >= 1")]
    UnstableDgp { rho: f64 },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl std::fmt::Display, source: std::io::Error) -> Self {
        Error::Io {
            path: path.to_string(),
            source,
        }
    }
}
