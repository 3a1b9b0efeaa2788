//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("row {row}: {msg}")]
    MalformedRow { row: u64, msg: String },

    #[error("duplicate observation for ticker {ticker} on {date}")]
    DuplicateObservation { ticker: String, date: String },

    #[error("conflicting sector rows for ticker {ticker}: {first} vs {second}")]
    ConflictingSector {
        ticker: String,
        first: String,
        second: String,
    },

    #[error("ticker {ticker}: {msg}")]
    InvalidSeries { ticker: String, msg: String },

    #[error("year {year} has no trading days")]
    EmptyYear { year: i32 },

    #[error("{what} needs at least {min} values, got {got}")]
    NotEnoughData {
        what: String,
        min: usize,
        got: usize,
    },

    #[error("ticker {ticker} has zero return variance; correlation is undefined")]
    ZeroVariance { ticker: String },

    #[error("ticker sets do not match: {msg}")]
    TickerMismatch { msg: String },

    #[error("{metric} is constant over the selection; correlation is undefined")]
    ConstantMetric { metric: String },

    #[error("internal consistency check failed: {msg}")]
    Inconsistent { msg: String },

    #[error("invalid synthetic spec: field `{field}`: {msg}")]
    InvalidSpec { field: String, msg: String },

    #[error("invalid config: {msg}")]
    InvalidConfig { msg: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("write error: {0}")]
    Write(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("stage {stage} failed for year {year}: {source}")]
    Stage {
        stage: &'static str,
        year: i32,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn stage(stage: &'static str, year: i32, source: Error) -> Self {
        Error::Stage {
            stage,
            year,
            source: Box::new(source),
        }
    }
}
