use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes used by the command-line driver.
pub mod exit {
    pub const CONFIG: i32 = 2;
    pub const DATA: i32 = 3;
    pub const NUMERICAL: i32 = 4;
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("cell {cell}: {source}")]
    Cell {
        cell: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => exit::CONFIG,
            Error::Data(_) | Error::Io { .. } => exit::DATA,
            Error::Numerical(_) => exit::NUMERICAL,
            Error::Cell { source, .. } => source.exit_code(),
        }
    }
}

impl From<crate::fit::FitError> for Error {
    fn from(e: crate::fit::FitError) -> Self {
        Error::Numerical(e.to_string())
    }
}

impl From<crate::stats::StatsError> for Error {
    fn from(e: crate::stats::StatsError) -> Self {
        use crate::stats::StatsError as S;
        match e {
            S::Incomplete(..) | S::EmptyAxis(_) | S::SingleValueAxis(..) | S::Ragged => {
                Error::Data(e.to_string())
            }
            _ => Error::Numerical(e.to_string()),
        }
    }
}

impl From<crate::rankdiv::RankError> for Error {
    fn from(e: crate::rankdiv::RankError) -> Self {
        Error::Data(e.to_string())
    }
}

impl From<crate::scales::ScaleError> for Error {
    fn from(e: crate::scales::ScaleError) -> Self {
        Error::Config(e.to_string())
    }
}

impl From<crate::ingest::SpecError> for Error {
    fn from(e: crate::ingest::SpecError) -> Self {
        Error::Config(e.to_string())
    }
}

impl From<crate::ingest::WindowError> for Error {
    fn from(e: crate::ingest::WindowError) -> Self {
        Error::Config(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
