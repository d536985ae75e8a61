use hhlattice::lattice::{LatticeError, SitePos};
use hhlattice::reduction::ReductionError;
use serde::Serialize;
use thiserror::Error;

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_SINGULAR: u8 = 2;
pub const EXIT_FAILED: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// A zero denominator met during evolution or iteration.
    #[error("{message}")]
    Singular {
        message: String,
        site: Option<SitePos>,
        index: Option<i64>,
        last_good_index: Option<i64>,
    },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// Machine-readable form written to stderr on failure.
#[derive(Serialize)]
pub struct ErrorPayload<'a> {
    pub schema_version: u32,
    pub error: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub site: Option<&'a SitePos>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub last_good_index: Option<i64>,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Singular { .. } => EXIT_SINGULAR,
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
        }
    }

    pub fn payload(&self) -> ErrorPayload<'_> {
        let (error, site, index, last_good_index) = match self {
            CliError::Usage(_) => ("usage", None, None, None),
            CliError::Io(_) => ("io", None, None, None),
            CliError::Singular { site, index, last_good_index, .. } => {
                ("singular", site.as_ref(), *index, *last_good_index)
            }
        };
        ErrorPayload {
            schema_version: hhlattice::SCHEMA_VERSION,
            error,
            message: self.to_string(),
            site,
            index,
            last_good_index,
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::Pole { site } | LatticeError::SingularStep { site } => CliError::Singular {
                message: e.to_string(),
                site: Some(site),
                index: None,
                last_good_index: None,
            },
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Pole { index } | ReductionError::SingularDenominator { index, .. } => CliError::Singular {
                message: e.to_string(),
                site: None,
                index: Some(index),
                last_good_index: Some(index - 1),
            },
            other => CliError::Usage(other.to_string()),
        }
    }
}
