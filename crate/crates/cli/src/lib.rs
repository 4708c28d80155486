//! Library side of the `chmean` command-line tool: argument parsing helpers,
//! subcommand bodies, and the CSV/SVG emitters for weight sweeps.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod complex_arg;
pub mod sweep;

use thiserror::Error;

/// Process exit status, one per failure class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    InputError = 1,
    DegenerateMean = 2,
    VerificationFailure = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Library(#[from] chmean::Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Library(chmean::Error::DegenerateMean { .. }) => Exit::DegenerateMean,
            CliError::Verification(_) => Exit::VerificationFailure,
            _ => Exit::InputError,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
