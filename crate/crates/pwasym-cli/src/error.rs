use std::fmt;

use pwasym::Error;

/// Command-line error classes, one exit code each:
/// 2 parse, 3 model validity, 4 spec misalignment, 5 runtime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliError {
    Parse(String),
    Model(String),
    Spec(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Model(_) => 3,
            CliError::Spec(_) => 4,
            CliError::Runtime(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(msg) => write!(f, "parse error: {msg}"),
            CliError::Model(msg) => write!(f, "model error: {msg}"),
            CliError::Spec(msg) => write!(f, "specification error: {msg}"),
            CliError::Runtime(msg) => write!(f, "runtime error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::SpecStateNotAMode(_) => CliError::Spec(e.to_string()),
            Error::UnboundedRegion
            | Error::EmptyPolytope
            | Error::DimensionMismatch { .. }
            | Error::EmptyCollection
            | Error::SpecBlockingState(_)
            | Error::Model(_) => CliError::Model(e.to_string()),
            Error::LambdaOutOfRange => CliError::Parse(e.to_string()),
            Error::OutsideRegion | Error::InputNotAdmissible | Error::NoAdmissibleInput => {
                CliError::Runtime(e.to_string())
            }
        }
    }
}
