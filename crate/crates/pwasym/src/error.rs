use std::fmt;

/// Errors surfaced by the geometry kernel, the system model and the
/// synthesis layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A halfspace system describes an unbounded region where a polytope
    /// is required.
    UnboundedRegion,
    /// An operation needs a non-empty polytope.
    EmptyPolytope,
    DimensionMismatch { expected: usize, found: usize },
    /// A splitting policy needs a collection with at least one member of
    /// positive diameter.
    EmptyCollection,
    /// Contraction rates must lie strictly between 0 and 1.
    LambdaOutOfRange,
    /// A state outside the analysis region was passed where a region
    /// point is required.
    OutsideRegion,
    /// An input outside the admissible input polytope.
    InputNotAdmissible,
    /// Closed-loop simulation started in a cell with an empty assignment.
    NoAdmissibleInput,
    /// The system description violates a model invariant (e.g. the guards
    /// do not partition the analysis region).
    Model(String),
    /// A specification state refers to a mode index outside the system.
    SpecStateNotAMode(usize),
    /// A specification state with no outgoing edge.
    SpecBlockingState(usize),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnboundedRegion => write!(f, "halfspace system is unbounded"),
            Error::EmptyPolytope => write!(f, "operation requires a non-empty polytope"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::EmptyCollection => {
                write!(f, "splitting policy needs a non-degenerate collection")
            }
            Error::LambdaOutOfRange => {
                write!(f, "contraction rate must satisfy 0 < lambda < 1")
            }
            Error::OutsideRegion => write!(f, "state lies outside the analysis region"),
            Error::InputNotAdmissible => write!(f, "input lies outside the input polytope"),
            Error::NoAdmissibleInput => {
                write!(f, "no admissible input: initial cell has an empty assignment")
            }
            Error::Model(msg) => write!(f, "invalid model: {msg}"),
            Error::SpecStateNotAMode(i) => {
                write!(f, "specification state {i} is not a mode index")
            }
            Error::SpecBlockingState(i) => {
                write!(f, "specification state {i} has no outgoing edge")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
