use thiserror::Error;

use crate::flow::Trajectory;
use crate::graph::EdgeId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownDirective(String),
    MissingField(&'static str),
    BadInteger(String),
    BadRational(String),
    BadDart(String),
    VertexOutOfRange(usize),
    MissingHeader(&'static str),
    DuplicateHeader(&'static str),
}

impl std::fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseErrorKind::UnknownDirective(s) => write!(f, "unknown directive `{s}`"),
            ParseErrorKind::MissingField(s) => write!(f, "missing {s}"),
            ParseErrorKind::BadInteger(s) => write!(f, "bad integer `{s}`"),
            ParseErrorKind::BadRational(s) => write!(f, "bad length `{s}` (expected num/den)"),
            ParseErrorKind::BadDart(s) => write!(f, "bad dart `{s}` (expected <edge>.<0|1>)"),
            ParseErrorKind::VertexOutOfRange(v) => write!(f, "vertex {v} out of range"),
            ParseErrorKind::MissingHeader(s) => write!(f, "missing `{s}` line"),
            ParseErrorKind::DuplicateHeader(s) => write!(f, "duplicate `{s}` line"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {kind}")]
    Malformed { line: usize, kind: ParseErrorKind },
    #[error("edge {0} has non-positive length")]
    NonPositiveLength(EdgeId),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("duplicate edge id {0}")]
    DuplicateEdgeId(EdgeId),
    #[error("unknown edge id {0}")]
    UnknownEdge(EdgeId),
    #[error("vertex {vertex} has degree {degree} < 3")]
    LowDegree { vertex: usize, degree: usize },
    #[error("rank {rank} is below the required minimum {min}")]
    RankTooSmall { rank: usize, min: usize },
    #[error("contracted edge set contains a cycle or loop (edge {0})")]
    ContractionOfCycle(EdgeId),
    #[error("graph has no cycle")]
    NoCycle,
    #[error("cycle enumeration exceeded the cap of {cap} cycles")]
    BudgetExceeded { cap: usize },
    #[error("cycle is not a cycle of this graph: {0}")]
    ForeignCycle(String),
    #[error("flow parameter {u} outside [1, {max}]")]
    ParameterOutOfRange { u: String, max: String },
    #[error("total length is {0}, expected 1")]
    NotUnitVolume(String),
    #[error("systoles already cover every edge; there is nothing to flow")]
    AlreadyFilling,
    #[error("non-systole edges contain a cycle at stage completion")]
    DegenerateStage,
    #[error("{what} cap of {cap} exceeded after {} events", partial.events.len())]
    CapExceeded {
        what: &'static str,
        cap: usize,
        partial: Box<Trajectory>,
    },
    #[error("a cycle outside the prescribed systole set has length {length} <= {systole}")]
    NotStrictlyShorter { length: String, systole: String },
    #[error("map is not cubic (vertex degrees {0:?})")]
    NotCubic(Vec<usize>),
    #[error("map is not uniform")]
    NotUniform,
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("unknown dataset `{0}`")]
    UnknownDataset(String),
}

impl Error {
    /// Stable variant name, for structured reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Malformed { .. } => "Malformed",
            Error::NonPositiveLength(_) => "NonPositiveLength",
            Error::Disconnected => "Disconnected",
            Error::DuplicateEdgeId(_) => "DuplicateEdgeId",
            Error::UnknownEdge(_) => "UnknownEdge",
            Error::LowDegree { .. } => "LowDegree",
            Error::RankTooSmall { .. } => "RankTooSmall",
            Error::ContractionOfCycle(_) => "ContractionOfCycle",
            Error::NoCycle => "NoCycle",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::ForeignCycle(_) => "ForeignCycle",
            Error::ParameterOutOfRange { .. } => "ParameterOutOfRange",
            Error::NotUnitVolume(_) => "NotUnitVolume",
            Error::AlreadyFilling => "AlreadyFilling",
            Error::DegenerateStage => "DegenerateStage",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::NotStrictlyShorter { .. } => "NotStrictlyShorter",
            Error::NotCubic(_) => "NotCubic",
            Error::NotUniform => "NotUniform",
            Error::InvalidMap(_) => "InvalidMap",
            Error::UnknownDataset(_) => "UnknownDataset",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
