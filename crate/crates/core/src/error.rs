use thiserror::Error;

use crate::graph::Vertex;

/// Every failure the library can report.
///
/// Each variant maps to a stable diagnostic code (see [`Error::code`]) so the
/// command-line front end can report distinct codes per failure class.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("vertex {vertex} has no {missing} edge")]
    MissingEdge { vertex: Vertex, missing: &'static str },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is not irreducible (vertex digraph is not strongly connected)")]
    NotIrreducible,

    #[error("aperiodicity required: graph has period {period}")]
    Periodic { period: usize },

    #[error("word has odd length {0}")]
    OddLength(usize),

    #[error("not a member: {0}")]
    NotMember(String),

    #[error("resource guard exceeded: {0}")]
    BudgetExceeded(String),

    #[error("solver did not converge: {0}")]
    NonConvergence(String),

    #[error("iterate left the positive cone: {0}")]
    NegativeComponent(String),

    #[error("continuation step underflow at x = {x}")]
    StepUnderflow { x: f64 },

    #[error("contour radius {rho} outside (0, {bound})")]
    RhoOutOfRange { rho: f64, bound: f64 },

    #[error("ill-conditioned linear system: {0}")]
    IllConditioned(String),

    #[error("fixed-point iteration diverged at |z| = {0}")]
    Divergence(f64),

    #[error("series order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable diagnostic code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse(_) => "E-PARSE",
            Error::MissingEdge { .. } | Error::InvalidGraph(_) => "E-VALIDATE",
            Error::NotIrreducible => "E-IRREDUCIBLE",
            Error::Periodic { .. } => "E-APERIODIC",
            Error::OddLength(_) | Error::NotMember(_) => "E-MEMBER",
            Error::BudgetExceeded(_) => "E-GUARD",
            Error::NonConvergence(_)
            | Error::NegativeComponent(_)
            | Error::StepUnderflow { .. }
            | Error::Divergence(_) => "E-SOLVER",
            Error::RhoOutOfRange { .. } | Error::IllConditioned(_) => "E-CONTOUR",
            Error::OrderMismatch(..) => "E-SERIES",
            Error::InvalidArgument(_) => "E-ARGS",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
