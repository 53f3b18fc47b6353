//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors reported by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The diagram text does not follow the grammar.
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// The same pair of nodes was given an edge twice.
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(String, String),
    /// An edge joins a node to itself.
    #[error("self-edge on node {0}")]
    SelfEdge(String),
    /// A node was declared twice.
    #[error("duplicate node {0}")]
    DuplicateNode(String),
    /// A symbolic edge label has no value.
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    /// A generator name is not part of the system.
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    /// An operation that needs an irreducible system received a reducible one.
    #[error("the Coxeter system is reducible")]
    Reducible,
    /// Matrix data violates the Cartan matrix axioms.
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    /// A special-form parameter is missing.
    #[error("missing parameter `{0}`")]
    MissingParameter(String),
    /// A special-form parameter is not strictly positive.
    #[error("parameter `{0}` must be positive")]
    NonPositiveParameter(String),
    /// Facet assignment or ridge labels are inconsistent.
    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),
    /// A vertex description does not match any vertex.
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    /// A documented precondition does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// The input is outside the supported families.
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    /// A numerical procedure did not meet its tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// Malformed input that is not a diagram syntax problem.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
