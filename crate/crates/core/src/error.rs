use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("`{name}` is already bound by an enclosing quantifier")]
    Shadowing { name: String },
    #[error("`{name}` is used both as a predicate and as an individual")]
    PredicateAsIndividual { name: String },
    #[error("predicate `{name}` is used with inconsistent arity")]
    Arity { name: String },
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("renaming to `{name}` risks capture: the name already occurs")]
    CaptureRisk { name: String },
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("model does not interpret `{0}`")]
    MissingInterpretation(String),
    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
