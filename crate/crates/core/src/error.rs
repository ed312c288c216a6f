use thiserror::Error;

/// Errors raised while building, projecting or verifying sequences.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GcsError {
    /// An index, length or digit fell outside its admissible range.
    #[error("out of range: {0}")]
    Range(String),
    /// Operands or inputs have incompatible shapes.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// A construction parameter violated one of its constraints.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// The parameters are well formed but the construction is undefined for them.
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
    /// Malformed text input. `line` and `field` are 1-based when known.
    #[error("parse error{}: {message}", location(*line, *field))]
    Parse {
        line: Option<usize>,
        field: Option<usize>,
        message: String,
    },
    /// A work-size guard refused the request.
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
}

fn location(line: Option<usize>, field: Option<usize>) -> String {
    match (line, field) {
        (Some(l), Some(f)) => format!(" at line {l}, field {f}"),
        (Some(l), None) => format!(" at line {l}"),
        (None, Some(f)) => format!(" at field {f}"),
        (None, None) => String::new(),
    }
}

impl GcsError {
    pub(crate) fn parse(message: impl Into<String>) -> Self {
        GcsError::Parse {
            line: None,
            field: None,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, GcsError>;
