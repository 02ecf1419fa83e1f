use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// The divisor's error ball contains zero.
    #[error("division by a value indistinguishable from zero")]
    DivisionNearZero,

    /// A factor `1 - x q^j` that must be divided by is closer to zero than
    /// the context's pole distance.
    #[error("pole in {param} at index {index}: |factor| = {modulus:.3e}")]
    Pole {
        param: String,
        index: i64,
        modulus: f64,
    },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("constraint violation: {0}")]
    ConstraintViolation(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// Wraps an error with the name of the identity component that raised it.
    #[error("{label}: {source}")]
    Component {
        label: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn in_component(self, label: impl Into<String>) -> Error {
        Error::Component {
            label: label.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, with component labels stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Component { source, .. } => source.root(),
            other => other,
        }
    }

    pub fn is_pole(&self) -> bool {
        matches!(self.root(), Error::Pole { .. } | Error::DivisionNearZero)
    }

    pub fn is_no_convergence(&self) -> bool {
        matches!(self.root(), Error::NoConvergence(_))
    }
}

pub trait ResultExt<T> {
    fn component(self, label: &str) -> Result<T>;
}

impl<T> ResultExt<T> for Result<T> {
    fn component(self, label: &str) -> Result<T> {
        self.map_err(|e| e.in_component(label))
    }
}
