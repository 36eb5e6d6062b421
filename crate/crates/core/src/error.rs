use thiserror::Error;

/// Failures shared by every engine operation.
///
/// Input errors mean the caller handed over something that is not a valid
/// group, module, spec or parameter. Resource errors mean a configured cap
/// was hit; the input may be fine, it is just too large for the settings.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("cap exceeded: {what} (limit {limit})")]
    Resource { what: String, limit: usize },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn resource(what: impl Into<String>, limit: usize) -> Self {
        Error::Resource {
            what: what.into(),
            limit,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
