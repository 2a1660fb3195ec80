use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A caller-supplied value is out of its documented domain.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid path: {0}")]
    Path(String),

    /// Source and destination are not connected in the topology.
    #[error("no route from node {source_id} to node {destination}")]
    NoRoute { source_id: u32, destination: u32 },

    /// A topology or manifest document failed to parse or validate.
    #[error("format error in `{field}`: {message}")]
    Format { field: String, message: String },

    /// Exhaustive enumeration refused because the instance is too large.
    #[error("topology has {nodes} nodes, enumeration guard is {guard}")]
    Size { nodes: usize, guard: usize },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn format(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
