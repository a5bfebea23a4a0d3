use thiserror::Error;

/// Input-side failures; all map to exit status 2.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: cannot read: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}, column {column}, field `{field}`: {message}")]
    Parse {
        line: usize,
        column: usize,
        field: String,
        message: String,
    },

    #[error("unresolved reference `{name}` in {context}")]
    UnresolvedReference { name: String, context: String },

    #[error("check {index} ({theorem}): missing argument `{arg}`")]
    MissingArgument {
        index: usize,
        theorem: String,
        arg: &'static str,
    },

    #[error("object `{name}`: {message}")]
    InvalidObject { name: String, message: String },

    #[error("invalid generator spec: {0}")]
    InvalidGenerator(String),

    #[error("tolerance override from {source_name}: {message}")]
    Tolerance { source_name: String, message: String },

    #[error(transparent)]
    Core(#[from] cstar_frames::Error),
}

pub type Result<T> = std::result::Result<T, HarnessError>;
