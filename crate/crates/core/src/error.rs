use std::path::PathBuf;

/// Errors produced anywhere in the graph classification pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid hypervector dimension {0}; dimension must be at least 1")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("cannot normalize an empty bundle")]
    EmptyBundle,

    #[error("cosine similarity is undefined for a zero-norm operand")]
    UndefinedSimilarity,

    #[error("sequence length mismatch: {left} keys vs {right} values")]
    LengthMismatch { left: usize, right: usize },

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("dataset contains no graphs")]
    EmptyDataset,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("missing dataset file {}", .0.display())]
    MissingFile(PathBuf),

    #[error("{}:{line}: {message}", file.display())]
    Format {
        file: PathBuf,
        line: usize,
        message: String,
    },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("class {0} has no usable training graphs")]
    EmptyClass(usize),

    #[error(
        "stratified {folds}-fold split is infeasible: class {class} has only {members} graphs \
         (use unstratified folds instead)"
    )]
    StratificationInfeasible {
        class: usize,
        members: usize,
        folds: usize,
    },

    #[error("encoder configuration does not match the model: {0}")]
    ConfigMismatch(String),

    #[error("model file: {0}")]
    ModelFormat(String),

    #[error("model file checksum mismatch (stored {stored:#010x}, computed {computed:#010x})")]
    Checksum { stored: u32, computed: u32 },

    #[error("report serialization failed: {0}")]
    Report(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(file: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            file: file.into(),
            line,
            message: message.into(),
        }
    }

    /// Process exit code used by the command-line tool.
    ///
    /// 1 is a usage error, 2 a data or format error, 3 an internal invariant
    /// violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::InvalidDimension(_) => 1,
            Error::MissingFile(_)
            | Error::Format { .. }
            | Error::Io { .. }
            | Error::EmptyDataset
            | Error::EmptyClass(_)
            | Error::StratificationInfeasible { .. }
            | Error::ConfigMismatch(_)
            | Error::ModelFormat(_)
            | Error::Checksum { .. }
            | Error::Report(_)
            | Error::DimensionMismatch { .. } => 2,
            Error::EmptyBundle
            | Error::UndefinedSimilarity
            | Error::LengthMismatch { .. }
            | Error::EmptyGraph => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
