use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid parameters: payoff constraint, degree bounds, dynamics knobs.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("refusing to enumerate 2^{n} profiles (limit is n <= {max})")]
    TooLarge { n: usize, max: usize },

    /// Malformed input text. `line` is 1-based when known.
    #[error("{}parse error: {msg}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Parse { line: Option<usize>, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn parse(line: Option<usize>, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// True for errors caused by user input rather than the runtime.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}
