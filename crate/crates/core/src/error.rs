//! Crate-wide error type.

/// Unified error type for the pairing library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument violated an operation's contract.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A file or byte stream did not conform to its declared format.
    /// `row` is 1-based and counts physical lines for trace files.
    #[error("format error (row {row}): {msg}")]
    Format { row: usize, msg: String },

    /// Input is structurally valid but carries no usable information
    /// (constant signal, empty sample set, ...).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// Not enough quantized bits around an anchor to fill the key window.
    #[error("bit window underflow: {0}")]
    WindowUnderflow(String),

    /// A wire message could not be decoded.
    #[error("message decode error: {0}")]
    MessageDecode(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub fn format(row: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            row,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
