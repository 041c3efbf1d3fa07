use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The byte stream is not a well-formed PNG or PGM file.
    #[error("decode error at byte offset {offset}: {message}")]
    Decode { offset: u64, message: String },

    #[error("unsupported channel count {channels}: expected {expected}")]
    Channels { channels: u8, expected: &'static str },

    #[error("unsupported bit depth {0}: only 8-bit samples are accepted")]
    BitDepth(u8),

    #[error("dimension mismatch: {left_width}x{left_height} vs {right_width}x{right_height}")]
    DimensionMismatch {
        left_width: usize,
        left_height: usize,
        right_width: usize,
        right_height: usize,
    },

    #[error("invalid dimensions {width}x{height}: {reason}")]
    InvalidDimensions { width: usize, height: usize, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("encode error: {0}")]
    Encode(String),
}

impl Error {
    pub(crate) fn mismatch(left: (usize, usize), right: (usize, usize)) -> Self {
        Error::DimensionMismatch {
            left_width: left.0,
            left_height: left.1,
            right_width: right.0,
            right_height: right.1,
        }
    }
}
