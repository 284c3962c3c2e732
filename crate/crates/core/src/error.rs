use std::io;

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o: {0}")]
    Io(#[from] io::Error),

    /// Malformed Y4M header or stream; the message names the offending token.
    #[error("y4m parse error: {0}")]
    Y4mParse(String),

    /// A frame payload ended early.
    #[error("truncated frame payload at frame index {index}")]
    TruncatedFrame { index: usize },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// Plane cannot support the requested decomposition depth.
    #[error(
        "plane {width}x{height} too small for {requested} levels; max feasible depth is {max_depth}"
    )]
    PlaneTooSmall {
        width: usize,
        height: usize,
        requested: usize,
        max_depth: usize,
    },

    #[error("pyramid structure invalid: {0}")]
    PyramidStructure(String),

    #[error("non-finite values in input to {0}")]
    NonFinite(&'static str),

    #[error("iteration did not converge within {0} iterations")]
    NoConvergence(usize),

    /// The frame's U plane is too flat to carry a bit; callers skip the frame.
    #[error("frame has no embeddable texture in its U plane")]
    UnembeddableFrame,

    #[error("payload length {got} does not match group count {expected}")]
    PayloadLength { expected: usize, got: usize },

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    /// Bad attack chain string; the message repeats the accepted grammar.
    #[error("attack spec: {0}")]
    AttackSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
