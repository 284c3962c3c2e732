//! Blind video watermarking in the DTCWT-SVD domain.
//!
//! The codec hides one bit per time interval of a video by reshaping, frame
//! by frame, the curve of leading singular values across the six directional
//! sub-bands of the U plane's deepest DTCWT level. Because the intervals are
//! anchored to the (frame-rate-invariant) duration rather than to frame
//! indices, extraction survives frame-rate conversion, frame dropping and
//! similar timeline edits; group-level majority voting absorbs what per-frame
//! detection loses.
//!
//! The crate also ships the supporting cast: Y4M and raw-planar I/O with
//! deterministic synthetic sources, an attack simulator (temporal, geometric
//! and signal attacks with a chainable CLI grammar), and PSNR/NC/BER scoring.
//!
//! Per-frame work parallelises with rayon under the default `parallel`
//! feature; disabling it yields a dependency-light sequential build with
//! identical outputs.

pub mod attacks;
pub mod dtcwt;
pub mod error;
pub mod metrics;
mod par;
pub mod svd;
pub mod video_io;
pub mod watermark;

pub use error::{Error, Result};
