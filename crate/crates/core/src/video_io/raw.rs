//! Raw planar YUV ingestion. The stream has no header, so the caller supplies
//! a sidecar descriptor: dimensions, frame rate and subsampling.

use std::io::Read;

use ndarray::Array2;

use super::{ChromaSampling, Frame, FrameRate, Video};
use crate::error::{Error, Result};

/// Read concatenated planar 8-bit frames until the stream ends. A trailing
/// partial frame is a truncation error carrying its frame index.
pub fn read_raw_yuv<R: Read>(
    mut reader: R,
    width: usize,
    height: usize,
    fps: FrameRate,
    sampling: ChromaSampling,
) -> Result<Video> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidParam("raw frame dimensions must be positive".into()));
    }
    let (cw, ch) = sampling.chroma_dims(width, height);
    let y_len = width * height;
    let c_len = cw * ch;
    let frame_len = y_len + 2 * c_len;

    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes).map_err(Error::Io)?;
    if bytes.len() % frame_len != 0 {
        return Err(Error::TruncatedFrame {
            index: bytes.len() / frame_len,
        });
    }

    let mut frames = Vec::with_capacity(bytes.len() / frame_len);
    for chunk in bytes.chunks_exact(frame_len) {
        let to_plane = |s: &[u8], rows: usize, cols: usize| {
            Array2::from_shape_vec((rows, cols), s.iter().map(|&b| f64::from(b)).collect())
                .expect("chunk length checked")
        };
        frames.push(Frame::new(
            to_plane(&chunk[..y_len], height, width),
            to_plane(&chunk[y_len..y_len + c_len], ch, cw),
            to_plane(&chunk[y_len + c_len..], ch, cw),
            sampling,
        )?);
    }
    Video::new(frames, fps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_whole_frames() {
        let frame_len = 4 * 4 + 2 * 2 * 2;
        let bytes = vec![9u8; frame_len * 3];
        let v = read_raw_yuv(
            &bytes[..],
            4,
            4,
            FrameRate::new(25, 1).unwrap(),
            ChromaSampling::C420,
        )
        .unwrap();
        assert_eq!(v.frame_count(), 3);
        assert_eq!(v.frames()[1].y_plane()[[0, 0]], 9.0);
    }

    #[test]
    fn partial_frame_is_truncation() {
        let frame_len = 4 * 4 + 2 * 2 * 2;
        let bytes = vec![0u8; frame_len + 5];
        match read_raw_yuv(
            &bytes[..],
            4,
            4,
            FrameRate::new(25, 1).unwrap(),
            ChromaSampling::C420,
        ) {
            Err(Error::TruncatedFrame { index }) => assert_eq!(index, 1),
            other => panic!("expected truncation, got {other:?}"),
        }
    }
}
