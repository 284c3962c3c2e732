//! Video frames, Y4M and raw-planar parsing/serialisation, colour conversion
//! and deterministic synthetic test videos.
//!
//! Samples are carried as `f64` end to end; quantisation to 8 bits happens
//! only when a stream is written. Chroma may be subsampled 4:2:0 or kept at
//! full 4:4:4 resolution.

mod color;
mod raw;
mod synth;
mod y4m;

pub use color::{rgb_to_yuv, yuv_to_rgb, RgbFrame};
pub use raw::read_raw_yuv;
pub use synth::{corpus, synth_video, Pattern, CORPUS_PATTERNS};
pub use y4m::{read_y4m, read_y4m_bytes, write_y4m, write_y4m_to_vec};

use ndarray::Array2;

use crate::error::{Error, Result};

/// Chroma subsampling of a frame's U and V planes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChromaSampling {
    /// U and V at `ceil(w/2) x ceil(h/2)`.
    C420,
    /// U and V at full luma resolution.
    C444,
}

impl ChromaSampling {
    /// Chroma plane dimensions `(width, height)` for a given luma size.
    pub fn chroma_dims(self, width: usize, height: usize) -> (usize, usize) {
        match self {
            ChromaSampling::C420 => (width.div_ceil(2), height.div_ceil(2)),
            ChromaSampling::C444 => (width, height),
        }
    }

    pub fn y4m_tag(self) -> &'static str {
        match self {
            ChromaSampling::C420 => "420",
            ChromaSampling::C444 => "444",
        }
    }
}

/// One video frame as three planar channels. Arrays are indexed `[row, col]`,
/// i.e. shape `(height, width)`; sample values live in `[0, 255]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    y: Array2<f64>,
    u: Array2<f64>,
    v: Array2<f64>,
    sampling: ChromaSampling,
}

impl Frame {
    /// Build a frame, checking plane dimensions against the subsampling mode
    /// and rejecting non-finite samples.
    pub fn new(
        y: Array2<f64>,
        u: Array2<f64>,
        v: Array2<f64>,
        sampling: ChromaSampling,
    ) -> Result<Self> {
        let (h, w) = y.dim();
        if h == 0 || w == 0 {
            return Err(Error::InvalidParam("frame dimensions must be positive".into()));
        }
        let (cw, ch) = sampling.chroma_dims(w, h);
        for (name, plane) in [("u", &u), ("v", &v)] {
            if plane.dim() != (ch, cw) {
                return Err(Error::InvalidParam(format!(
                    "{name} plane is {}x{}, expected {cw}x{ch} for {sampling:?}",
                    plane.dim().1,
                    plane.dim().0
                )));
            }
        }
        for plane in [&y, &u, &v] {
            if plane.iter().any(|s| !s.is_finite()) {
                return Err(Error::NonFinite("frame plane"));
            }
        }
        Ok(Self { y, u, v, sampling })
    }

    /// Uniform frame with the given plane values.
    pub fn constant(
        width: usize,
        height: usize,
        y: f64,
        u: f64,
        v: f64,
        sampling: ChromaSampling,
    ) -> Result<Self> {
        let (cw, ch) = sampling.chroma_dims(width, height);
        Frame::new(
            Array2::from_elem((height, width), y),
            Array2::from_elem((ch, cw), u),
            Array2::from_elem((ch, cw), v),
            sampling,
        )
    }

    pub fn width(&self) -> usize {
        self.y.ncols()
    }

    pub fn height(&self) -> usize {
        self.y.nrows()
    }

    pub fn sampling(&self) -> ChromaSampling {
        self.sampling
    }

    pub fn y_plane(&self) -> &Array2<f64> {
        &self.y
    }

    pub fn u_plane(&self) -> &Array2<f64> {
        &self.u
    }

    pub fn v_plane(&self) -> &Array2<f64> {
        &self.v
    }

    /// The U plane at luma resolution: a straight view for 4:4:4, a
    /// nearest-neighbour upsample for 4:2:0.
    pub fn u_at_luma_res(&self) -> Array2<f64> {
        match self.sampling {
            ChromaSampling::C444 => self.u.clone(),
            ChromaSampling::C420 => {
                let (h, w) = (self.height(), self.width());
                Array2::from_shape_fn((h, w), |(r, c)| self.u[[r / 2, c / 2]])
            }
        }
    }

    /// Replace the U plane from a luma-resolution array, downsampling by 2x2
    /// mean when the frame is 4:2:0. Y and V are left bit-identical.
    pub fn with_u_from_luma_res(&self, full: Array2<f64>) -> Result<Frame> {
        let (h, w) = (self.height(), self.width());
        if full.dim() != (h, w) {
            return Err(Error::InvalidParam(format!(
                "replacement U plane is {}x{}, expected {w}x{h}",
                full.dim().1,
                full.dim().0
            )));
        }
        let u = match self.sampling {
            ChromaSampling::C444 => full,
            ChromaSampling::C420 => {
                let (cw, ch) = self.sampling.chroma_dims(w, h);
                Array2::from_shape_fn((ch, cw), |(r, c)| {
                    let mut sum = 0.0;
                    let mut n = 0.0;
                    for dr in 0..2 {
                        for dc in 0..2 {
                            let (rr, cc) = (2 * r + dr, 2 * c + dc);
                            if rr < h && cc < w {
                                sum += full[[rr, cc]];
                                n += 1.0;
                            }
                        }
                    }
                    sum / n
                })
            }
        };
        Frame::new(self.y.clone(), u, self.v.clone(), self.sampling)
    }
}

/// Frames-per-second as an exact rational. Keeping the rational around makes
/// the Y4M round trip bit-exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameRate {
    pub num: u32,
    pub den: u32,
}

impl FrameRate {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidParam(format!(
                "frame rate {num}:{den} must be positive"
            )));
        }
        Ok(Self { num, den })
    }

    pub fn value(self) -> f64 {
        f64::from(self.num) / f64::from(self.den)
    }

    /// Best rational approximation with denominator <= 65535 (continued
    /// fractions). Integral rates come out as `n:1`, NTSC-style rates such as
    /// 29.97 land on 30000/1001 territory.
    pub fn from_f64(fps: f64) -> Result<Self> {
        if !fps.is_finite() || fps <= 0.0 {
            return Err(Error::InvalidParam(format!("fps {fps} must be positive")));
        }
        let mut best = (1u64, 1u64, f64::INFINITY);
        let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
        let mut x = fps;
        for _ in 0..64 {
            let a = x.floor();
            if a > u32::MAX as f64 {
                break;
            }
            let (p2, q2) = (
                (a as u64).saturating_mul(p1).saturating_add(p0),
                (a as u64).saturating_mul(q1).saturating_add(q0),
            );
            if q2 > 65535 || p2 > u32::MAX as u64 || p2 == 0 {
                break;
            }
            let err = (p2 as f64 / q2 as f64 - fps).abs();
            if err < best.2 {
                best = (p2, q2, err);
            }
            if err == 0.0 {
                break;
            }
            (p0, q0, p1, q1) = (p1, q1, p2, q2);
            let frac = x - a;
            if frac.abs() < 1e-12 {
                break;
            }
            x = 1.0 / frac;
        }
        FrameRate::new(best.0 as u32, best.1 as u32)
    }
}

/// An ordered frame sequence plus its frame rate. Frame count is the ground
/// truth; duration is derived.
#[derive(Debug, Clone, PartialEq)]
pub struct Video {
    frames: Vec<Frame>,
    fps: FrameRate,
}

impl Video {
    /// Build a video, checking that all frames share dimensions and sampling.
    pub fn new(frames: Vec<Frame>, fps: FrameRate) -> Result<Self> {
        if let Some(first) = frames.first() {
            let key = (first.width(), first.height(), first.sampling());
            for (i, f) in frames.iter().enumerate() {
                if (f.width(), f.height(), f.sampling()) != key {
                    return Err(Error::InvalidParam(format!(
                        "frame {i} is {}x{} {:?}, expected {}x{} {:?}",
                        f.width(),
                        f.height(),
                        f.sampling(),
                        key.0,
                        key.1,
                        key.2
                    )));
                }
            }
        }
        Ok(Self { frames, fps })
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn frame_count(&self) -> usize {
        self.frames.len()
    }

    pub fn frame_rate(&self) -> FrameRate {
        self.fps
    }

    pub fn fps(&self) -> f64 {
        self.fps.value()
    }

    pub fn duration_seconds(&self) -> f64 {
        self.frames.len() as f64 / self.fps.value()
    }

    /// Timestamp of frame `i`, reconstructed as `i / fps`.
    pub fn timestamp(&self, index: usize) -> f64 {
        index as f64 / self.fps.value()
    }

    pub fn width(&self) -> Option<usize> {
        self.frames.first().map(Frame::width)
    }

    pub fn height(&self) -> Option<usize> {
        self.frames.first().map(Frame::height)
    }

    pub fn sampling(&self) -> Option<ChromaSampling> {
        self.frames.first().map(Frame::sampling)
    }

    /// Same frame rate, new frames. Used by attacks that keep fps metadata.
    pub fn with_frames(&self, frames: Vec<Frame>) -> Result<Video> {
        Video::new(frames, self.fps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chroma_dims_round_up() {
        assert_eq!(ChromaSampling::C420.chroma_dims(16, 16), (8, 8));
        assert_eq!(ChromaSampling::C420.chroma_dims(15, 17), (8, 9));
        assert_eq!(ChromaSampling::C444.chroma_dims(15, 17), (15, 17));
    }

    #[test]
    fn frame_rejects_bad_chroma_dims() {
        let y = Array2::zeros((16, 16));
        let u = Array2::zeros((16, 16));
        let v = Array2::zeros((8, 8));
        assert!(Frame::new(y, u, v, ChromaSampling::C420).is_err());
    }

    #[test]
    fn frame_rejects_non_finite() {
        let mut y = Array2::zeros((4, 4));
        y[[1, 1]] = f64::NAN;
        let u = Array2::zeros((2, 2));
        let v = Array2::zeros((2, 2));
        assert!(matches!(
            Frame::new(y, u, v, ChromaSampling::C420),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn u_roundtrip_between_resolutions() {
        let f = Frame::constant(6, 4, 100.0, 90.0, 110.0, ChromaSampling::C420).unwrap();
        let full = f.u_at_luma_res();
        assert_eq!(full.dim(), (4, 6));
        let back = f.with_u_from_luma_res(full).unwrap();
        assert_eq!(back.u_plane(), f.u_plane());
        assert_eq!(back.y_plane(), f.y_plane());
    }

    #[test]
    fn frame_rate_rationalisation() {
        assert_eq!(FrameRate::from_f64(30.0).unwrap(), FrameRate { num: 30, den: 1 });
        let ntsc = FrameRate::from_f64(30000.0 / 1001.0).unwrap();
        assert!((ntsc.value() - 30000.0 / 1001.0).abs() < 1e-9);
        assert!(FrameRate::from_f64(0.0).is_err());
        assert!(FrameRate::from_f64(-5.0).is_err());
    }

    #[test]
    fn video_rejects_mixed_dims() {
        let a = Frame::constant(8, 8, 0.0, 128.0, 128.0, ChromaSampling::C420).unwrap();
        let b = Frame::constant(4, 8, 0.0, 128.0, 128.0, ChromaSampling::C420).unwrap();
        assert!(Video::new(vec![a, b], FrameRate::new(30, 1).unwrap()).is_err());
    }

    #[test]
    fn duration_follows_frame_count() {
        let f = Frame::constant(8, 8, 0.0, 128.0, 128.0, ChromaSampling::C420).unwrap();
        let v = Video::new(vec![f; 300], FrameRate::new(30, 1).unwrap()).unwrap();
        assert!((v.duration_seconds() - 10.0).abs() < 1e-12);
        assert!((v.timestamp(150) - 5.0).abs() < 1e-12);
    }
}
