//! Deterministic synthetic test videos. Every pattern is a pure function of
//! its arguments; motion comes from cyclically shifting precomputed fields so
//! frames stay cheap to generate and byte-stable across platforms.

use std::str::FromStr;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ChromaSampling, Frame, FrameRate, Video};
use crate::error::{Error, Result};

/// Synthetic content family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    /// Smooth drifting sinusoidal shading with a faint grain so the chroma
    /// planes are not analytically flat.
    MovingGradient,
    /// Band-pass filtered noise drifting over time; the richest texture.
    TexturedNoise,
    /// Piecewise-constant blocks, handy for eyeballing embedding artifacts.
    Blocks,
}

impl Pattern {
    pub fn name(self) -> &'static str {
        match self {
            Pattern::MovingGradient => "moving-gradient",
            Pattern::TexturedNoise => "textured-noise",
            Pattern::Blocks => "blocks",
        }
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "moving-gradient" => Ok(Pattern::MovingGradient),
            "textured-noise" => Ok(Pattern::TexturedNoise),
            "blocks" => Ok(Pattern::Blocks),
            _ => Err(Error::InvalidParam(format!(
                "unknown pattern '{s}' (moving-gradient | textured-noise | blocks)"
            ))),
        }
    }
}

/// Patterns of the five-video benchmark corpus.
pub const CORPUS_PATTERNS: [Pattern; 5] = [
    Pattern::TexturedNoise,
    Pattern::Blocks,
    Pattern::MovingGradient,
    Pattern::TexturedNoise,
    Pattern::Blocks,
];

/// Generate a deterministic 4:2:0 synthetic video. Samples are integral, so
/// a Y4M write/read round trip is bit-exact.
pub fn synth_video(
    width: usize,
    height: usize,
    frame_count: usize,
    fps: f64,
    seed: u64,
    pattern: Pattern,
) -> Result<Video> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidParam("synth dimensions must be positive".into()));
    }
    if frame_count == 0 {
        return Err(Error::InvalidParam("synth frame count must be positive".into()));
    }
    let fps = FrameRate::from_f64(fps)?;
    let sampling = ChromaSampling::C420;
    let (cw, ch) = sampling.chroma_dims(width, height);

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (pattern.name().len() as u64) << 56);
    let fields = match pattern {
        Pattern::TexturedNoise => PatternFields::textured(&mut rng, width, height, cw, ch),
        Pattern::Blocks => PatternFields::blocks(&mut rng, width, height, cw, ch),
        Pattern::MovingGradient => PatternFields::gradient(&mut rng, width, height, cw, ch),
    };

    let frames = (0..frame_count)
        .map(|t| fields.frame(t, sampling))
        .collect::<Result<Vec<_>>>()?;
    Video::new(frames, fps)
}

/// The five-video benchmark corpus: patterns from [`CORPUS_PATTERNS`], seeds
/// derived from `base_seed`.
pub fn corpus(
    base_seed: u64,
    width: usize,
    height: usize,
    frame_count: usize,
    fps: f64,
) -> Result<Vec<Video>> {
    CORPUS_PATTERNS
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let seed = base_seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            synth_video(width, height, frame_count, fps, seed, p)
        })
        .collect()
}

struct PlaneSpec {
    base: Array2<f64>,
    // cyclic drift per frame, (rows, cols)
    velocity: (usize, usize),
}

impl PlaneSpec {
    fn at(&self, t: usize) -> Array2<f64> {
        let (h, w) = self.base.dim();
        let dr = (self.velocity.0 * t) % h.max(1);
        let dc = (self.velocity.1 * t) % w.max(1);
        Array2::from_shape_fn((h, w), |(r, c)| {
            self.base[[(r + h - dr) % h, (c + w - dc) % w]]
        })
    }
}

struct PatternFields {
    y: PlaneSpec,
    u: PlaneSpec,
    v: PlaneSpec,
}

impl PatternFields {
    fn frame(&self, t: usize, sampling: ChromaSampling) -> Result<Frame> {
        let q = |p: Array2<f64>| p.mapv(|x| x.round().clamp(0.0, 255.0));
        Frame::new(q(self.y.at(t)), q(self.u.at(t)), q(self.v.at(t)), sampling)
    }

    fn textured(rng: &mut ChaCha8Rng, w: usize, h: usize, cw: usize, ch: usize) -> Self {
        PatternFields {
            y: PlaneSpec {
                base: bandpass_field(rng, h, w, 128.0, 70.0),
                velocity: (2, 1),
            },
            u: PlaneSpec {
                base: bandpass_field(rng, ch, cw, 128.0, 45.0),
                velocity: (1, 2),
            },
            v: PlaneSpec {
                base: bandpass_field(rng, ch, cw, 128.0, 35.0),
                velocity: (1, 1),
            },
        }
    }

    fn blocks(rng: &mut ChaCha8Rng, w: usize, h: usize, cw: usize, ch: usize) -> Self {
        PatternFields {
            y: PlaneSpec {
                base: block_field(rng, h, w, 8, 24.0, 232.0),
                velocity: (1, 2),
            },
            u: PlaneSpec {
                base: block_field(rng, ch, cw, 8, 78.0, 178.0),
                velocity: (1, 1),
            },
            v: PlaneSpec {
                base: block_field(rng, ch, cw, 8, 88.0, 168.0),
                velocity: (0, 1),
            },
        }
    }

    fn gradient(rng: &mut ChaCha8Rng, w: usize, h: usize, cw: usize, ch: usize) -> Self {
        let shading = |rows: usize, cols: usize, amp: f64, phase: f64| {
            Array2::from_shape_fn((rows, cols), |(r, c)| {
                let x = c as f64 / cols as f64;
                let y = r as f64 / rows as f64;
                128.0
                    + amp
                        * (std::f64::consts::TAU * (x + phase)).sin()
                        * (std::f64::consts::TAU * (y - phase)).cos()
            })
        };
        // a faint grain keeps the chroma planes embeddable
        let grain_u = bandpass_field(rng, ch, cw, 0.0, 16.0);
        let grain_y = bandpass_field(rng, h, w, 0.0, 10.0);
        PatternFields {
            y: PlaneSpec {
                base: shading(h, w, 55.0, 0.13) + &grain_y,
                velocity: (1, 1),
            },
            u: PlaneSpec {
                base: shading(ch, cw, 26.0, 0.41) + &grain_u,
                velocity: (1, 2),
            },
            v: PlaneSpec {
                base: shading(ch, cw, 22.0, 0.77),
                velocity: (2, 1),
            },
        }
    }
}

/// Mid-band noise: white noise minus its wide blur, centred and scaled.
fn bandpass_field(rng: &mut ChaCha8Rng, rows: usize, cols: usize, mid: f64, amp: f64) -> Array2<f64> {
    let white = Array2::from_shape_fn((rows, cols), |_| rng.random_range(-1.0..1.0));
    let narrow = gaussian_blur(&white, 2.0);
    let wide = gaussian_blur(&white, 4.0);
    let band = &narrow - &wide;
    let peak = band.iter().fold(0.0_f64, |m, &x| m.max(x.abs())).max(1e-12);
    band.mapv(|x| mid + amp * x / peak)
}

fn block_field(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bs: usize, lo: f64, hi: f64) -> Array2<f64> {
    let brows = rows.div_ceil(bs);
    let bcols = cols.div_ceil(bs);
    let levels =
        Array2::from_shape_fn((brows, bcols), |_| rng.random_range(lo..hi).round());
    Array2::from_shape_fn((rows, cols), |(r, c)| levels[[r / bs, c / bs]])
}

/// Separable Gaussian blur with reflected boundaries.
fn gaussian_blur(x: &Array2<f64>, sigma: f64) -> Array2<f64> {
    let radius = (3.0 * sigma).ceil() as isize;
    let mut kernel = Vec::with_capacity(2 * radius as usize + 1);
    for t in -radius..=radius {
        kernel.push((-0.5 * (t as f64 / sigma).powi(2)).exp());
    }
    let norm: f64 = kernel.iter().sum();
    for k in &mut kernel {
        *k /= norm;
    }

    let (rows, cols) = x.dim();
    let reflect = |p: isize, n: usize| -> usize {
        let mut p = p;
        let n = n as isize;
        while p < 0 || p >= n {
            p = if p < 0 { -1 - p } else { 2 * n - 1 - p };
        }
        p as usize
    };
    let mut tmp = Array2::zeros((rows, cols));
    for r in 0..rows {
        for c in 0..cols {
            let mut acc = 0.0;
            for (k, kv) in kernel.iter().enumerate() {
                acc += kv * x[[reflect(r as isize + k as isize - radius, rows), c]];
            }
            tmp[[r, c]] = acc;
        }
    }
    let mut out = Array2::zeros((rows, cols));
    for r in 0..rows {
        for c in 0..cols {
            let mut acc = 0.0;
            for (k, kv) in kernel.iter().enumerate() {
                acc += kv * tmp[[r, reflect(c as isize + k as isize - radius, cols)]];
            }
            out[[r, c]] = acc;
        }
    }
    out
}
