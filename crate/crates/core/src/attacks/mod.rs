//! Deterministic, parameterised attack simulation: temporal desynchronisation
//! (frame-rate conversion, drop/insert/swap/average), geometric distortions
//! (rotation-crop, scaling) and signal degradations (noise, block-DCT
//! quantisation standing in for codec compression).
//!
//! Every attack is a pure function of `(input, parameters, seed)`. Stochastic
//! attacks derive one RNG per decision point from the seed, so results do not
//! depend on thread count.

mod chain;
mod resample;

pub use chain::{AttackChain, AttackSpec};

use ndarray::Array2;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::par::map_indexed;
use crate::video_io::{Frame, FrameRate, Video};

/// Frame-rate conversion policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResampleMode {
    /// Pick the input frame with the nearest timestamp (drop/duplicate).
    #[default]
    Nearest,
    /// Linear blend of the two bracketing frames.
    Blend,
}

impl ResampleMode {
    pub fn name(self) -> &'static str {
        match self {
            ResampleMode::Nearest => "nearest",
            ResampleMode::Blend => "blend",
        }
    }
}

/// Resample the timeline to `target_fps`, preserving total duration within
/// one output-frame period.
pub fn convert_frame_rate(video: &Video, target_fps: f64, mode: ResampleMode) -> Result<Video> {
    if !target_fps.is_finite() || target_fps <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "target fps {target_fps} must be positive"
        )));
    }
    let n_in = video.frame_count();
    if n_in == 0 {
        return Video::new(vec![], FrameRate::from_f64(target_fps)?);
    }
    let fps_in = video.fps();
    let n_out = ((video.duration_seconds() * target_fps).round() as usize).max(1);

    let indices: Vec<usize> = (0..n_out).collect();
    let frames = map_indexed(&indices, |_, &i| {
        let t = i as f64 / target_fps;
        match mode {
            ResampleMode::Nearest => {
                let src = (t * fps_in).round() as usize;
                video.frames()[src.min(n_in - 1)].clone()
            }
            ResampleMode::Blend => {
                let s = t * fps_in;
                let i0 = (s.floor() as usize).min(n_in - 1);
                let i1 = (i0 + 1).min(n_in - 1);
                let frac = (s - i0 as f64).clamp(0.0, 1.0);
                blend_frames(&video.frames()[i0], &video.frames()[i1], frac)
            }
        }
    });
    Video::new(frames, FrameRate::from_f64(target_fps)?)
}

/// Remove a random `fraction` of frames. The receiver is not told: fps
/// metadata stays unchanged, which is what makes the attack adversarial.
pub fn drop_frames(video: &Video, fraction: f64, seed: u64) -> Result<Video> {
    Ok(drop_frames_with_survivors(video, fraction, seed)?.0)
}

/// [`drop_frames`] variant that also reports the surviving source indices
/// (analysis metadata; the attacked video itself carries no timestamps).
pub fn drop_frames_with_survivors(
    video: &Video,
    fraction: f64,
    seed: u64,
) -> Result<(Video, Vec<usize>)> {
    check_fraction(fraction)?;
    let n = video.frame_count();
    let k = (fraction * n as f64).floor() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dropped = vec![false; n];
    if k > 0 && n > 0 {
        for idx in index::sample(&mut rng, n, k) {
            dropped[idx] = true;
        }
    }
    let mut frames = Vec::with_capacity(n - k);
    let mut survivors = Vec::with_capacity(n - k);
    for (i, frame) in video.frames().iter().enumerate() {
        if !dropped[i] {
            frames.push(frame.clone());
            survivors.push(i);
        }
    }
    Ok((video.with_frames(frames)?, survivors))
}

/// Duplicate a random `fraction` of frames in place.
pub fn insert_frames(video: &Video, fraction: f64, seed: u64) -> Result<Video> {
    check_fraction(fraction)?;
    let n = video.frame_count();
    let k = (fraction * n as f64).floor() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut duplicated = vec![false; n];
    if k > 0 && n > 0 {
        for idx in index::sample(&mut rng, n, k) {
            duplicated[idx] = true;
        }
    }
    let mut frames = Vec::with_capacity(n + k);
    for (i, frame) in video.frames().iter().enumerate() {
        frames.push(frame.clone());
        if duplicated[i] {
            frames.push(frame.clone());
        }
    }
    video.with_frames(frames)
}

/// Exchange `pair_count` random nearby frame pairs (distance <= 3).
pub fn swap_frames(video: &Video, pair_count: usize, seed: u64) -> Result<Video> {
    let n = video.frame_count();
    let mut frames = video.frames().to_vec();
    if n >= 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..pair_count {
            let i = rng.random_range(0..n - 1);
            let d = rng.random_range(1..=3usize).min(n - 1 - i);
            frames.swap(i, i + d);
        }
    }
    video.with_frames(frames)
}

/// Replace each frame by the mean of a window of `radius` frames either side.
pub fn average_frames(video: &Video, radius: usize) -> Result<Video> {
    let n = video.frame_count();
    if n == 0 || radius == 0 {
        return Ok(video.clone());
    }
    let indices: Vec<usize> = (0..n).collect();
    let frames = map_indexed(&indices, |_, &i| {
        let lo = i.saturating_sub(radius);
        let hi = (i + radius).min(n - 1);
        let window: Vec<&Frame> = video.frames()[lo..=hi].iter().collect();
        mean_frames(&window)
    });
    video.with_frames(frames)
}

/// Rotate each frame about its centre, crop to the largest same-aspect
/// interior rectangle, and rescale back to the original dimensions.
pub fn rotate_crop(video: &Video, angle_degrees: f64) -> Result<Video> {
    if !angle_degrees.is_finite() || angle_degrees.abs() > 45.0 {
        return Err(Error::InvalidParam(format!(
            "rotation angle {angle_degrees} out of [-45, 45]"
        )));
    }
    let radians = angle_degrees.to_radians();
    map_planes(video, |plane| {
        let (rows, cols) = plane.dim();
        let scale = resample::inscribed_scale(cols as f64, rows as f64, radians);
        let (cr, cc) = (
            ((rows as f64 * scale).floor() as usize).max(1),
            ((cols as f64 * scale).floor() as usize).max(1),
        );
        let rotated = resample::rotate(plane, radians);
        let cropped = resample::center_crop(&rotated, cr, cc);
        resample::resize(&cropped, rows, cols)
    })
}

/// Upscale by `percent` (100..=300) and centre-crop back to the original size.
pub fn upscale_crop(video: &Video, percent: f64) -> Result<Video> {
    if !percent.is_finite() || !(100.0..=300.0).contains(&percent) {
        return Err(Error::InvalidParam(format!(
            "upscale percent {percent} out of [100, 300]"
        )));
    }
    let factor = percent / 100.0;
    map_planes(video, |plane| {
        let (rows, cols) = plane.dim();
        let big = resample::resize(
            plane,
            ((rows as f64 * factor).round() as usize).max(rows),
            ((cols as f64 * factor).round() as usize).max(cols),
        );
        resample::center_crop(&big, rows, cols)
    })
}

/// Downscale by `factor` in (0, 1) and upscale back, simulating resolution
/// loss at unchanged dimensions.
pub fn downscale(video: &Video, factor: f64) -> Result<Video> {
    if !factor.is_finite() || factor <= 0.0 || factor >= 1.0 {
        return Err(Error::InvalidParam(format!(
            "downscale factor {factor} out of (0, 1)"
        )));
    }
    map_planes(video, |plane| {
        let (rows, cols) = plane.dim();
        let small = resample::resize(
            plane,
            ((rows as f64 * factor).round() as usize).max(1),
            ((cols as f64 * factor).round() as usize).max(1),
        );
        resample::resize(&small, rows, cols)
    })
}

/// Add i.i.d. zero-mean Gaussian noise, clamped to [0, 255].
pub fn add_noise(video: &Video, sigma: f64, seed: u64) -> Result<Video> {
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(Error::InvalidParam(format!("noise sigma {sigma} must be >= 0")));
    }
    if sigma == 0.0 {
        return Ok(video.clone());
    }
    let normal = Normal::new(0.0, sigma).expect("sigma checked positive");
    let frames = map_indexed(video.frames(), |i, frame| {
        // one RNG per frame keeps the result independent of scheduling
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, i as u64));
        let mut noisy =
            |p: &Array2<f64>| p.mapv(|v| (v + normal.sample(&mut rng)).clamp(0.0, 255.0));
        let (y, u, v) = (noisy(frame.y_plane()), noisy(frame.u_plane()), noisy(frame.v_plane()));
        Frame::new(y, u, v, frame.sampling()).expect("noise keeps planes valid")
    });
    video.with_frames(frames)
}

/// JPEG-like degradation: 8x8 block DCT, uniform quantisation with `step`,
/// inverse DCT, clamp.
pub fn quantize(video: &Video, step: u32) -> Result<Video> {
    if !(1..=64).contains(&step) {
        return Err(Error::InvalidParam(format!("quantize step {step} out of 1..=64")));
    }
    let step = f64::from(step);
    map_planes(video, |plane| quantize_plane(plane, step))
}

fn check_fraction(fraction: f64) -> Result<()> {
    if !fraction.is_finite() || !(0.0..=0.5).contains(&fraction) {
        return Err(Error::InvalidParam(format!(
            "fraction {fraction} out of [0, 0.5]"
        )));
    }
    Ok(())
}

fn mix_seed(seed: u64, frame: u64) -> u64 {
    // splitmix64 finaliser over the combined value
    let mut z = seed ^ frame.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn blend_frames(a: &Frame, b: &Frame, frac: f64) -> Frame {
    let lerp = |pa: &Array2<f64>, pb: &Array2<f64>| {
        let mut out = pa.clone();
        out.zip_mut_with(pb, |x, &y| *x = *x * (1.0 - frac) + y * frac);
        out
    };
    Frame::new(
        lerp(a.y_plane(), b.y_plane()),
        lerp(a.u_plane(), b.u_plane()),
        lerp(a.v_plane(), b.v_plane()),
        a.sampling(),
    )
    .expect("blend keeps planes valid")
}

fn mean_frames(frames: &[&Frame]) -> Frame {
    let n = frames.len() as f64;
    let mean = |select: fn(&Frame) -> &Array2<f64>| {
        let mut acc = select(frames[0]).clone();
        for f in &frames[1..] {
            acc.zip_mut_with(select(f), |a, &b| *a += b);
        }
        acc.mapv(|v| v / n)
    };
    Frame::new(
        mean(Frame::y_plane),
        mean(Frame::u_plane),
        mean(Frame::v_plane),
        frames[0].sampling(),
    )
    .expect("mean keeps planes valid")
}

/// Apply a per-plane transform to every frame in parallel.
fn map_planes<F>(video: &Video, f: F) -> Result<Video>
where
    F: Fn(&Array2<f64>) -> Array2<f64> + Sync,
{
    let frames = map_indexed(video.frames(), |_, frame| {
        Frame::new(
            f(frame.y_plane()),
            f(frame.u_plane()),
            f(frame.v_plane()),
            frame.sampling(),
        )
        .expect("plane transform keeps dimensions")
    });
    video.with_frames(frames)
}

// ---- 8x8 block DCT ----

fn dct_basis() -> &'static [[f64; 8]; 8] {
    use std::sync::OnceLock;
    static BASIS: OnceLock<[[f64; 8]; 8]> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut b = [[0.0; 8]; 8];
        for (u, row) in b.iter_mut().enumerate() {
            let cu = if u == 0 { (1.0f64 / 8.0).sqrt() } else { (2.0f64 / 8.0).sqrt() };
            for (x, v) in row.iter_mut().enumerate() {
                *v = cu * ((2 * x + 1) as f64 * u as f64 * std::f64::consts::PI / 16.0).cos();
            }
        }
        b
    })
}

fn quantize_plane(plane: &Array2<f64>, step: f64) -> Array2<f64> {
    let basis = dct_basis();
    let (rows, cols) = plane.dim();
    let mut out = Array2::zeros((rows, cols));
    let mut block = [[0.0f64; 8]; 8];
    let mut coeff = [[0.0f64; 8]; 8];
    for br in (0..rows).step_by(8) {
        for bc in (0..cols).step_by(8) {
            // edge blocks replicate the border
            for (r, row) in block.iter_mut().enumerate() {
                for (c, v) in row.iter_mut().enumerate() {
                    *v = plane[[(br + r).min(rows - 1), (bc + c).min(cols - 1)]] - 128.0;
                }
            }
            // C = B X B^T, quantise, X' = B^T C B
            for u in 0..8 {
                for v in 0..8 {
                    let mut acc = 0.0;
                    for (x, brow) in block.iter().enumerate() {
                        for (y, &val) in brow.iter().enumerate() {
                            acc += basis[u][x] * val * basis[v][y];
                        }
                    }
                    coeff[u][v] = (acc / step).round() * step;
                }
            }
            for x in 0..rows.min(br + 8).saturating_sub(br) {
                for y in 0..cols.min(bc + 8).saturating_sub(bc) {
                    let mut acc = 0.0;
                    for (u, crow) in coeff.iter().enumerate() {
                        for (v, &cv) in crow.iter().enumerate() {
                            acc += basis[u][x] * cv * basis[v][y];
                        }
                    }
                    out[[br + x, bc + y]] = (acc + 128.0).clamp(0.0, 255.0);
                }
            }
        }
    }
    out
}
