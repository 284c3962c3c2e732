//! The watermark codec: candidate-curve computation, per-frame bit embedding
//! by curve reshaping, duration-anchored group planning, and sequence-level
//! encode/decode with majority voting.
//!
//! One frame carries one bit in the shape of the curve formed by the six
//! leading singular values of its deepest-level U-plane sub-band magnitudes:
//! a rising line encodes +1, a falling line -1. Groups are time intervals,
//! not frame ranges, so the mapping from frames to bits survives frame-rate
//! conversion: the receiver reconstructs timestamps as `i / fps` and the
//! group boundaries depend only on the (rate-invariant) duration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dtcwt::{self, DtcwtPyramid};
use crate::error::{Error, Result};
use crate::par::map_indexed;
use crate::svd;
use crate::video_io::{Frame, Video};

/// Default embedding strength (relative slope of the target line).
pub const DEFAULT_STRENGTH: f64 = 0.8;
/// Default clip ratio: six groups per video.
pub const DEFAULT_CLIP_RATIO: f64 = 1.0 / 6.0;
/// Default decomposition depth.
pub const DEFAULT_DEPTH: usize = 3;

/// Mean curve level below which a frame counts as unembeddable.
const CURVE_EPS: f64 = 1e-6;
/// Per-band rescale ratios are clamped into this range.
const RATIO_MIN: f64 = 0.05;
const RATIO_MAX: f64 = 20.0;
/// Guard against division by zero in the confidence score.
const CONF_EPS: f64 = 1e-12;

/// A payload symbol: +1 or -1 (bitstring '1' / '0').
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bit {
    Plus,
    Minus,
}

impl Bit {
    pub fn sign(self) -> f64 {
        match self {
            Bit::Plus => 1.0,
            Bit::Minus => -1.0,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Bit::Plus => '1',
            Bit::Minus => '0',
        }
    }
}

/// A detected symbol: one of the two bits, or an erasure when the evidence is
/// balanced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Detection {
    Plus,
    Minus,
    Erasure,
}

impl Detection {
    /// Vote contribution: +1, -1 or 0.
    pub fn vote(self) -> i64 {
        match self {
            Detection::Plus => 1,
            Detection::Minus => -1,
            Detection::Erasure => 0,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Detection::Plus => '1',
            Detection::Minus => '0',
            Detection::Erasure => '?',
        }
    }

    pub fn matches(self, bit: Bit) -> bool {
        matches!(
            (self, bit),
            (Detection::Plus, Bit::Plus) | (Detection::Minus, Bit::Minus)
        )
    }
}

/// Extraction detector variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DetectorMode {
    /// Sign of the least-squares slope over the six curve points.
    #[default]
    SlopeSign,
    /// Pairwise comparator over curve points 2/4 and 3/5 (sign-consistent
    /// with embedding: rising pairs read +1); disagreeing pairs are erasures.
    Comparator,
}

/// The six leading singular values (one per direction) of a frame's
/// deepest-level sub-band magnitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateCurve {
    pub values: [f64; 6],
}

impl CandidateCurve {
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / 6.0
    }

    /// Least-squares slope of the line through (d, y_d), d = 1..6.
    pub fn slope(&self) -> f64 {
        // sum over centred abscissa (d - 3.5); denominator sum (d-3.5)^2 = 17.5
        self.values
            .iter()
            .enumerate()
            .map(|(i, &y)| (i as f64 + 1.0 - 3.5) * y)
            .sum::<f64>()
            / 17.5
    }
}

/// Embedding parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbedParams {
    /// Relative slope of the target line; the endpoints sit at
    /// `mean * (1 -+ k)`, so k in (0, 1] keeps every target non-negative.
    pub strength_k: f64,
    /// DTCWT decomposition depth; the curve lives at the deepest level.
    pub depth: usize,
}

impl Default for EmbedParams {
    fn default() -> Self {
        Self {
            strength_k: DEFAULT_STRENGTH,
            depth: DEFAULT_DEPTH,
        }
    }
}

impl EmbedParams {
    pub fn validate(&self) -> Result<()> {
        if !self.strength_k.is_finite() || self.strength_k <= 0.0 || self.strength_k > 1.0 {
            return Err(Error::InvalidParam(format!(
                "strength k = {} must lie in (0, 1]",
                self.strength_k
            )));
        }
        if self.depth == 0 || self.depth > dtcwt::MAX_LEVELS {
            return Err(Error::InvalidParam(format!(
                "depth {} out of 1..={}",
                self.depth,
                dtcwt::MAX_LEVELS
            )));
        }
        Ok(())
    }
}

/// Time-interval partition of a video mapping frames to watermark bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupPlan {
    pub group_duration_seconds: f64,
    pub group_count: usize,
    pub clip_ratio_c: f64,
}

impl GroupPlan {
    /// Group index of a timestamp, clamped to the last group.
    pub fn group_of(&self, timestamp: f64) -> usize {
        let g = (timestamp / self.group_duration_seconds).floor();
        (g.max(0.0) as usize).min(self.group_count - 1)
    }
}

/// Per-group vote outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupVerdicts {
    /// Vote sums (erasures contribute zero).
    pub flags: Vec<i64>,
    /// Sign of each flag; zero flags are erasures.
    pub symbols: Vec<Detection>,
    /// Frames that voted in each group.
    pub frames_per_group: Vec<usize>,
    /// Mean per-frame confidence in each group.
    pub mean_confidence: Vec<f64>,
}

impl GroupVerdicts {
    /// Recovered bitstring with '?' marking erasures.
    pub fn bitstring(&self) -> String {
        self.symbols.iter().map(|s| s.to_char()).collect()
    }
}

/// Result of embedding a payload into a video.
#[derive(Debug, Clone)]
pub struct EmbedOutcome {
    pub video: Video,
    /// Frames skipped as unembeddable (flat U plane).
    pub skipped_frames: Vec<usize>,
    /// Embedded frame count per group.
    pub embedded_per_group: Vec<usize>,
}

/// Parse a payload bitstring ('1' -> +1, '0' -> -1).
pub fn bits_from_str(s: &str) -> Result<Vec<Bit>> {
    s.chars()
        .map(|c| match c {
            '1' => Ok(Bit::Plus),
            '0' => Ok(Bit::Minus),
            _ => Err(Error::InvalidParam(format!(
                "payload may contain only '0' and '1', found {c:?}"
            ))),
        })
        .collect()
}

/// Deterministic pseudo-random payload.
pub fn bits_from_seed(seed: u64, count: usize) -> Vec<Bit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| if rng.random::<bool>() { Bit::Plus } else { Bit::Minus })
        .collect()
}

/// Candidate curve of a frame: y_d is the leading singular value of the
/// level-`depth`, direction-d sub-band magnitude of the U plane.
pub fn candidate_curve(frame: &Frame, depth: usize) -> Result<CandidateCurve> {
    let u = frame.u_at_luma_res();
    let pyramid = dtcwt::forward(&u, depth)?;
    curve_from_pyramid(&pyramid)
}

fn curve_from_pyramid(pyramid: &DtcwtPyramid) -> Result<CandidateCurve> {
    let depth = pyramid.depth();
    let mut values = [0.0; 6];
    for (d, value) in values.iter_mut().enumerate() {
        let mag = dtcwt::subband_magnitude(pyramid, depth, d + 1)?;
        *value = match svd::leading_singular_value(&mag) {
            Ok(v) => v,
            // power-iteration stall: fall back to the full decomposition
            Err(Error::NoConvergence(_)) => svd::decompose(&mag)?.s[0],
            Err(e) => return Err(e),
        };
    }
    Ok(CandidateCurve { values })
}

/// Target curve for bit `w`: the line through the six positions with mean
/// preserved and relative slope `k`, i.e. `y_d = y0 (1 + w k (d - 3.5)/2.5)`.
pub fn target_curve(curve: &CandidateCurve, w: Bit, k: f64) -> Result<CandidateCurve> {
    if !k.is_finite() || k <= 0.0 || k > 1.0 {
        return Err(Error::InvalidParam(format!("strength k = {k} must lie in (0, 1]")));
    }
    let y0 = curve.mean();
    if !(y0 > CURVE_EPS) {
        return Err(Error::UnembeddableFrame);
    }
    let mut values = [0.0; 6];
    for (i, v) in values.iter_mut().enumerate() {
        let d = i as f64 + 1.0;
        *v = y0 * (1.0 + w.sign() * k * (d - 3.5) / 2.5);
    }
    Ok(CandidateCurve { values })
}

/// Embed one bit into a frame by rescaling the deepest-level sub-bands so the
/// candidate curve becomes the target line. Only the U plane changes.
pub fn embed_bit(frame: &Frame, w: Bit, params: &EmbedParams) -> Result<Frame> {
    params.validate()?;
    let u = frame.u_at_luma_res();
    let mut pyramid = dtcwt::forward(&u, params.depth)?;
    let curve = curve_from_pyramid(&pyramid)?;
    let target = target_curve(&curve, w, params.strength_k)?;
    for d in 1..=6 {
        let y = curve.values[d - 1];
        if y <= CURVE_EPS {
            // nothing to rescale in this direction; leave the band alone
            continue;
        }
        let ratio = (target.values[d - 1] / y).clamp(RATIO_MIN, RATIO_MAX);
        dtcwt::scale_subband_in_place(&mut pyramid, params.depth, d, ratio)?;
    }
    let rebuilt = dtcwt::inverse(&pyramid)?.mapv(|v| v.clamp(0.0, 255.0));
    frame.with_u_from_luma_res(rebuilt)
}

/// Extract one bit with the default slope-sign detector. Returns the detected
/// symbol and a dimensionless confidence score.
pub fn extract_bit(frame: &Frame, params: &EmbedParams) -> Result<(Detection, f64)> {
    extract_bit_with(frame, params, DetectorMode::SlopeSign)
}

/// Extract one bit with an explicit detector mode.
pub fn extract_bit_with(
    frame: &Frame,
    params: &EmbedParams,
    mode: DetectorMode,
) -> Result<(Detection, f64)> {
    params.validate()?;
    let curve = candidate_curve(frame, params.depth)?;
    let slope = curve.slope();
    let confidence = slope.abs() * 6.0 / (curve.mean() + CONF_EPS);
    let detection = match mode {
        DetectorMode::SlopeSign => {
            if slope > 0.0 {
                Detection::Plus
            } else if slope < 0.0 {
                Detection::Minus
            } else {
                Detection::Erasure
            }
        }
        DetectorMode::Comparator => {
            let y = &curve.values;
            let rising = y[1] < y[3] && y[2] < y[4];
            let falling = y[1] > y[3] && y[2] > y[4];
            match (rising, falling) {
                (true, false) => Detection::Plus,
                (false, true) => Detection::Minus,
                _ => Detection::Erasure,
            }
        }
    };
    Ok((detection, confidence))
}

/// Partition a video into groups by time. Group boundaries are a function of
/// duration and the clip ratio only, hence invariant under frame-rate
/// conversion of the same footage.
pub fn plan_groups(video: &Video, clip_ratio_c: f64) -> Result<GroupPlan> {
    if video.frame_count() == 0 {
        return Err(Error::InvalidParam("cannot plan groups for an empty video".into()));
    }
    if !clip_ratio_c.is_finite() || clip_ratio_c <= 0.0 || clip_ratio_c > 1.0 {
        return Err(Error::InvalidParam(format!(
            "clip ratio c = {clip_ratio_c} must lie in (0, 1]"
        )));
    }
    let group_count = ((1.0 / clip_ratio_c).round() as usize).max(1);
    Ok(GroupPlan {
        group_duration_seconds: video.duration_seconds() * clip_ratio_c,
        group_count,
        clip_ratio_c,
    })
}

/// Embed one bit per group across the whole video. Unembeddable frames are
/// skipped and reported in the outcome.
pub fn embed_sequence(
    video: &Video,
    bits: &[Bit],
    params: &EmbedParams,
    clip_ratio_c: f64,
) -> Result<EmbedOutcome> {
    params.validate()?;
    let plan = plan_groups(video, clip_ratio_c)?;
    if bits.len() != plan.group_count {
        return Err(Error::PayloadLength {
            expected: plan.group_count,
            got: bits.len(),
        });
    }

    let fps = video.fps();
    let results = map_indexed(video.frames(), |i, frame| {
        let group = plan.group_of(i as f64 / fps);
        (group, embed_bit(frame, bits[group], params))
    });

    let mut frames = Vec::with_capacity(results.len());
    let mut skipped = Vec::new();
    let mut embedded_per_group = vec![0usize; plan.group_count];
    for (i, (group, res)) in results.into_iter().enumerate() {
        match res {
            Ok(f) => {
                embedded_per_group[group] += 1;
                frames.push(f);
            }
            Err(Error::UnembeddableFrame) => {
                skipped.push(i);
                frames.push(video.frames()[i].clone());
            }
            Err(e) => return Err(e),
        }
    }
    Ok(EmbedOutcome {
        video: video.with_frames(frames)?,
        skipped_frames: skipped,
        embedded_per_group,
    })
}

/// Extract per-frame bits, group them by timestamp and vote.
pub fn extract_sequence(
    video: &Video,
    params: &EmbedParams,
    clip_ratio_c: f64,
) -> Result<GroupVerdicts> {
    extract_sequence_with(video, params, clip_ratio_c, DetectorMode::SlopeSign)
}

/// [`extract_sequence`] with an explicit detector mode.
pub fn extract_sequence_with(
    video: &Video,
    params: &EmbedParams,
    clip_ratio_c: f64,
    mode: DetectorMode,
) -> Result<GroupVerdicts> {
    params.validate()?;
    let plan = plan_groups(video, clip_ratio_c)?;
    let fps = video.fps();

    let detections = map_indexed(video.frames(), |i, frame| {
        (plan.group_of(i as f64 / fps), extract_bit_with(frame, params, mode))
    });

    let mut flags = vec![0i64; plan.group_count];
    let mut frames_per_group = vec![0usize; plan.group_count];
    let mut conf_sum = vec![0.0f64; plan.group_count];
    for (group, det) in detections {
        let (detection, confidence) = det?;
        flags[group] += detection.vote();
        frames_per_group[group] += 1;
        conf_sum[group] += confidence;
    }
    let symbols = flags
        .iter()
        .map(|&f| match f.cmp(&0) {
            std::cmp::Ordering::Greater => Detection::Plus,
            std::cmp::Ordering::Less => Detection::Minus,
            std::cmp::Ordering::Equal => Detection::Erasure,
        })
        .collect();
    let mean_confidence = conf_sum
        .iter()
        .zip(&frames_per_group)
        .map(|(&s, &n)| if n > 0 { s / n as f64 } else { 0.0 })
        .collect();
    Ok(GroupVerdicts {
        flags,
        symbols,
        frames_per_group,
        mean_confidence,
    })
}
