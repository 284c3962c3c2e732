//! CLI-facing attack grammar. One attack is `kind:key=value,key=value`;
//! chains join attacks with `+` and apply left to right, e.g.
//! `rotate_crop:angle=10+framerate:fps=15`.

use std::fmt;
use std::str::FromStr;

use super::ResampleMode;
use crate::error::{Error, Result};
use crate::video_io::Video;

pub const GRAMMAR: &str = "attacks: framerate:fps=<f>[,mode=nearest|blend] | \
drop:fraction=<f>[,seed=<n>] | insert:fraction=<f>[,seed=<n>] | \
swap:pairs=<n>[,seed=<n>] | average:radius=<n>| rotate_crop:angle=<deg> | \
upscale_crop:percent=<100..300> | downscale:factor=<f> | \
noise:sigma=<f>[,seed=<n>] | quantize:step=<1..64>; chain with '+'";

/// One parameterised attack.
#[derive(Debug, Clone, PartialEq)]
pub enum AttackSpec {
    FrameRate { fps: f64, mode: ResampleMode },
    Drop { fraction: f64, seed: u64 },
    Insert { fraction: f64, seed: u64 },
    Swap { pairs: usize, seed: u64 },
    Average { radius: usize },
    RotateCrop { angle: f64 },
    UpscaleCrop { percent: f64 },
    Downscale { factor: f64 },
    Noise { sigma: f64, seed: u64 },
    Quantize { step: u32 },
}

impl AttackSpec {
    /// Run the attack. Parameter validation happens here as well, so specs
    /// built directly (not parsed) get the same checks.
    pub fn apply(&self, video: &Video) -> Result<Video> {
        match *self {
            AttackSpec::FrameRate { fps, mode } => super::convert_frame_rate(video, fps, mode),
            AttackSpec::Drop { fraction, seed } => super::drop_frames(video, fraction, seed),
            AttackSpec::Insert { fraction, seed } => super::insert_frames(video, fraction, seed),
            AttackSpec::Swap { pairs, seed } => super::swap_frames(video, pairs, seed),
            AttackSpec::Average { radius } => super::average_frames(video, radius),
            AttackSpec::RotateCrop { angle } => super::rotate_crop(video, angle),
            AttackSpec::UpscaleCrop { percent } => super::upscale_crop(video, percent),
            AttackSpec::Downscale { factor } => super::downscale(video, factor),
            AttackSpec::Noise { sigma, seed } => super::add_noise(video, sigma, seed),
            AttackSpec::Quantize { step } => super::quantize(video, step),
        }
    }
}

impl fmt::Display for AttackSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AttackSpec::FrameRate { fps, mode } => {
                write!(f, "framerate:fps={fps},mode={}", mode.name())
            }
            AttackSpec::Drop { fraction, seed } => write!(f, "drop:fraction={fraction},seed={seed}"),
            AttackSpec::Insert { fraction, seed } => {
                write!(f, "insert:fraction={fraction},seed={seed}")
            }
            AttackSpec::Swap { pairs, seed } => write!(f, "swap:pairs={pairs},seed={seed}"),
            AttackSpec::Average { radius } => write!(f, "average:radius={radius}"),
            AttackSpec::RotateCrop { angle } => write!(f, "rotate_crop:angle={angle}"),
            AttackSpec::UpscaleCrop { percent } => write!(f, "upscale_crop:percent={percent}"),
            AttackSpec::Downscale { factor } => write!(f, "downscale:factor={factor}"),
            AttackSpec::Noise { sigma, seed } => write!(f, "noise:sigma={sigma},seed={seed}"),
            AttackSpec::Quantize { step } => write!(f, "quantize:step={step}"),
        }
    }
}

impl FromStr for AttackSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = match s.split_once(':') {
            Some((k, r)) => (k, r),
            None => (s, ""),
        };
        let mut params = Params::parse(kind, rest)?;
        let spec = match kind {
            "framerate" => AttackSpec::FrameRate {
                fps: params.take_f64("fps")?,
                mode: match params.take_opt("mode") {
                    None => ResampleMode::Nearest,
                    Some(m) if m == "nearest" => ResampleMode::Nearest,
                    Some(m) if m == "blend" => ResampleMode::Blend,
                    Some(m) => {
                        return Err(Error::AttackSpec(format!(
                            "unknown framerate mode '{m}'; {GRAMMAR}"
                        )))
                    }
                },
            },
            "drop" => AttackSpec::Drop {
                fraction: params.take_f64("fraction")?,
                seed: params.take_u64_or("seed", 0)?,
            },
            "insert" => AttackSpec::Insert {
                fraction: params.take_f64("fraction")?,
                seed: params.take_u64_or("seed", 0)?,
            },
            "swap" => AttackSpec::Swap {
                pairs: params.take_u64("pairs")? as usize,
                seed: params.take_u64_or("seed", 0)?,
            },
            "average" => AttackSpec::Average {
                radius: params.take_u64_or("radius", 1)? as usize,
            },
            "rotate_crop" => AttackSpec::RotateCrop {
                angle: params.take_f64("angle")?,
            },
            "upscale_crop" => AttackSpec::UpscaleCrop {
                percent: params.take_f64("percent")?,
            },
            "downscale" => AttackSpec::Downscale {
                factor: params.take_f64("factor")?,
            },
            "noise" => AttackSpec::Noise {
                sigma: params.take_f64("sigma")?,
                seed: params.take_u64_or("seed", 0)?,
            },
            "quantize" => AttackSpec::Quantize {
                step: params.take_u64("step")? as u32,
            },
            other => {
                return Err(Error::AttackSpec(format!("unknown attack kind '{other}'; {GRAMMAR}")))
            }
        };
        params.finish()?;
        Ok(spec)
    }
}

/// A left-to-right sequence of attacks.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AttackChain(pub Vec<AttackSpec>);

impl AttackChain {
    pub fn apply(&self, video: &Video) -> Result<Video> {
        let mut current = video.clone();
        for spec in &self.0 {
            current = spec.apply(&current)?;
        }
        Ok(current)
    }
}

impl fmt::Display for AttackChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "none");
        }
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl FromStr for AttackChain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "none" {
            return Ok(AttackChain(Vec::new()));
        }
        s.split('+').map(AttackSpec::from_str).collect::<Result<Vec<_>>>().map(AttackChain)
    }
}

struct Params<'a> {
    kind: &'a str,
    entries: Vec<(&'a str, &'a str)>,
}

impl<'a> Params<'a> {
    fn parse(kind: &'a str, rest: &'a str) -> Result<Self> {
        let mut entries = Vec::new();
        for part in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| {
                Error::AttackSpec(format!("expected key=value, found '{part}' in '{kind}'; {GRAMMAR}"))
            })?;
            entries.push((k, v));
        }
        Ok(Params { kind, entries })
    }

    fn take_opt(&mut self, key: &str) -> Option<&'a str> {
        let pos = self.entries.iter().position(|(k, _)| *k == key)?;
        Some(self.entries.remove(pos).1)
    }

    fn take_f64(&mut self, key: &str) -> Result<f64> {
        let raw = self.take_opt(key).ok_or_else(|| {
            Error::AttackSpec(format!("'{}' requires {key}=<value>; {GRAMMAR}", self.kind))
        })?;
        raw.parse::<f64>().map_err(|_| {
            Error::AttackSpec(format!("bad number '{raw}' for {key} in '{}'; {GRAMMAR}", self.kind))
        })
    }

    fn take_u64(&mut self, key: &str) -> Result<u64> {
        let raw = self.take_opt(key).ok_or_else(|| {
            Error::AttackSpec(format!("'{}' requires {key}=<value>; {GRAMMAR}", self.kind))
        })?;
        raw.parse::<u64>().map_err(|_| {
            Error::AttackSpec(format!("bad integer '{raw}' for {key} in '{}'; {GRAMMAR}", self.kind))
        })
    }

    fn take_u64_or(&mut self, key: &str, default: u64) -> Result<u64> {
        match self.take_opt(key) {
            None => Ok(default),
            Some(raw) => raw.parse::<u64>().map_err(|_| {
                Error::AttackSpec(format!(
                    "bad integer '{raw}' for {key} in '{}'; {GRAMMAR}",
                    self.kind
                ))
            }),
        }
    }

    fn finish(self) -> Result<()> {
        if let Some((k, _)) = self.entries.first() {
            return Err(Error::AttackSpec(format!(
                "unknown parameter '{k}' for '{}'; {GRAMMAR}",
                self.kind
            )));
        }
        Ok(())
    }
}
