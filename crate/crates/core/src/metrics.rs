//! Quality and robustness scoring: PSNR between videos, normalized
//! correlation and bit error rate between watermark sequences.

use crate::error::{Error, Result};
use crate::par::map_indexed;
use crate::video_io::Video;
use crate::watermark::{Bit, Detection, GroupVerdicts};

/// PSNR pooled over all planes plus per-channel figures (dB).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsnrReport {
    pub overall_db: f64,
    pub y_db: f64,
    pub u_db: f64,
    pub v_db: f64,
}

/// PSNR between two videos of identical geometry. MSE pools every plane of
/// every frame with sample-count weights; identical inputs give +inf.
pub fn psnr(a: &Video, b: &Video) -> Result<PsnrReport> {
    if a.frame_count() != b.frame_count() {
        return Err(Error::LengthMismatch(format!(
            "frame counts {} vs {}",
            a.frame_count(),
            b.frame_count()
        )));
    }
    if a.width() != b.width() || a.height() != b.height() || a.sampling() != b.sampling() {
        return Err(Error::LengthMismatch("frame geometry differs".into()));
    }

    // (sse, samples) per plane kind, per frame; reduced in frame order
    let per_frame = map_indexed(a.frames(), |i, fa| {
        let fb = &b.frames()[i];
        let sse = |x: &ndarray::Array2<f64>, y: &ndarray::Array2<f64>| {
            x.iter().zip(y.iter()).map(|(p, q)| (p - q) * (p - q)).sum::<f64>()
        };
        [
            (sse(fa.y_plane(), fb.y_plane()), fa.y_plane().len()),
            (sse(fa.u_plane(), fb.u_plane()), fa.u_plane().len()),
            (sse(fa.v_plane(), fb.v_plane()), fa.v_plane().len()),
        ]
    });

    let mut sums = [(0.0f64, 0usize); 3];
    for channels in per_frame {
        for (k, (sse, n)) in channels.into_iter().enumerate() {
            sums[k].0 += sse;
            sums[k].1 += n;
        }
    }
    let db = |sse: f64, n: usize| {
        if n == 0 {
            return f64::INFINITY;
        }
        let mse = sse / n as f64;
        if mse == 0.0 {
            f64::INFINITY
        } else {
            10.0 * (255.0 * 255.0 / mse).log10()
        }
    };
    let total_sse: f64 = sums.iter().map(|s| s.0).sum();
    let total_n: usize = sums.iter().map(|s| s.1).sum();
    Ok(PsnrReport {
        overall_db: db(total_sse, total_n),
        y_db: db(sums[0].0, sums[0].1),
        u_db: db(sums[1].0, sums[1].1),
        v_db: db(sums[2].0, sums[2].1),
    })
}

/// Normalized correlation between a reference +-1 sequence and a detected
/// sequence; erasures contribute zero.
pub fn nc(reference: &[Bit], detected: &[Detection]) -> Result<f64> {
    if reference.len() != detected.len() {
        return Err(Error::LengthMismatch(format!(
            "sequence lengths {} vs {}",
            reference.len(),
            detected.len()
        )));
    }
    if reference.is_empty() {
        return Err(Error::LengthMismatch("empty sequences".into()));
    }
    let dot: f64 = reference
        .iter()
        .zip(detected)
        .map(|(r, d)| r.sign() * d.vote() as f64)
        .sum();
    Ok(dot / reference.len() as f64)
}

/// Fraction of positions where the detection differs from the reference;
/// erasures count as errors.
pub fn ber(reference: &[Bit], detected: &[Detection]) -> Result<f64> {
    if reference.len() != detected.len() {
        return Err(Error::LengthMismatch(format!(
            "sequence lengths {} vs {}",
            reference.len(),
            detected.len()
        )));
    }
    if reference.is_empty() {
        return Err(Error::LengthMismatch("empty sequences".into()));
    }
    let bad = reference
        .iter()
        .zip(detected)
        .filter(|(r, d)| !d.matches(**r))
        .count();
    Ok(bad as f64 / reference.len() as f64)
}

/// One attack's scoring against a reference payload.
#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessReport {
    pub attack: String,
    pub nc: f64,
    pub ber: f64,
    pub erasure_count: usize,
    pub verdicts: Vec<Detection>,
}

impl RobustnessReport {
    pub fn new(attack: impl Into<String>, reference: &[Bit], verdicts: &GroupVerdicts) -> Result<Self> {
        let nc = nc(reference, &verdicts.symbols)?;
        let ber = ber(reference, &verdicts.symbols)?;
        Ok(RobustnessReport {
            attack: attack.into(),
            nc,
            ber,
            erasure_count: verdicts
                .symbols
                .iter()
                .filter(|s| matches!(s, Detection::Erasure))
                .count(),
            verdicts: verdicts.symbols.clone(),
        })
    }
}

/// Fixed-precision decibel formatting; infinity serialises as "inf".
pub fn format_db(db: f64) -> String {
    if db.is_infinite() {
        "inf".to_string()
    } else {
        format!("{db:.6}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::video_io::{synth_video, Frame, Pattern, Video};

    fn bits(s: &str) -> Vec<Bit> {
        crate::watermark::bits_from_str(s).unwrap()
    }

    #[test]
    fn identical_videos_have_infinite_psnr() {
        let v = synth_video(16, 16, 3, 30.0, 1, Pattern::TexturedNoise).unwrap();
        let r = psnr(&v, &v).unwrap();
        assert!(r.overall_db.is_infinite());
        assert_eq!(format_db(r.overall_db), "inf");
    }

    #[test]
    fn uniform_offset_has_analytic_psnr() {
        let v = synth_video(16, 16, 3, 30.0, 2, Pattern::Blocks).unwrap();
        // +1 on every sample of every plane, avoiding clamp at 255
        let shifted: Vec<Frame> = v
            .frames()
            .iter()
            .map(|f| {
                Frame::new(
                    f.y_plane().mapv(|x| if x < 255.0 { x + 1.0 } else { x - 1.0 }),
                    f.u_plane().mapv(|x| if x < 255.0 { x + 1.0 } else { x - 1.0 }),
                    f.v_plane().mapv(|x| if x < 255.0 { x + 1.0 } else { x - 1.0 }),
                    f.sampling(),
                )
                .unwrap()
            })
            .collect();
        let w = Video::new(shifted, v.frame_rate()).unwrap();
        let r = psnr(&v, &w).unwrap();
        let want = 20.0 * 255.0f64.log10(); // MSE = 1
        assert!((r.overall_db - want).abs() < 1e-9, "{}", r.overall_db);
        // symmetry
        let r2 = psnr(&w, &v).unwrap();
        assert_eq!(r.overall_db, r2.overall_db);
    }

    #[test]
    fn psnr_rejects_mismatched_inputs() {
        let a = synth_video(16, 16, 3, 30.0, 1, Pattern::Blocks).unwrap();
        let b = synth_video(16, 16, 4, 30.0, 1, Pattern::Blocks).unwrap();
        assert!(psnr(&a, &b).is_err());
        let c = synth_video(32, 16, 3, 30.0, 1, Pattern::Blocks).unwrap();
        assert!(psnr(&a, &c).is_err());
    }

    #[test]
    fn nc_examples() {
        let r = bits("101");
        let d: Vec<Detection> = r.iter().map(|b| match b {
            Bit::Plus => Detection::Plus,
            Bit::Minus => Detection::Minus,
        }).collect();
        assert_eq!(nc(&r, &d).unwrap(), 1.0);

        let r = bits("1111");
        let d = vec![
            Detection::Plus,
            Detection::Plus,
            Detection::Erasure,
            Detection::Minus,
        ];
        assert!((nc(&r, &d).unwrap() - 0.25).abs() < 1e-15);
        assert!((ber(&r, &d).unwrap() - 0.5).abs() < 1e-15);

        let all_erased = vec![Detection::Erasure; 4];
        assert_eq!(nc(&r, &all_erased).unwrap(), 0.0);
        assert_eq!(ber(&r, &all_erased).unwrap(), 1.0);

        let flipped = vec![Detection::Minus; 4];
        assert_eq!(nc(&r, &flipped).unwrap(), -1.0);

        assert!(nc(&r, &d[..3].to_vec()).is_err());
    }

    #[test]
    fn ber_single_flip() {
        let r = bits("101010");
        let mut d: Vec<Detection> = r.iter().map(|b| match b {
            Bit::Plus => Detection::Plus,
            Bit::Minus => Detection::Minus,
        }).collect();
        assert_eq!(ber(&r, &d).unwrap(), 0.0);
        d[2] = Detection::Minus;
        assert!((ber(&r, &d).unwrap() - 1.0 / 6.0).abs() < 1e-15);
    }
}
