//! The one-shot robustness benchmark: build the synthetic corpus, embed
//! seeded payloads, run the attack matrix, and emit a CSV plus a summary
//! table. Fully deterministic for a given seed: rows are written in a fixed
//! order and floats with a fixed format, so identical seeds give
//! byte-identical reports.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::Args;

use framemark_core::attacks::AttackChain;
use framemark_core::metrics::{self, format_db};
use framemark_core::video_io::{corpus, CORPUS_PATTERNS};
use framemark_core::watermark::{self, EmbedParams};

use crate::Failure;

/// Attack matrix: every robustness row of the evaluation protocol, plus the
/// no-attack baseline.
pub const ATTACK_MATRIX: [&str; 14] = [
    "none",
    "quantize:step=8",
    "downscale:factor=0.5",
    "upscale_crop:percent=110",
    "upscale_crop:percent=120",
    "upscale_crop:percent=130",
    "rotate_crop:angle=5",
    "rotate_crop:angle=10",
    "rotate_crop:angle=15",
    "framerate:fps=50",
    "framerate:fps=40",
    "framerate:fps=15",
    "framerate:fps=5",
    "rotate_crop:angle=10+framerate:fps=15",
];

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Corpus seed; identical seeds give byte-identical reports.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// CSV report path.
    #[arg(long, default_value = "bench_report.csv")]
    pub report: PathBuf,
    /// Embedding strength k in (0, 1].
    #[arg(long, default_value_t = watermark::DEFAULT_STRENGTH)]
    pub strength: f64,
    /// Clip ratio c in (0, 1]; accepts fractions like 1/6.
    #[arg(long, value_parser = crate::parse_ratio, default_value = "1/6")]
    pub clip_ratio: f64,
    /// Decomposition depth.
    #[arg(long, default_value_t = watermark::DEFAULT_DEPTH)]
    pub depth: usize,
    /// Corpus frame width/height.
    #[arg(long, default_value_t = 64)]
    pub size: usize,
    /// Frames per corpus video.
    #[arg(long, default_value_t = 300)]
    pub frames: usize,
    /// Corpus frame rate.
    #[arg(long, default_value_t = 30.0)]
    pub fps: f64,
}

pub fn cmd_bench(args: BenchArgs) -> Result<String, Failure> {
    let (csv, table) = run_bench(&args)?;
    fs::write(&args.report, &csv)
        .map_err(|e| Failure::io(format!("cannot write {}: {e}", args.report.display())))?;
    Ok(format!("{table}report written to {}\n", args.report.display()))
}

/// Run the benchmark; returns (csv, human-readable table).
pub fn run_bench(args: &BenchArgs) -> Result<(String, String), Failure> {
    let params = EmbedParams {
        strength_k: args.strength,
        depth: args.depth,
    };
    let videos = corpus(args.seed, args.size, args.size, args.frames, args.fps)?;

    let mut csv = String::from("video,attack,nc,ber,psnr_embed\n");
    let mut table = String::new();
    let _ = writeln!(
        table,
        "{:<24} {:>8} {:>8} {:>10}  per-video nc",
        "attack", "mean nc", "min nc", "erasures"
    );

    // embed every corpus video once
    let mut embedded = Vec::new();
    for (i, video) in videos.iter().enumerate() {
        let plan = watermark::plan_groups(video, args.clip_ratio)?;
        let bits = watermark::bits_from_seed(args.seed ^ (0xB175 + i as u64), plan.group_count);
        let outcome = watermark::embed_sequence(video, &bits, &params, args.clip_ratio)?;
        let psnr = metrics::psnr(video, &outcome.video)?.overall_db;
        let name = format!("corpus-{i:02}-{}", CORPUS_PATTERNS[i % CORPUS_PATTERNS.len()].name());
        embedded.push((name, outcome.video, bits, psnr));
    }

    let mut min_occupancy = usize::MAX;
    for attack in ATTACK_MATRIX {
        let chain: AttackChain = attack.parse()?;
        let mut ncs = Vec::new();
        let mut erasures = 0usize;
        for (name, marked, bits, psnr) in &embedded {
            let attacked = chain.apply(marked)?;
            let verdicts =
                watermark::extract_sequence(&attacked, &params, args.clip_ratio)?;
            if let Some(&lo) = verdicts.frames_per_group.iter().min() {
                min_occupancy = min_occupancy.min(lo);
                if lo == 0 {
                    return Err(Failure {
                        code: 3,
                        message: format!(
                            "attack '{attack}' left an empty group on {name}; \
                             clip ratio {} is too fine for this duration",
                            args.clip_ratio
                        ),
                    });
                }
            }
            let report = metrics::RobustnessReport::new(attack, bits, &verdicts)?;
            erasures += report.erasure_count;
            let _ = writeln!(
                csv,
                "{name},{attack},{:.6},{:.6},{}",
                report.nc,
                report.ber,
                format_db(*psnr)
            );
            ncs.push(report.nc);
        }
        let mean = ncs.iter().sum::<f64>() / ncs.len() as f64;
        let min = ncs.iter().cloned().fold(f64::INFINITY, f64::min);
        let per_video: Vec<String> = ncs.iter().map(|v| format!("{v:.2}")).collect();
        let _ = writeln!(
            table,
            "{attack:<24} {mean:>8.3} {min:>8.3} {erasures:>10}  [{}]",
            per_video.join(" ")
        );
    }
    let psnr_values: Vec<String> = embedded
        .iter()
        .map(|(_, _, _, p)| format_db(*p))
        .collect();
    let _ = writeln!(table, "embed psnr per video: [{}] dB", psnr_values.join(" "));
    let _ = writeln!(table, "min group occupancy across rows: {min_occupancy} frames");
    Ok((csv, table))
}
