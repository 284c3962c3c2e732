//! Command-line frontend: embed, extract, attack, psnr, nc, and the one-shot
//! robustness benchmark. Kept as a library so integration tests can drive the
//! same code paths the binary uses.

pub mod bench;

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use framemark_core::attacks::AttackChain;
use framemark_core::metrics::{self, format_db};
use framemark_core::video_io::{read_raw_yuv, read_y4m, write_y4m, ChromaSampling, FrameRate, Video};
use framemark_core::watermark::{self, Detection, DetectorMode, EmbedParams};
use framemark_core::Error as CoreError;

/// Exit codes: 0 success, 1 usage, 2 i/o, 3 processing.
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    fn io(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::Io(_) => 2,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "framemark",
    version,
    about = "Blind video watermarking in the DTCWT-SVD domain: embed, extract, attack, benchmark"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Embed a payload; writes a watermarked Y4M and prints PSNR plus a
    /// per-group embed log.
    Embed(EmbedArgs),
    /// Recover the payload; prints the bitstring ('?' marks erasures),
    /// per-group flags and confidence.
    Extract(ExtractArgs),
    /// Apply an attack chain and write the degraded video.
    Attack(AttackArgs),
    /// Build the synthetic corpus, embed seeded payloads, run the full
    /// attack matrix and write a CSV report.
    Bench(bench::BenchArgs),
    /// PSNR between two Y4M videos.
    Psnr(PsnrArgs),
    /// Normalized correlation and bit error rate between two bitstrings.
    Nc(NcArgs),
}

/// Input video plus the optional raw-planar sidecar descriptor. Raw mode is
/// selected by passing --width/--height/--fps.
#[derive(Args, Debug)]
pub struct InputOpts {
    /// Input video (Y4M, or raw planar YUV with the descriptor flags).
    #[arg(long)]
    pub input: PathBuf,
    /// Raw input: frame width.
    #[arg(long, requires = "height", requires = "fps")]
    pub width: Option<usize>,
    /// Raw input: frame height.
    #[arg(long, requires = "width")]
    pub height: Option<usize>,
    /// Raw input: frames per second.
    #[arg(long)]
    pub fps: Option<f64>,
    /// Raw input: chroma subsampling.
    #[arg(long, value_enum, default_value_t = ChromaArg::C420)]
    pub chroma: ChromaArg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChromaArg {
    #[value(name = "420")]
    C420,
    #[value(name = "444")]
    C444,
}

impl InputOpts {
    pub fn load(&self) -> Result<Video, Failure> {
        let file = File::open(&self.input)
            .map_err(|e| Failure::io(format!("cannot open {}: {e}", self.input.display())))?;
        let reader = BufReader::new(file);
        match (self.width, self.height, self.fps) {
            (Some(w), Some(h), Some(fps)) => {
                let sampling = match self.chroma {
                    ChromaArg::C420 => ChromaSampling::C420,
                    ChromaArg::C444 => ChromaSampling::C444,
                };
                let rate = FrameRate::from_f64(fps)?;
                Ok(read_raw_yuv(reader, w, h, rate, sampling)?)
            }
            (None, None, None) => Ok(read_y4m(reader)?),
            _ => Err(Failure::usage(
                "raw input needs --width, --height and --fps together",
            )),
        }
    }
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("payload_src").required(true).args(["payload", "seed"])))]
pub struct EmbedArgs {
    #[command(flatten)]
    pub input: InputOpts,
    /// Output Y4M path.
    #[arg(long)]
    pub output: PathBuf,
    /// Payload bitstring, one bit per group ('1'/'0').
    #[arg(long)]
    pub payload: Option<String>,
    /// Seed for a deterministic pseudo-random payload.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Embedding strength k in (0, 1].
    #[arg(long, default_value_t = watermark::DEFAULT_STRENGTH)]
    pub strength: f64,
    /// Clip ratio c in (0, 1]; accepts fractions like 1/6.
    #[arg(long, value_parser = parse_ratio, default_value = "1/6")]
    pub clip_ratio: f64,
    /// Decomposition depth.
    #[arg(long, default_value_t = watermark::DEFAULT_DEPTH)]
    pub depth: usize,
}

#[derive(Args, Debug)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub input: InputOpts,
    /// Clip ratio c in (0, 1]; accepts fractions like 1/6.
    #[arg(long, value_parser = parse_ratio, default_value = "1/6")]
    pub clip_ratio: f64,
    /// Decomposition depth.
    #[arg(long, default_value_t = watermark::DEFAULT_DEPTH)]
    pub depth: usize,
    /// Detector: least-squares slope sign, or the pairwise comparator.
    #[arg(long, value_enum, default_value_t = ModeArg::Slope)]
    pub mode: ModeArg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Slope,
    Comparator,
}

#[derive(Args, Debug)]
pub struct AttackArgs {
    #[command(flatten)]
    pub input: InputOpts,
    /// Output Y4M path.
    #[arg(long)]
    pub output: PathBuf,
    /// Attack chain, e.g. "rotate_crop:angle=10+framerate:fps=15".
    #[arg(long)]
    pub attack: String,
}

#[derive(Args, Debug)]
pub struct PsnrArgs {
    /// Reference video (Y4M).
    pub reference: PathBuf,
    /// Processed video (Y4M).
    pub processed: PathBuf,
}

#[derive(Args, Debug)]
pub struct NcArgs {
    /// Reference bitstring ('1'/'0').
    pub reference: String,
    /// Detected bitstring ('1'/'0'/'?').
    pub detected: String,
}

/// Parse "a/b" fractions or plain floats.
fn parse_ratio(s: &str) -> Result<f64, String> {
    let value = if let Some((num, den)) = s.split_once('/') {
        let num: f64 = num.trim().parse().map_err(|_| format!("bad fraction '{s}'"))?;
        let den: f64 = den.trim().parse().map_err(|_| format!("bad fraction '{s}'"))?;
        if den == 0.0 {
            return Err(format!("zero denominator in '{s}'"));
        }
        num / den
    } else {
        s.parse().map_err(|_| format!("bad number '{s}'"))?
    };
    if !(value > 0.0 && value <= 1.0) {
        return Err(format!("clip ratio {value} must lie in (0, 1]"));
    }
    Ok(value)
}

pub fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Embed(args) => cmd_embed(args),
        Command::Extract(args) => cmd_extract(args),
        Command::Attack(args) => cmd_attack(args),
        Command::Bench(args) => bench::cmd_bench(args),
        Command::Psnr(args) => cmd_psnr(args),
        Command::Nc(args) => cmd_nc(args),
    }
}

fn cmd_embed(args: EmbedArgs) -> Result<String, Failure> {
    let video = args.input.load()?;
    let params = EmbedParams {
        strength_k: args.strength,
        depth: args.depth,
    };
    let plan = watermark::plan_groups(&video, args.clip_ratio)?;
    let bits = match (&args.payload, args.seed) {
        (Some(p), _) => watermark::bits_from_str(p).map_err(|e| Failure::usage(e.to_string()))?,
        (None, Some(seed)) => watermark::bits_from_seed(seed, plan.group_count),
        (None, None) => unreachable!("clap group enforces a payload source"),
    };

    let outcome = watermark::embed_sequence(&video, &bits, &params, args.clip_ratio)?;
    let report = metrics::psnr(&video, &outcome.video)?;
    write_video(&args.output, &outcome.video)?;

    let mut out = String::new();
    let payload: String = bits.iter().map(|b| b.to_char()).collect();
    let _ = writeln!(out, "payload: {payload} ({} groups)", plan.group_count);
    for (g, count) in outcome.embedded_per_group.iter().enumerate() {
        let _ = writeln!(out, "group {g}: bit {} embedded in {count} frames", payload.as_bytes()[g] as char);
    }
    if !outcome.skipped_frames.is_empty() {
        let _ = writeln!(out, "skipped {} unembeddable frames", outcome.skipped_frames.len());
    }
    let _ = writeln!(
        out,
        "psnr: {} dB (y {}, u {}, v {})",
        format_db(report.overall_db),
        format_db(report.y_db),
        format_db(report.u_db),
        format_db(report.v_db)
    );
    let _ = writeln!(out, "wrote {}", args.output.display());
    Ok(out)
}

fn cmd_extract(args: ExtractArgs) -> Result<String, Failure> {
    let video = args.input.load()?;
    let params = EmbedParams {
        strength_k: watermark::DEFAULT_STRENGTH,
        depth: args.depth,
    };
    let mode = match args.mode {
        ModeArg::Slope => DetectorMode::SlopeSign,
        ModeArg::Comparator => DetectorMode::Comparator,
    };
    let verdicts = watermark::extract_sequence_with(&video, &params, args.clip_ratio, mode)?;

    let mut out = String::new();
    let _ = writeln!(out, "payload: {}", verdicts.bitstring());
    for g in 0..verdicts.flags.len() {
        let _ = writeln!(
            out,
            "group {g}: symbol {} flag {:+} frames {} confidence {:.4}",
            verdicts.symbols[g].to_char(),
            verdicts.flags[g],
            verdicts.frames_per_group[g],
            verdicts.mean_confidence[g]
        );
    }
    Ok(out)
}

fn cmd_attack(args: AttackArgs) -> Result<String, Failure> {
    let chain: AttackChain = args
        .attack
        .parse()
        .map_err(|e: CoreError| Failure::usage(e.to_string()))?;
    let video = args.input.load()?;
    let attacked = chain.apply(&video)?;
    write_video(&args.output, &attacked)?;
    Ok(format!(
        "applied {chain}: {} frames @ {} fps -> {} frames @ {} fps; wrote {}\n",
        video.frame_count(),
        video.fps(),
        attacked.frame_count(),
        attacked.fps(),
        args.output.display()
    ))
}

fn cmd_psnr(args: PsnrArgs) -> Result<String, Failure> {
    let a = load_y4m(&args.reference)?;
    let b = load_y4m(&args.processed)?;
    let report = metrics::psnr(&a, &b)?;
    Ok(format!(
        "psnr: {} dB (y {}, u {}, v {})\n",
        format_db(report.overall_db),
        format_db(report.y_db),
        format_db(report.u_db),
        format_db(report.v_db)
    ))
}

fn cmd_nc(args: NcArgs) -> Result<String, Failure> {
    let reference =
        watermark::bits_from_str(&args.reference).map_err(|e| Failure::usage(e.to_string()))?;
    let detected: Vec<Detection> = args
        .detected
        .chars()
        .map(|c| match c {
            '1' => Ok(Detection::Plus),
            '0' => Ok(Detection::Minus),
            '?' => Ok(Detection::Erasure),
            _ => Err(Failure::usage(format!(
                "detected string may contain only '0', '1' and '?', found {c:?}"
            ))),
        })
        .collect::<Result<_, _>>()?;
    let nc = metrics::nc(&reference, &detected)?;
    let ber = metrics::ber(&reference, &detected)?;
    Ok(format!("nc: {nc:.6}\nber: {ber:.6}\n"))
}

fn load_y4m(path: &Path) -> Result<Video, Failure> {
    let file =
        File::open(path).map_err(|e| Failure::io(format!("cannot open {}: {e}", path.display())))?;
    Ok(read_y4m(BufReader::new(file))?)
}

fn write_video(path: &Path, video: &Video) -> Result<(), Failure> {
    let file =
        File::create(path).map_err(|e| Failure::io(format!("cannot create {}: {e}", path.display())))?;
    write_y4m(BufWriter::new(file), video)?;
    Ok(())
}
