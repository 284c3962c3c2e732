//! YUV4MPEG2 reader and writer. Header tags W/H/F/I/A/C are recognised;
//! payloads are 8-bit planar. The writer emits a canonical header, so
//! `read(write(v))` reproduces `v` bit-exactly whenever samples are integral.

use std::io::{self, Read, Write};

use ndarray::Array2;

use super::{ChromaSampling, Frame, FrameRate, Video};
use crate::error::{Error, Result};

const MAGIC: &str = "YUV4MPEG2";
const MAX_HEADER: usize = 4096;

/// Parse a Y4M stream.
pub fn read_y4m<R: Read>(mut reader: R) -> Result<Video> {
    let header = read_line(&mut reader, 0)?;
    let mut tokens = header.split(' ').filter(|t| !t.is_empty());
    match tokens.next() {
        Some(MAGIC) => {}
        Some(other) => {
            return Err(Error::Y4mParse(format!(
                "expected '{MAGIC}' magic, found '{other}'"
            )))
        }
        None => return Err(Error::Y4mParse("empty header line".into())),
    }

    let mut width = None;
    let mut height = None;
    let mut fps = None;
    let mut sampling = ChromaSampling::C420;
    for tok in tokens {
        let (tag, rest) = tok.split_at(1);
        match tag {
            "W" => width = Some(parse_dim(tok, rest)?),
            "H" => height = Some(parse_dim(tok, rest)?),
            "F" => fps = Some(parse_rate(tok, rest)?),
            "C" => sampling = parse_chroma(tok, rest)?,
            "I" => {
                if rest != "p" {
                    return Err(Error::Y4mParse(format!(
                        "unsupported interlacing '{tok}' (only progressive 'Ip')"
                    )));
                }
            }
            // aspect ratio and extensions carry no information we use
            "A" | "X" => {}
            _ => return Err(Error::Y4mParse(format!("unknown header token '{tok}'"))),
        }
    }
    let width = width.ok_or_else(|| Error::Y4mParse("missing W tag".into()))?;
    let height = height.ok_or_else(|| Error::Y4mParse("missing H tag".into()))?;
    let fps = fps.ok_or_else(|| Error::Y4mParse("missing F tag".into()))?;

    let (cw, ch) = sampling.chroma_dims(width, height);
    let y_len = width * height;
    let c_len = cw * ch;

    let mut frames = Vec::new();
    loop {
        // next frame starts with a "FRAME" line or the stream ends
        let mut probe = [0u8; 1];
        match reader.read(&mut probe) {
            Ok(0) => break,
            Ok(_) => {}
            Err(e) => return Err(Error::Io(e)),
        }
        let mut marker = vec![probe[0]];
        let line = read_line(&mut reader, frames.len())?;
        marker.extend_from_slice(line.as_bytes());
        let marker = String::from_utf8_lossy(&marker).to_string();
        if marker != "FRAME" && !marker.starts_with("FRAME ") {
            return Err(Error::Y4mParse(format!(
                "expected FRAME marker, found '{}'",
                marker.chars().take(16).collect::<String>()
            )));
        }

        let mut payload = vec![0u8; y_len + 2 * c_len];
        read_exact_or_truncated(&mut reader, &mut payload, frames.len())?;
        let y = plane_from_bytes(&payload[..y_len], height, width);
        let u = plane_from_bytes(&payload[y_len..y_len + c_len], ch, cw);
        let v = plane_from_bytes(&payload[y_len + c_len..], ch, cw);
        frames.push(Frame::new(y, u, v, sampling)?);
    }
    Video::new(frames, fps)
}

/// Parse a Y4M byte slice.
pub fn read_y4m_bytes(bytes: &[u8]) -> Result<Video> {
    read_y4m(bytes)
}

/// Serialise to Y4M. Samples are rounded to nearest and clamped to [0, 255];
/// the clamping is silent by contract.
pub fn write_y4m<W: Write>(mut writer: W, video: &Video) -> Result<()> {
    let width = video.width().unwrap_or(0);
    let height = video.height().unwrap_or(0);
    let sampling = video.sampling().unwrap_or(ChromaSampling::C420);
    let fps = video.frame_rate();
    writeln!(
        writer,
        "{MAGIC} W{width} H{height} F{}:{} Ip A1:1 C{}",
        fps.num,
        fps.den,
        sampling.y4m_tag()
    )
    .map_err(Error::Io)?;
    let mut buf = Vec::new();
    for frame in video.frames() {
        buf.clear();
        buf.extend_from_slice(b"FRAME\n");
        for plane in [frame.y_plane(), frame.u_plane(), frame.v_plane()] {
            buf.extend(plane.iter().map(|&s| s.round().clamp(0.0, 255.0) as u8));
        }
        writer.write_all(&buf).map_err(Error::Io)?;
    }
    Ok(())
}

/// Serialise to an in-memory Y4M byte buffer.
pub fn write_y4m_to_vec(video: &Video) -> Vec<u8> {
    let mut out = Vec::new();
    write_y4m(&mut out, video).expect("writing to Vec cannot fail");
    out
}

fn read_line<R: Read>(reader: &mut R, frame_index: usize) -> Result<String> {
    let mut line = Vec::new();
    let mut byte = [0u8; 1];
    loop {
        match reader.read(&mut byte) {
            Ok(0) => return Err(Error::TruncatedFrame { index: frame_index }),
            Ok(_) => {}
            Err(e) => return Err(Error::Io(e)),
        }
        if byte[0] == b'\n' {
            break;
        }
        line.push(byte[0]);
        if line.len() > MAX_HEADER {
            return Err(Error::Y4mParse("header line exceeds 4096 bytes".into()));
        }
    }
    String::from_utf8(line).map_err(|_| Error::Y4mParse("header is not valid utf-8".into()))
}

fn read_exact_or_truncated<R: Read>(reader: &mut R, buf: &mut [u8], index: usize) -> Result<()> {
    match reader.read_exact(buf) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == io::ErrorKind::UnexpectedEof => Err(Error::TruncatedFrame { index }),
        Err(e) => Err(Error::Io(e)),
    }
}

fn parse_dim(tok: &str, rest: &str) -> Result<usize> {
    match rest.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(Error::Y4mParse(format!("bad dimension token '{tok}'"))),
    }
}

fn parse_rate(tok: &str, rest: &str) -> Result<FrameRate> {
    let (num, den) = rest
        .split_once(':')
        .ok_or_else(|| Error::Y4mParse(format!("bad frame rate token '{tok}'")))?;
    let num = num
        .parse::<u32>()
        .map_err(|_| Error::Y4mParse(format!("bad frame rate token '{tok}'")))?;
    let den = den
        .parse::<u32>()
        .map_err(|_| Error::Y4mParse(format!("bad frame rate token '{tok}'")))?;
    FrameRate::new(num, den).map_err(|_| Error::Y4mParse(format!("bad frame rate token '{tok}'")))
}

fn parse_chroma(tok: &str, rest: &str) -> Result<ChromaSampling> {
    match rest {
        "420" | "420jpeg" | "420mpeg2" | "420paldv" => Ok(ChromaSampling::C420),
        "444" => Ok(ChromaSampling::C444),
        _ => Err(Error::Y4mParse(format!(
            "unsupported chroma sampling '{tok}' (supported: C420*, C444)"
        ))),
    }
}

fn plane_from_bytes(bytes: &[u8], rows: usize, cols: usize) -> Array2<f64> {
    Array2::from_shape_vec((rows, cols), bytes.iter().map(|&b| f64::from(b)).collect())
        .expect("length checked by caller")
}
