//! BT.601 full-range colour conversion, for still-image import/export.

use ndarray::Array2;

use super::{ChromaSampling, Frame};
use crate::error::{Error, Result};

/// An RGB frame with planes in `[0, 255]`, indexed `[row, col]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbFrame {
    pub r: Array2<f64>,
    pub g: Array2<f64>,
    pub b: Array2<f64>,
}

impl RgbFrame {
    pub fn new(r: Array2<f64>, g: Array2<f64>, b: Array2<f64>) -> Result<Self> {
        if r.dim() != g.dim() || g.dim() != b.dim() {
            return Err(Error::InvalidParam("rgb planes must share dimensions".into()));
        }
        Ok(Self { r, g, b })
    }
}

/// RGB to YUV (BT.601 full range, chroma centred on 128). Output is 4:4:4.
pub fn rgb_to_yuv(rgb: &RgbFrame) -> Result<Frame> {
    let dim = rgb.r.dim();
    let mut y = Array2::zeros(dim);
    let mut u = Array2::zeros(dim);
    let mut v = Array2::zeros(dim);
    for ((idx, &r), (&g, &b)) in rgb
        .r
        .indexed_iter()
        .zip(rgb.g.iter().zip(rgb.b.iter()))
    {
        y[idx] = 0.299 * r + 0.587 * g + 0.114 * b;
        u[idx] = 128.0 - 0.168_736 * r - 0.331_264 * g + 0.5 * b;
        v[idx] = 128.0 + 0.5 * r - 0.418_688 * g - 0.081_312 * b;
    }
    Frame::new(y, u, v, ChromaSampling::C444)
}

/// YUV back to RGB, clamped to `[0, 255]`. 4:2:0 chroma is upsampled first.
pub fn yuv_to_rgb(frame: &Frame) -> RgbFrame {
    let y = frame.y_plane();
    let u = frame.u_at_luma_res();
    let v = match frame.sampling() {
        ChromaSampling::C444 => frame.v_plane().clone(),
        ChromaSampling::C420 => {
            let (h, w) = (frame.height(), frame.width());
            Array2::from_shape_fn((h, w), |(r, c)| frame.v_plane()[[r / 2, c / 2]])
        }
    };
    let dim = y.dim();
    let mut r = Array2::zeros(dim);
    let mut g = Array2::zeros(dim);
    let mut b = Array2::zeros(dim);
    for (idx, &yy) in y.indexed_iter() {
        let cu = u[idx] - 128.0;
        let cv = v[idx] - 128.0;
        r[idx] = (yy + 1.402 * cv).clamp(0.0, 255.0);
        g[idx] = (yy - 0.344_136 * cu - 0.714_136 * cv).clamp(0.0, 255.0);
        b[idx] = (yy + 1.772 * cu).clamp(0.0, 255.0);
    }
    RgbFrame { r, g, b }
}
