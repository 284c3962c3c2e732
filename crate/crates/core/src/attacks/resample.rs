//! Bilinear resampling primitives shared by the geometric attacks. Sampling
//! uses pixel-centre coordinates and clamps to the edge.

use ndarray::Array2;

/// Bilinear sample at fractional (row, col), edge-clamped.
pub(crate) fn bilinear(plane: &Array2<f64>, row: f64, col: f64) -> f64 {
    let (rows, cols) = plane.dim();
    let r0f = row.floor();
    let c0f = col.floor();
    let fr = row - r0f;
    let fc = col - c0f;
    let clamp_r = |r: f64| (r.max(0.0) as usize).min(rows - 1);
    let clamp_c = |c: f64| (c.max(0.0) as usize).min(cols - 1);
    let (r0, r1) = (clamp_r(r0f), clamp_r(r0f + 1.0));
    let (c0, c1) = (clamp_c(c0f), clamp_c(c0f + 1.0));
    plane[[r0, c0]] * (1.0 - fr) * (1.0 - fc)
        + plane[[r0, c1]] * (1.0 - fr) * fc
        + plane[[r1, c0]] * fr * (1.0 - fc)
        + plane[[r1, c1]] * fr * fc
}

/// Bilinear resize to (new_rows, new_cols).
pub(crate) fn resize(plane: &Array2<f64>, new_rows: usize, new_cols: usize) -> Array2<f64> {
    let (rows, cols) = plane.dim();
    if (new_rows, new_cols) == (rows, cols) {
        return plane.clone();
    }
    let rr = rows as f64 / new_rows as f64;
    let cr = cols as f64 / new_cols as f64;
    Array2::from_shape_fn((new_rows, new_cols), |(r, c)| {
        bilinear(
            plane,
            (r as f64 + 0.5) * rr - 0.5,
            (c as f64 + 0.5) * cr - 0.5,
        )
    })
}

/// Rotate about the plane centre by `radians` (bilinear, edge-clamped).
pub(crate) fn rotate(plane: &Array2<f64>, radians: f64) -> Array2<f64> {
    let (rows, cols) = plane.dim();
    let (cy, cx) = ((rows as f64 - 1.0) / 2.0, (cols as f64 - 1.0) / 2.0);
    let (sin, cos) = radians.sin_cos();
    Array2::from_shape_fn((rows, cols), |(r, c)| {
        let dy = r as f64 - cy;
        let dx = c as f64 - cx;
        // inverse mapping: rotate output coordinates back into the source
        let sr = cy + sin * dx + cos * dy;
        let sc = cx + cos * dx - sin * dy;
        bilinear(plane, sr, sc)
    })
}

/// Centre crop to (rows, cols).
pub(crate) fn center_crop(plane: &Array2<f64>, rows: usize, cols: usize) -> Array2<f64> {
    let (h, w) = plane.dim();
    let r0 = (h - rows) / 2;
    let c0 = (w - cols) / 2;
    plane
        .slice(ndarray::s![r0..r0 + rows, c0..c0 + cols])
        .to_owned()
}

/// Largest centred axis-aligned rectangle of the original aspect ratio that
/// fits inside a w x h rectangle rotated by `radians`; returned as the scale
/// factor in (0, 1].
pub(crate) fn inscribed_scale(width: f64, height: f64, radians: f64) -> f64 {
    let s = radians.sin().abs();
    let c = radians.cos().abs();
    let a = width / (width * c + height * s);
    let b = height / (width * s + height * c);
    a.min(b).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resize_identity_is_exact() {
        let x = Array2::from_shape_fn((7, 5), |(r, c)| (r * 5 + c) as f64);
        assert_eq!(resize(&x, 7, 5), x);
    }

    #[test]
    fn rotate_zero_is_exact() {
        let x = Array2::from_shape_fn((6, 6), |(r, c)| (r * 6 + c) as f64);
        let y = rotate(&x, 0.0);
        for (a, b) in x.iter().zip(y.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn inscribed_scale_square_cases() {
        assert!((inscribed_scale(64.0, 64.0, 0.0) - 1.0).abs() < 1e-12);
        let th = 10f64.to_radians();
        let want = 1.0 / (th.cos() + th.sin());
        assert!((inscribed_scale(64.0, 64.0, th) - want).abs() < 1e-12);
    }
}
