//! Column-direction filtering kernels for the dual tree. Everything here
//! works along axis 0; row-direction passes go through a transpose.
//!
//! The decimated q-shift stage treats its input as two interleaved trees:
//! tree a lives on rows of parity `pa`, tree b on the opposite parity, and
//! the half-sample symmetric extension maps one tree's overrun onto the
//! other's samples. With the orthonormal q-shift pair (tree b = reversed
//! tree a) the combined lowpass+highpass analysis map is exactly orthogonal,
//! including boundaries, so synthesis is the adjoint: scatter instead of
//! gather, then fold the extension back.

use ndarray::Array2;

/// Half-sample symmetric index reflection: ... 1 0 | 0 1 .. n-1 | n-1 n-2 ...
pub(crate) fn reflect_idx(mut p: isize, n: usize) -> usize {
    let n = n as isize;
    debug_assert!(n > 0);
    while p < 0 || p >= n {
        p = if p < 0 { -1 - p } else { 2 * n - 1 - p };
    }
    p as usize
}

/// Full-rate filtering along axis 0 with an odd-length filter and symmetric
/// extension; output has the input's shape.
pub(crate) fn colfilter(x: &Array2<f64>, h: &[f64]) -> Array2<f64> {
    let (rows, cols) = x.dim();
    let m2 = (h.len() / 2) as isize;
    let mut y = Array2::zeros((rows, cols));
    for i in 0..rows {
        for (n, &hv) in h.iter().enumerate() {
            let src = reflect_idx(i as isize + m2 - n as isize, rows);
            let xr = x.row(src);
            let mut yr = y.row_mut(i);
            for c in 0..cols {
                yr[c] += hv * xr[c];
            }
        }
    }
    y
}

/// Filtering along axis 1 via transpose.
pub(crate) fn rowfilter(x: &Array2<f64>, h: &[f64]) -> Array2<f64> {
    colfilter(&x.t().to_owned(), h).t().to_owned()
}

/// Alignment of the decimated stage; fixed by requiring the analysis map to
/// stay orthogonal under the symmetric extension.
const QSHIFT_ALIGN: isize = 7;

/// Decimate axis 0 by two. `pa` is the row parity carrying tree a; tree a
/// writes even output rows, tree b odd ones. Requires rows % 4 == 0.
pub(crate) fn coldfilt(
    x: &Array2<f64>,
    ha: &[f64; 14],
    hb: &[f64; 14],
    pa: usize,
) -> Array2<f64> {
    let (rows, cols) = x.dim();
    debug_assert_eq!(rows % 4, 0, "coldfilt input rows must be a multiple of 4");
    let quarter = rows / 4;
    let mut y = Array2::zeros((rows / 2, cols));
    for (h, parity, out_parity) in [(ha, pa, 0usize), (hb, 1 - pa, 1)] {
        for j in 0..quarter {
            let base = 4 * j as isize + parity as isize;
            for (n, &hv) in h.iter().enumerate() {
                let src = reflect_idx(base + 2 * (QSHIFT_ALIGN - n as isize), rows);
                let xr = x.row(src);
                let mut yr = y.row_mut(2 * j + out_parity);
                for c in 0..cols {
                    yr[c] += hv * xr[c];
                }
            }
        }
    }
    y
}

/// Adjoint of [`coldfilt`]: upsample axis 0 by two by scattering each output
/// row's contributions back through the extension and folding.
pub(crate) fn coldfilt_adjoint(
    y: &Array2<f64>,
    ha: &[f64; 14],
    hb: &[f64; 14],
    pa: usize,
) -> Array2<f64> {
    let (half, cols) = y.dim();
    let rows = 2 * half;
    let quarter = rows / 4;
    let m = ha.len() as isize;
    let pad = 2 * m as usize;
    let mut buf = Array2::<f64>::zeros((rows + 2 * pad, cols));
    for (h, parity, out_parity) in [(ha, pa, 0usize), (hb, 1 - pa, 1)] {
        for j in 0..quarter {
            let yr = y.row(2 * j + out_parity);
            let base = 4 * j as isize + parity as isize;
            for (n, &hv) in h.iter().enumerate() {
                let p = base + 2 * (QSHIFT_ALIGN - n as isize) + pad as isize;
                let mut br = buf.row_mut(p as usize);
                for c in 0..cols {
                    br[c] += hv * yr[c];
                }
            }
        }
    }
    let mut out = Array2::zeros((rows, cols));
    for p in 0..rows + 2 * pad {
        let dst = reflect_idx(p as isize - pad as isize, rows);
        let br = buf.row(p);
        let mut or = out.row_mut(dst);
        for c in 0..cols {
            or[c] += br[c];
        }
    }
    out
}

pub(crate) fn coldfilt_rows(x: &Array2<f64>, ha: &[f64; 14], hb: &[f64; 14], pa: usize) -> Array2<f64> {
    coldfilt(&x.t().to_owned(), ha, hb, pa).t().to_owned()
}

pub(crate) fn coldfilt_rows_adjoint(
    y: &Array2<f64>,
    ha: &[f64; 14],
    hb: &[f64; 14],
    pa: usize,
) -> Array2<f64> {
    coldfilt_adjoint(&y.t().to_owned(), ha, hb, pa).t().to_owned()
}

/// Quad-to-complex: regroup 2x2 pixel quads of a real band image into two
/// complex quarter-size sub-bands. Exactly invertible by [`c2q`].
pub(crate) fn q2c(y: &Array2<f64>) -> ((Array2<f64>, Array2<f64>), (Array2<f64>, Array2<f64>)) {
    let (rows, cols) = y.dim();
    debug_assert!(rows % 2 == 0 && cols % 2 == 0);
    let (hr, hc) = (rows / 2, cols / 2);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut z1re = Array2::zeros((hr, hc));
    let mut z1im = Array2::zeros((hr, hc));
    let mut z2re = Array2::zeros((hr, hc));
    let mut z2im = Array2::zeros((hr, hc));
    for r in 0..hr {
        for c in 0..hc {
            let a = y[[2 * r, 2 * c]];
            let b = y[[2 * r, 2 * c + 1]];
            let cc = y[[2 * r + 1, 2 * c]];
            let d = y[[2 * r + 1, 2 * c + 1]];
            // p = (a + jb)/sqrt2, q = (d - jc)/sqrt2; bands are p -+ q
            z1re[[r, c]] = s * (a - d);
            z1im[[r, c]] = s * (b + cc);
            z2re[[r, c]] = s * (a + d);
            z2im[[r, c]] = s * (b - cc);
        }
    }
    ((z1re, z1im), (z2re, z2im))
}

/// Complex-to-quad, the exact inverse of [`q2c`].
pub(crate) fn c2q(
    z1: (&Array2<f64>, &Array2<f64>),
    z2: (&Array2<f64>, &Array2<f64>),
) -> Array2<f64> {
    let (hr, hc) = z1.0.dim();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut y = Array2::zeros((2 * hr, 2 * hc));
    for r in 0..hr {
        for c in 0..hc {
            let (x1re, x1im) = (z1.0[[r, c]], z1.1[[r, c]]);
            let (x2re, x2im) = (z2.0[[r, c]], z2.1[[r, c]]);
            y[[2 * r, 2 * c]] = s * (x1re + x2re); // a
            y[[2 * r, 2 * c + 1]] = s * (x1im + x2im); // b
            y[[2 * r + 1, 2 * c]] = s * (x1im - x2im); // c
            y[[2 * r + 1, 2 * c + 1]] = s * (x2re - x1re); // d
        }
    }
    y
}
