//! Shared fixtures and independent oracles for the integration suites.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Band-pass (difference-of-Gaussians) texture in [0, 255]; the content class
/// the transform's shift-invariance is quantified on. An 8-pixel border taper
/// keeps the measurement interior-dominated: untapered textures mostly probe
/// how boundary-extension coefficients react to content entering the frame,
/// not the transform's shift behaviour.
pub fn textured_plane(rows: usize, cols: usize, seed: u64) -> Array2<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let white = Array2::from_shape_fn((rows, cols), |_| rng.random_range(-1.0..1.0));
    let band = &gaussian_blur(&white, 2.0) - &gaussian_blur(&white, 4.0);
    let env = |i: usize, n: usize| ((i.min(n - 1 - i)) as f64 / 8.0).min(1.0);
    let band = Array2::from_shape_fn((rows, cols), |(r, c)| {
        band[[r, c]] * env(r, rows) * env(c, cols)
    });
    let lo = band.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = band.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    band.mapv(|v| 255.0 * (v - lo) / (hi - lo).max(1e-12))
}

/// Physical 1-pixel translation: content shifts, the vacated edge row/column
/// duplicates its neighbour.
pub fn translate_edge(x: &Array2<f64>, dr: usize, dc: usize) -> Array2<f64> {
    Array2::from_shape_fn(x.dim(), |(r, c)| {
        x[[r.saturating_sub(dr), c.saturating_sub(dc)]]
    })
}

/// Independent singular-value oracle: two-sided Jacobi eigen-iteration on
/// A^T A, square-rooted and sorted descending. Shares no code with the
/// one-sided implementation under test.
pub fn gram_eig_singular_values(a: &Array2<f64>) -> Vec<f64> {
    let g = a.t().dot(a);
    let n = g.nrows();
    let mut s = g.clone();
    for _ in 0..300 {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(s[[p, q]].abs());
            }
        }
        let scale = (0..n).map(|i| s[[i, i]].abs()).fold(0.0_f64, f64::max);
        if off <= 1e-300 + 1e-16 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if s[[p, q]].abs() <= 1e-300 {
                    continue;
                }
                let tau = (s[[q, q]] - s[[p, p]]) / (2.0 * s[[p, q]]);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = c * t;
                for r in 0..n {
                    let (sp, sq) = (s[[r, p]], s[[r, q]]);
                    s[[r, p]] = c * sp - sn * sq;
                    s[[r, q]] = sn * sp + c * sq;
                }
                for r in 0..n {
                    let (sp, sq) = (s[[p, r]], s[[q, r]]);
                    s[[p, r]] = c * sp - sn * sq;
                    s[[q, r]] = sn * sp + c * sq;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| s[[i, i]].max(0.0).sqrt()).collect();
    eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
    eig
}

fn gaussian_blur(x: &Array2<f64>, sigma: f64) -> Array2<f64> {
    let radius = (3.0 * sigma).ceil() as isize;
    let mut kernel = Vec::new();
    for t in -radius..=radius {
        kernel.push((-0.5 * (t as f64 / sigma).powi(2)).exp());
    }
    let norm: f64 = kernel.iter().sum();
    for k in &mut kernel {
        *k /= norm;
    }
    let reflect = |p: isize, n: usize| -> usize {
        let mut p = p;
        let n = n as isize;
        while p < 0 || p >= n {
            p = if p < 0 { -1 - p } else { 2 * n - 1 - p };
        }
        p as usize
    };
    let (rows, cols) = x.dim();
    let mut tmp = Array2::zeros((rows, cols));
    for r in 0..rows {
        for c in 0..cols {
            let mut acc = 0.0;
            for (k, kv) in kernel.iter().enumerate() {
                acc += kv * x[[reflect(r as isize + k as isize - radius, rows), c]];
            }
            tmp[[r, c]] = acc;
        }
    }
    let mut out = Array2::zeros((rows, cols));
    for r in 0..rows {
        for c in 0..cols {
            let mut acc = 0.0;
            for (k, kv) in kernel.iter().enumerate() {
                acc += kv * tmp[[r, reflect(c as isize + k as isize - radius, cols)]];
            }
            out[[r, c]] = acc;
        }
    }
    out
}
