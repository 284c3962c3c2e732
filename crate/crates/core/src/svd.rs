//! Singular value decomposition sized for sub-band magnitude arrays.
//!
//! The full decomposition is a one-sided Jacobi iteration on columns: simple,
//! numerically robust, and fast at the tens-to-hundreds scale this crate
//! needs. A power-iteration fast path serves callers that only want the
//! leading singular value.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};

const JACOBI_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 64;
const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITERS: usize = 10_000;

/// Thin SVD `A = U diag(s) V^T` with `s` descending and non-negative.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: Array2<f64>,
    pub s: Vec<f64>,
    pub v: Array2<f64>,
}

/// Full decomposition. Deterministic up to the pinned sign convention: the
/// largest-magnitude entry of every U column is non-negative.
pub fn decompose(a: &Array2<f64>) -> Result<SvdResult> {
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("svd"));
    }
    let (rows, cols) = a.dim();
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParam("svd input must be non-empty".into()));
    }
    let mut out = if rows >= cols {
        jacobi_tall(a.clone())?
    } else {
        let t = jacobi_tall(a.t().to_owned())?;
        SvdResult {
            u: t.v,
            s: t.s,
            v: t.u,
        }
    };
    fix_signs(&mut out);
    Ok(out)
}

/// Leading singular value by power iteration on the Gram operator
/// (tolerance 1e-10, iteration cap 10000). Callers may fall back to
/// [`decompose`] if the cap is hit.
pub fn leading_singular_value(a: &Array2<f64>) -> Result<f64> {
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("svd"));
    }
    let (rows, cols) = a.dim();
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParam("svd input must be non-empty".into()));
    }
    if a.iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }

    // iterate on the shorter side of the Gram operator
    let n = rows.min(cols);
    let gram = |x: &Array1<f64>| -> Array1<f64> {
        if cols <= rows {
            a.t().dot(&a.dot(x))
        } else {
            a.dot(&a.t().dot(x))
        }
    };

    // deterministic, slightly uneven start so symmetric inputs cannot leave
    // it orthogonal to the dominant subspace
    let mut x = Array1::from_shape_fn(n, |i| 1.0 + 0.01 * ((i % 7) as f64));
    let norm = x.dot(&x).sqrt();
    x.mapv_inplace(|v| v / norm);

    let mut sigma = 0.0_f64;
    for iter in 0..POWER_MAX_ITERS {
        let y = gram(&x);
        let lambda = x.dot(&y).max(0.0);
        let next = lambda.sqrt();
        let ny = y.dot(&y).sqrt();
        if ny == 0.0 {
            // started in the null space; nudge deterministically
            x = Array1::from_shape_fn(n, |i| if i == iter % n { 1.0 } else { 0.0 });
            continue;
        }
        x = y.mapv(|v| v / ny);
        if iter > 0 && (next - sigma).abs() <= POWER_TOL * next.max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        sigma = next;
    }
    Err(Error::NoConvergence(POWER_MAX_ITERS))
}

/// One-sided Jacobi on a tall (rows >= cols) matrix. Works on contiguous
/// column vectors so the rotation loops vectorise.
fn jacobi_tall(a: Array2<f64>) -> Result<SvdResult> {
    let (rows, cols) = a.dim();
    let mut w: Vec<Vec<f64>> = (0..cols).map(|j| a.column(j).to_vec()).collect();
    let mut v: Vec<Vec<f64>> = (0..cols)
        .map(|j| (0..cols).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    // columns whose squared norm falls below this are numerically null;
    // rotating them against noise would never settle
    let negligible = a.iter().map(|x| x * x).sum::<f64>() * 1e-30;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (alpha, beta, gamma) = {
                    let (cp, cq) = (&w[p], &w[q]);
                    let mut alpha = 0.0;
                    let mut beta = 0.0;
                    let mut gamma = 0.0;
                    for (&x, &y) in cp.iter().zip(cq.iter()) {
                        alpha += x * x;
                        beta += y * y;
                        gamma += x * y;
                    }
                    (alpha, beta, gamma)
                };
                if alpha.min(beta) <= negligible
                    || gamma.abs() <= JACOBI_TOL * (alpha * beta).sqrt()
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut w, p, q, c, s);
                rotate_pair(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    // singular values are column norms; sort descending
    let norms: Vec<f64> = w
        .iter()
        .map(|col| col.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).expect("finite norms"));

    let mut u = Array2::zeros((rows, cols));
    let mut vv = Array2::zeros((cols, cols));
    let mut s = Vec::with_capacity(cols);
    let tiny = norms[order[0]].max(1.0) * 1e-300;
    for (dst, &src) in order.iter().enumerate() {
        s.push(norms[src]);
        for r in 0..cols {
            vv[[r, dst]] = v[src][r];
        }
        if norms[src] > tiny {
            for r in 0..rows {
                u[[r, dst]] = w[src][r] / norms[src];
            }
        }
    }
    complete_zero_columns(&mut u, &s, tiny);
    Ok(SvdResult { u, s, v: vv })
}

/// Plane rotation of columns p and q (p < q).
fn rotate_pair(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = cols.split_at_mut(q);
    let (cp, cq) = (&mut head[p], &mut tail[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

/// Fill columns of U whose singular value vanished with an orthonormal
/// completion, keeping the U^T U = I invariant.
fn complete_zero_columns(u: &mut Array2<f64>, s: &[f64], tiny: f64) {
    let (rows, cols) = u.dim();
    for j in 0..cols {
        if s[j] > tiny {
            continue;
        }
        // orthogonalise the best basis vector against every column that is
        // already valid (non-zero sigma, or a zero column filled before j)
        let filled: Vec<usize> = (0..cols).filter(|&jj| jj != j && (s[jj] > tiny || jj < j)).collect();
        let mut best: Option<(f64, Vec<f64>)> = None;
        for k in 0..rows {
            let mut cand = vec![0.0; rows];
            cand[k] = 1.0;
            for &jj in &filled {
                let dot: f64 = (0..rows).map(|r| cand[r] * u[[r, jj]]).sum();
                for (r, c) in cand.iter_mut().enumerate() {
                    *c -= dot * u[[r, jj]];
                }
            }
            let norm: f64 = cand.iter().map(|x| x * x).sum::<f64>().sqrt();
            if best.as_ref().map(|(n, _)| norm > *n).unwrap_or(true) {
                best = Some((norm, cand));
            }
        }
        if let Some((norm, cand)) = best {
            if norm > 0.0 {
                for r in 0..rows {
                    u[[r, j]] = cand[r] / norm;
                }
            }
        }
    }
}

fn fix_signs(out: &mut SvdResult) {
    let (rows, k) = out.u.dim();
    let vrows = out.v.nrows();
    for j in 0..k {
        let mut best = 0usize;
        let mut best_abs = -1.0;
        for r in 0..rows {
            if out.u[[r, j]].abs() > best_abs {
                best_abs = out.u[[r, j]].abs();
                best = r;
            }
        }
        if out.u[[best, j]] < 0.0 {
            for r in 0..rows {
                out.u[[r, j]] = -out.u[[r, j]];
            }
            for r in 0..vrows {
                out.v[[r, j]] = -out.v[[r, j]];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Independent oracle: eigenvalues of A^T A by two-sided Jacobi,
    /// square-rooted and sorted descending.
    pub(crate) fn gram_eig_singular_values(a: &Array2<f64>) -> Vec<f64> {
        let g = a.t().dot(a);
        let n = g.nrows();
        let mut s = g.clone();
        for _ in 0..200 {
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

    fn reconstruction_residual(a: &Array2<f64>, r: &SvdResult) -> f64 {
        let k = r.s.len();
        let mut sv = Array2::zeros((k, k));
        for i in 0..k {
            sv[[i, i]] = r.s[i];
        }
        let rec = r.u.dot(&sv).dot(&r.v.t());
        let num = (&rec - a).iter().map(|x| x * x).sum::<f64>().sqrt();
        let den = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
        num / den
    }

    fn orthonormality_dev(m: &Array2<f64>) -> f64 {
        let g = m.t().dot(m);
        let mut dev = 0.0_f64;
        for ((i, j), &v) in g.indexed_iter() {
            let want = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((v - want).abs());
        }
        dev
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let r = decompose(&Array2::eye(3)).unwrap();
        assert_eq!(r.s.len(), 3);
        for v in &r.s {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_spectrum() {
        let mut a = Array2::zeros((3, 3));
        a[[0, 0]] = 3.0;
        a[[1, 1]] = 2.0;
        a[[2, 2]] = 1.0;
        let r = decompose(&a).unwrap();
        for (got, want) in r.s.iter().zip([3.0, 2.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_deficient_column() {
        let a = Array2::from_shape_vec((2, 2), vec![3.0, 0.0, 4.0, 0.0]).unwrap();
        let r = decompose(&a).unwrap();
        assert!((r.s[0] - 5.0).abs() < 1e-12);
        assert!(r.s[1].abs() < 1e-12);
        assert!(orthonormality_dev(&r.u) < 1e-9);
        assert!(orthonormality_dev(&r.v) < 1e-9);
        assert!(reconstruction_residual(&a, &r) < 1e-9);
    }

    #[test]
    fn random_rect_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = Array2::from_shape_fn((40, 25), |_| rng.random_range(-1.0..1.0));
        let r = decompose(&a).unwrap();
        assert!(reconstruction_residual(&a, &r) < 1e-9);
        assert!(orthonormality_dev(&r.u) < 1e-9);
        assert!(orthonormality_dev(&r.v) < 1e-9);
        let oracle = gram_eig_singular_values(&a);
        for (got, want) in r.s.iter().zip(oracle.iter()) {
            assert!((got - want).abs() <= 1e-8 * r.s[0].max(1e-12), "{got} vs {want}");
        }
    }

    #[test]
    fn wide_matrix_transposes_internally() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let a = Array2::from_shape_fn((10, 30), |_| rng.random_range(-1.0..1.0));
        let r = decompose(&a).unwrap();
        assert_eq!(r.u.dim(), (10, 10));
        assert_eq!(r.v.dim(), (30, 10));
        assert!(reconstruction_residual(&a, &r) < 1e-9);
    }

    #[test]
    fn small_integer_matrices_match_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..300 {
            let rows = rng.random_range(1..=4);
            let cols = rng.random_range(1..=4);
            let a = Array2::from_shape_fn((rows, cols), |_| {
                f64::from(rng.random_range(-3i32..=3))
            });
            let r = decompose(&a).unwrap();
            // A^T A has the squared singular values padded with zeros, so the
            // leading min(rows, cols) oracle values line up with r.s
            let oracle = gram_eig_singular_values(&a);
            let scale = r.s.first().copied().unwrap_or(0.0).max(1e-12);
            for (got, want) in r.s.iter().zip(oracle.iter()) {
                assert!((got - want).abs() <= 1e-8 * scale, "{a:?}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn non_finite_rejected() {
        let mut a = Array2::zeros((2, 2));
        a[[0, 0]] = f64::INFINITY;
        assert!(matches!(decompose(&a), Err(Error::NonFinite(_))));
        assert!(matches!(leading_singular_value(&a), Err(Error::NonFinite(_))));
    }

    #[test]
    fn leading_zero_matrix() {
        let a = Array2::zeros((5, 3));
        assert_eq!(leading_singular_value(&a).unwrap(), 0.0);
    }

    #[test]
    fn leading_rank_one() {
        // outer product with |u| = 2, |v| = 3 has leading singular value 6
        let u = [2.0, 0.0, 0.0];
        let v = [0.0, 3.0];
        let a = Array2::from_shape_fn((3, 2), |(i, j)| u[i] * v[j]);
        let got = leading_singular_value(&a).unwrap();
        assert!((got - 6.0).abs() < 1e-9);
    }

    #[test]
    fn leading_matches_decompose() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let a = Array2::from_shape_fn((100, 60), |_| rng.random_range(-1.0..1.0));
        let full = decompose(&a).unwrap();
        let fast = leading_singular_value(&a).unwrap();
        assert!((fast - full.s[0]).abs() <= 1e-8 * full.s[0]);
    }

    #[test]
    fn leading_homogeneity() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let a = Array2::from_shape_fn((30, 20), |_| rng.random_range(-1.0..1.0));
        let base = leading_singular_value(&a).unwrap();
        for c in [0.5, 2.0, 117.0] {
            let scaled = leading_singular_value(&a.mapv(|v| c * v)).unwrap();
            assert!((scaled - c * base).abs() <= 1e-10 * (c * base));
        }
    }

    #[test]
    fn spectrum_is_non_increasing() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        for _ in 0..100 {
            let rows = rng.random_range(1..=12);
            let cols = rng.random_range(1..=12);
            let a = Array2::from_shape_fn((rows, cols), |_| rng.random_range(-1.0..1.0));
            let r = decompose(&a).unwrap();
            for w in r.s.windows(2) {
                assert!(w[0] >= w[1] - 1e-15);
            }
        }
    }
}
