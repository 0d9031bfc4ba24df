//! One-sided Jacobi (Hestenes) SVD.
//!
//! The rotation sweeps orthogonalize the columns of the working matrix; at
//! convergence the column norms are the singular values and the accumulated
//! rotations form `V`. The pairwise convergence test is relative, so the
//! computed factors are orthonormal to machine precision and small singular
//! values keep high relative accuracy. The geometry routines feed in nearly
//! rank-deficient matrices whenever a point approaches the cut locus, so
//! that accuracy is load-bearing.

use nalgebra::DVector;

use super::Matrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Compact SVD `(U, S, V)` with `S` descending; requires `m ≥ n`.
///
/// Tall matrices are first reduced by an (unpivoted) thin QR so the sweeps
/// run on the square factor only; this keeps the cost at O(mn² + n³·sweeps).
pub(super) fn hestenes_svd(a: &Matrix) -> Result<(Matrix, DVector<f64>, Matrix)> {
    let (m, n) = a.shape();
    debug_assert!(m >= n);
    if m > n {
        let (q, r) = a.clone().qr().unpack();
        let (ur, s, v) = hestenes_core(&r)?;
        return Ok((q * ur, s, v));
    }
    hestenes_core(a)
}

fn hestenes_core(a: &Matrix) -> Result<(Matrix, DVector<f64>, Matrix)> {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut v = Matrix::identity(n, n);

    // Columns whose norm falls below the noise floor of the whole matrix
    // are numerically zero; rotating them against each other never settles.
    let floor = f64::EPSILON * a.norm();
    let floor2 = floor * floor;

    let mut converged = false;
    let mut norms2 = vec![0.0f64; n];
    for _ in 0..MAX_SWEEPS {
        // Refresh the cached squared norms once per sweep; within a sweep
        // they are maintained through the rotation identities.
        for (k, nk) in norms2.iter_mut().enumerate() {
            *nk = w.column(k).norm_squared();
        }
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let alpha = norms2[i];
                let beta = norms2[j];
                let gamma = w.column(i).dot(&w.column(j));
                if gamma == 0.0 || alpha <= floor2 || beta <= floor2 {
                    continue;
                }
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_columns(&mut w, i, j, c, s);
                rotate_columns(&mut v, i, j, c, s);
                norms2[i] = c * c * alpha - 2.0 * c * s * gamma + s * s * beta;
                norms2[j] = s * s * alpha + 2.0 * c * s * gamma + c * c * beta;
                rotated = true;
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(
            "Jacobi SVD sweeps did not converge".into(),
        ));
    }

    // Column norms are the singular values; sort descending.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|k| w.column(k).norm()).collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).expect("finite norms"));

    let mut u = Matrix::zeros(m, n);
    let mut vs = Matrix::zeros(n, n);
    let mut sigma = DVector::zeros(n);
    for (k, &src) in order.iter().enumerate() {
        sigma[k] = norms[src];
        vs.set_column(k, &v.column(src));
        u.set_column(k, &w.column(src));
    }

    // Normalize the full columns first; columns with negligible norm get a
    // deterministic orthonormal completion afterwards, so U stays a Stiefel
    // matrix even for rank-deficient input.
    let tiny = sigma[0] * (m as f64) * f64::EPSILON;
    let mut deficient = Vec::new();
    for k in 0..n {
        if sigma[k] > tiny && sigma[k] > 0.0 {
            let col = u.column(k) / sigma[k];
            u.set_column(k, &col);
        } else {
            u.set_column(k, &Matrix::zeros(m, 1).column(0));
            deficient.push(k);
        }
    }
    for k in deficient {
        complete_column(&mut u, k);
    }
    Ok((u, sigma, vs))
}

fn rotate_columns(m: &mut Matrix, i: usize, j: usize, c: f64, s: f64) {
    for r in 0..m.nrows() {
        let a = m[(r, i)];
        let b = m[(r, j)];
        m[(r, i)] = c * a - s * b;
        m[(r, j)] = s * a + c * b;
    }
}

/// Replaces column `k` by a unit vector orthogonal to all other columns,
/// choosing the canonical basis vector with the largest residual after two
/// Gram-Schmidt passes. The other columns must already be orthonormal (or
/// zero, for deficient columns not yet completed).
fn complete_column(u: &mut Matrix, k: usize) {
    let m = u.nrows();
    let mut best: Option<(f64, Matrix)> = None;
    for axis in 0..m {
        let mut cand = Matrix::zeros(m, 1);
        cand[(axis, 0)] = 1.0;
        for _ in 0..2 {
            for c in 0..u.ncols() {
                if c == k {
                    continue;
                }
                let proj = u.column(c).dot(&cand.column(0));
                let adjusted = cand.column(0) - u.column(c) * proj;
                cand.set_column(0, &adjusted);
            }
        }
        let norm = cand.column(0).norm();
        if best.as_ref().is_none_or(|(b, _)| norm > *b) {
            best = Some((norm, cand));
        }
        // The axis sum of squared residuals is at least m − (n−1), so a
        // clearly safe candidate exists whenever one column is sought.
        if norm > 0.7 {
            break;
        }
    }
    let (norm, cand) = best.expect("m ≥ 1");
    assert!(
        norm > 1e-8,
        "orthonormal completion failed: best residual {norm:e}"
    );
    let col = cand.column(0) / norm;
    u.set_column(k, &col);
}
