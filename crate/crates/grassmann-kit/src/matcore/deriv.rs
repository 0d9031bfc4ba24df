//! Derivatives of the compact SVD and the thin QR decomposition along a
//! matrix curve `t ↦ Y(t)`, evaluated from `(Y, Ẏ)` at a single point.

use nalgebra::DVector;

use super::{qr_thin, svd_compact, Matrix, SvdFactors, SvdOrder, SEP_TOL};
use crate::error::{Error, Result};

/// Derivatives `(U̇, Σ̇, V̇)` of the compact SVD factors of `Y` in the
/// direction `Ẏ`.
///
/// Requires mutually distinct, non-zero singular values: pairs closer than
/// `SEP_TOL·σ_max` (or values below it) make the mixing coefficients
/// `Γ_ij = (σ_i u_iᵀẎv_j + σ_j u_jᵀẎv_i) / ((σ_j+σ_i)(σ_j−σ_i))`
/// blow up, and the caller is expected to switch to the QR route.
pub fn dsvd(y: &Matrix, ydot: &Matrix) -> Result<(Matrix, DVector<f64>, Matrix)> {
    if y.shape() != ydot.shape() {
        return Err(Error::shape(
            format!("{}×{}", y.nrows(), y.ncols()),
            format!("{}×{}", ydot.nrows(), ydot.ncols()),
        ));
    }
    if y.nrows() < y.ncols() {
        return Err(Error::shape(
            "n×p with n ≥ p",
            format!("{}×{}", y.nrows(), y.ncols()),
        ));
    }
    let f = svd_compact(y, SvdOrder::Descending)?;
    dsvd_with_factors(&f, ydot)
}

/// Same as [`dsvd`] but reuses an already-computed factorization of `Y`.
pub fn dsvd_with_factors(f: &SvdFactors, ydot: &Matrix) -> Result<(Matrix, DVector<f64>, Matrix)> {
    let p = f.s.len();
    let sigma_max = f.sigma_max();
    let gate = SEP_TOL * sigma_max.max(f64::MIN_POSITIVE);
    for i in 0..p {
        if f.s[i] <= gate {
            return Err(Error::IllPosedSingularValues { separation: f.s[i] });
        }
        for j in (i + 1)..p {
            let sep = (f.s[i] - f.s[j]).abs();
            if sep <= gate {
                return Err(Error::IllPosedSingularValues { separation: sep });
            }
        }
    }

    // W_ij = u_iᵀ Ẏ v_j.
    let w = f.u.transpose() * ydot * &f.v;
    let sdot = DVector::from_iterator(p, (0..p).map(|j| w[(j, j)]));

    let mut gamma = Matrix::zeros(p, p);
    for i in 0..p {
        for j in 0..p {
            if i != j {
                gamma[(i, j)] = (f.s[i] * w[(i, j)] + f.s[j] * w[(j, i)])
                    / ((f.s[j] + f.s[i]) * (f.s[j] - f.s[i]));
            }
        }
    }
    let vdot = &f.v * &gamma;

    let sigma = Matrix::from_diagonal(&f.s);
    let sigma_inv = Matrix::from_diagonal(&f.s.map(|s| 1.0 / s));
    let udot = (ydot * &f.v + &f.u * (&sigma * &gamma - Matrix::from_diagonal(&sdot))) * sigma_inv;
    Ok((udot, sdot, vdot))
}

/// Derivatives `(Q̇, Ṙ)` of the thin QR factors of `Y` in the direction `Ẏ`.
///
/// `Y` must have full column rank. `QᵀQ̇` comes out skew-symmetric and `Ṙ`
/// upper-triangular.
pub fn dqr(y: &Matrix, ydot: &Matrix) -> Result<(Matrix, Matrix)> {
    if y.shape() != ydot.shape() {
        return Err(Error::shape(
            format!("{}×{}", y.nrows(), y.ncols()),
            format!("{}×{}", ydot.nrows(), ydot.ncols()),
        ));
    }
    let f = qr_thin(y)?;
    dqr_with_factors(&f.q, &f.r, ydot)
}

/// Same as [`dqr`] but reuses the factors `Y = Q·R`.
pub fn dqr_with_factors(q: &Matrix, r: &Matrix, ydot: &Matrix) -> Result<(Matrix, Matrix)> {
    let p = r.nrows();
    // M := QᵀẎR⁻¹, via the triangular solve RᵀXᵀ = (QᵀẎ)ᵀ.
    let qt_ydot = q.transpose() * ydot;
    let m = r
        .transpose()
        .solve_lower_triangular(&qt_ydot.transpose())
        .ok_or(Error::RankDeficient)?
        .transpose();
    // Strictly lower triangle of M, then X = L − Lᵀ = QᵀQ̇.
    let mut x = Matrix::zeros(p, p);
    for i in 0..p {
        for j in 0..i {
            x[(i, j)] = m[(i, j)];
            x[(j, i)] = -m[(i, j)];
        }
    }
    let rdot = &qt_ydot - &x * r;
    // Q̇ = (I − QQᵀ)ẎR⁻¹ + QX.
    let ydot_rinv = r
        .transpose()
        .solve_lower_triangular(&ydot.transpose())
        .ok_or(Error::RankDeficient)?
        .transpose();
    let qdot = &ydot_rinv - q * (q.transpose() * &ydot_rinv) + q * &x;
    Ok((qdot, rdot))
}
