//! Dense linear-algebra kernels used by every other module.
//!
//! The factorizations (`svd_compact`, `qr_thin`) are deterministic wrappers
//! around [`nalgebra`] with fixed ordering and sign conventions. The matrix
//! exponential/logarithm and the factorization derivatives (`dsvd`, `dqr`,
//! `dexpm`) are implemented here directly.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

mod deriv;
mod expm;
mod svd;

pub use deriv::{dqr, dqr_with_factors, dsvd, dsvd_with_factors};
pub use expm::{dexpm, expm, expm_with_derivative, logm_principal};

/// Dense column-major matrix of `f64`, the single scalar grid used repo-wide.
pub type Matrix = DMatrix<f64>;

/// Separation tolerance gating the SVD derivative: singular values closer
/// than `SEP_TOL * σ_max` (or smaller than that) make `dsvd` ill-posed.
pub const SEP_TOL: f64 = 1e-8;

/// Requested ordering of the singular values in [`svd_compact`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvdOrder {
    Ascending,
    Descending,
}

/// Compact singular value decomposition `M = U · diag(S) · Vᵀ`.
///
/// `U` is m×k and `V` is n×k with orthonormal columns, `k = min(m, n)`,
/// and `s` is sorted according to `order`.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: Matrix,
    pub s: DVector<f64>,
    pub v: Matrix,
    pub order: SvdOrder,
}

impl SvdFactors {
    /// Reassembles `U · diag(S) · Vᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        &self.u * Matrix::from_diagonal(&self.s) * self.v.transpose()
    }

    /// Largest singular value (0 for an empty factorization).
    pub fn sigma_max(&self) -> f64 {
        self.s.iter().cloned().fold(0.0, f64::max)
    }
}

/// Thin QR factorization `M = Q · R` with `R` upper-triangular and a
/// nonnegative diagonal.
#[derive(Debug, Clone)]
pub struct QrFactors {
    pub q: Matrix,
    pub r: Matrix,
}

impl QrFactors {
    pub fn reconstruct(&self) -> Matrix {
        &self.q * &self.r
    }
}

fn check_finite(m: &Matrix) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Compact SVD with singular values sorted per `order`.
///
/// Both tall and wide inputs are accepted; `k = min(m, n)`. Backed by a
/// one-sided Jacobi kernel (see [`svd`] internals): nearly rank-deficient
/// inputs are routine here, and the relative convergence test keeps their
/// factors accurate.
pub fn svd_compact(m: &Matrix, order: SvdOrder) -> Result<SvdFactors> {
    check_finite(m)?;
    let k = m.nrows().min(m.ncols());
    if k == 0 {
        return Ok(SvdFactors {
            u: Matrix::zeros(m.nrows(), 0),
            s: DVector::zeros(0),
            v: Matrix::zeros(m.ncols(), 0),
            order,
        });
    }
    let (mut u, mut s, mut v) = if m.nrows() >= m.ncols() {
        svd::hestenes_svd(m)?
    } else {
        let (v, s, u) = svd::hestenes_svd(&m.transpose())?;
        (u, s, v)
    };
    if order == SvdOrder::Ascending {
        u = reverse_columns(&u);
        v = reverse_columns(&v);
        s = DVector::from_iterator(k, s.iter().rev().cloned());
    }
    Ok(SvdFactors { u, s, v, order })
}

fn reverse_columns(m: &Matrix) -> Matrix {
    let mut out = m.clone();
    let c = m.ncols();
    for j in 0..c {
        out.set_column(j, &m.column(c - 1 - j));
    }
    out
}

/// Thin QR with the sign convention `diag(R) ≥ 0`.
///
/// Fails with [`Error::RankDeficient`] if a diagonal entry of `R` is
/// negligible relative to `‖M‖_F`, since the convention (and the derivative
/// formulas downstream) require full column rank.
pub fn qr_thin(m: &Matrix) -> Result<QrFactors> {
    check_finite(m)?;
    if m.nrows() < m.ncols() {
        return Err(Error::shape(
            "n×r with n ≥ r",
            format!("{}×{}", m.nrows(), m.ncols()),
        ));
    }
    let (mut q, mut r) = m.clone().qr().unpack();
    let scale = m.norm().max(1e-300);
    for j in 0..r.nrows() {
        if r[(j, j)] < 0.0 {
            // Flip the sign pair; ties (exact zeros) stay at +0.
            for i in 0..q.nrows() {
                q[(i, j)] = -q[(i, j)];
            }
            for i in j..r.ncols() {
                r[(j, i)] = -r[(j, i)];
            }
        }
        if r[(j, j)].abs() <= 1e-13 * scale {
            return Err(Error::RankDeficient);
        }
    }
    Ok(QrFactors { q, r })
}

/// Frobenius inner product `tr(AᵀB)`.
pub fn frob_inner(a: &Matrix, b: &Matrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}
