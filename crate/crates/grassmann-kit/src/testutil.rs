//! Helpers shared by the unit tests: seeded random matrices and the
//! finite-difference oracles the derivative kernels are checked against.

use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matcore::{qr_thin, svd_compact, Matrix, SvdOrder};

/// Relative reconstruction tolerance for the factorization kernels.
pub const ERR_RECON: f64 = 1e-12;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut r = rng(seed);
    Matrix::from_fn(rows, cols, |_, _| r.sample(StandardNormal))
}

pub fn random_skew(n: usize, seed: u64) -> Matrix {
    let a = random_matrix(n, n, seed);
    (&a - a.transpose()) * 0.5
}

/// Haar-ish random orthogonal matrix (QR of a Gaussian with positive diag(R)).
pub fn random_orthogonal(n: usize, seed: u64) -> Matrix {
    qr_thin(&random_matrix(n, n, seed))
        .expect("Gaussian draw has full rank")
        .q
}

/// Central finite difference of a matrix-valued map at 0.
pub fn central_diff<F: Fn(f64) -> Matrix>(f: F, h: f64) -> Matrix {
    (f(h) - f(-h)) / (2.0 * h)
}

/// Finite-difference derivative of the thin QR factors (the positive-diagonal
/// convention makes the factors unique, so no alignment is needed).
pub fn fd_qr(y: &Matrix, ydot: &Matrix, h: f64) -> (Matrix, Matrix) {
    let fp = qr_thin(&(y + ydot * h)).unwrap();
    let fm = qr_thin(&(y - ydot * h)).unwrap();
    ((fp.q - fm.q) / (2.0 * h), (fp.r - fm.r) / (2.0 * h))
}

/// Finite-difference derivative of the compact SVD factors with the sign of
/// each perturbed column flipped to match the base factors, compensating the
/// sign ambiguity of the decomposition.
pub fn fd_svd_aligned(y: &Matrix, ydot: &Matrix, h: f64) -> (Matrix, DVector<f64>, Matrix) {
    let base = svd_compact(y, SvdOrder::Descending).unwrap();
    let align = |mut f: crate::matcore::SvdFactors| {
        for j in 0..f.s.len() {
            if base.u.column(j).dot(&f.u.column(j)) < 0.0 {
                let neg_u = -f.u.column(j).into_owned();
                let neg_v = -f.v.column(j).into_owned();
                f.u.set_column(j, &neg_u);
                f.v.set_column(j, &neg_v);
            }
        }
        f
    };
    let fp = align(svd_compact(&(y + ydot * h), SvdOrder::Descending).unwrap());
    let fm = align(svd_compact(&(y - ydot * h), SvdOrder::Descending).unwrap());
    (
        (fp.u - fm.u) / (2.0 * h),
        (fp.s - fm.s) / (2.0 * h),
        (fp.v - fm.v) / (2.0 * h),
    )
}
