//! Shared helpers for the integration suites.
// Each integration test binary compiles this module separately and uses a
// different subset of it.
#![allow(dead_code)]

use grassmann_kit::grassmann::{GrassmannPoint, HorizontalTangent};
use grassmann_kit::matcore::{qr_thin, svd_compact, Matrix, SvdOrder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(0xbeef);
    Matrix::from_fn(rows, cols, |_, _| r.sample(StandardNormal))
}

pub fn random_orthogonal(n: usize, seed: u64) -> Matrix {
    qr_thin(&random_matrix(n, n, seed)).expect("full rank").q
}

/// Random horizontal tangent with prescribed singular values.
pub fn tangent_with_sigma(point: &GrassmannPoint, sigma: &[f64], seed: u64) -> HorizontalTangent {
    let raw = HorizontalTangent::random(point.clone(), seed);
    let f = svd_compact(raw.matrix(), SvdOrder::Descending).unwrap();
    let k = sigma.len();
    let s = Matrix::from_fn(k, k, |i, j| if i == j { sigma[i] } else { 0.0 });
    let h = f.u.columns(0, k) * s * f.v.columns(0, k).transpose();
    HorizontalTangent::new(point.clone(), h).unwrap()
}

/// Random tangent rescaled so its largest singular value equals `sigma_max`.
pub fn tangent_with_sigma_max(
    point: &GrassmannPoint,
    sigma_max: f64,
    seed: u64,
) -> HorizontalTangent {
    let raw = HorizontalTangent::random(point.clone(), seed);
    let f = svd_compact(raw.matrix(), SvdOrder::Descending).unwrap();
    raw.scaled(sigma_max / f.s[0])
}

pub fn central_diff<F: Fn(f64) -> Matrix>(f: F, h: f64) -> Matrix {
    (f(h) - f(-h)) / (2.0 * h)
}
