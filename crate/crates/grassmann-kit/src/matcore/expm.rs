//! Matrix exponential, principal matrix logarithm, and the Fréchet
//! derivative of the exponential via the block-triangular trick.

use nalgebra::DMatrix;

use super::Matrix;
use crate::error::{Error, Result};

/// Padé(13,13) coefficients for the matrix exponential
/// (Higham 2005, "The Scaling and Squaring Method ... Revisited").
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const THETA13: f64 = 5.371920351148152;

fn one_norm(a: &Matrix) -> f64 {
    let mut max = 0.0f64;
    for j in 0..a.ncols() {
        let s: f64 = a.column(j).iter().map(|x| x.abs()).sum();
        max = max.max(s);
    }
    max
}

/// Matrix exponential by scaling-and-squaring with a fixed Padé(13) kernel.
///
/// For skew-symmetric input the result is orthogonal to machine precision.
pub fn expm(x: &Matrix) -> Matrix {
    let n = x.nrows();
    assert_eq!(n, x.ncols(), "expm requires a square matrix");
    if n == 0 {
        return Matrix::zeros(0, 0);
    }

    let norm = one_norm(x);
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = x * 2f64.powi(-s);

    let eye = Matrix::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let w1 = &a6 * PADE13[13] + &a4 * PADE13[11] + &a2 * PADE13[9];
    let w2 = &w1 * &a6 + &a6 * PADE13[7] + &a4 * PADE13[5] + &a2 * PADE13[3] + &eye * PADE13[1];
    let u = &a * &w2;
    let z1 = &a6 * PADE13[12] + &a4 * PADE13[10] + &a2 * PADE13[8];
    let v = &z1 * &a6 + &a6 * PADE13[6] + &a4 * PADE13[4] + &a2 * PADE13[2] + &eye * PADE13[0];

    let num = &v + &u;
    let den = &v - &u;
    let mut e = den
        .lu()
        .solve(&num)
        .expect("Padé denominator is nonsingular for scaled input");
    for _ in 0..s {
        e = &e * &e;
    }
    e
}

/// Spectral-radius-scaled check that no eigenvalue lies on the closed
/// negative real axis (where the principal logarithm is undefined).
fn check_log_domain(x: &Matrix) -> Result<()> {
    let eigs = x.complex_eigenvalues();
    let scale = eigs.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
    for z in eigs.iter() {
        if z.im.abs() <= 1e-12 * scale && z.re <= 1e-12 * scale {
            return Err(Error::Domain(format!(
                "eigenvalue {z} lies on the closed negative real axis; principal logarithm undefined"
            )));
        }
    }
    Ok(())
}

/// One Denman–Beavers step pair for the matrix square root.
fn sqrtm_denman_beavers(a: &Matrix) -> Result<Matrix> {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = Matrix::identity(n, n);
    for _ in 0..60 {
        let y_inv = y
            .clone()
            .lu()
            .try_inverse()
            .ok_or_else(|| Error::Numerical("square-root iterate became singular".into()))?;
        let z_inv = z
            .clone()
            .lu()
            .try_inverse()
            .ok_or_else(|| Error::Numerical("square-root iterate became singular".into()))?;
        let y_next = (&y + &z_inv) * 0.5;
        let z_next = (&z + &y_inv) * 0.5;
        let delta = (&y_next - &y).norm();
        y = y_next;
        z = z_next;
        if delta <= 1e-15 * y.norm().max(1.0) {
            return Ok(y);
        }
    }
    Err(Error::Numerical(
        "matrix square-root iteration did not converge".into(),
    ))
}

/// Principal matrix logarithm by inverse scaling-and-squaring.
///
/// Square roots are taken until `X` is close to the identity, the log of the
/// final iterate is evaluated through the Gregory series
/// `log X = 2·atanh((X−I)(X+I)⁻¹)`, and the result is rescaled.
pub fn logm_principal(x: &Matrix) -> Result<Matrix> {
    let n = x.nrows();
    if n != x.ncols() {
        return Err(Error::shape("square", format!("{}×{}", n, x.ncols())));
    }
    if !x.iter().all(|e| e.is_finite()) {
        return Err(Error::NonFinite);
    }
    if n == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    check_log_domain(x)?;

    let eye = Matrix::identity(n, n);
    let mut a = x.clone();
    let mut k = 0u32;
    while (&a - &eye).norm() > 0.25 {
        if k >= 50 {
            return Err(Error::Numerical(
                "inverse scaling-and-squaring did not contract".into(),
            ));
        }
        a = sqrtm_denman_beavers(&a)?;
        k += 1;
    }

    // Gregory series: log(A) = 2 Σ_{j odd} Z^j / j with Z = (A+I)⁻¹(A−I),
    // which equals (A−I)(A+I)⁻¹ since both factors commute.
    let z = (&a + &eye)
        .lu()
        .solve(&(&a - &eye))
        .ok_or_else(|| Error::Numerical("A + I singular in logarithm kernel".into()))?;
    let z2 = &z * &z;
    let mut term = z;
    let mut sum = DMatrix::zeros(n, n);
    for j in (1..200).step_by(2) {
        sum += &term / j as f64;
        term = &term * &z2;
        if term.norm() <= f64::EPSILON * sum.norm().max(1e-300) {
            break;
        }
    }
    Ok(sum * 2.0 * 2f64.powi(k as i32))
}

/// Directional derivative `d/dt|₀ expm(X + tE)` via the block exponential
/// of `[[X, E], [0, X]]`: the derivative is its upper-right block.
pub fn dexpm(x: &Matrix, e: &Matrix) -> Result<Matrix> {
    expm_with_derivative(x, e).map(|(_, d)| d)
}

/// Convenience pair `(expm(X), d/dt|₀ expm(X + tE))` from one block exponential.
pub fn expm_with_derivative(x: &Matrix, e: &Matrix) -> Result<(Matrix, Matrix)> {
    let n = x.nrows();
    if x.ncols() != n || e.shape() != (n, n) {
        return Err(Error::shape(
            format!("two {n}×{n} matrices"),
            format!(
                "{}×{} and {}×{}",
                x.nrows(),
                x.ncols(),
                e.nrows(),
                e.ncols()
            ),
        ));
    }
    let mut block = Matrix::zeros(2 * n, 2 * n);
    block.view_mut((0, 0), (n, n)).copy_from(x);
    block.view_mut((0, n), (n, n)).copy_from(e);
    block.view_mut((n, n), (n, n)).copy_from(x);
    let big = expm(&block);
    Ok((
        big.view((0, 0), (n, n)).into_owned(),
        big.view((0, n), (n, n)).into_owned(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{central_diff, random_matrix, random_skew};
    use std::f64::consts::PI;

    #[test]
    fn expm_zero_is_identity() {
        let z = Matrix::zeros(4, 4);
        assert!((expm(&z) - Matrix::identity(4, 4)).norm() < 1e-15);
    }

    #[test]
    fn expm_planar_rotation() {
        let theta = PI / 2.0;
        let x = Matrix::from_row_slice(2, 2, &[0.0, -theta, theta, 0.0]);
        let e = expm(&x);
        let expected = Matrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!((e - expected).norm() < 1e-14);
    }

    #[test]
    fn expm_skew_gives_orthogonal() {
        let x = random_skew(6, 5) * 3.0;
        let e = expm(&x);
        let defect = (e.transpose() * &e - Matrix::identity(6, 6)).norm();
        assert!(defect <= 1e-12, "defect {defect}");
    }

    #[test]
    fn logm_identity_is_zero() {
        let l = logm_principal(&Matrix::identity(5, 5)).unwrap();
        assert!(l.norm() < 1e-14);
    }

    #[test]
    fn logm_expm_roundtrip_on_skew() {
        for seed in 0..5 {
            let mut x = random_skew(5, seed);
            // Keep the spectral radius below π − 0.1.
            let rho = x
                .complex_eigenvalues()
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            x *= (PI - 0.1) / rho.max(PI - 0.1);
            let l = logm_principal(&expm(&x)).unwrap();
            assert!((l - &x).norm() <= 1e-11 * x.norm().max(1.0));
        }
    }

    #[test]
    fn logm_rejects_rotation_by_pi() {
        let x = Matrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(logm_principal(&x), Err(Error::Domain(_))));
    }

    #[test]
    fn logm_rejects_singular() {
        let x = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(logm_principal(&x), Err(Error::Domain(_))));
    }

    #[test]
    fn dexpm_at_zero_is_identity_map() {
        let e = random_matrix(4, 4, 2);
        let d = dexpm(&Matrix::zeros(4, 4), &e).unwrap();
        assert!((d - &e).norm() < 1e-13);
    }

    #[test]
    fn dexpm_commuting_scalar_case() {
        let alpha = 0.7;
        let x = Matrix::identity(3, 3) * alpha;
        let e = random_matrix(3, 3, 8);
        let d = dexpm(&x, &e).unwrap();
        assert!((d - &e * alpha.exp()).norm() < 1e-12);
    }

    #[test]
    fn dexpm_matches_finite_differences() {
        let x = random_skew(4, 3);
        let e = random_skew(4, 4);
        let d = dexpm(&x, &e).unwrap();
        let fd = central_diff(|t| expm(&(&x + &e * t)), 1e-5);
        assert!((d - &fd).norm() <= 1e-7 * fd.norm().max(1.0));
    }
}
