//! The Stiefel manifold St(n,p) of n×p matrices with orthonormal columns.
//!
//! Points on the Grassmannian are represented by Stiefel matrices, so this
//! module provides the representative layer: tangent and horizontal
//! projections, the canonical metric, orthogonal completion and seeded
//! random sampling.
//!
//! The tangent space at `U` is `{D | UᵀD = −DᵀU}` and splits into the
//! vertical part `{UA | A skew}` along the fiber `[U] = {UR | R ∈ O(p)}`
//! and the horizontal part `{D | UᵀD = 0}`, which models Grassmann tangent
//! vectors.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matcore::{frob_inner, qr_thin, Matrix};

/// Orthonormality defect accepted at construction.
pub const EPS_ORTH: f64 = 1e-10;

/// An n×p matrix with orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct StiefelMatrix {
    u: Matrix,
}

impl StiefelMatrix {
    /// Wraps a matrix after checking `‖UᵀU − I_p‖_F ≤ 1e−10`.
    pub fn new(u: Matrix) -> Result<Self> {
        if !u.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let defect = orthonormality_defect(&u);
        if defect > EPS_ORTH {
            return Err(Error::NotOrthonormal { defect });
        }
        Ok(Self { u })
    }

    /// Repairs orthonormality drift by a thin QR factorization. Useful after
    /// many geodesic steps, where rounding accumulates.
    pub fn reorthonormalized(matrix: &Matrix) -> Result<Self> {
        let f = qr_thin(matrix)?;
        Ok(Self { u: f.q })
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.u
    }

    pub fn into_matrix(self) -> Matrix {
        self.u
    }

    pub fn nrows(&self) -> usize {
        self.u.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.u.ncols()
    }
}

pub fn orthonormality_defect(u: &Matrix) -> f64 {
    let p = u.ncols();
    (u.transpose() * u - Matrix::identity(p, p)).norm()
}

/// A tangent vector `D` at `U`, satisfying `UᵀD + DᵀU = 0`.
#[derive(Debug, Clone)]
pub struct StiefelTangent {
    d: Matrix,
    base: StiefelMatrix,
}

impl StiefelTangent {
    pub fn new(base: StiefelMatrix, d: Matrix) -> Result<Self> {
        if d.shape() != (base.nrows(), base.ncols()) {
            return Err(Error::shape(
                format!("{}×{}", base.nrows(), base.ncols()),
                format!("{}×{}", d.nrows(), d.ncols()),
            ));
        }
        let sym = base.as_matrix().transpose() * &d + d.transpose() * base.as_matrix();
        let defect = sym.norm();
        if defect > 1e-8 * d.norm().max(1.0) {
            return Err(Error::NotTangent { defect });
        }
        Ok(Self { d, base })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.d
    }

    pub fn base(&self) -> &StiefelMatrix {
        &self.base
    }
}

/// Projection of an ambient matrix onto the tangent space at `U`:
/// `X ↦ X − ½U(XᵀU + UᵀX)`.
pub fn project_tangent(u: &StiefelMatrix, x: &Matrix) -> Result<StiefelTangent> {
    if x.shape() != (u.nrows(), u.ncols()) {
        return Err(Error::shape(
            format!("{}×{}", u.nrows(), u.ncols()),
            format!("{}×{}", x.nrows(), x.ncols()),
        ));
    }
    let um = u.as_matrix();
    let sym = x.transpose() * um + um.transpose() * x;
    let d = x - um * sym * 0.5;
    Ok(StiefelTangent { d, base: u.clone() })
}

/// Projection onto the horizontal space at `U`: `Z ↦ (I − UUᵀ)Z`.
///
/// The result is the horizontal lift of a Grassmann tangent vector; it is
/// returned as a raw matrix so callers can wrap it at the appropriate base
/// point (see [`crate::grassmann::HorizontalTangent`]).
pub fn project_horizontal(u: &StiefelMatrix, z: &Matrix) -> Result<Matrix> {
    if z.shape() != (u.nrows(), u.ncols()) {
        return Err(Error::shape(
            format!("{}×{}", u.nrows(), u.ncols()),
            format!("{}×{}", z.nrows(), z.ncols()),
        ));
    }
    let um = u.as_matrix();
    Ok(z - um * (um.transpose() * z))
}

/// Canonical metric `g_U(D₁,D₂) = tr(D₁ᵀ(I − ½UUᵀ)D₂)` inherited from the
/// quotient of the orthogonal group.
pub fn canonical_metric(
    u: &StiefelMatrix,
    d1: &StiefelTangent,
    d2: &StiefelTangent,
) -> Result<f64> {
    if (d1.base().as_matrix() - u.as_matrix()).norm() > 1e-10
        || (d2.base().as_matrix() - u.as_matrix()).norm() > 1e-10
    {
        return Err(Error::BaseMismatch);
    }
    let ud1 = u.as_matrix().transpose() * d1.matrix();
    let ud2 = u.as_matrix().transpose() * d2.matrix();
    Ok(frob_inner(d1.matrix(), d2.matrix()) - 0.5 * frob_inner(&ud1, &ud2))
}

/// Orthogonal completion `U_⊥` with `(U  U_⊥) ∈ O(n)`.
///
/// Computed by orthonormalizing a projected Gaussian block, so only the
/// completion identities are deterministic, not the particular matrix;
/// everything downstream is completion-invariant.
pub fn orthogonal_complement(u: &StiefelMatrix) -> Matrix {
    let (n, p) = (u.nrows(), u.ncols());
    if n == p {
        return Matrix::zeros(n, 0);
    }
    let um = u.as_matrix();
    let mut seed = 0x5eed_c0de_u64;
    loop {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let g = Matrix::from_fn(n, n - p, |_, _| r.sample(StandardNormal));
        let h = &g - um * (um.transpose() * &g);
        // Rank failure of the Gaussian draw has probability zero but would
        // surface as a QR error; redraw in that case.
        if let Ok(f) = qr_thin(&h) {
            if (um.transpose() * &f.q).norm() <= EPS_ORTH {
                return f.q;
            }
        }
        seed = seed.wrapping_add(1);
    }
}

/// Haar-uniform random Stiefel matrix: orthonormal factor of a seeded
/// Gaussian. Deterministic for a given `(n, p, seed)`.
pub fn random_stiefel(n: usize, p: usize, seed: u64) -> Result<StiefelMatrix> {
    random_stiefel_stream(n, p, seed, 0)
}

/// As [`random_stiefel`], drawing from sub-stream `stream` of the seed, so
/// independent instances can be generated concurrently without coupling.
pub fn random_stiefel_stream(n: usize, p: usize, seed: u64, stream: u64) -> Result<StiefelMatrix> {
    if p > n {
        return Err(Error::shape("p ≤ n", format!("n = {n}, p = {p}")));
    }
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    let g = Matrix::from_fn(n, p, |_, _| r.sample(StandardNormal));
    let f = qr_thin(&g)?;
    Ok(StiefelMatrix { u: f.q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{random_matrix, random_skew};

    #[test]
    fn stiefel_rejects_non_orthonormal() {
        let m = random_matrix(4, 2, 1);
        assert!(matches!(
            StiefelMatrix::new(m),
            Err(Error::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn project_tangent_fixes_tangent_vectors() {
        let u = random_stiefel(6, 2, 5).unwrap();
        let t = project_tangent(&u, &random_matrix(6, 2, 6)).unwrap();
        let again = project_tangent(&u, t.matrix()).unwrap();
        assert!((again.matrix() - t.matrix()).norm() < 1e-13);
    }

    #[test]
    fn project_tangent_kills_base_point() {
        let u = random_stiefel(5, 2, 2).unwrap();
        let t = project_tangent(&u, u.as_matrix()).unwrap();
        assert!(t.matrix().norm() < 1e-13);
    }

    #[test]
    fn project_tangent_invariant_holds() {
        let u = random_stiefel(7, 3, 8).unwrap();
        let t = project_tangent(&u, &random_matrix(7, 3, 9)).unwrap();
        let sym = u.as_matrix().transpose() * t.matrix() + t.matrix().transpose() * u.as_matrix();
        assert!(sym.norm() <= 1e-12);
    }

    #[test]
    fn project_horizontal_annihilates_span() {
        let u = random_stiefel(6, 2, 10).unwrap();
        let in_span = u.as_matrix() * random_matrix(2, 2, 11);
        let h = project_horizontal(&u, &in_span).unwrap();
        assert!(h.norm() < 1e-12);
    }

    #[test]
    fn project_horizontal_idempotent_and_invariant() {
        let u = random_stiefel(6, 2, 12).unwrap();
        let h = project_horizontal(&u, &random_matrix(6, 2, 13)).unwrap();
        let h2 = project_horizontal(&u, &h).unwrap();
        assert!((h2 - &h).norm() < 1e-13);
        assert!((u.as_matrix().transpose() * &h).norm() <= 1e-12);
    }

    #[test]
    fn projections_are_self_adjoint_and_compose() {
        // Self-adjointness in the ambient trace inner product, and
        // horizontal ∘ tangent = horizontal.
        let u = random_stiefel(6, 3, 40).unwrap();
        let x = random_matrix(6, 3, 41);
        let y = random_matrix(6, 3, 42);
        let tx = project_tangent(&u, &x).unwrap();
        let ty = project_tangent(&u, &y).unwrap();
        assert!((frob_inner(tx.matrix(), &y) - frob_inner(&x, ty.matrix())).abs() <= 1e-12);
        let hx = project_horizontal(&u, &x).unwrap();
        let hy = project_horizontal(&u, &y).unwrap();
        assert!((frob_inner(&hx, &y) - frob_inner(&x, &hy)).abs() <= 1e-12);

        let h_of_t = project_horizontal(&u, tx.matrix()).unwrap();
        assert!((h_of_t - &hx).norm() <= 1e-12);
    }

    #[test]
    fn metric_on_horizontal_vectors_is_frobenius() {
        let u = random_stiefel(6, 2, 14).unwrap();
        let h1 = project_horizontal(&u, &random_matrix(6, 2, 15)).unwrap();
        let h2 = project_horizontal(&u, &random_matrix(6, 2, 16)).unwrap();
        let t1 = project_tangent(&u, &h1).unwrap();
        let t2 = project_tangent(&u, &h2).unwrap();
        let g = canonical_metric(&u, &t1, &t2).unwrap();
        assert!((g - frob_inner(&h1, &h2)).abs() < 1e-12);
    }

    #[test]
    fn metric_on_vertical_vectors_is_half_trace() {
        let u = random_stiefel(6, 3, 17).unwrap();
        let a = random_skew(3, 18);
        let d = project_tangent(&u, &(u.as_matrix() * &a)).unwrap();
        let g = canonical_metric(&u, &d, &d).unwrap();
        assert!((g - 0.5 * frob_inner(&a, &a)).abs() < 1e-12);
    }

    #[test]
    fn metric_unit_horizontal_column() {
        let u = StiefelMatrix::new(Matrix::identity(4, 1)).unwrap();
        let mut h = Matrix::zeros(4, 1);
        h[(1, 0)] = 1.0;
        let t = project_tangent(&u, &h).unwrap();
        let g = canonical_metric(&u, &t, &t).unwrap();
        assert!((g - 1.0).abs() < 1e-14);
    }

    #[test]
    fn vertical_and_horizontal_are_orthogonal() {
        let u = random_stiefel(7, 3, 19).unwrap();
        let a = random_skew(3, 20);
        let vert = project_tangent(&u, &(u.as_matrix() * &a)).unwrap();
        let hor = project_horizontal(&u, &random_matrix(7, 3, 21)).unwrap();
        let hor_t = project_tangent(&u, &hor).unwrap();
        let g = canonical_metric(&u, &vert, &hor_t).unwrap();
        assert!(g.abs() < 1e-12);
    }

    #[test]
    fn orthogonal_complement_identities() {
        for (n, p, seed) in [(2, 1, 1u64), (6, 2, 2), (8, 5, 3)] {
            let u = random_stiefel(n, p, seed).unwrap();
            let uperp = orthogonal_complement(&u);
            assert_eq!(uperp.shape(), (n, n - p));
            assert!((u.as_matrix().transpose() * &uperp).norm() <= 1e-10);
            assert!((uperp.transpose() * &uperp - Matrix::identity(n - p, n - p)).norm() <= 1e-10);
            let full = u.as_matrix() * u.as_matrix().transpose() + &uperp * uperp.transpose();
            assert!((full - Matrix::identity(n, n)).norm() <= 1e-10);
        }
    }

    #[test]
    fn orthogonal_complement_of_e1_in_r2() {
        let u = StiefelMatrix::new(Matrix::identity(2, 1)).unwrap();
        let uperp = orthogonal_complement(&u);
        assert!((uperp[(0, 0)].abs() - 0.0).abs() < 1e-12);
        assert!((uperp[(1, 0)].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_stiefel_is_deterministic() {
        let a = random_stiefel(5, 2, 77).unwrap();
        let b = random_stiefel(5, 2, 77).unwrap();
        assert_eq!(a.as_matrix(), b.as_matrix());
        assert!(orthonormality_defect(a.as_matrix()) <= EPS_ORTH);
    }

    #[test]
    fn random_stiefel_seeds_give_distinct_subspaces() {
        let a = random_stiefel(5, 2, 1).unwrap();
        let b = random_stiefel(5, 2, 2).unwrap();
        let p = crate::grassmann::GrassmannPoint::new(a).unwrap();
        let f = crate::grassmann::GrassmannPoint::new(b).unwrap();
        assert!(crate::grassmann::distance(&p, &f) > 1e-3);
    }

    #[test]
    fn random_stiefel_rejects_p_larger_than_n() {
        assert!(random_stiefel(2, 3, 0).is_err());
    }
}
