//! # The Grassmann manifold, projector perspective
//!
//! A subspace is represented by the unique orthogonal projector `P = UUᵀ`
//! onto it: symmetric, idempotent, rank p. Tangent vectors at `P` are the
//! symmetric matrices with `ΔP + PΔ = Δ`, and every one of them is the
//! commutator `Δ = [Ω, P]` of its own generator `Ω = [Δ, P]` in the Lie
//! subalgebra `𝔰𝔬_P(n) = {Ω skew | Ω = ΩP + PΩ}`.
//!
//! The formulas here work with n×n matrices and matrix exponentials, so they
//! scale poorly in n; their value is as readable closed forms and as
//! independent cross-checks for the O(np²) routines in
//! [`crate::grassmann`]:
//!
//! * exponential `Exp_P(Δ) = e^{[Δ,P]} P e^{−[Δ,P]}`;
//! * logarithm `Ω = ½ log((I − 2F)(I − 2P))`;
//! * parallel transport by conjugation with `e^{t[Γ,P]}`;
//! * the point symmetry `σ_P(F) = (2P − I)F(2P − I)`;
//! * sectional curvature from traces of products of the ambient tangents.

use crate::error::{Error, Result};
use crate::grassmann::GrassmannPoint;
use crate::matcore::{expm, logm_principal, svd_compact, Matrix, SvdOrder};
use crate::stiefel::StiefelMatrix;

/// Projector invariant tolerance (symmetry, idempotence, trace).
pub const EPS_PROJ: f64 = 1e-9;

/// Eigenvalue clustering tolerance for accepting a matrix as a projector
/// when extracting an orthonormal basis.
const EPS_SPECTRUM: f64 = 1e-6;

/// A rank-p orthogonal projector: `Pᵀ = P`, `P² = P`, `tr P = p`.
#[derive(Debug, Clone)]
pub struct ProjectorMatrix {
    p: Matrix,
    rank: usize,
}

impl ProjectorMatrix {
    pub fn new(p: Matrix, rank: usize) -> Result<Self> {
        let n = p.nrows();
        if p.ncols() != n {
            return Err(Error::shape("square", format!("{}×{}", n, p.ncols())));
        }
        let sym = (&p - p.transpose()).norm();
        let idem = (&p * &p - &p).norm();
        let trace = (p.trace() - rank as f64).abs();
        if sym > EPS_PROJ || idem > EPS_PROJ || trace > EPS_PROJ {
            return Err(Error::InvalidProjector {
                reason: format!("‖P−Pᵀ‖={sym:.2e}, ‖P²−P‖={idem:.2e}, |tr P − p|={trace:.2e}"),
            });
        }
        Ok(Self { p, rank })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.p
    }

    pub fn n(&self) -> usize {
        self.p.nrows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

/// Tangent vector at a projector: symmetric with `ΔP + PΔ = Δ`.
#[derive(Debug, Clone)]
pub struct ProjectorTangent {
    delta: Matrix,
    base: ProjectorMatrix,
}

impl ProjectorTangent {
    pub fn new(base: ProjectorMatrix, delta: Matrix) -> Result<Self> {
        let n = base.n();
        if delta.shape() != (n, n) {
            return Err(Error::shape(
                format!("{n}×{n}"),
                format!("{}×{}", delta.nrows(), delta.ncols()),
            ));
        }
        let scale = delta.norm().max(1.0);
        let sym = (&delta - delta.transpose()).norm();
        let char_defect = (&delta * base.matrix() + base.matrix() * &delta - &delta).norm();
        if sym > 1e-8 * scale || char_defect > 1e-8 * scale {
            return Err(Error::NotTangent {
                defect: sym.max(char_defect),
            });
        }
        Ok(Self { delta, base })
    }

    pub(crate) fn new_unchecked(base: ProjectorMatrix, delta: Matrix) -> Self {
        Self { delta, base }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.delta
    }

    pub fn base(&self) -> &ProjectorMatrix {
        &self.base
    }

    /// Metric norm `√(½ tr Δ²)`, matching the lift norm in the ONB view.
    pub fn norm(&self) -> f64 {
        (0.5 * (&self.delta * &self.delta).trace()).sqrt()
    }
}

/// Generator `Ω ∈ 𝔰𝔬_P(n)`: skew with `Ω = ΩP + PΩ`.
#[derive(Debug, Clone)]
pub struct SkewGenerator {
    omega: Matrix,
    base: ProjectorMatrix,
}

impl SkewGenerator {
    pub fn matrix(&self) -> &Matrix {
        &self.omega
    }

    pub fn base(&self) -> &ProjectorMatrix {
        &self.base
    }
}

/// `U ↦ UUᵀ`.
pub fn from_onb(u: &StiefelMatrix) -> Result<ProjectorMatrix> {
    let p = u.as_matrix() * u.as_matrix().transpose();
    ProjectorMatrix::new(p, u.ncols())
}

/// Extracts an orthonormal basis of `range(P)` from the symmetric
/// eigendecomposition, keeping the eigenvalue-1 cluster.
///
/// For a symmetric positive-semidefinite matrix the SVD is the
/// eigendecomposition (with the eigenvalue sign carried by `u_kᵀv_k`), so
/// this reuses the same robust SVD kernel as everything else. Rejects
/// matrices whose spectrum is not within `1e−6` of `{0, 1}` with exactly
/// `rank` ones.
pub fn to_onb(p: &ProjectorMatrix) -> Result<StiefelMatrix> {
    let n = p.n();
    let sym = (p.matrix() + p.matrix().transpose()) * 0.5;
    let f = svd_compact(&sym, SvdOrder::Descending)?;
    let mut ones = 0usize;
    for k in 0..n {
        let lambda = f.s[k] * f.u.column(k).dot(&f.v.column(k)).signum();
        if (lambda - 1.0).abs() <= EPS_SPECTRUM {
            ones += 1;
        } else if lambda.abs() > EPS_SPECTRUM {
            return Err(Error::InvalidProjector {
                reason: format!("eigenvalue {lambda} is neither 0 nor 1"),
            });
        }
    }
    if ones != p.rank() {
        return Err(Error::InvalidProjector {
            reason: format!("{ones} unit eigenvalues, expected {}", p.rank()),
        });
    }
    StiefelMatrix::new(f.u.columns(0, p.rank()).into_owned())
}

/// Projection of a symmetric matrix onto the tangent space at `P`:
/// `S ↦ (I−P)SP + PS(I−P)`.
pub fn tangent_project(p: &ProjectorMatrix, s: &Matrix) -> Result<ProjectorTangent> {
    let n = p.n();
    if s.shape() != (n, n) {
        return Err(Error::shape(
            format!("{n}×{n}"),
            format!("{}×{}", s.nrows(), s.ncols()),
        ));
    }
    if (s - s.transpose()).norm() > 1e-8 * s.norm().max(1.0) {
        return Err(Error::NotTangent {
            defect: (s - s.transpose()).norm(),
        });
    }
    let pm = p.matrix();
    let sp = s * pm;
    let ps = pm * s;
    let psp = pm * &sp;
    let delta = &sp + &ps - 2.0 * psp;
    Ok(ProjectorTangent::new_unchecked(p.clone(), delta))
}

/// Generator of a tangent vector: `Ω = [Δ, P]`.
pub fn omega_of(delta: &ProjectorTangent) -> SkewGenerator {
    let pm = delta.base.matrix();
    let omega = delta.matrix() * pm - pm * delta.matrix();
    SkewGenerator {
        omega,
        base: delta.base.clone(),
    }
}

/// Tangent vector of a generator: `Δ = [Ω, P]`; inverse of [`omega_of`].
pub fn delta_of(omega: &SkewGenerator) -> ProjectorTangent {
    let pm = omega.base.matrix();
    let delta = omega.matrix() * pm - pm * omega.matrix();
    ProjectorTangent::new_unchecked(omega.base.clone(), delta)
}

/// Exponential map `Exp_P(tΔ) = e^{t[Δ,P]} · P · e^{−t[Δ,P]}`.
pub fn exp_projector(
    p: &ProjectorMatrix,
    delta: &ProjectorTangent,
    t: f64,
) -> Result<ProjectorMatrix> {
    let omega = omega_of(delta);
    let q = expm(&(omega.matrix() * t));
    // Ω is skew, so e^{−tΩ} is the transpose.
    let moved = &q * p.matrix() * q.transpose();
    ProjectorMatrix::new(moved, p.rank())
}

/// Logarithm in the projector perspective:
/// `Ω = ½ log((I − 2F)(I − 2P))`, `Δ = [Ω, P]`.
///
/// Requires `F ∉ Cut_P`; like-oriented reflections make `(I−2F)(I−2P)` a
/// rotation whose principal log exists iff no principal angle equals π/2.
/// The cut locus is detected up front from the singular values of `UᵀY` so
/// the caller gets a clean domain error instead of a log branch failure.
pub fn log_projector(p: &ProjectorMatrix, f: &ProjectorMatrix) -> Result<ProjectorTangent> {
    if p.n() != f.n() || p.rank() != f.rank() {
        return Err(Error::shape(
            format!("projector of size {} rank {}", p.n(), p.rank()),
            format!("size {} rank {}", f.n(), f.rank()),
        ));
    }
    let u = to_onb(p)?;
    let y = to_onb(f)?;
    let overlap = svd_compact(
        &(u.as_matrix().transpose() * y.as_matrix()),
        SvdOrder::Ascending,
    )?;
    if overlap.s[0] <= crate::grassmann::TAU_CUT {
        return Err(Error::Domain(
            "target lies in the cut locus; the projector logarithm is undefined there \
             (use the extended ONB logarithm)"
                .into(),
        ));
    }
    let n = p.n();
    let eye = Matrix::identity(n, n);
    let arg = (&eye - f.matrix() * 2.0) * (&eye - p.matrix() * 2.0);
    let omega = logm_principal(&arg)? * 0.5;
    let delta = &omega * p.matrix() - p.matrix() * &omega;
    Ok(ProjectorTangent::new_unchecked(p.clone(), delta))
}

/// Parallel transport of `delta` along `t ↦ Exp_P(tΓ)`:
/// conjugation `e^{t[Γ,P]} · Δ · e^{−t[Γ,P]}`.
pub fn parallel_transport_projector(
    delta: &ProjectorTangent,
    gamma: &ProjectorTangent,
    t: f64,
) -> Result<ProjectorTangent> {
    if (delta.base.matrix() - gamma.base.matrix()).norm() > 1e-9 {
        return Err(Error::BaseMismatch);
    }
    let p = &delta.base;
    let omega = omega_of(gamma);
    let q = expm(&(omega.matrix() * t));
    let moved = &q * delta.matrix() * q.transpose();
    let new_base = ProjectorMatrix::new(&q * p.matrix() * q.transpose(), p.rank())?;
    Ok(ProjectorTangent::new_unchecked(new_base, moved))
}

/// The geodesic point symmetry at `P`.
///
/// With `Q` diagonalizing `P = QP₀Qᵀ` and `S₀ = diag(I_p, −I_{n−p})`, the
/// symmetry is conjugation by `QS₀Qᵀ`, which collapses to the reflection
/// `2P − I`; no eigendecomposition is needed.
#[derive(Debug, Clone)]
pub struct SymmetryMap {
    s: Matrix,
}

pub fn symmetry_at(p: &ProjectorMatrix) -> SymmetryMap {
    let n = p.n();
    SymmetryMap {
        s: p.matrix() * 2.0 - Matrix::identity(n, n),
    }
}

impl SymmetryMap {
    /// `σ_P(F) = S F S`.
    pub fn apply(&self, f: &ProjectorMatrix) -> Result<ProjectorMatrix> {
        ProjectorMatrix::new(&self.s * f.matrix() * &self.s, f.rank())
    }

    /// Differential `dσ_P(Δ) = S Δ S`, a tangent vector at `σ_P(F)`.
    pub fn apply_tangent(&self, delta: &ProjectorTangent) -> Result<ProjectorTangent> {
        let base = self.apply(&delta.base)?;
        Ok(ProjectorTangent::new_unchecked(
            base,
            &self.s * delta.matrix() * &self.s,
        ))
    }

    pub fn reflection(&self) -> &Matrix {
        &self.s
    }
}

/// Reference exponential through the orthogonal group:
/// `Exp(t) = first p columns of (U  U_⊥) · e^{t·[[0, −Bᵀ],[B, 0]]}`.
///
/// Exercises the full n×n matrix exponential, so it is only meant as a test
/// oracle for small n, not for applications.
pub fn exp_oracle_on(
    u: &StiefelMatrix,
    u_perp: &Matrix,
    b: &Matrix,
    t: f64,
) -> Result<GrassmannPoint> {
    let (n, p) = (u.nrows(), u.ncols());
    if u_perp.shape() != (n, n - p) || b.shape() != (n - p, p) {
        return Err(Error::shape(
            format!("{n}×{} completion and {}×{p} block", n - p, n - p),
            format!(
                "{}×{} and {}×{}",
                u_perp.nrows(),
                u_perp.ncols(),
                b.nrows(),
                b.ncols()
            ),
        ));
    }
    let mut q = Matrix::zeros(n, n);
    q.view_mut((0, 0), (n, p)).copy_from(u.as_matrix());
    q.view_mut((0, p), (n, n - p)).copy_from(u_perp);

    let mut skew = Matrix::zeros(n, n);
    skew.view_mut((0, p), (p, n - p))
        .copy_from(&(-b.transpose() * t));
    skew.view_mut((p, 0), (n - p, p)).copy_from(&(b * t));

    let rot = &q * expm(&skew);
    let rep = StiefelMatrix::new(rot.columns(0, p).into_owned())?;
    GrassmannPoint::new(rep)
}

/// Sectional curvature from ambient tangents:
/// `K = 4·(tr(Δ₁²Δ₂²) − tr((Δ₁Δ₂)²)) / (tr(Δ₁²)tr(Δ₂²) − tr(Δ₁Δ₂)²)`.
pub fn sectional_curvature_projector(d1: &ProjectorTangent, d2: &ProjectorTangent) -> Result<f64> {
    if (d1.base.matrix() - d2.base.matrix()).norm() > 1e-9 {
        return Err(Error::BaseMismatch);
    }
    let tr_a2 = (d1.matrix() * d1.matrix()).trace();
    let tr_b2 = (d2.matrix() * d2.matrix()).trace();
    let tr_ab = (d1.matrix() * d2.matrix()).trace();
    let gram = tr_a2 * tr_b2 - tr_ab * tr_ab;
    if gram <= 1e-12 * tr_a2 * tr_b2 || tr_a2 == 0.0 || tr_b2 == 0.0 {
        return Err(Error::DegeneratePlane);
    }

    // Orthonormalize the plane basis first (same reasoning as in the ONB
    // routine): the value is invariant and the cancellation-prone
    // denominator becomes trivial.
    let a = d1.matrix() / tr_a2.sqrt();
    let mut b = d2.matrix() - &a * (&a * d2.matrix()).trace();
    b /= (&b * &b).trace().sqrt();
    let r = (&a * &b).trace();

    let a2 = &a * &a;
    let b2 = &b * &b;
    let ab = &a * &b;
    let num = (&a2 * &b2).trace() - (&ab * &ab).trace();
    Ok(4.0 * num / (1.0 - r * r))
}
