//! # The Grassmann manifold Gr(n,p), ONB perspective
//!
//! Gr(n,p) is the manifold of all p-dimensional linear subspaces of ℝⁿ. A
//! point is stored as an equivalence class `[U] = {UR | R ∈ O(p)}` of
//! orthonormal representatives `U ∈ St(n,p)`; a tangent vector is stored as
//! its horizontal lift at the representative, the unique `H ∈ ℝⁿˣᵖ` with
//! `UᵀH = 0`.
//!
//! All formulas below run in O(np²) flops:
//!
//! * metric: `g(Δ₁, Δ₂) = tr(H₁ᵀH₂)` on the lifts;
//! * exponential: with the thin SVD `H = Q̂ΣVᵀ` of the lift,
//!   `Exp_U(tΔ) = [UVcos(tΣ)Vᵀ + Q̂sin(tΣ)Vᵀ + U(I − VVᵀ)]`;
//! * logarithm: an extended algorithm (see [`log_extended`]) that also
//!   covers the cut locus and retains the Stiefel representative;
//! * distance: the 2-norm of the vector of principal angles;
//! * parallel transport along geodesics in closed form;
//! * sectional curvature from Gram matrices of the lifts.
//!
//! The n×n projector formulation of the same geometry lives in
//! [`crate::projector`] and doubles as a brute-force cross-check.

use crate::error::{Error, Result};
use crate::matcore::{frob_inner, svd_compact, Matrix, SvdOrder};
use crate::stiefel::{self, StiefelMatrix};

mod curvature;
mod cut;

pub use curvature::{is_conjugate, sectional_curvature, ConjugacyReason};
pub use cut::{cut_solutions, cut_time, in_cut_locus, CutSolutionFamily, TAU_CUT};

/// Subspace-equality tolerance (in geodesic distance).
pub const EPS_EQ: f64 = 1e-9;

/// Relative cutoff below which singular values of a lift are treated as
/// zero when assembling geodesic factors.
const RANK_CUT: f64 = 1e-14;

/// A point on Gr(n,p): the subspace spanned by the columns of `rep`.
#[derive(Debug, Clone)]
pub struct GrassmannPoint {
    rep: StiefelMatrix,
}

impl GrassmannPoint {
    pub fn new(rep: StiefelMatrix) -> Result<Self> {
        Ok(Self { rep })
    }

    /// Haar-uniform random subspace, deterministic per seed.
    pub fn random(n: usize, p: usize, seed: u64) -> Result<Self> {
        Ok(Self {
            rep: stiefel::random_stiefel(n, p, seed)?,
        })
    }

    pub fn rep(&self) -> &StiefelMatrix {
        &self.rep
    }

    pub fn n(&self) -> usize {
        self.rep.nrows()
    }

    pub fn p(&self) -> usize {
        self.rep.ncols()
    }

    /// Replaces the representative by `U·R`; the subspace is unchanged.
    pub fn rotated(&self, r: &Matrix) -> Result<Self> {
        let rep = StiefelMatrix::new(self.rep.as_matrix() * r)?;
        Ok(Self { rep })
    }

    /// Subspace-level equality: geodesic distance at most `EPS_EQ`.
    pub fn same_subspace(&self, other: &Self) -> bool {
        self.n() == other.n() && self.p() == other.p() && distance(self, other) <= EPS_EQ
    }
}

/// The horizontal lift `H` (with `UᵀH = 0`) of a tangent vector at `base`.
#[derive(Debug, Clone)]
pub struct HorizontalTangent {
    h: Matrix,
    base: GrassmannPoint,
}

impl HorizontalTangent {
    /// Wraps a lift after verifying horizontality `‖UᵀH‖ ≤ 1e−8·max(1,‖H‖)`.
    pub fn new(base: GrassmannPoint, h: Matrix) -> Result<Self> {
        if h.shape() != (base.n(), base.p()) {
            return Err(Error::shape(
                format!("{}×{}", base.n(), base.p()),
                format!("{}×{}", h.nrows(), h.ncols()),
            ));
        }
        let defect = (base.rep.as_matrix().transpose() * &h).norm();
        if defect > 1e-8 * h.norm().max(1.0) {
            return Err(Error::NotTangent { defect });
        }
        Ok(Self { h, base })
    }

    /// Projects an arbitrary n×p matrix onto the horizontal space first.
    pub fn projected(base: GrassmannPoint, z: &Matrix) -> Result<Self> {
        let h = stiefel::project_horizontal(base.rep(), z)?;
        Ok(Self { h, base })
    }

    /// Seeded Gaussian tangent vector (projected, not normalized).
    pub fn random(base: GrassmannPoint, seed: u64) -> Self {
        let g = {
            use rand::{Rng, SeedableRng};
            let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            r.set_stream(0x7a);
            Matrix::from_fn(base.n(), base.p(), |_, _| {
                r.sample(rand_distr::StandardNormal)
            })
        };
        Self::projected(base, &g).expect("projection cannot fail on matching shapes")
    }

    pub(crate) fn new_unchecked(base: GrassmannPoint, h: Matrix) -> Self {
        Self { h, base }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.h
    }

    pub fn base(&self) -> &GrassmannPoint {
        &self.base
    }

    /// Norm induced by the Riemannian metric: `‖H‖_F`.
    pub fn norm(&self) -> f64 {
        self.h.norm()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            h: &self.h * c,
            base: self.base.clone(),
        }
    }
}

fn same_base(a: &HorizontalTangent, b: &HorizontalTangent) -> Result<()> {
    if (a.base.rep.as_matrix() - b.base.rep.as_matrix()).norm() > 1e-10 {
        return Err(Error::BaseMismatch);
    }
    Ok(())
}

/// Horizontal lift `Δ·U` of an ambient tangent vector `Δ ∈ T_P Gr(n,p)`
/// (symmetric, with `ΔP + PΔ = Δ`) to the representative `U` of `point`.
pub fn lift(point: &GrassmannPoint, delta_ambient: &Matrix) -> Result<HorizontalTangent> {
    let n = point.n();
    if delta_ambient.shape() != (n, n) {
        return Err(Error::shape(
            format!("{n}×{n}"),
            format!("{}×{}", delta_ambient.nrows(), delta_ambient.ncols()),
        ));
    }
    let u = point.rep.as_matrix();
    let p_mat = u * u.transpose();
    let defect = (delta_ambient * &p_mat + &p_mat * delta_ambient - delta_ambient).norm();
    if defect > 1e-8 * delta_ambient.norm().max(1.0) {
        return Err(Error::NotTangent { defect });
    }
    Ok(HorizontalTangent {
        h: delta_ambient * u,
        base: point.clone(),
    })
}

/// Ambient form `HUᵀ + UHᵀ ∈ T_P Gr(n,p) ⊂ Sym(n)` of a lifted tangent.
pub fn ambient(delta: &HorizontalTangent) -> Matrix {
    let u = delta.base.rep.as_matrix();
    delta.matrix() * u.transpose() + u * delta.matrix().transpose()
}

/// Riemannian metric on the lifts: `g(Δ₁, Δ₂) = tr(H₁ᵀH₂)`, equal to
/// `½tr(Δ₁Δ₂)` on the ambient forms and invariant under the choice of
/// representative.
pub fn metric(d1: &HorizontalTangent, d2: &HorizontalTangent) -> Result<f64> {
    same_base(d1, d2)?;
    Ok(frob_inner(d1.matrix(), d2.matrix()))
}

/// Thin-SVD data of a lift, from which geodesics, their velocities and
/// parallel transport along them are evaluated in closed form.
#[derive(Debug, Clone)]
pub struct GeodesicFactors {
    u: StiefelMatrix,
    /// n×r, left singular vectors of the nonzero block (horizontal w.r.t. `u`).
    qhat: Matrix,
    /// Positive principal-angle rates, descending.
    sigma: Vec<f64>,
    /// p×r right singular vectors of the nonzero block.
    v: Matrix,
}

impl GeodesicFactors {
    /// Rank of the lift after discarding singular values ≤ `1e−14·σ₁`.
    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    /// Representative of `Exp_U(tΔ)`:
    /// `Y(t) = U + UV(cos(tΣ) − I)Vᵀ + Q̂sin(tΣ)Vᵀ`, which reduces to `U`
    /// exactly at `t = 0` and does not depend on how the SVD completes the
    /// zero-angle block.
    pub fn exp_rep(&self, t: f64) -> Matrix {
        let u = self.u.as_matrix();
        if self.sigma.is_empty() {
            return u.clone();
        }
        let r = self.sigma.len();
        let cos_m1 = Matrix::from_fn(r, r, |i, j| {
            if i == j {
                (t * self.sigma[i]).cos() - 1.0
            } else {
                0.0
            }
        });
        let sin = Matrix::from_fn(r, r, |i, j| {
            if i == j {
                (t * self.sigma[i]).sin()
            } else {
                0.0
            }
        });
        u + (u * &self.v) * cos_m1 * self.v.transpose() + &self.qhat * sin * self.v.transpose()
    }

    /// Velocity of the geodesic representative:
    /// `Ẏ(t) = (−UVΣsin(tΣ) + Q̂Σcos(tΣ))Vᵀ`, horizontal at `Y(t)`.
    pub fn velocity_rep(&self, t: f64) -> Matrix {
        let u = self.u.as_matrix();
        if self.sigma.is_empty() {
            return Matrix::zeros(u.nrows(), u.ncols());
        }
        let r = self.sigma.len();
        let neg_s_sin = Matrix::from_fn(r, r, |i, j| {
            if i == j {
                -self.sigma[i] * (t * self.sigma[i]).sin()
            } else {
                0.0
            }
        });
        let s_cos = Matrix::from_fn(r, r, |i, j| {
            if i == j {
                self.sigma[i] * (t * self.sigma[i]).cos()
            } else {
                0.0
            }
        });
        ((u * &self.v) * neg_s_sin + &self.qhat * s_cos) * self.v.transpose()
    }

    /// Parallel transport of the lift `h` along this geodesic to time `t`:
    /// `(−UVsin(tΣ)Q̂ᵀ + Q̂cos(tΣ)Q̂ᵀ + I − Q̂Q̂ᵀ)·h`.
    ///
    /// When the lift has full rank `n−p` the `(I − Q̂Q̂ᵀ)` term vanishes on
    /// horizontal vectors of its own accord.
    pub fn transport_rep(&self, h: &Matrix, t: f64) -> Matrix {
        if self.sigma.is_empty() {
            return h.clone();
        }
        let u = self.u.as_matrix();
        let r = self.sigma.len();
        let a = self.qhat.transpose() * h;
        let sin = Matrix::from_fn(r, r, |i, j| {
            if i == j {
                (t * self.sigma[i]).sin()
            } else {
                0.0
            }
        });
        let cos_m1 = Matrix::from_fn(r, r, |i, j| {
            if i == j {
                (t * self.sigma[i]).cos() - 1.0
            } else {
                0.0
            }
        });
        h - (u * &self.v) * sin * &a + &self.qhat * cos_m1 * &a
    }
}

/// Thin-SVD factors of the lift of `delta`, with the numerical rank cut at
/// `σ ≤ 1e−14·σ₁`.
pub fn geodesic_factors(delta: &HorizontalTangent) -> Result<GeodesicFactors> {
    let f = svd_compact(delta.matrix(), SvdOrder::Descending)?;
    let sigma_max = f.sigma_max();
    let r =
        f.s.iter()
            .filter(|&&s| s > RANK_CUT * sigma_max && s > 0.0)
            .count();
    Ok(GeodesicFactors {
        u: delta.base.rep.clone(),
        qhat: f.u.columns(0, r).into_owned(),
        sigma: f.s.iter().take(r).cloned().collect(),
        v: f.v.columns(0, r).into_owned(),
    })
}

/// Exponential map: the endpoint `Exp_P(tΔ)` of the geodesic with initial
/// velocity `Δ`. The stored representative is the canonical one of
/// [`GeodesicFactors::exp_rep`], so `t = 0` returns the base representative
/// exactly.
pub fn exp(delta: &HorizontalTangent, t: f64) -> Result<GrassmannPoint> {
    let factors = geodesic_factors(delta)?;
    let rep = StiefelMatrix::new(factors.exp_rep(t))?;
    Ok(GrassmannPoint { rep })
}

/// Velocity `d/dt Exp_P(tΔ)` as a tangent vector at the endpoint.
pub fn geodesic_velocity(delta: &HorizontalTangent, t: f64) -> Result<HorizontalTangent> {
    let factors = geodesic_factors(delta)?;
    let base = GrassmannPoint {
        rep: StiefelMatrix::new(factors.exp_rep(t))?,
    };
    HorizontalTangent::new(base, factors.velocity_rep(t))
}

/// Extended Grassmann logarithm.
///
/// Returns a minimizing tangent vector `Δ` with `Exp_P(Δ) = [Y]` together
/// with the aligned representative `Y*` that the exponential reproduces at
/// the matrix level. Unlike the classical algorithm this requires no matrix
/// inverse, so it also works when `[Y]` lies in the cut locus of `P`; there
/// the minimizer is not unique and the returned vector is the one selected
/// by the SVD at hand (all of them are enumerated by
/// [`cut_solutions`]).
///
/// Steps: SVD `YᵀU = Q̃S̃R̃ᵀ`; Procrustes alignment `Y* = Y(Q̃R̃ᵀ)`;
/// compact SVD `(I − UUᵀ)Y* = Q̂ŜRᵀ`; then `Δ = Q̂·arcsin(Ŝ)·Rᵀ`.
pub fn log_extended(
    point: &GrassmannPoint,
    target: &StiefelMatrix,
) -> Result<(HorizontalTangent, StiefelMatrix)> {
    let (n, p) = (point.n(), point.p());
    if target.nrows() != n || target.ncols() != p {
        return Err(Error::shape(
            format!("{n}×{p}"),
            format!("{}×{}", target.nrows(), target.ncols()),
        ));
    }
    let u = point.rep.as_matrix();
    let y = target.as_matrix();

    let align = svd_compact(&(y.transpose() * u), SvdOrder::Descending)?;
    let y_star = y * (&align.u * align.v.transpose());

    let l = &y_star - u * (u.transpose() * &y_star);
    let f = svd_compact(&l, SvdOrder::Descending)?;
    let theta = Matrix::from_fn(p, p, |i, j| {
        if i == j {
            f.s[i].clamp(0.0, 1.0).asin()
        } else {
            0.0
        }
    });
    let h = &f.u * theta * f.v.transpose();
    Ok((
        HorizontalTangent {
            h,
            base: point.clone(),
        },
        StiefelMatrix::new(y_star)?,
    ))
}

/// Principal angles `0 ≤ θ₁ ≤ … ≤ θ_p ≤ π/2` between two subspaces,
/// computed as `θ_k = arccos(s_k)` from the singular values of `UᵀY`.
#[derive(Debug, Clone)]
pub struct PrincipalAngles {
    theta: Vec<f64>,
}

impl PrincipalAngles {
    pub fn as_slice(&self) -> &[f64] {
        &self.theta
    }

    /// Geodesic distance: the 2-norm of the angle vector.
    pub fn two_norm(&self) -> f64 {
        self.theta.iter().map(|t| t * t).sum::<f64>().sqrt()
    }

    pub fn max(&self) -> f64 {
        self.theta.last().copied().unwrap_or(0.0)
    }
}

/// Principal angles between `p` and `f`, ascending; invariant under the
/// choice of representatives.
///
/// Angles are `θ_k = arccos(s_k)` for the singular values of `UᵀY`, with
/// the argument clamped to `[0, 1]`. Since the arc cosine cannot resolve
/// angles below √ε, angles smaller than π/4 are instead read off the
/// sine route `arcsin(σ_k((I − UUᵀ)Y))`, which is accurate there; both
/// sorted lists enumerate the same angles, so entries pair up directly.
pub fn principal_angles(p: &GrassmannPoint, f: &GrassmannPoint) -> Result<PrincipalAngles> {
    if p.n() != f.n() || p.p() != f.p() {
        return Err(Error::shape(
            format!("{}×{}", p.n(), p.p()),
            format!("{}×{}", f.n(), f.p()),
        ));
    }
    let u = p.rep.as_matrix();
    let y = f.rep.as_matrix();
    let cos = svd_compact(&(u.transpose() * y), SvdOrder::Descending)?;
    let sin = svd_compact(&(y - u * (u.transpose() * y)), SvdOrder::Ascending)?;
    let theta = cos
        .s
        .iter()
        .zip(sin.s.iter())
        .map(|(c, s)| {
            let from_cos = c.clamp(0.0, 1.0).acos();
            if from_cos < std::f64::consts::FRAC_PI_4 {
                s.clamp(0.0, 1.0).asin()
            } else {
                from_cos
            }
        })
        .collect();
    Ok(PrincipalAngles { theta })
}

/// Geodesic distance `dist(P,F) = ‖(θ₁,…,θ_p)‖₂ ≤ √p·π/2`; NaN when the
/// two points live on different Grassmannians.
pub fn distance(p: &GrassmannPoint, f: &GrassmannPoint) -> f64 {
    principal_angles(p, f)
        .map(|a| a.two_norm())
        .unwrap_or(f64::NAN)
}

/// Parallel transport of `delta` along the geodesic `t ↦ Exp_P(tΓ)`,
/// returned at the transported representative.
pub fn parallel_transport(
    gamma: &HorizontalTangent,
    delta: &HorizontalTangent,
    t: f64,
) -> Result<HorizontalTangent> {
    same_base(gamma, delta)?;
    let factors = geodesic_factors(gamma)?;
    let base = GrassmannPoint {
        rep: StiefelMatrix::new(factors.exp_rep(t))?,
    };
    HorizontalTangent::new(base, factors.transport_rep(delta.matrix(), t))
}

/// Riemannian gradient from the Euclidean gradient of a lifted function:
/// the horizontal projection `(I − UUᵀ)·∇f̄(U)`.
pub fn riemannian_gradient(point: &GrassmannPoint, egrad: &Matrix) -> Result<HorizontalTangent> {
    let h = stiefel::project_horizontal(point.rep(), egrad)?;
    Ok(HorizontalTangent {
        h,
        base: point.clone(),
    })
}

/// Covariant derivative `∇_Y X` of a vector field given through a smooth
/// extension `field` of its horizontal lift `U ↦ X^hor_U`:
/// `(I − UUᵀ)·d/dt|₀ field(U + t·Y^hor)`, evaluated by central differences
/// with step `h`.
pub fn covariant_derivative<F>(
    point: &GrassmannPoint,
    field: F,
    direction: &HorizontalTangent,
    h: f64,
) -> Result<HorizontalTangent>
where
    F: Fn(&Matrix) -> Matrix,
{
    let u = point.rep.as_matrix();
    let plus = field(&(u + direction.matrix() * h));
    let minus = field(&(u - direction.matrix() * h));
    let deriv = (plus - minus) / (2.0 * h);
    let proj = &deriv - u * (u.transpose() * &deriv);
    Ok(HorizontalTangent {
        h: proj,
        base: point.clone(),
    })
}
