//! Cut locus of a point on Gr(n,p) and the family of minimizing geodesics
//! to a cut point.
//!
//! A subspace `F` lies in the cut locus of `P` exactly when at least one
//! principal angle between them equals π/2, i.e. when `UᵀY` is rank
//! deficient. Every minimizing tangent vector towards such an `F` arises
//! from one of them by rotating the π/2-block of its SVD:
//! `Δ_W = Q̂·Σ·diag(W, I_{p−r})·Rᵀ` with `W ∈ O(r)`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::matcore::{svd_compact, Matrix, SvdOrder};

use super::{log_extended, GrassmannPoint, HorizontalTangent};

/// Absolute threshold on singular values of `UᵀY` below which an angle is
/// treated as π/2 (all those singular values lie in `[0, 1]`).
pub const TAU_CUT: f64 = 1e-8;

/// Cut time `t_cut(P, Δ) = π/(2σ₁)` along the geodesic with velocity
/// `delta`, where `σ₁` is the largest singular value of the lift.
/// A zero tangent never reaches the cut locus, so `+∞` is returned.
pub fn cut_time(delta: &HorizontalTangent) -> f64 {
    let sigma1 = svd_compact(delta.matrix(), SvdOrder::Descending)
        .map(|f| f.sigma_max())
        .unwrap_or(0.0);
    if sigma1 == 0.0 {
        f64::INFINITY
    } else {
        FRAC_PI_2 / sigma1
    }
}

/// Whether `f` lies in the cut locus of `p`: smallest singular value of
/// `UᵀY` at most `tol`.
pub fn in_cut_locus(p: &GrassmannPoint, f: &GrassmannPoint, tol: f64) -> Result<bool> {
    let m = p.rep().as_matrix().transpose() * f.rep().as_matrix();
    let svd = svd_compact(&m, SvdOrder::Ascending)?;
    Ok(svd.s[0] <= tol)
}

/// All minimizing geodesics from `base` to a (possibly cut-locus) target,
/// encoded by the SVD of one minimizer plus the size `r` of its π/2 block.
#[derive(Debug, Clone)]
pub struct CutSolutionFamily {
    base_tangent: HorizontalTangent,
    qhat: Matrix,
    sigma: Vec<f64>,
    rfac: Matrix,
    r: usize,
}

impl CutSolutionFamily {
    /// The member produced by the extended logarithm itself.
    pub fn base(&self) -> &HorizontalTangent {
        &self.base_tangent
    }

    /// Number of principal angles equal to π/2 (the `W`-block dimension).
    /// `r = 0` means the target is not a cut point and the logarithm is
    /// unique.
    pub fn multiplicity(&self) -> usize {
        self.r
    }

    /// The minimizer `Δ_W = Q̂·Σ·diag(W, I_{p−r})·Rᵀ` for `W ∈ O(r)`.
    ///
    /// Distinct `W` give geodesics that differ at interior times but share
    /// both endpoints and the minimal length.
    pub fn materialize(&self, w: &Matrix) -> Result<HorizontalTangent> {
        if w.shape() != (self.r, self.r) {
            return Err(Error::shape(
                format!("{}×{}", self.r, self.r),
                format!("{}×{}", w.nrows(), w.ncols()),
            ));
        }
        if self.r > 0 {
            let defect = (w.transpose() * w - Matrix::identity(self.r, self.r)).norm();
            if defect > 1e-8 {
                return Err(Error::NotOrthogonal { defect });
            }
        }
        let p = self.sigma.len();
        let mut w_hat = Matrix::identity(p, p);
        w_hat.view_mut((0, 0), (self.r, self.r)).copy_from(w);
        let sigma = Matrix::from_diagonal(&nalgebra::DVector::from_vec(self.sigma.clone()));
        let h = &self.qhat * sigma * w_hat * self.rfac.transpose();
        Ok(HorizontalTangent::new_unchecked(
            self.base_tangent.base().clone(),
            h,
        ))
    }
}

/// Enumerates the minimizing geodesics from `p` to `f`.
///
/// Runs the extended logarithm, takes the compact SVD of its output
/// `Δ = Q̂ΣRᵀ` (angles descending, so the π/2 block leads), and counts the
/// angles within [`TAU_CUT`] of π/2.
pub fn cut_solutions(p: &GrassmannPoint, f: &GrassmannPoint) -> Result<CutSolutionFamily> {
    let (delta, _) = log_extended(p, f.rep())?;
    let svd = svd_compact(delta.matrix(), SvdOrder::Descending)?;
    // Count right angles from the singular values of UᵀY (θ_k = π/2 ⇔
    // s_k ≤ τ_cut), which stays well-conditioned where the arcsin read-off
    // of the angles themselves is not.
    let overlap = svd_compact(
        &(p.rep().as_matrix().transpose() * f.rep().as_matrix()),
        SvdOrder::Ascending,
    )?;
    let r = overlap.s.iter().take_while(|&&s| s <= TAU_CUT).count();
    // The family parameterizes exact right angles; snap the leading block so
    // every materialized member carries them exactly.
    let mut sigma: Vec<f64> = svd.s.iter().cloned().collect();
    for s in sigma.iter_mut().take(r) {
        *s = FRAC_PI_2;
    }
    let mut family = CutSolutionFamily {
        base_tangent: delta,
        qhat: svd.u,
        sigma,
        rfac: svd.v,
        r,
    };
    family.base_tangent = family.materialize(&Matrix::identity(r, r))?;
    Ok(family)
}
