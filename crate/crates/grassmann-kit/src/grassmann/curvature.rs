//! Sectional curvature of Gr(n,p) and the conjugate-point predicate.

use crate::error::{Error, Result};
use crate::matcore::frob_inner;

use super::{principal_angles, GrassmannPoint, HorizontalTangent};

/// Relative Gram-determinant threshold below which two tangent vectors are
/// rejected as spanning a degenerate plane.
const TAU_PLANE: f64 = 1e-12;

/// Sectional curvature of the plane spanned by two tangent vectors, from
/// their horizontal lifts `B₁, B₂`:
///
/// ```text
///       ‖B₂ᵀB₁‖² + ‖B₁B₂ᵀ‖² − 2⟨B₂ᵀB₁, B₁ᵀB₂⟩
/// K  =  ─────────────────────────────────────────
///            ‖B₁‖²‖B₂‖² − ⟨B₁,B₂⟩²
/// ```
///
/// Only the p×p Gram products enter, so the cost is O(np²). The value lies
/// in `[0, 2]` whenever `min(p, n−p) ≥ 2`, is identically 1 on Gr(n,1) and
/// Gr(n,n−1), and vanishes exactly for commuting lifted pairs.
pub fn sectional_curvature(d1: &HorizontalTangent, d2: &HorizontalTangent) -> Result<f64> {
    if (d1.base().rep().as_matrix() - d2.base().rep().as_matrix()).norm() > 1e-10 {
        return Err(Error::BaseMismatch);
    }
    let n11 = frob_inner(d1.matrix(), d1.matrix());
    let n22 = frob_inner(d2.matrix(), d2.matrix());
    let n12 = frob_inner(d1.matrix(), d2.matrix());
    let gram_det = n11 * n22 - n12 * n12;
    if gram_det <= TAU_PLANE * n11 * n22 || n11 == 0.0 || n22 == 0.0 {
        return Err(Error::DegeneratePlane);
    }

    // The value only depends on the plane, so work in an orthonormal basis
    // of it; that pins the denominator at 1 and avoids the cancellation
    // that otherwise amplifies rounding on nearly collinear inputs.
    let b1 = d1.matrix() / n11.sqrt();
    let mut b2 = d2.matrix() - &b1 * frob_inner(&b1, d2.matrix());
    b2 /= b2.norm();
    let r12 = frob_inner(&b1, &b2);

    let b2t_b1 = b2.transpose() * &b1;
    let b1_b2t = &b1 * b2.transpose();
    let b1t_b2 = b2t_b1.transpose();
    let numerator = frob_inner(&b2t_b1, &b2t_b1) + frob_inner(&b1_b2t, &b1_b2t)
        - 2.0 * frob_inner(&b2t_b1, &b1t_b2);
    Ok(numerator / (1.0 - r12 * r12))
}

/// Why two points are conjugate along some geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConjugacyReason {
    /// Two principal angles coincide within tolerance.
    RepeatedAngle,
    /// A principal angle vanishes (with the count rule for p > n/2).
    ZeroAngle,
}

/// Conjugate-point predicate: `Some(reason)` iff `f` lies in the conjugate
/// locus of `p`.
///
/// For `p ≤ n/2` this means at least two identical principal angles, or at
/// least one zero angle when `p < n/2` strictly. For `p > n/2` the rule is
/// applied to the orthogonal complements: `2p − n` zero angles are forced
/// by dimension counting and only zeros beyond those count.
pub fn is_conjugate(
    p: &GrassmannPoint,
    f: &GrassmannPoint,
    tol: f64,
) -> Result<Option<ConjugacyReason>> {
    let angles = principal_angles(p, f)?;
    let (n, pp) = (p.n(), p.p());
    let mut theta: Vec<f64> = angles.as_slice().to_vec();
    let mut effective_dim = pp;
    if 2 * pp > n {
        // Switch to the complement: drop the 2p − n structurally zero
        // angles (ascending order puts them first).
        let forced = 2 * pp - n;
        theta.drain(0..forced);
        effective_dim = n - pp;
    }
    let zero_allowed = 2 * effective_dim < n;
    if zero_allowed && theta.first().is_some_and(|&t| t <= tol) {
        return Ok(Some(ConjugacyReason::ZeroAngle));
    }
    for w in theta.windows(2) {
        if w[1] - w[0] <= tol {
            return Ok(Some(ConjugacyReason::RepeatedAngle));
        }
    }
    Ok(None)
}
