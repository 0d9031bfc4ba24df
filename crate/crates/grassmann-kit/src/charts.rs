//! Local parameterizations of Gr(n,p): the affine chart pair (φ, ψ) and
//! normal coordinates through the exponential map.
//!
//! The affine chart sends `B ∈ ℝ^{(n−p)×p}` to the projector onto
//! `colspan([I_p; B])`; its inverse reads `B` back off the projector
//! blocks as `BA⁻¹`. Charts centered at other points are obtained by
//! conjugating with an orthogonal `Q`. Automatic chart switching is out of
//! scope; a chart is a single, explicitly chosen object.

use nalgebra::Cholesky;

use crate::error::{Error, Result};
use crate::grassmann::{self, GrassmannPoint, HorizontalTangent};
use crate::matcore::{svd_compact, Matrix, SvdOrder};
use crate::projector::{from_onb, ProjectorMatrix};
use crate::stiefel::StiefelMatrix;

/// Condition threshold on the top-left block: `σ_min/σ_max < τ` means the
/// projector is outside the chart.
pub const TAU_CHART: f64 = 1e-8;

/// An affine chart on Gr(n,p), centered at `Q·P₀·Qᵀ` and valid on an open
/// operator-norm ball of coordinate matrices.
#[derive(Debug, Clone)]
pub struct ChartBall {
    n: usize,
    p: usize,
    radius: f64,
    /// Orthogonal frame moving the chart; identity for the standard chart.
    q: Matrix,
}

impl ChartBall {
    /// Standard chart centered at the canonical projector `P₀`.
    pub fn standard(n: usize, p: usize, radius: f64) -> Result<Self> {
        if p > n {
            return Err(Error::shape("p ≤ n", format!("n = {n}, p = {p}")));
        }
        if radius <= 0.0 {
            return Err(Error::Domain("chart radius must be positive".into()));
        }
        Ok(Self {
            n,
            p,
            radius,
            q: Matrix::identity(n, n),
        })
    }

    /// Chart moved by an orthogonal matrix: `φ_Q(B) = Q·φ(B)·Qᵀ`.
    pub fn moved(q: Matrix, p: usize, radius: f64) -> Result<Self> {
        let n = q.nrows();
        let defect = (q.transpose() * &q - Matrix::identity(n, n)).norm();
        if q.ncols() != n || defect > 1e-10 {
            return Err(Error::NotOrthogonal { defect });
        }
        let mut chart = Self::standard(n, p, radius)?;
        chart.q = q;
        Ok(chart)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// The center projector `Q·P₀·Qᵀ`.
    pub fn center(&self) -> ProjectorMatrix {
        let u = StiefelMatrix::new(self.q.columns(0, self.p).into_owned())
            .expect("orthogonal frame columns are orthonormal");
        from_onb(&u).expect("center is a projector by construction")
    }
}

/// Chart parameterization `φ(B) = [I_p; B]·(I_p + BᵀB)⁻¹·[I_p  Bᵀ]`,
/// conjugated by the chart frame.
///
/// The Gram solve uses a Cholesky factorization; no explicit inverse is
/// formed. The formula is defined for every `B`; the ball radius only
/// delimits where the ψ∘φ round trip is guaranteed.
pub fn phi(b: &Matrix, chart: &ChartBall) -> Result<ProjectorMatrix> {
    let (n, p) = (chart.n, chart.p);
    if b.shape() != (n - p, p) {
        return Err(Error::shape(
            format!("{}×{}", n - p, p),
            format!("{}×{}", b.nrows(), b.ncols()),
        ));
    }
    let gram = Matrix::identity(p, p) + b.transpose() * b;
    let chol = Cholesky::new(gram)
        .ok_or_else(|| Error::Numerical("Gram matrix I + BᵀB was not positive definite".into()))?;
    let mut basis = Matrix::zeros(n, p);
    basis
        .view_mut((0, 0), (p, p))
        .copy_from(&Matrix::identity(p, p));
    basis.view_mut((p, 0), (n - p, p)).copy_from(b);
    // φ = M·(I + BᵀB)⁻¹·Mᵀ with M = [I; B].
    let solved = chol.solve(&basis.transpose());
    let proj = &basis * solved;
    let moved = &chart.q * proj * chart.q.transpose();
    ProjectorMatrix::new(moved, p)
}

/// Chart coordinates `ψ(P) = B·A⁻¹` from the blocks
/// `QᵀPQ = [[A, Bᵀ], [B, C]]`.
///
/// Fails with an out-of-chart error when `A` is singular or has condition
/// number above `1/τ_chart`.
pub fn psi(p: &ProjectorMatrix, chart: &ChartBall) -> Result<Matrix> {
    let (n, pp) = (chart.n, chart.p);
    if p.n() != n {
        return Err(Error::shape(
            format!("{n}×{n}"),
            format!("{}×{}", p.n(), p.n()),
        ));
    }
    let local = chart.q.transpose() * p.matrix() * &chart.q;
    let a = local.view((0, 0), (pp, pp)).into_owned();
    let b = local.view((pp, 0), (n - pp, pp)).into_owned();
    let svd = svd_compact(&a, SvdOrder::Descending)?;
    let smax = svd.s[0];
    let smin = svd.s[pp - 1];
    if smin <= TAU_CHART * smax.max(f64::MIN_POSITIVE) {
        return Err(Error::OutOfChart(format!(
            "leading block has σ_min/σ_max = {:.2e}",
            smin / smax.max(f64::MIN_POSITIVE)
        )));
    }
    // B·A⁻¹ through the solve Aᵀ·X = Bᵀ (A is symmetric here).
    let x = a
        .lu()
        .solve(&b.transpose())
        .ok_or_else(|| Error::OutOfChart("leading block is singular".into()))?;
    Ok(x.transpose())
}

/// Normal coordinates `ρ(B) = Exp_P(U_⊥·B·Uᵀ + U·Bᵀ·U_⊥ᵀ)` at a point with
/// chosen completion `U_⊥`; the projector of the geodesic endpoint.
///
/// `ρ(0) = P`, and the parameterization is injective for `σ₁(B) < π/2`.
pub fn normal_coords(
    point: &GrassmannPoint,
    u_perp: &Matrix,
    b: &Matrix,
) -> Result<ProjectorMatrix> {
    let (n, p) = (point.n(), point.p());
    if u_perp.shape() != (n, n - p) || b.shape() != (n - p, p) {
        return Err(Error::shape(
            format!("{n}×{} and {}×{p}", n - p, n - p),
            format!(
                "{}×{} and {}×{}",
                u_perp.nrows(),
                u_perp.ncols(),
                b.nrows(),
                b.ncols()
            ),
        ));
    }
    let lift = HorizontalTangent::new(point.clone(), u_perp * b)?;
    let end = grassmann::exp(&lift, 1.0)?;
    from_onb(end.rep())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::distance;
    use crate::projector::to_onb;
    use crate::stiefel::orthogonal_complement;
    use crate::testutil::{random_matrix, random_orthogonal};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn phi_at_zero_is_the_center() {
        let chart = ChartBall::standard(5, 2, 1.0).unwrap();
        let p = phi(&Matrix::zeros(3, 2), &chart).unwrap();
        assert!((p.matrix() - chart.center().matrix()).norm() <= 1e-14);
    }

    #[test]
    fn phi_gr21_explicit_value() {
        let chart = ChartBall::standard(2, 1, 2.0).unwrap();
        let b = Matrix::from_element(1, 1, 1.0);
        let p = phi(&b, &chart).unwrap();
        let expected = Matrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        assert!((p.matrix() - expected).norm() <= 1e-14);
    }

    #[test]
    fn phi_output_is_projector_for_random_b() {
        let chart = ChartBall::standard(7, 3, 10.0).unwrap();
        for seed in 0..5 {
            let b = random_matrix(4, 3, seed);
            let p = phi(&b, &chart).unwrap();
            let m = p.matrix();
            assert!((m - m.transpose()).norm() <= 1e-12);
            assert!((m * m - m).norm() <= 1e-12);
            assert!((m.trace() - 3.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn psi_at_center_is_zero() {
        let chart = ChartBall::standard(6, 2, 1.0).unwrap();
        let b = psi(&chart.center(), &chart).unwrap();
        assert!(b.norm() <= 1e-14);
    }

    #[test]
    fn psi_phi_roundtrip() {
        let chart = ChartBall::standard(6, 2, 1.0).unwrap();
        for seed in 0..10 {
            let mut b = random_matrix(4, 2, 100 + seed);
            // Scale to operator norm at most 1.
            let smax = svd_compact(&b, SvdOrder::Descending).unwrap().s[0];
            if smax > 1.0 {
                b /= smax;
            }
            let back = psi(&phi(&b, &chart).unwrap(), &chart).unwrap();
            assert!((back - &b).norm() <= 1e-10);
        }
    }

    #[test]
    fn phi_psi_roundtrip_on_in_chart_projector() {
        let chart = ChartBall::standard(5, 2, 1.0).unwrap();
        let point = GrassmannPoint::random(5, 2, 3).unwrap();
        let p = from_onb(point.rep()).unwrap();
        match psi(&p, &chart) {
            Ok(b) => {
                let again = phi(&b, &chart).unwrap();
                assert!((again.matrix() - p.matrix()).norm() <= 1e-10);
            }
            Err(Error::OutOfChart(_)) => {}
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn psi_rejects_orthogonal_complement_point() {
        let chart = ChartBall::standard(2, 1, 1.0).unwrap();
        let e2 =
            ProjectorMatrix::new(Matrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]), 1).unwrap();
        assert!(matches!(psi(&e2, &chart), Err(Error::OutOfChart(_))));
    }

    #[test]
    fn moved_chart_is_conjugated_standard_chart() {
        let q = random_orthogonal(6, 4);
        let chart = ChartBall::moved(q.clone(), 2, 1.0).unwrap();
        let std_chart = ChartBall::standard(6, 2, 1.0).unwrap();
        for seed in 0..5 {
            let b = random_matrix(4, 2, 200 + seed);
            let moved = phi(&b, &chart).unwrap();
            let plain = phi(&b, &std_chart).unwrap();
            let conj = &q * plain.matrix() * q.transpose();
            assert!((moved.matrix() - conj).norm() <= 1e-12);
        }
    }

    #[test]
    fn normal_coords_at_zero_and_against_exp() {
        let point = GrassmannPoint::random(6, 2, 5).unwrap();
        let uperp = orthogonal_complement(point.rep());
        let p0 = normal_coords(&point, &uperp, &Matrix::zeros(4, 2)).unwrap();
        assert!((p0.matrix() - from_onb(point.rep()).unwrap().matrix()).norm() <= 1e-12);

        let b = random_matrix(4, 2, 6);
        let via_charts = normal_coords(&point, &uperp, &b).unwrap();
        let lift = HorizontalTangent::new(point.clone(), &uperp * &b).unwrap();
        let via_exp = grassmann::exp(&lift, 1.0).unwrap();
        let q = GrassmannPoint::new(to_onb(&via_charts).unwrap()).unwrap();
        assert!(distance(&q, &via_exp) <= 1e-10);
    }

    #[test]
    fn normal_coords_invert_through_the_log() {
        let point = GrassmannPoint::random(6, 2, 7).unwrap();
        let uperp = orthogonal_complement(point.rep());
        let mut b = random_matrix(4, 2, 8);
        let smax = svd_compact(&b, SvdOrder::Descending).unwrap().s[0];
        b *= (FRAC_PI_2 - 0.2) / smax;
        let target = normal_coords(&point, &uperp, &b).unwrap();
        let y = to_onb(&target).unwrap();
        let (log, _) = grassmann::log_extended(&point, &y).unwrap();
        // Recover B through the fixed completion gauge.
        let recovered = uperp.transpose() * log.matrix();
        assert!((recovered - &b).norm() <= 1e-9 * b.norm().max(1.0));
    }
}
