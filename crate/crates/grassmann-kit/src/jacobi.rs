//! Derivative of the Grassmann exponential and Jacobi fields vanishing at
//! a point.
//!
//! Three routes compute `d(Exp_P)_Δ(Δ̃)`:
//!
//! * [`dexp_svd`] differentiates the thin-SVD geodesic formula through the
//!   SVD derivative; it needs mutually distinct, non-zero singular values;
//! * [`dexp_qr`] differentiates through the QR decomposition and a 4p×4p
//!   block exponential, allowing repeated singular values at O(np²) cost;
//! * [`dexp_projector`] works on n×n projector tangents with a 2n×2n block
//!   exponential and has no singular-value restriction at all.
//!
//! [`dexp`] dispatches: QR first, projector as the rank-deficient fallback.
//! A Jacobi field with `J(0) = 0` and `D_t J(0) = Δ₂` along the geodesic
//! `γ(t) = Exp_P(tΔ₁)` is then `J(t) = d(Exp_P)_{tΔ₁}(tΔ₂)`.

use crate::error::{Error, Result};
use crate::grassmann::{self, GrassmannPoint, HorizontalTangent};
use crate::matcore::{
    dqr_with_factors, dsvd_with_factors, expm_with_derivative, qr_thin, svd_compact, Matrix,
    SvdOrder,
};
use crate::projector::{exp_projector, omega_of, ProjectorTangent};
use crate::stiefel::StiefelMatrix;

/// Value of the differential of the exponential: a tangent vector at the
/// geodesic endpoint, held as a horizontal lift at `endpoint.rep()`.
#[derive(Debug, Clone)]
pub struct DexpValue {
    endpoint: GrassmannPoint,
    lift: Matrix,
}

impl DexpValue {
    pub fn endpoint(&self) -> &GrassmannPoint {
        &self.endpoint
    }

    /// Horizontal lift at `endpoint.rep()`.
    pub fn lift(&self) -> &Matrix {
        &self.lift
    }

    /// Ambient symmetric form `HYᵀ + YHᵀ`, independent of the endpoint
    /// representative the route produced.
    pub fn ambient(&self) -> Matrix {
        let y = self.endpoint.rep().as_matrix();
        &self.lift * y.transpose() + y * self.lift.transpose()
    }

    /// Re-lifts the value at another representative of the same endpoint.
    pub fn lift_at(&self, rep: &StiefelMatrix) -> Matrix {
        let y = self.endpoint.rep().as_matrix();
        &self.lift * (y.transpose() * rep.as_matrix())
            + y * (self.lift.transpose() * rep.as_matrix())
    }

    pub fn norm(&self) -> f64 {
        self.lift.norm()
    }

    fn from_gamma(y: Matrix, gamma: &Matrix) -> Result<Self> {
        // Γ ∈ T_Y St is generally not horizontal; project.
        let lift = gamma - &y * (y.transpose() * gamma);
        let endpoint = GrassmannPoint::new(StiefelMatrix::new(y)?)?;
        Ok(Self { endpoint, lift })
    }
}

fn check_pair(delta: &HorizontalTangent, dtilde: &HorizontalTangent) -> Result<()> {
    if (delta.base().rep().as_matrix() - dtilde.base().rep().as_matrix()).norm() > 1e-10 {
        return Err(Error::BaseMismatch);
    }
    Ok(())
}

/// SVD route (requires mutually distinct, non-zero singular values of the
/// lift of `delta`).
///
/// With `Δ^hor = QΣVᵀ` and factor derivatives `(Q̇, Σ̇, V̇)` in the
/// direction `Δ̃^hor`, the endpoint representative and the curve derivative
/// are
///
/// ```text
/// Y = UVcos(Σ) + Qsin(Σ),
/// Γ = UV̇cos(Σ) − UVsin(Σ)Σ̇ + Q̇sin(Σ) + Qcos(Σ)Σ̇,
/// ```
///
/// and the value is `ΓYᵀ + YΓᵀ`, lifted at `Y` as `(I − YYᵀ)Γ`.
pub fn dexp_svd(delta: &HorizontalTangent, dtilde: &HorizontalTangent) -> Result<DexpValue> {
    check_pair(delta, dtilde)?;
    let u = delta.base().rep().as_matrix();
    let f = svd_compact(delta.matrix(), SvdOrder::Descending)?;
    let (qdot, sdot, vdot) = dsvd_with_factors(&f, dtilde.matrix())?;

    let p = f.s.len();
    let cos = Matrix::from_fn(p, p, |i, j| if i == j { f.s[i].cos() } else { 0.0 });
    let sin = Matrix::from_fn(p, p, |i, j| if i == j { f.s[i].sin() } else { 0.0 });
    let sdot_d = Matrix::from_diagonal(&sdot);

    let y = u * &f.v * &cos + &f.u * &sin;
    let gamma = u * &vdot * &cos - u * &f.v * &sin * &sdot_d + &qdot * &sin + &f.u * &cos * &sdot_d;
    DexpValue::from_gamma(y, &gamma)
}

/// QR route (requires full column rank; repeated singular values are fine).
///
/// Writes the geodesic through the QR factors `Δ^hor = QR` and evaluates
/// the derivative of the 2p×2p block exponential by one 4p×4p exponential,
/// for a total cost of O(np²).
pub fn dexp_qr(delta: &HorizontalTangent, dtilde: &HorizontalTangent) -> Result<DexpValue> {
    check_pair(delta, dtilde)?;
    let u = delta.base().rep().as_matrix();
    let p = delta.base().p();
    let f = qr_thin(delta.matrix())?;
    let (qdot, rdot) = dqr_with_factors(&f.q, &f.r, dtilde.matrix())?;

    let mut m = Matrix::zeros(2 * p, 2 * p);
    m.view_mut((0, p), (p, p)).copy_from(&(-f.r.transpose()));
    m.view_mut((p, 0), (p, p)).copy_from(&f.r);
    let mut mdot = Matrix::zeros(2 * p, 2 * p);
    mdot.view_mut((0, p), (p, p))
        .copy_from(&(-rdot.transpose()));
    mdot.view_mut((p, 0), (p, p)).copy_from(&rdot);

    let (e, d) = expm_with_derivative(&m, &mdot)?;
    let e11 = e.view((0, 0), (p, p));
    let e21 = e.view((p, 0), (p, p));
    let d11 = d.view((0, 0), (p, p));
    let d21 = d.view((p, 0), (p, p));

    let y = u * e11 + &f.q * e21;
    let gamma = &qdot * e21 + u * d11 + &f.q * d21;
    DexpValue::from_gamma(y, &gamma)
}

/// Projector route, with no restriction on the singular values.
///
/// With generators `Ω = [Δ,P]` and `Ω̃ = [Δ̃,P]`, one 2n×2n block
/// exponential yields `Q = e^Ω` and `ΨQ = d/dt|₀ e^{Ω+tΩ̃}`; the value is
/// `ΨQ·P·Qᵀ + Q·P·(ΨQ)ᵀ` at the endpoint `QPQᵀ`.
pub fn dexp_projector(
    delta: &ProjectorTangent,
    dtilde: &ProjectorTangent,
) -> Result<ProjectorTangent> {
    if (delta.base().matrix() - dtilde.base().matrix()).norm() > 1e-9 {
        return Err(Error::BaseMismatch);
    }
    let p = delta.base();
    let omega = omega_of(delta);
    let omega_tilde = omega_of(dtilde);
    let (q, psi_q) = expm_with_derivative(omega.matrix(), omega_tilde.matrix())?;
    let qp = &q * p.matrix();
    let value = &psi_q * p.matrix() * q.transpose() + &qp * psi_q.transpose();
    let endpoint = exp_projector(p, delta, 1.0)?;
    ProjectorTangent::new(endpoint, value)
}

/// Differential of the exponential with automatic route dispatch: the QR
/// route by default, falling back to the projector route when the lift is
/// rank-deficient (including `Δ = 0`, where the differential is the
/// identity map).
pub fn dexp(delta: &HorizontalTangent, dtilde: &HorizontalTangent) -> Result<DexpValue> {
    match dexp_qr(delta, dtilde) {
        Ok(v) => Ok(v),
        Err(Error::RankDeficient) => dexp_via_projector(delta, dtilde),
        Err(e) => Err(e),
    }
}

fn dexp_via_projector(delta: &HorizontalTangent, dtilde: &HorizontalTangent) -> Result<DexpValue> {
    let base_proj = crate::projector::from_onb(delta.base().rep())?;
    let d1 = ProjectorTangent::new(base_proj.clone(), grassmann::ambient(delta))?;
    let d2 = ProjectorTangent::new(base_proj, grassmann::ambient(dtilde))?;
    let value = dexp_projector(&d1, &d2)?;
    let endpoint = grassmann::exp(delta, 1.0)?;
    let lift = value.matrix() * endpoint.rep().as_matrix();
    Ok(DexpValue { endpoint, lift })
}

/// The differential `d(Exp_P)_Δ` as a reusable map. At `Δ = 0` it is the
/// identity on the tangent space.
#[derive(Debug, Clone)]
pub struct ExpDifferential {
    delta: HorizontalTangent,
}

impl ExpDifferential {
    pub fn at(delta: HorizontalTangent) -> Self {
        Self { delta }
    }

    pub fn base_tangent(&self) -> &HorizontalTangent {
        &self.delta
    }

    pub fn apply(&self, dtilde: &HorizontalTangent) -> Result<DexpValue> {
        dexp(&self.delta, dtilde)
    }
}

/// Jacobi field along `γ(t) = Exp_P(tΔ₁)` with `J(0) = 0` and
/// `D_t J(0) = Δ₂`, evaluated as `J(t) = d(Exp_P)_{tΔ₁}(tΔ₂)`.
///
/// Dispatch: SVD route when the singular values of the lift of `Δ₁` are
/// separated, then QR, then the projector route.
pub fn jacobi_field(
    delta1: &HorizontalTangent,
    delta2: &HorizontalTangent,
    t: f64,
) -> Result<DexpValue> {
    check_pair(delta1, delta2)?;
    if t == 0.0 {
        return Ok(DexpValue {
            endpoint: delta1.base().clone(),
            lift: Matrix::zeros(delta1.base().n(), delta1.base().p()),
        });
    }
    let d1 = delta1.scaled(t);
    let d2 = delta2.scaled(t);
    match dexp_svd(&d1, &d2) {
        Ok(v) => Ok(v),
        Err(Error::IllPosedSingularValues { .. }) => dexp(&d1, &d2),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::{distance, exp, geodesic_velocity, parallel_transport};
    use crate::matcore::frob_inner;
    use crate::projector::from_onb;
    use crate::testutil::central_diff;

    fn setup(
        n: usize,
        p: usize,
        seed: u64,
    ) -> (GrassmannPoint, HorizontalTangent, HorizontalTangent) {
        let point = GrassmannPoint::random(n, p, seed).unwrap();
        let d1 = HorizontalTangent::random(point.clone(), seed + 100);
        let d2 = HorizontalTangent::random(point.clone(), seed + 200);
        (point, d1, d2)
    }

    fn with_sigma(point: &GrassmannPoint, sigma: &[f64], seed: u64) -> HorizontalTangent {
        let raw = HorizontalTangent::random(point.clone(), seed);
        let f = svd_compact(raw.matrix(), SvdOrder::Descending).unwrap();
        let k = sigma.len();
        let s = Matrix::from_fn(k, k, |i, j| if i == j { sigma[i] } else { 0.0 });
        let h = f.u.columns(0, k) * s * f.v.columns(0, k).transpose();
        HorizontalTangent::new(point.clone(), h).unwrap()
    }

    /// Ambient finite-difference oracle: central differences of the
    /// projector curve t ↦ Exp_P(Δ + tΔ̃) as n×n matrices.
    fn fd_ambient(delta: &HorizontalTangent, dtilde: &HorizontalTangent, h: f64) -> Matrix {
        central_diff(
            |t| {
                let d = HorizontalTangent::new(
                    delta.base().clone(),
                    delta.matrix() + dtilde.matrix() * t,
                )
                .unwrap();
                let y = exp(&d, 1.0).unwrap();
                let ym = y.rep().as_matrix().clone();
                &ym * ym.transpose()
            },
            h,
        )
    }

    #[test]
    fn zero_direction_maps_to_zero() {
        let (point, d1, _) = setup(6, 2, 1);
        let zero = HorizontalTangent::new(point, Matrix::zeros(6, 2)).unwrap();
        for v in [dexp_svd(&d1, &zero).unwrap(), dexp_qr(&d1, &zero).unwrap()] {
            assert!(v.norm() <= 1e-12);
        }
    }

    #[test]
    fn radial_direction_gives_endpoint_velocity() {
        let (_, d1, _) = setup(7, 3, 2);
        let v = dexp_svd(&d1, &d1).unwrap();
        let vel = geodesic_velocity(&d1, 1.0).unwrap();
        let relift = v.lift_at(vel.base().rep());
        assert!((relift - vel.matrix()).norm() <= 1e-9 * d1.norm().max(1.0));
    }

    #[test]
    fn svd_route_matches_finite_differences() {
        for seed in 0..4 {
            let (_, d1, d2) = setup(6, 2, 10 + seed);
            let f = svd_compact(d1.matrix(), SvdOrder::Descending).unwrap();
            if f.s[0] - f.s[1] < 0.05 || f.s[1] < 0.05 {
                continue;
            }
            let v = dexp_svd(&d1, &d2).unwrap();
            let fd = fd_ambient(&d1, &d2, 1e-5);
            assert!((v.ambient() - &fd).norm() <= 1e-6 * fd.norm().max(1.0));
        }
    }

    #[test]
    fn qr_route_matches_finite_differences_with_repeated_sigma() {
        let point = GrassmannPoint::random(7, 3, 20).unwrap();
        let d1 = with_sigma(&point, &[0.8, 0.8, 0.3], 21);
        let d2 = HorizontalTangent::random(point, 22);
        let v = dexp_qr(&d1, &d2).unwrap();
        let fd = fd_ambient(&d1, &d2, 1e-5);
        assert!((v.ambient() - &fd).norm() <= 1e-6 * fd.norm().max(1.0));
    }

    #[test]
    fn projector_route_matches_finite_differences_with_zero_sigma() {
        let point = GrassmannPoint::random(6, 2, 30).unwrap();
        let d1 = with_sigma(&point, &[0.9, 0.0], 31);
        let d2 = HorizontalTangent::random(point.clone(), 32);
        let base = from_onb(point.rep()).unwrap();
        let p1 = ProjectorTangent::new(base.clone(), grassmann::ambient(&d1)).unwrap();
        let p2 = ProjectorTangent::new(base, grassmann::ambient(&d2)).unwrap();
        let v = dexp_projector(&p1, &p2).unwrap();
        let fd = fd_ambient(&d1, &d2, 1e-5);
        assert!((v.matrix() - &fd).norm() <= 1e-6 * fd.norm().max(1.0));
    }

    #[test]
    fn routes_agree_pairwise() {
        let (_, d1, d2) = setup(6, 2, 40);
        let svd_v = dexp_svd(&d1, &d2).unwrap().ambient();
        let qr_v = dexp_qr(&d1, &d2).unwrap().ambient();
        let base = from_onb(d1.base().rep()).unwrap();
        let p1 = ProjectorTangent::new(base.clone(), grassmann::ambient(&d1)).unwrap();
        let p2 = ProjectorTangent::new(base, grassmann::ambient(&d2)).unwrap();
        let proj_v = dexp_projector(&p1, &p2).unwrap();
        let scale = svd_v.norm().max(1.0);
        assert!((&svd_v - &qr_v).norm() <= 1e-8 * scale);
        assert!((&svd_v - proj_v.matrix()).norm() <= 1e-8 * scale);
    }

    #[test]
    fn identity_at_zero_base_tangent() {
        let (point, _, d2) = setup(6, 2, 50);
        let zero = HorizontalTangent::new(point.clone(), Matrix::zeros(6, 2)).unwrap();
        // Rank-deficient, so the dispatcher must take the projector route.
        let v = dexp(&zero, &d2).unwrap();
        assert!(distance(v.endpoint(), &point) <= 1e-12);
        let relift = v.lift_at(point.rep());
        assert!((relift - d2.matrix()).norm() <= 1e-12 * d2.norm().max(1.0));
    }

    #[test]
    fn linear_in_the_direction() {
        let (point, d1, d2) = setup(6, 2, 60);
        let d3 = HorizontalTangent::random(point.clone(), 61);
        let combo =
            HorizontalTangent::new(point.clone(), d2.matrix() * 0.3 - d3.matrix() * 1.7).unwrap();
        for route in [dexp_svd, dexp_qr] {
            let v_combo = route(&d1, &combo).unwrap().ambient();
            let v_sum =
                route(&d1, &d2).unwrap().ambient() * 0.3 - route(&d1, &d3).unwrap().ambient() * 1.7;
            assert!((v_combo - v_sum).norm() <= 1e-10 * d1.norm().max(1.0));
        }
        let base = from_onb(point.rep()).unwrap();
        let lift = |d: &HorizontalTangent| {
            ProjectorTangent::new(base.clone(), grassmann::ambient(d)).unwrap()
        };
        let v_combo = dexp_projector(&lift(&d1), &lift(&combo)).unwrap();
        let v_sum = dexp_projector(&lift(&d1), &lift(&d2)).unwrap().matrix() * 0.3
            - dexp_projector(&lift(&d1), &lift(&d3)).unwrap().matrix() * 1.7;
        assert!((v_combo.matrix() - v_sum).norm() <= 1e-10 * d1.norm().max(1.0));
    }

    #[test]
    fn radial_inner_products_are_preserved() {
        // Gauss-lemma check along the radial direction: the differential
        // preserves inner products with the velocity.
        let (_, d1, _) = setup(7, 3, 70);
        for c in [0.5, -1.25] {
            let scaled = d1.scaled(c);
            let v_radial = dexp_qr(&d1, &d1).unwrap();
            let v_scaled = dexp_qr(&d1, &scaled).unwrap();
            let lhs = frob_inner(v_radial.lift(), v_scaled.lift());
            let rhs = frob_inner(d1.matrix(), scaled.matrix());
            assert!((lhs - rhs).abs() <= 1e-8 * rhs.abs().max(1.0));
        }
    }

    #[test]
    fn jacobi_field_vanishes_at_zero_exactly() {
        let (_, d1, d2) = setup(6, 2, 80);
        let j = jacobi_field(&d1, &d2, 0.0).unwrap();
        assert_eq!(j.norm(), 0.0);
    }

    #[test]
    fn jacobi_field_is_tangent_at_the_geodesic_point() {
        let (_, d1, d2) = setup(7, 3, 81);
        let t = 0.9;
        let j = jacobi_field(&d1, &d2, t).unwrap();
        let on_curve = exp(&d1, t).unwrap();
        assert!(distance(j.endpoint(), &on_curve) <= 1e-10);
        // Lift is horizontal at the endpoint representative.
        let defect = (j.endpoint().rep().as_matrix().transpose() * j.lift()).norm();
        assert!(defect <= 1e-10 * j.norm().max(1.0));
    }

    #[test]
    fn radial_jacobi_field_is_scaled_velocity() {
        let (_, d1, _) = setup(6, 2, 82);
        let t = 0.7;
        let j = jacobi_field(&d1, &d1, t).unwrap();
        let vel = geodesic_velocity(&d1, t).unwrap();
        let relift = j.lift_at(vel.base().rep());
        assert!((relift - vel.matrix() * t).norm() <= 1e-9 * d1.norm().max(1.0));
    }

    #[test]
    fn jacobi_field_short_time_limit_is_transported_direction() {
        let (_, d1, d2) = setup(6, 2, 83);
        let t = 1e-4;
        let j = jacobi_field(&d1, &d2, t).unwrap();
        let transported = parallel_transport(&d1, &d2, t).unwrap();
        let relift = j.lift_at(transported.base().rep()) / t;
        assert!((relift - transported.matrix()).norm() <= 1e-5 * d2.norm().max(1.0));
    }

    #[test]
    fn conjugate_witness_annihilates_the_field_at_time_one() {
        // Two right angles between P and F: rotating the π/2 block of the
        // log's SVD is a variation through geodesics that all end at F, so
        // the associated Jacobi field vanishes there.
        use crate::grassmann::cut_solutions;
        use std::f64::consts::FRAC_PI_2;
        let point = GrassmannPoint::random(6, 2, 84).unwrap();
        let d = with_sigma(&point, &[FRAC_PI_2, FRAC_PI_2], 85);
        let f = exp(&d, 1.0).unwrap();
        let fam = cut_solutions(&point, &f).unwrap();
        assert_eq!(fam.multiplicity(), 2);
        let d1 = fam.base().clone();
        // Variation direction: materialize is linear in W, and
        // (rot(h) − rot(−h)) / (2 sin h) is exactly the rotation generator.
        let h = 0.5f64;
        let rot = |a: f64| Matrix::from_row_slice(2, 2, &[a.cos(), -a.sin(), a.sin(), a.cos()]);
        let d2 = HorizontalTangent::new(
            point.clone(),
            (fam.materialize(&rot(h)).unwrap().matrix()
                - fam.materialize(&rot(-h)).unwrap().matrix())
                / (2.0 * h.sin()),
        )
        .unwrap();
        let j = jacobi_field(&d1, &d2, 1.0).unwrap();
        assert!(j.norm() <= 1e-8, "‖J(1)‖ = {}", j.norm());
        // The same direction at interior times is a genuine field.
        let mid = jacobi_field(&d1, &d2, 0.5).unwrap();
        assert!(mid.norm() > 1e-2);
    }

    #[test]
    fn exp_differential_wrapper_dispatches() {
        let (_, d1, d2) = setup(6, 2, 86);
        let map = ExpDifferential::at(d1.clone());
        let v = map.apply(&d2).unwrap();
        let direct = dexp_qr(&d1, &d2).unwrap();
        assert!((v.ambient() - direct.ambient()).norm() <= 1e-12);
    }
}
