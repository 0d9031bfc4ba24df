//! The derivative of the exponential map (three interchangeable routes)
//! and Jacobi fields vanishing at a point.
//!
//! Run with `cargo run --example differentials_and_jacobi`.

use grassmann_kit::grassmann::{self, cut_solutions, exp, GrassmannPoint, HorizontalTangent};
use grassmann_kit::jacobi::{dexp_projector, dexp_qr, dexp_svd, jacobi_field};
use grassmann_kit::matcore::{svd_compact, Matrix, SvdOrder};
use grassmann_kit::projector::{from_onb, ProjectorTangent};
use grassmann_kit::Result;
use std::f64::consts::FRAC_PI_2;

fn main() -> Result<()> {
    let base = GrassmannPoint::random(7, 2, 31)?;
    let delta = HorizontalTangent::random(base.clone(), 32);
    let dir = HorizontalTangent::random(base.clone(), 33);

    // Three routes to d(Exp_P)_Δ(Δ̃): SVD factors, QR factors, and the
    // projector-level block exponential. They agree on common ground.
    let v_svd = dexp_svd(&delta, &dir)?;
    let v_qr = dexp_qr(&delta, &dir)?;
    let p_mat = from_onb(base.rep())?;
    let v_proj = dexp_projector(
        &ProjectorTangent::new(p_mat.clone(), grassmann::ambient(&delta))?,
        &ProjectorTangent::new(p_mat, grassmann::ambient(&dir))?,
    )?;
    println!(
        "route agreement: svd/qr {:.2e}, qr/projector {:.2e}",
        (v_svd.ambient() - v_qr.ambient()).norm(),
        (v_qr.ambient() - v_proj.matrix()).norm()
    );

    // A Jacobi field J with J(0) = 0 and initial covariant derivative Δ̃;
    // its growth along the geodesic:
    for t in [0.0, 0.25, 0.5, 1.0] {
        let j = jacobi_field(&delta, &dir, t)?;
        println!("  ‖J({t:4.2})‖ = {:.6}", j.norm());
    }

    // Conjugate-point witness: if the base and the endpoint enclose two
    // right angles, rotating the π/2-block of the logarithm is a variation
    // through geodesics with both endpoints pinned, so its Jacobi field
    // vanishes at t = 1 without being identically zero.
    let raw = HorizontalTangent::random(base.clone(), 34);
    let f = svd_compact(raw.matrix(), SvdOrder::Descending)?;
    let s = Matrix::from_fn(2, 2, |i, j| if i == j { FRAC_PI_2 } else { 0.0 });
    let to_cut = HorizontalTangent::new(
        base.clone(),
        f.u.columns(0, 2) * s * f.v.columns(0, 2).transpose(),
    )?;
    let target = exp(&to_cut, 1.0)?;
    let family = cut_solutions(&base, &target)?;
    let rot = |a: f64| Matrix::from_row_slice(2, 2, &[a.cos(), -a.sin(), a.sin(), a.cos()]);
    let h = 0.5;
    let variation = HorizontalTangent::new(
        base.clone(),
        (family.materialize(&rot(h))?.matrix() - family.materialize(&rot(-h))?.matrix())
            / (2.0 * f64::sin(h)),
    )?;
    println!("conjugate witness along a double-right-angle geodesic:");
    for t in [0.5, 1.0] {
        let j = jacobi_field(family.base(), &variation, t)?;
        println!("  ‖J({t:3.1})‖ = {:.2e}", j.norm());
    }
    Ok(())
}
