//! Cut locus handling: cut times, membership, and the full family of
//! minimizing geodesics to a cut point.
//!
//! Run with `cargo run --example cut_locus`.

use grassmann_kit::grassmann::{
    cut_solutions, cut_time, distance, exp, in_cut_locus, GrassmannPoint, HorizontalTangent,
    TAU_CUT,
};
use grassmann_kit::matcore::{svd_compact, Matrix, SvdOrder};
use grassmann_kit::Result;
use std::f64::consts::FRAC_PI_2;

fn main() -> Result<()> {
    let base = GrassmannPoint::random(6, 2, 11)?;

    // Scale a random tangent so that both principal-angle rates are π/2:
    // the geodesic endpoint then sits "maximally deep" in the cut locus.
    let raw = HorizontalTangent::random(base.clone(), 12);
    let f = svd_compact(raw.matrix(), SvdOrder::Descending)?;
    let both_right = {
        let s = Matrix::from_fn(2, 2, |i, j| if i == j { FRAC_PI_2 } else { 0.0 });
        HorizontalTangent::new(
            base.clone(),
            f.u.columns(0, 2) * s * f.v.columns(0, 2).transpose(),
        )?
    };
    println!(
        "cut time of the scaled tangent: {:.6}",
        cut_time(&both_right)
    );

    let target = exp(&both_right, 1.0)?;
    println!(
        "endpoint in cut locus: {}",
        in_cut_locus(&base, &target, TAU_CUT)?
    );

    // Every W ∈ O(2) yields a different minimizing geodesic to the same
    // endpoint, all of the same length.
    let family = cut_solutions(&base, &target)?;
    println!("π/2-block size r = {}", family.multiplicity());
    let dist = distance(&base, &target);
    for (name, w) in [
        ("identity", Matrix::identity(2, 2)),
        ("swap", Matrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])),
        (
            "rotation(1 rad)",
            Matrix::from_row_slice(2, 2, &[1f64.cos(), -1f64.sin(), 1f64.sin(), 1f64.cos()]),
        ),
    ] {
        let dw = family.materialize(&w)?;
        let endpoint_err = distance(&exp(&dw, 1.0)?, &target);
        let midpoint = exp(&dw, 0.5)?;
        println!(
            "  W = {name:15} length = {:.9} endpoint error = {endpoint_err:.1e} midpoint dist from base = {:.6}",
            dw.norm(),
            distance(&base, &midpoint),
        );
    }
    println!("minimal length (= distance): {dist:.9}");
    Ok(())
}
