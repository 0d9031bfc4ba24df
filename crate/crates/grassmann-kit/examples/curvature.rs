//! Sectional curvature: the [0, 2] range, the constant-curvature cases,
//! and the conjugate-point predicate from principal angles.
//!
//! Run with `cargo run --example curvature`.

use grassmann_kit::grassmann::{
    exp, is_conjugate, sectional_curvature, GrassmannPoint, HorizontalTangent,
};
use grassmann_kit::matcore::{svd_compact, Matrix, SvdOrder};
use grassmann_kit::stiefel::orthogonal_complement;
use grassmann_kit::Result;

fn main() -> Result<()> {
    // Projective space Gr(4,1): constant curvature 1.
    let line = GrassmannPoint::random(4, 1, 1)?;
    let k = sectional_curvature(
        &HorizontalTangent::random(line.clone(), 2),
        &HorizontalTangent::random(line, 3),
    )?;
    println!("Gr(4,1) random plane: K = {k:.15}");

    // The extremal plane in Gr(4,2) attains the upper bound 2.
    let plane = GrassmannPoint::random(4, 2, 4)?;
    let uperp = orthogonal_complement(plane.rep());
    let b1 = Matrix::from_row_slice(2, 2, &[1.0, 1.0, -1.0, 1.0]);
    let b2 = Matrix::from_row_slice(2, 2, &[-1.0, 1.0, -1.0, -1.0]);
    let k = sectional_curvature(
        &HorizontalTangent::new(plane.clone(), &uperp * &b1)?,
        &HorizontalTangent::new(plane.clone(), &uperp * &b2)?,
    )?;
    println!("Gr(4,2) extremal plane: K = {k:.15}");

    // Commuting tangents span a flat plane.
    let k = sectional_curvature(
        &HorizontalTangent::new(
            plane.clone(),
            &uperp * Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]),
        )?,
        &HorizontalTangent::new(
            plane,
            &uperp * Matrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]),
        )?,
    )?;
    println!("Gr(4,2) commuting pair: K = {k:.2e}");

    // Curvature distribution over random planes in Gr(8,3).
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for seed in 0..2000 {
        let p = GrassmannPoint::random(8, 3, seed)?;
        let k = sectional_curvature(
            &HorizontalTangent::random(p.clone(), seed + 1),
            &HorizontalTangent::random(p, seed + 2),
        )?;
        lo = lo.min(k);
        hi = hi.max(k);
    }
    println!("Gr(8,3), 2000 random planes: K ∈ [{lo:.4}, {hi:.4}] ⊂ [0, 2]");

    // Conjugate points are flagged by repeated principal angles.
    let p = GrassmannPoint::random(5, 2, 9)?;
    let raw = HorizontalTangent::random(p.clone(), 10);
    let f = svd_compact(raw.matrix(), SvdOrder::Descending)?;
    for sigma in [[0.3, 0.3], [0.9, 0.3]] {
        let s = Matrix::from_fn(2, 2, |i, j| if i == j { sigma[i] } else { 0.0 });
        let d = HorizontalTangent::new(
            p.clone(),
            f.u.columns(0, 2) * s * f.v.columns(0, 2).transpose(),
        )?;
        let endpoint = exp(&d, 1.0)?;
        println!(
            "angles {sigma:?}: conjugate = {:?}",
            is_conjugate(&p, &endpoint, 1e-8)?
        );
    }
    Ok(())
}
