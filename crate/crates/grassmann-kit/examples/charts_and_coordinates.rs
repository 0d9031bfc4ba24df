//! Local parameterizations: the affine chart pair (φ, ψ) and normal
//! coordinates through the exponential map.
//!
//! Run with `cargo run --example charts_and_coordinates`.

use grassmann_kit::charts::{normal_coords, phi, psi, ChartBall};
use grassmann_kit::grassmann::{log_extended, GrassmannPoint};
use grassmann_kit::matcore::Matrix;
use grassmann_kit::projector::to_onb;
use grassmann_kit::stiefel::orthogonal_complement;
use grassmann_kit::Result;

fn main() -> Result<()> {
    // The affine chart around the canonical base point of Gr(5,2).
    let chart = ChartBall::standard(5, 2, 1.0)?;
    let b = Matrix::from_row_slice(3, 2, &[0.3, -0.1, 0.2, 0.4, -0.5, 0.1]);
    let projector = phi(&b, &chart)?;
    println!(
        "φ(B) is a rank-{} projector, trace {:.12}",
        projector.rank(),
        projector.matrix().trace()
    );
    let back = psi(&projector, &chart)?;
    println!("ψ(φ(B)) roundtrip error: {:.2e}", (back - &b).norm());

    // Points with a singular leading block live outside the chart.
    let outside = phi(
        &Matrix::from_row_slice(3, 2, &[0.0; 6]),
        &ChartBall::moved(
            Matrix::from_fn(5, 5, |i, j| if (i + 2) % 5 == j { 1.0 } else { 0.0 }),
            2,
            1.0,
        )?,
    )?;
    match psi(&outside, &chart) {
        Err(e) => println!("complement point rejected: {e}"),
        Ok(_) => unreachable!("the complement projector cannot be in the chart"),
    }

    // Normal coordinates: ρ(B) = Exp_P of the lifted block B, inverted by
    // the logarithm up to the completion gauge.
    let point = GrassmannPoint::random(5, 2, 5)?;
    let uperp = orthogonal_complement(point.rep());
    let rho = normal_coords(&point, &uperp, &b)?;
    let y = to_onb(&rho)?;
    let (log, _) = log_extended(&point, &y)?;
    let recovered = uperp.transpose() * log.matrix();
    println!(
        "normal-coordinate inverse error: {:.2e}",
        (recovered - &b).norm()
    );
    Ok(())
}
