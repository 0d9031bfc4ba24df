//! Geodesics on Gr(n,p): the exponential map, principal angles, and the
//! geodesic distance.
//!
//! Run with `cargo run --example geodesics`.

use grassmann_kit::grassmann::{
    distance, exp, geodesic_velocity, principal_angles, GrassmannPoint, HorizontalTangent,
};
use grassmann_kit::Result;

fn main() -> Result<()> {
    let (n, p) = (8, 3);
    let base = GrassmannPoint::random(n, p, 42)?;
    let delta = HorizontalTangent::random(base.clone(), 7);
    let delta = delta.scaled(1.0 / delta.norm());
    println!("Gr({n},{p}), unit-speed geodesic from a random subspace");

    // Walk along the geodesic; distance to the start grows linearly until
    // the first principal angle reaches π/2.
    for t in [0.0, 0.25, 0.5, 1.0, 1.5] {
        let point = exp(&delta, t)?;
        let d = distance(&base, &point);
        let speed = geodesic_velocity(&delta, t)?.norm();
        println!("  t = {t:4.2}  dist(P, γ(t)) = {d:.12}  ‖γ̇(t)‖ = {speed:.12}");
    }

    // Principal angles between the endpoints of two different geodesics.
    let other = HorizontalTangent::random(base.clone(), 8);
    let other = other.scaled(0.9 / other.norm());
    let f1 = exp(&delta, 1.0)?;
    let f2 = exp(&other, 1.0)?;
    let angles = principal_angles(&f1, &f2)?;
    println!("angles between the two endpoints: {:?}", angles.as_slice());
    println!(
        "‖angles‖₂ = {:.12} = dist = {:.12}",
        angles.two_norm(),
        distance(&f1, &f2)
    );
    Ok(())
}
