//! Parallel transport along geodesics: an isometry between tangent spaces
//! under which the geodesic's own velocity is invariant.
//!
//! Run with `cargo run --example parallel_transport`.

use grassmann_kit::grassmann::{
    geodesic_velocity, metric, parallel_transport, GrassmannPoint, HorizontalTangent,
};
use grassmann_kit::Result;

fn main() -> Result<()> {
    let base = GrassmannPoint::random(10, 3, 21)?;
    let gamma = HorizontalTangent::random(base.clone(), 22);
    let d1 = HorizontalTangent::random(base.clone(), 23);
    let d2 = HorizontalTangent::random(base.clone(), 24);

    println!("transport along the geodesic with direction Γ, t ∈ [0, 2]:");
    let g12 = metric(&d1, &d2)?;
    for t in [0.0, 0.5, 1.0, 2.0] {
        let m1 = parallel_transport(&gamma, &d1, t)?;
        let m2 = parallel_transport(&gamma, &d2, t)?;
        let drift = (metric(&m1, &m2)? - g12).abs();
        // The transported vectors are horizontal at the moved representative.
        let defect = (m1.base().rep().as_matrix().transpose() * m1.matrix()).norm();
        println!(
            "  t = {t:3.1}  |⟨PT Δ₁, PT Δ₂⟩ − ⟨Δ₁, Δ₂⟩| = {drift:.2e}  horizontality {defect:.2e}"
        );
    }

    // Geodesics are self-parallel: transporting the velocity gives the
    // velocity at the later time.
    let t = 1.3;
    let moved = parallel_transport(&gamma, &gamma, t)?;
    let velocity = geodesic_velocity(&gamma, t)?;
    println!(
        "self-parallel check at t = {t}: ‖PT(γ̇(0)) − γ̇(t)‖ = {:.2e}",
        (moved.matrix() - velocity.matrix()).norm()
    );
    Ok(())
}
