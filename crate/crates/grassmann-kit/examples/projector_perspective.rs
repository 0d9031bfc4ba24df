//! The projector perspective: the same geometry on n×n projector matrices,
//! used as an independent cross-check of the thin ONB routines, plus the
//! geodesic point symmetry that is unique to this picture.
//!
//! Run with `cargo run --example projector_perspective`.

use grassmann_kit::grassmann::{self, distance, GrassmannPoint, HorizontalTangent};
use grassmann_kit::projector::{
    exp_oracle_on, exp_projector, from_onb, log_projector, symmetry_at, to_onb, ProjectorTangent,
};
use grassmann_kit::stiefel::orthogonal_complement;
use grassmann_kit::Result;

fn main() -> Result<()> {
    let point = GrassmannPoint::random(8, 3, 51)?;
    let delta = HorizontalTangent::random(point.clone(), 52);
    let delta = delta.scaled(1.0 / delta.norm());

    // Exponential three ways: thin SVD formula, projector conjugation, and
    // the orthogonal-group reference through a full n×n matrix exponential.
    let onb = grassmann::exp(&delta, 1.0)?;
    let p = from_onb(point.rep())?;
    let amb = ProjectorTangent::new(p.clone(), grassmann::ambient(&delta))?;
    let proj = exp_projector(&p, &amb, 1.0)?;
    let uperp = orthogonal_complement(point.rep());
    let oracle = exp_oracle_on(
        point.rep(),
        &uperp,
        &(uperp.transpose() * delta.matrix()),
        1.0,
    )?;
    println!(
        "exp agreement: onb/projector {:.2e}, onb/O(n)-oracle {:.2e}",
        (from_onb(onb.rep())?.matrix() - proj.matrix()).norm(),
        distance(&onb, &oracle)
    );

    // The projector logarithm Ω = ½log((I−2F)(I−2P)) lifts to the ONB log.
    let back = log_projector(&p, &proj)?;
    let (onb_log, _) = grassmann::log_extended(&point, onb.rep())?;
    println!(
        "log agreement after lifting: {:.2e}",
        (back.matrix() * point.rep().as_matrix() - onb_log.matrix()).norm()
    );

    // The point symmetry σ_P = conjugation by 2P − I fixes P, negates its
    // tangent vectors, and is an isometry of the whole manifold.
    let sigma = symmetry_at(&p);
    let negated = sigma.apply_tangent(&amb)?;
    println!(
        "symmetry: ‖σ_P(P) − P‖ = {:.2e}, ‖dσ_P(Δ) + Δ‖ = {:.2e}",
        (sigma.apply(&p)?.matrix() - p.matrix()).norm(),
        (negated.matrix() + amb.matrix()).norm()
    );
    let f1 = GrassmannPoint::random(8, 3, 53)?;
    let f2 = GrassmannPoint::random(8, 3, 54)?;
    let d_before = distance(&f1, &f2);
    let d_after = distance(
        &GrassmannPoint::new(to_onb(&sigma.apply(&from_onb(f1.rep())?)?)?)?,
        &GrassmannPoint::new(to_onb(&sigma.apply(&from_onb(f2.rep())?)?)?)?,
    );
    println!(
        "isometry: |dist(σF₁, σF₂) − dist(F₁, F₂)| = {:.2e}",
        (d_after - d_before).abs()
    );
    Ok(())
}
