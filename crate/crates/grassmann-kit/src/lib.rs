//! # grassmann-kit
//!
//! A numerical toolbox for the Grassmann manifold Gr(n,p) of p-dimensional
//! subspaces of ℝⁿ: exponential and logarithm maps, geodesics, parallel
//! transport, sectional curvature, Jacobi fields, coordinate charts, and
//! cut-/conjugate-locus handling.
//!
//! Everything is implemented twice where the geometry allows it:
//!
//! * [`grassmann`] holds the production O(np²) routines on orthonormal
//!   Stiefel representatives (the "ONB perspective");
//! * [`projector`] holds the n×n orthogonal-projector formulas built on
//!   matrix exponentials and logarithms, which serve small-n users and act
//!   as independent oracles for the thin routines.
//!
//! [`stiefel`] supplies the representative layer, [`matcore`] the dense
//! kernels (SVD/QR with fixed conventions, `expm`/`logm`, and factorization
//! derivatives), [`jacobi`] the derivative of the exponential map and
//! Jacobi fields, and [`charts`] affine and normal coordinates.
//!
//! All values are immutable after construction and all operations are pure
//! functions, so everything is `Send + Sync` and safe to use from parallel
//! code; batch drivers (see [`experiment`]) fan out over rayon without any
//! shared mutable state.
//!
//! ```
//! use grassmann_kit::grassmann::{self, GrassmannPoint, HorizontalTangent};
//!
//! let p = GrassmannPoint::random(8, 3, 42)?;
//! let delta = HorizontalTangent::random(p.clone(), 7);
//! let delta = delta.scaled(0.9 / delta.norm());
//! let q = grassmann::exp(&delta, 1.0)?;
//! let (back, _) = grassmann::log_extended(&p, q.rep())?;
//! assert!((back.matrix() - delta.matrix()).norm() < 1e-9);
//! # Ok::<(), grassmann_kit::Error>(())
//! ```

pub mod charts;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod grassmann;
pub mod io;
pub mod jacobi;
pub mod matcore;
pub mod projector;
pub mod selftest;
pub mod stiefel;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use matcore::Matrix;
