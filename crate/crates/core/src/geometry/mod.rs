//! Points, symmetric convex bodies and the exact containment primitives
//! built on them.

mod body;
mod covering;
mod fit;
pub(crate) mod linalg;
mod lp;
mod meb;
mod point;

pub use body::{BodySpec, ConvexBody, Ellipsoid, Facet, SymPolytope};
pub use covering::{annulus_cover, covering_t, CoveringEstimate};
pub use fit::{fits_in_k_translates, fits_in_translate, pair_fits, FIT_EXACT_CAP};
pub use meb::{meb, meb_seeded, Ball, MEB_DEFAULT_SEED};
pub use point::{Point, PointSet};

pub(crate) use point::common_dim;

/// Absolute slack on every body's defining inequalities; bodies are closed.
pub const TOL: f64 = 1e-9;

/// `contains(body, center, p)`: whether `p` lies in `center + body`.
pub fn contains(body: &ConvexBody, center: &Point, p: &Point) -> crate::Result<bool> {
    body.contains(center, p)
}
