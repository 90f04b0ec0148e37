//! Covering the annulus between a body `G` and its `(2 + slack)` homothet by
//! translates of `G`, measured with axis-aligned cubes in the body's own frame.

use serde::{Deserialize, Serialize};

use super::body::ConvexBody;
use super::point::Point;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoveringEstimate {
    pub kappa: u64,
    /// `kappa^d - 1`
    pub t: u64,
    pub slack: f64,
}

/// Circumscribing-cube half side of `body` and inscribed-cube half side, both origin-centred.
/// Ellipsoids are measured after normalising to the unit ball.
fn cube_half_sides(body: &ConvexBody, dim: usize) -> (f64, f64) {
    match body {
        ConvexBody::Ball { radius } => (*radius, radius / (dim as f64).sqrt()),
        ConvexBody::Ellipsoid(_) => (1.0, 1.0 / (dim as f64).sqrt()),
        ConvexBody::AxisBox { half_widths } => (
            half_widths.iter().cloned().fold(0.0, f64::max),
            half_widths.iter().cloned().fold(f64::INFINITY, f64::min),
        ),
        ConvexBody::SymPolytope(p) => {
            let outer = body.bounding_half_extents(dim).into_iter().fold(0.0, f64::max);
            // s·[-1,1]^d ⊂ {a·x <= b}  <=>  s·|a|_1 <= b
            let inner = p
                .facets()
                .iter()
                .map(|f| f.offset / f.normal.iter().map(|v| v.abs()).sum::<f64>())
                .fold(f64::INFINITY, f64::min);
            (outer, inner)
        }
    }
}

pub fn covering_t(body: &ConvexBody, dim: usize, slack: f64) -> Result<CoveringEstimate> {
    if !(slack > 0.0 && slack < 1.0) {
        return Err(Error::OutOfRange {
            name: "slack",
            value: slack,
        });
    }
    if dim == 0 {
        return Err(Error::OutOfRange { name: "dim", value: 0.0 });
    }
    body.check_dim(dim)?;
    let (outer, inner) = cube_half_sides(body, dim);
    if !(inner > 0.0 && outer.is_finite()) {
        return Err(Error::InvalidBody("degenerate body for covering".into()));
    }
    let ratio = (2.0 + slack) * outer / inner;
    let kappa = snap_ceil(ratio) as u64;
    let t = u32::try_from(dim)
        .ok()
        .and_then(|d| kappa.checked_pow(d))
        .ok_or_else(|| Error::Overflow(format!("kappa^d for kappa={kappa}, d={dim}")))?
        - 1;
    Ok(CoveringEstimate { kappa, t, slack })
}

fn snap_ceil(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

/// Explicit translate centres covering the annulus: the circumscribing cube
/// of the scaled body is cut into a `kappa^d` grid whose cells each fit in a
/// translate of the inscribed cube. For odd `kappa` the central cell lies
/// inside `G` and is dropped, leaving exactly `t` centres; for even `kappa`
/// all `kappa^d` cells are kept.
pub fn annulus_cover(body: &ConvexBody, dim: usize, est: &CoveringEstimate) -> Result<Vec<Point>> {
    body.check_dim(dim)?;
    let (outer, _) = cube_half_sides(body, dim);
    let half = (2.0 + est.slack) * outer;
    let kappa = est.kappa as usize;
    let cell = 2.0 * half / kappa as f64;
    let total = kappa
        .checked_pow(dim as u32)
        .ok_or_else(|| Error::Overflow("annulus grid".into()))?;
    let skip = (kappa % 2 == 1).then(|| {
        let mid = kappa / 2;
        (0..dim).fold(0usize, |acc, _| acc * kappa + mid)
    });
    let mut centers = Vec::with_capacity(total);
    for cell_idx in 0..total {
        if Some(cell_idx) == skip {
            continue;
        }
        let mut rem = cell_idx;
        let mut coords = vec![0.0; dim];
        for j in (0..dim).rev() {
            coords[j] = -half + cell * ((rem % kappa) as f64 + 0.5);
            rem /= kappa;
        }
        if let ConvexBody::Ellipsoid(e) = body {
            coords = e.denormalize(&coords);
        }
        centers.push(Point::from_vec_unchecked(coords));
    }
    Ok(centers)
}
