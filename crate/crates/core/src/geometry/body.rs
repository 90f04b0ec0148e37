use itertools::Itertools;
use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::linalg::{dot, norm, solve};
use super::point::Point;
use super::TOL;
use crate::error::{Error, Result};

/// A facet `normal · x <= offset` of a centrally symmetric polytope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// Textual (JSON) description of a body, e.g. `{"kind":"ball","radius":1.0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodySpec {
    Ball { radius: f64 },
    #[serde(alias = "axis_box")]
    Box { half_widths: Vec<f64> },
    Ellipsoid { shape_matrix: Vec<Vec<f64>> },
    #[serde(alias = "sym_polytope")]
    Polytope { facets: Vec<Facet> },
}

impl BodySpec {
    pub fn parse(text: &str) -> Result<ConvexBody> {
        let spec: BodySpec = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line() as u64,
            msg: format!("body spec: {e}"),
        })?;
        ConvexBody::try_from(spec)
    }
}

/// An origin-symmetric convex body. Translates `c + A` are the clusters.
#[derive(Debug, Clone)]
pub enum ConvexBody {
    Ball { radius: f64 },
    AxisBox { half_widths: Vec<f64> },
    Ellipsoid(Ellipsoid),
    SymPolytope(SymPolytope),
}

/// `{x : xᵀ Q x <= 1}` with the symmetric square root of `Q` cached.
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    shape: Vec<Vec<f64>>,
    sqrt: Vec<Vec<f64>>,
    inv_sqrt: Vec<Vec<f64>>,
    lambda_min: f64,
    lambda_max: f64,
}

impl Ellipsoid {
    pub fn shape_matrix(&self) -> &[Vec<f64>] {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    /// Maps `x` to `Q^{1/2} x`; the ellipsoid becomes the unit ball.
    pub fn normalize(&self, x: &[f64]) -> Vec<f64> {
        mat_vec(&self.sqrt, x)
    }

    pub fn denormalize(&self, y: &[f64]) -> Vec<f64> {
        mat_vec(&self.inv_sqrt, y)
    }

    fn quad(&self, x: &[f64]) -> f64 {
        dot(x, &mat_vec(&self.shape, x))
    }
}

/// `{x : a_j · x <= b_j}` with the facet list closed under `a -> -a`.
#[derive(Debug, Clone)]
pub struct SymPolytope {
    facets: Vec<Facet>,
    vertices: Vec<Vec<f64>>,
    dim: usize,
}

impl SymPolytope {
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

fn mat_vec(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, x)).collect()
}

fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

impl ConvexBody {
    pub fn ball(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidBody(format!("ball radius must be > 0, got {radius}")));
        }
        Ok(ConvexBody::Ball { radius })
    }

    pub fn axis_box(half_widths: Vec<f64>) -> Result<Self> {
        if half_widths.is_empty() {
            return Err(Error::InvalidBody("box needs at least one half-width".into()));
        }
        if let Some(w) = half_widths.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidBody(format!("box half-widths must be > 0, got {w}")));
        }
        Ok(ConvexBody::AxisBox { half_widths })
    }

    pub fn ellipsoid(shape: Vec<Vec<f64>>) -> Result<Self> {
        let d = shape.len();
        if d == 0 || shape.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidBody("shape matrix must be square and non-empty".into()));
        }
        if shape.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidBody("shape matrix has non-finite entries".into()));
        }
        let scale = shape.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..d {
            for j in 0..i {
                if (shape[i][j] - shape[j][i]).abs() > 1e-12 * scale.max(1.0) {
                    return Err(Error::InvalidBody("shape matrix is not symmetric".into()));
                }
            }
        }
        let q = DMatrix::from_fn(d, d, |i, j| 0.5 * (shape[i][j] + shape[j][i]));
        let eig = SymmetricEigen::new(q);
        let lambda_min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        let lambda_max = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
        if !(lambda_min > 1e-12 * lambda_max) || lambda_min <= 0.0 {
            return Err(Error::InvalidBody(format!(
                "shape matrix must be positive definite (min eigenvalue {lambda_min})"
            )));
        }
        let v = &eig.eigenvectors;
        let s = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
        let si = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
        let sqrt = v * s * v.transpose();
        let inv_sqrt = v * si * v.transpose();
        Ok(ConvexBody::Ellipsoid(Ellipsoid {
            shape,
            sqrt: to_rows(&sqrt),
            inv_sqrt: to_rows(&inv_sqrt),
            lambda_min,
            lambda_max,
        }))
    }

    pub fn sym_polytope(facets: Vec<Facet>) -> Result<Self> {
        let d = facets
            .first()
            .ok_or_else(|| Error::InvalidBody("polytope needs facets".into()))?
            .normal
            .len();
        if d == 0 {
            return Err(Error::InvalidBody("facet normals must be non-empty".into()));
        }
        for f in &facets {
            if f.normal.len() != d {
                return Err(Error::InvalidBody("facet normals differ in length".into()));
            }
            if f.normal.iter().any(|v| !v.is_finite()) || norm(&f.normal) == 0.0 {
                return Err(Error::InvalidBody("facet normal must be finite and non-zero".into()));
            }
            if !(f.offset.is_finite() && f.offset > 0.0) {
                return Err(Error::InvalidBody(format!(
                    "facet offsets must be > 0, got {}",
                    f.offset
                )));
            }
        }
        for f in &facets {
            let scale = norm(&f.normal);
            let mirrored = facets.iter().any(|g| {
                let s: f64 = g.normal.iter().zip(&f.normal).map(|(a, b)| (a + b).abs()).sum();
                s <= 1e-9 * scale && (g.offset - f.offset).abs() <= 1e-9 * f.offset.max(1.0)
            });
            if !mirrored {
                return Err(Error::InvalidBody(format!(
                    "facet {:?} has no mirrored counterpart; polytope is not centrally symmetric",
                    f.normal
                )));
            }
        }
        // Symmetric facet sets are bounded iff the normals span R^d.
        let a = DMatrix::from_fn(facets.len(), d, |i, j| facets[i].normal[j]);
        if a.rank(1e-9) < d {
            return Err(Error::InvalidBody("polytope is unbounded".into()));
        }
        let vertices = enumerate_vertices(&facets, d);
        if vertices.is_empty() {
            return Err(Error::InvalidBody("polytope has no vertices".into()));
        }
        Ok(ConvexBody::SymPolytope(SymPolytope {
            facets,
            vertices,
            dim: d,
        }))
    }

    /// Ambient dimension, or `None` for a ball (valid in every dimension).
    pub fn dim(&self) -> Option<usize> {
        match self {
            ConvexBody::Ball { .. } => None,
            ConvexBody::AxisBox { half_widths } => Some(half_widths.len()),
            ConvexBody::Ellipsoid(e) => Some(e.dim()),
            ConvexBody::SymPolytope(p) => Some(p.dim),
        }
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self.dim() {
            Some(d) if d != dim => Err(Error::DimensionMismatch {
                expected: d,
                found: dim,
            }),
            _ => Ok(()),
        }
    }

    /// Membership of the offset `x = p - center` in the origin-centred body.
    /// Closed: every defining inequality is relaxed by [`TOL`].
    pub fn contains_offset(&self, x: &[f64]) -> bool {
        match self {
            ConvexBody::Ball { radius } => norm(x) <= radius + TOL,
            ConvexBody::AxisBox { half_widths } => {
                x.iter().zip(half_widths).all(|(v, w)| v.abs() <= w + TOL)
            }
            ConvexBody::Ellipsoid(e) => e.quad(x) <= 1.0 + TOL,
            ConvexBody::SymPolytope(p) => {
                p.facets.iter().all(|f| dot(&f.normal, x) <= f.offset + TOL)
            }
        }
    }

    /// Whether `p` lies in the translate `center + A`.
    pub fn contains(&self, center: &Point, p: &Point) -> Result<bool> {
        self.check_dim(center.dim())?;
        p.check_dim(center.dim())?;
        Ok(self.contains_offset(&p.sub(center)))
    }

    pub fn diameter(&self) -> f64 {
        match self {
            ConvexBody::Ball { radius } => 2.0 * radius,
            ConvexBody::AxisBox { half_widths } => 2.0 * norm(half_widths),
            ConvexBody::Ellipsoid(e) => 2.0 / e.lambda_min.sqrt(),
            ConvexBody::SymPolytope(p) => {
                2.0 * p.vertices.iter().map(|v| norm(v)).fold(0.0, f64::max)
            }
        }
    }

    /// Radius of the largest origin-centred Euclidean ball inside the body.
    pub fn inradius(&self) -> f64 {
        match self {
            ConvexBody::Ball { radius } => *radius,
            ConvexBody::AxisBox { half_widths } => {
                half_widths.iter().cloned().fold(f64::INFINITY, f64::min)
            }
            ConvexBody::Ellipsoid(e) => 1.0 / e.lambda_max.sqrt(),
            ConvexBody::SymPolytope(p) => p
                .facets
                .iter()
                .map(|f| f.offset / norm(&f.normal))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Half side lengths of the tightest axis-aligned box around the body.
    pub fn bounding_half_extents(&self, dim: usize) -> Vec<f64> {
        match self {
            ConvexBody::Ball { radius } => vec![*radius; dim],
            ConvexBody::AxisBox { half_widths } => half_widths.clone(),
            ConvexBody::Ellipsoid(e) => {
                // max x_i over the ellipsoid is sqrt((Q^{-1})_ii) = |row i of Q^{-1/2}|.
                e.inv_sqrt.iter().map(|row| norm(row)).collect()
            }
            ConvexBody::SymPolytope(p) => (0..p.dim)
                .map(|i| p.vertices.iter().map(|v| v[i].abs()).fold(0.0, f64::max))
                .collect(),
        }
    }
}

impl TryFrom<BodySpec> for ConvexBody {
    type Error = Error;

    fn try_from(spec: BodySpec) -> Result<Self> {
        match spec {
            BodySpec::Ball { radius } => ConvexBody::ball(radius),
            BodySpec::Box { half_widths } => ConvexBody::axis_box(half_widths),
            BodySpec::Ellipsoid { shape_matrix } => ConvexBody::ellipsoid(shape_matrix),
            BodySpec::Polytope { facets } => ConvexBody::sym_polytope(facets),
        }
    }
}

impl From<&ConvexBody> for BodySpec {
    fn from(body: &ConvexBody) -> Self {
        match body {
            ConvexBody::Ball { radius } => BodySpec::Ball { radius: *radius },
            ConvexBody::AxisBox { half_widths } => BodySpec::Box {
                half_widths: half_widths.clone(),
            },
            ConvexBody::Ellipsoid(e) => BodySpec::Ellipsoid {
                shape_matrix: e.shape.clone(),
            },
            ConvexBody::SymPolytope(p) => BodySpec::Polytope {
                facets: p.facets.clone(),
            },
        }
    }
}

fn enumerate_vertices(facets: &[Facet], d: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for subset in (0..facets.len()).combinations(d) {
        let a: Vec<Vec<f64>> = subset.iter().map(|&i| facets[i].normal.clone()).collect();
        let b: Vec<f64> = subset.iter().map(|&i| facets[i].offset).collect();
        let Some(x) = solve(a, b, 1e-10) else { continue };
        let feasible = facets
            .iter()
            .all(|f| dot(&f.normal, &x) <= f.offset + 1e-9 * f.offset.max(1.0));
        if feasible && !out.iter().any(|v| norm(&sub(v, &x)) <= 1e-9) {
            out.push(x);
        }
    }
    out
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}
