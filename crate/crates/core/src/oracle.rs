//! Exact brute-force ground truth at desk scale.
//!
//! Every search here enumerates a finite candidate set that provably contains
//! an optimum: for boxes the per-axis "lower edge touches a point" centres,
//! for discs the points themselves plus all pairwise circle intersections.
//! Bodies without such a candidate set fall back to a fine grid and the
//! result is flagged `exact: false`.

use std::f64::consts::TAU;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{fits_in_k_translates, fits_in_translate, meb, ConvexBody, Point, PointSet, TOL};
use crate::helly::{piercing_helly_number, PiercingNumber};

/// Largest input for the exact box / disc coverage searches.
pub const COVERAGE_CAP: usize = 200;
/// Largest input for the disc angular sweep.
pub const SWEEP_CAP: usize = 5000;
/// Largest input for grid-certified coverage.
pub const GRID_CAP: usize = 60;
/// Largest input for k >= 2 farness.
pub const FARNESS_K_CAP: usize = 24;
/// Largest input for exact k-center with outliers.
pub const OUTLIER_KCENTER_CAP: usize = 40;

const GRID_MAX_NODES: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coverage {
    pub count: usize,
    pub center: Point,
    pub exact: bool,
    /// Grid spacing when `exact` is false.
    pub resolution: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarnessResult {
    /// Minimum number of points to delete.
    pub removals: usize,
    pub best_centers: Vec<Point>,
    pub exact: bool,
}

fn cap(what: &'static str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::CapExceeded { what, size, cap })
    } else {
        Ok(())
    }
}

fn count_at(body: &ConvexBody, center: &Point, points: &[Point]) -> usize {
    points
        .iter()
        .filter(|p| body.contains_offset(&p.sub(center)))
        .count()
}

/// How the oracle can treat a body in a given dimension.
enum Family<'a> {
    /// Per-axis half-widths (boxes, 1-D balls and ellipsoids).
    Box(Vec<f64>),
    /// Disc of this radius after the (optional) normalising map.
    Disc(f64, Option<&'a crate::geometry::Ellipsoid>),
    Grid,
}

fn family(body: &ConvexBody, dim: usize) -> Family<'_> {
    match body {
        ConvexBody::AxisBox { half_widths } => Family::Box(half_widths.clone()),
        ConvexBody::Ball { radius } if dim == 1 => Family::Box(vec![*radius]),
        ConvexBody::Ball { radius } if dim == 2 => Family::Disc(*radius, None),
        ConvexBody::Ellipsoid(_) if dim == 1 => Family::Box(body.bounding_half_extents(1)),
        ConvexBody::Ellipsoid(e) if dim == 2 => Family::Disc(1.0, Some(e)),
        _ => Family::Grid,
    }
}

fn normalized(points: &[Point], e: Option<&crate::geometry::Ellipsoid>) -> Vec<Point> {
    match e {
        None => points.to_vec(),
        Some(e) => points
            .iter()
            .map(|p| Point::new(e.normalize(p.coords())).expect("finite"))
            .collect(),
    }
}

fn denormalized(c: Point, e: Option<&crate::geometry::Ellipsoid>) -> Point {
    match e {
        None => c,
        Some(e) => Point::new(e.denormalize(c.coords())).expect("finite"),
    }
}

/// Maximum number of points one translate of `body` can contain.
pub fn max_coverage_1(body: &ConvexBody, points: &PointSet) -> Result<Coverage> {
    let pts = points.points();
    let dim = points.dim();
    body.check_dim(dim)?;
    if pts.is_empty() {
        return Err(Error::Empty("points"));
    }
    match family(body, dim) {
        Family::Box(w) => {
            cap("box coverage", pts.len(), COVERAGE_CAP)?;
            let idx: Vec<usize> = (0..pts.len()).collect();
            let mut center = vec![0.0; dim];
            let (count, best) = box_max(pts, &w, &idx, 0, &mut center);
            Ok(Coverage {
                count,
                center: Point::new(best).expect("finite"),
                exact: true,
                resolution: None,
            })
        }
        Family::Disc(r, e) => {
            cap("disc coverage", pts.len(), SWEEP_CAP)?;
            let norm = normalized(pts, e);
            let (_, c) = disc_sweep(&norm, r);
            let center = denormalized(c, e);
            // Re-count in the original frame so the result is a certified lower bound.
            let count = count_at(body, &center, pts);
            Ok(Coverage {
                count,
                center,
                exact: true,
                resolution: None,
            })
        }
        Family::Grid => {
            cap("grid coverage", pts.len(), GRID_CAP)?;
            let (centers, h) = grid_centers(body, pts, dim);
            let (count, center) = centers
                .into_iter()
                .map(|c| (count_at(body, &c, pts), c))
                .max_by_key(|(n, _)| *n)
                .expect("grid is non-empty");
            Ok(Coverage {
                count,
                center,
                exact: false,
                resolution: Some(h),
            })
        }
    }
}

/// Best box placement: on each axis the lower face can rest on a point.
fn box_max(pts: &[Point], w: &[f64], idx: &[usize], axis: usize, center: &mut Vec<f64>) -> (usize, Vec<f64>) {
    let width = 2.0 * w[axis];
    let mut lows: Vec<f64> = idx.iter().map(|&i| pts[i][axis]).collect();
    lows.sort_by(f64::total_cmp);
    lows.dedup();
    let mut best = (0usize, center.clone());
    let last = axis + 1 == w.len();
    if last {
        let mut xs: Vec<f64> = idx.iter().map(|&i| pts[i][axis]).collect();
        xs.sort_by(f64::total_cmp);
        let mut hi = 0;
        for (lo, &x0) in xs.iter().enumerate() {
            if lo > 0 && xs[lo - 1] == x0 {
                continue;
            }
            while hi < xs.len() && xs[hi] <= x0 + width + 0.5 * TOL {
                hi += 1;
            }
            if hi - lo > best.0 {
                center[axis] = x0 + w[axis];
                best = (hi - lo, center.clone());
            }
        }
        return best;
    }
    for lo in lows {
        let inside: Vec<usize> = idx
            .iter()
            .copied()
            .filter(|&i| pts[i][axis] >= lo && pts[i][axis] <= lo + width + 0.5 * TOL)
            .collect();
        if inside.len() <= best.0 {
            continue;
        }
        center[axis] = lo + w[axis];
        let cand = box_max(pts, w, &inside, axis + 1, center);
        if cand.0 > best.0 {
            best = cand;
        }
    }
    best
}

/// Disc of radius `r` containing the most points, by an angular sweep around
/// each point (the optimum can be moved until a point sits on its boundary).
fn disc_sweep(pts: &[Point], r: f64) -> (usize, Point) {
    // Slightly inside the tolerance band so the re-count in `max_coverage_1` agrees.
    let r = r + 0.5 * TOL;
    let mut best = (1usize, pts[0].clone());
    let mut events: Vec<(f64, i32)> = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        events.clear();
        let mut base = 1usize;
        let mut active = 0i32;
        for (j, q) in pts.iter().enumerate() {
            if i == j {
                continue;
            }
            let dx = q[0] - p[0];
            let dy = q[1] - p[1];
            let dist = (dx * dx + dy * dy).sqrt();
            if dist <= 1e-15 {
                base += 1;
                continue;
            }
            if dist > 2.0 * r {
                continue;
            }
            let phi = dy.atan2(dx);
            let alpha = (dist / (2.0 * r)).min(1.0).acos();
            let mut a = (phi - alpha).rem_euclid(TAU);
            let b = a + 2.0 * alpha;
            if a >= TAU {
                a -= TAU;
            }
            if b >= TAU {
                active += 1;
                events.push((b - TAU, -1));
            }
            events.push((a, 1));
            if b < TAU {
                events.push((b, -1));
            }
        }
        // Entries before exits at equal angles: discs are closed.
        events.sort_by(|x, y| x.0.total_cmp(&y.0).then(y.1.cmp(&x.1)));
        let at = |theta: f64| {
            Point::new(vec![p[0] + r * theta.cos(), p[1] + r * theta.sin()]).expect("finite")
        };
        if base + active as usize > best.0 {
            best = (base + active as usize, at(0.0));
        }
        for &(theta, delta) in &events {
            active += delta;
            if delta > 0 && base + active as usize > best.0 {
                best = (base + active as usize, at(theta));
            }
        }
    }
    best
}

/// Exact single-translate candidate centres, or `None` for grid-only bodies.
fn candidate_centers(body: &ConvexBody, pts: &[Point], dim: usize) -> Option<Vec<Point>> {
    match family(body, dim) {
        Family::Box(w) => {
            let per_axis: Vec<Vec<f64>> = (0..dim)
                .map(|j| {
                    let mut v: Vec<f64> = pts.iter().map(|p| p[j] + w[j]).collect();
                    v.sort_by(f64::total_cmp);
                    v.dedup();
                    v
                })
                .collect();
            Some(
                per_axis
                    .into_iter()
                    .multi_cartesian_product()
                    .map(|c| Point::new(c).expect("finite"))
                    .collect(),
            )
        }
        Family::Disc(r, e) => {
            let norm = normalized(pts, e);
            let mut out: Vec<Point> = norm.clone();
            let r = r + 0.5 * TOL;
            for (i, p) in norm.iter().enumerate() {
                for q in &norm[i + 1..] {
                    out.extend(circle_intersections(p, q, r));
                }
            }
            Some(out.into_iter().map(|c| denormalized(c, e)).collect())
        }
        Family::Grid => None,
    }
}

/// Centres of the radius-`r` circles through both `p` and `q`.
fn circle_intersections(p: &Point, q: &Point, r: f64) -> Vec<Point> {
    let d2 = p.dist_sq(q);
    if d2 == 0.0 || d2 > 4.0 * r * r {
        return Vec::new();
    }
    let mid = p.midpoint(q);
    let h = (r * r - d2 / 4.0).max(0.0).sqrt();
    let d = d2.sqrt();
    let (ux, uy) = ((q[1] - p[1]) / d, -(q[0] - p[0]) / d);
    vec![
        Point::new(vec![mid[0] + h * ux, mid[1] + h * uy]).expect("finite"),
        Point::new(vec![mid[0] - h * ux, mid[1] - h * uy]).expect("finite"),
    ]
}

/// Grid over the bounding box of the points, expanded by the body's extent.
fn grid_centers(body: &ConvexBody, pts: &[Point], dim: usize) -> (Vec<Point>, f64) {
    let ext = body.bounding_half_extents(dim);
    let lo: Vec<f64> = (0..dim)
        .map(|j| pts.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min) - ext[j])
        .collect();
    let hi: Vec<f64> = (0..dim)
        .map(|j| pts.iter().map(|p| p[j]).fold(f64::NEG_INFINITY, f64::max) + ext[j])
        .collect();
    let mut h = body.inradius() / 50.0;
    let nodes = |h: f64| -> f64 {
        (0..dim)
            .map(|j| ((hi[j] - lo[j]) / h).floor() + 1.0)
            .product()
    };
    while nodes(h) > GRID_MAX_NODES as f64 {
        h *= 1.25;
    }
    let axes: Vec<Vec<f64>> = (0..dim)
        .map(|j| {
            let steps = ((hi[j] - lo[j]) / h).floor() as usize;
            (0..=steps).map(|s| lo[j] + s as f64 * h).collect()
        })
        .collect();
    let centers = axes
        .into_iter()
        .multi_cartesian_product()
        .map(|c| Point::new(c).expect("finite"))
        .collect();
    (centers, h)
}

/// Covered-point bitmasks for every candidate centre, keeping only maximal ones.
fn candidate_masks(body: &ConvexBody, pts: &[Point], centers: Vec<Point>) -> Vec<(u64, Point)> {
    let mut masks: Vec<(u64, Point)> = centers
        .into_iter()
        .map(|c| {
            let m = pts
                .iter()
                .enumerate()
                .filter(|(_, p)| body.contains_offset(&p.sub(&c)))
                .fold(0u64, |m, (i, _)| m | (1 << i));
            (m, c)
        })
        .filter(|(m, _)| *m != 0)
        .collect();
    masks.sort_by(|a, b| b.0.count_ones().cmp(&a.0.count_ones()).then(a.0.cmp(&b.0)));
    masks.dedup_by(|a, b| a.0 == b.0);
    let mut maximal: Vec<(u64, Point)> = Vec::new();
    for (m, c) in masks {
        if !maximal.iter().any(|(big, _)| m & big == m) {
            maximal.push((m, c));
        }
    }
    maximal
}

/// Largest union of `k` masks, by depth-first search with a size bound.
fn best_union(masks: &[(u64, Point)], k: usize) -> (u64, Vec<usize>) {
    fn go(
        masks: &[(u64, Point)],
        start: usize,
        left: usize,
        acc: u64,
        chosen: &mut Vec<usize>,
        best: &mut (u64, Vec<usize>),
        full: u32,
    ) {
        if acc.count_ones() > best.0.count_ones() {
            *best = (acc, chosen.clone());
        }
        if left == 0 || best.0.count_ones() == full {
            return;
        }
        for i in start..masks.len() {
            // masks are sorted by size, so this bounds everything after i too
            let gain_bound = masks[i].0.count_ones() as usize * left;
            if acc.count_ones() as usize + gain_bound <= best.0.count_ones() as usize {
                break;
            }
            if masks[i].0 & !acc == 0 {
                continue;
            }
            chosen.push(i);
            go(masks, i + 1, left - 1, acc | masks[i].0, chosen, best, full);
            chosen.pop();
        }
    }
    let full = masks.iter().fold(0u64, |a, (m, _)| a | m).count_ones();
    let mut best = (0u64, Vec::new());
    go(masks, 0, k, 0, &mut Vec::new(), &mut best, full);
    best
}

/// Minimum number of deletions making the set `(k, body)`-clusterable.
pub fn farness(body: &ConvexBody, points: &PointSet, k: usize) -> Result<FarnessResult> {
    if k == 0 {
        return Err(Error::OutOfRange { name: "k", value: 0.0 });
    }
    let pts = points.points();
    let n = pts.len();
    body.check_dim(points.dim())?;
    if n == 0 {
        return Ok(FarnessResult {
            removals: 0,
            best_centers: Vec::new(),
            exact: true,
        });
    }
    if k >= n {
        return Ok(FarnessResult {
            removals: 0,
            best_centers: pts.to_vec(),
            exact: true,
        });
    }
    if k == 1 {
        let cov = max_coverage_1(body, points)?;
        return Ok(FarnessResult {
            removals: n - cov.count,
            best_centers: vec![cov.center],
            exact: cov.exact,
        });
    }
    cap("k-translate farness", n, FARNESS_K_CAP)?;
    let (centers, exact) = match candidate_centers(body, pts, points.dim()) {
        Some(c) => (c, true),
        None => (grid_centers(body, pts, points.dim()).0, false),
    };
    let masks = candidate_masks(body, pts, centers);
    let (union, chosen) = best_union(&masks, k);
    Ok(FarnessResult {
        removals: n - union.count_ones() as usize,
        best_centers: chosen.into_iter().map(|i| masks[i].1.clone()).collect(),
        exact,
    })
}

/// Whether `k` translates of `body` contain every point.
pub fn is_k_clusterable(body: &ConvexBody, points: &PointSet, k: usize) -> Result<bool> {
    if k == 0 {
        return Err(Error::OutOfRange { name: "k", value: 0.0 });
    }
    let n = points.len();
    if n <= k {
        return Ok(true);
    }
    cap("k-clusterability", n, FARNESS_K_CAP)?;
    if k == 1 {
        return Ok(fits_in_translate(body, points.points())?.is_some());
    }
    let r = farness(body, points, k)?;
    if r.exact || r.removals == 0 {
        return Ok(r.removals == 0);
    }
    // Grid bodies: settle with the exact partition search where it applies.
    Ok(fits_in_k_translates(body, points.points(), k)?.is_some())
}

/// Whether every `h(d, m)`-subset of the points is `m`-clusterable by boxes;
/// for boxes this is equivalent to the whole set being `m`-clusterable.
pub fn box_helly_check(body: &ConvexBody, points: &PointSet, m: usize) -> Result<bool> {
    if !matches!(body, ConvexBody::AxisBox { .. }) {
        return Err(Error::InvalidBody("box_helly_check needs an axis box".into()));
    }
    body.check_dim(points.dim())?;
    let d = points.dim();
    let h = match piercing_helly_number(d, m)? {
        PiercingNumber::Finite(h) => h as usize,
        PiercingNumber::Unbounded => return Err(Error::UnboundedPiercing { d, m }),
    };
    let pts = points.points();
    if pts.len() < h {
        return Err(Error::SourceTooSmall {
            needed: h,
            have: pts.len(),
        });
    }
    for subset in (0..pts.len()).combinations(h) {
        let sub: Vec<Point> = subset.iter().map(|&i| pts[i].clone()).collect();
        if fits_in_k_translates(body, &sub, m)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Number of `(k+1)`-subsets of distinct indices that no `k` translates cover.
pub fn count_witnesses(body: &ConvexBody, points: &PointSet, k: usize) -> Result<(u64, u64)> {
    let pts = points.points();
    let mut bad = 0u64;
    let mut total = 0u64;
    let size = if k == 1 { points.dim() + 1 } else { k + 1 };
    for subset in (0..pts.len()).combinations(size) {
        let sub: Vec<Point> = subset.iter().map(|&i| pts[i].clone()).collect();
        total += 1;
        let fits = if k == 1 {
            fits_in_translate(body, &sub)?.is_some()
        } else {
            fits_in_k_translates(body, &sub, k)?.is_some()
        };
        if !fits {
            bad += 1;
        }
    }
    Ok((bad, total))
}

/// Pairs `{i, j}` (i < j) that cannot share one translate.
pub fn count_separated_pairs(body: &ConvexBody, points: &PointSet) -> Result<u64> {
    body.check_dim(points.dim())?;
    let pts = points.points();
    Ok((0..pts.len())
        .tuple_combinations()
        .filter(|&(i, j)| !crate::geometry::pair_fits(body, &pts[i], &pts[j]))
        .count() as u64)
}

/// Whether a Euclidean ball of radius `r` covers all but `allowed` points
/// (i.e. whether the optimal outlier radius is at most `r`). Exact in d <= 2.
pub fn outlier_radius_at_most(points: &PointSet, r: f64, allowed: usize) -> Result<bool> {
    let n = points.len();
    if allowed >= n {
        return Ok(true);
    }
    let ball = ConvexBody::ball(r.max(f64::MIN_POSITIVE))?;
    let cov = max_coverage_1(&ball, points)?;
    Ok(cov.count + allowed >= n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierKCenter {
    pub centers: Vec<Point>,
    pub radii: Vec<f64>,
    /// Points left uncovered.
    pub uncovered: usize,
}

impl OutlierKCenter {
    pub fn max_radius(&self) -> f64 {
        self.radii.iter().cloned().fold(0.0, f64::max)
    }
}

/// Optimal k-center (radius cost) of `points` ignoring up to `allowed` of
/// them. Each optimal cluster ball may be replaced by the enclosing ball of at
/// most `d + 1` of its points, so the search runs over those candidate balls:
/// the largest ball is fixed first and the rest solved recursively. Among
/// optimal solutions the remaining radii are minimised in the same order.
pub fn k_center_with_outliers(points: &PointSet, k: usize, allowed: usize) -> Result<OutlierKCenter> {
    if k == 0 {
        return Err(Error::OutOfRange { name: "k", value: 0.0 });
    }
    let pts = points.points();
    let n = pts.len();
    if n == 0 {
        return Err(Error::Empty("points"));
    }
    cap("k-center with outliers", n, OUTLIER_KCENTER_CAP)?;
    let d = points.dim();
    let mut cands: Vec<(f64, u64, Point)> = Vec::new();
    for size in 1..=(d + 1).min(n) {
        for subset in (0..n).combinations(size) {
            let sub: Vec<Point> = subset.iter().map(|&i| pts[i].clone()).collect();
            let b = meb(&sub)?;
            let tol = 1e-9 * (1.0 + b.radius);
            let mask = pts
                .iter()
                .enumerate()
                .filter(|(_, p)| p.dist(&b.center) <= b.radius + tol)
                .fold(0u64, |m, (i, _)| m | (1 << i));
            cands.push((b.radius, mask, b.center));
        }
    }
    cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.count_ones().cmp(&a.1.count_ones())));
    cands.dedup_by(|a, b| a.1 == b.1 && (a.0 - b.0).abs() <= 1e-12 * (1.0 + a.0));
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let best = solve_outlier(&cands, full, k, allowed, f64::INFINITY)
        .expect("k >= 1 singleton balls always cover something");
    let mut centers = Vec::with_capacity(k);
    let mut radii = Vec::with_capacity(k);
    let mut covered = 0u64;
    for &i in &best.1 {
        centers.push(cands[i].2.clone());
        radii.push(cands[i].0);
        covered |= cands[i].1;
    }
    while centers.len() < k {
        centers.push(pts[0].clone());
        radii.push(0.0);
    }
    Ok(OutlierKCenter {
        centers,
        radii,
        uncovered: n - (covered & full).count_ones() as usize,
    })
}

/// Returns `(max radius, chosen candidate indices)` covering all but `allowed`
/// of `remaining` with at most `k` balls, each of radius < `limit`.
fn solve_outlier(
    cands: &[(f64, u64, Point)],
    remaining: u64,
    k: usize,
    allowed: usize,
    limit: f64,
) -> Option<(f64, Vec<usize>)> {
    if remaining.count_ones() as usize <= allowed {
        return Some((0.0, Vec::new()));
    }
    if k == 0 {
        return None;
    }
    let mut best: Option<(f64, Vec<usize>)> = None;
    for (i, (r, mask, _)) in cands.iter().enumerate() {
        let bound = best.as_ref().map_or(limit, |b| b.0);
        if *r > bound || (best.is_some() && *r >= bound) {
            break;
        }
        if mask & remaining == 0 {
            continue;
        }
        let rest = remaining & !mask;
        if k == 1 {
            if rest.count_ones() as usize <= allowed {
                return Some((*r, vec![i]));
            }
            continue;
        }
        // Remaining balls are no larger than this one.
        if let Some((sub_r, mut chosen)) = solve_outlier(cands, rest, k - 1, allowed, r * (1.0 + 1e-12) + 1e-15) {
            let total = r.max(sub_r);
            if best.as_ref().is_none_or(|b| total < b.0) {
                chosen.insert(0, i);
                best = Some((total, chosen));
            }
        }
    }
    best
}

/// Permutation `perm` with `perm[i]` the reference cluster matched to
/// `reported[i]`, minimising total centre distance.
pub fn match_clusters(reported: &[Point], reference: &[Point]) -> Vec<usize> {
    let k = reported.len();
    (0..reference.len())
        .permutations(k)
        .min_by(|a, b| {
            let cost = |perm: &Vec<usize>| -> f64 {
                perm.iter()
                    .enumerate()
                    .map(|(i, &j)| reported[i].dist(&reference[j]))
                    .sum()
            };
            cost(a).total_cmp(&cost(b))
        })
        .unwrap_or_default()
}
