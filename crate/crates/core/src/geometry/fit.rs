use super::body::ConvexBody;
use super::lp::{min_violation, HalfSpace};
use super::meb::meb;
use super::linalg::dot;
use super::point::{common_dim, Point};
use crate::error::{Error, Result};

/// Largest input accepted by the exhaustive k-translate search.
pub const FIT_EXACT_CAP: usize = 20;

/// A centre `c` with `points ⊂ c + body`, or `None` if no translate contains them all.
pub fn fits_in_translate(body: &ConvexBody, points: &[Point]) -> Result<Option<Point>> {
    let dim = common_dim(points)?;
    body.check_dim(dim)?;
    Ok(fit_unchecked(body, points, dim))
}

fn fit_unchecked(body: &ConvexBody, points: &[Point], dim: usize) -> Option<Point> {
    let center = match points {
        [p] => return Some(p.clone()),
        // For a symmetric convex body two points fit iff their midpoint works.
        [p, q] => p.midpoint(q),
        _ => candidate_center(body, points, dim)?,
    };
    points
        .iter()
        .all(|p| body.contains_offset(&p.sub(&center)))
        .then_some(center)
}

fn candidate_center(body: &ConvexBody, points: &[Point], dim: usize) -> Option<Point> {
    match body {
        ConvexBody::Ball { .. } => Some(meb(points).ok()?.center),
        ConvexBody::AxisBox { .. } => {
            let mid = (0..dim)
                .map(|j| {
                    let (lo, hi) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                        (lo.min(p[j]), hi.max(p[j]))
                    });
                    0.5 * (lo + hi)
                })
                .collect();
            Some(Point::from_vec_unchecked(mid))
        }
        ConvexBody::Ellipsoid(e) => {
            let normalized: Vec<Point> = points
                .iter()
                .map(|p| Point::from_vec_unchecked(e.normalize(p.coords())))
                .collect();
            let ball = meb(&normalized).ok()?;
            Some(Point::from_vec_unchecked(e.denormalize(ball.center.coords())))
        }
        ConvexBody::SymPolytope(poly) => {
            // a_j · (p - c) <= b_j for all p  <=>  a_j · c >= max_p(a_j · p) - b_j.
            // The mirrored facet supplies the opposite side of each slab.
            let rows: Vec<HalfSpace<'_>> = poly
                .facets()
                .iter()
                .map(|f| HalfSpace {
                    normal: &f.normal,
                    lower: points
                        .iter()
                        .map(|p| dot(&f.normal, p.coords()))
                        .fold(f64::NEG_INFINITY, f64::max)
                        - f.offset,
                })
                .collect();
            let (c, _) = min_violation(dim, &rows)?;
            Some(Point::from_vec_unchecked(c))
        }
    }
}

/// Whether `p` and `q` fit in one translate.
pub fn pair_fits(body: &ConvexBody, p: &Point, q: &Point) -> bool {
    let half: Vec<f64> = p.sub(q).into_iter().map(|v| 0.5 * v).collect();
    body.contains_offset(&half)
}

/// `k` centres whose translates jointly contain `points`, or `None`.
///
/// `k + 1` points fit iff some pair shares a translate (pigeonhole one way,
/// singletons for the rest the other way). Larger inputs fall back to an
/// exhaustive partition search capped at [`FIT_EXACT_CAP`] points.
pub fn fits_in_k_translates(
    body: &ConvexBody,
    points: &[Point],
    k: usize,
) -> Result<Option<Vec<Point>>> {
    if k == 0 {
        return Err(Error::OutOfRange {
            name: "k",
            value: 0.0,
        });
    }
    let dim = common_dim(points)?;
    body.check_dim(dim)?;
    let n = points.len();
    if n <= k {
        return Ok(Some(pad(points.to_vec(), k)));
    }
    if n == k + 1 {
        for i in 0..n {
            for j in i + 1..n {
                if pair_fits(body, &points[i], &points[j]) {
                    let mut centers = vec![points[i].midpoint(&points[j])];
                    centers.extend(
                        (0..n)
                            .filter(|&l| l != i && l != j)
                            .map(|l| points[l].clone()),
                    );
                    return Ok(Some(centers));
                }
            }
        }
        return Ok(None);
    }
    if n > FIT_EXACT_CAP {
        return Err(Error::CapExceeded {
            what: "exact k-translate fitting",
            size: n,
            cap: FIT_EXACT_CAP,
        });
    }
    let mut groups: Vec<Vec<Point>> = Vec::with_capacity(k);
    let mut centers: Vec<Point> = Vec::with_capacity(k);
    if partition(body, points, 0, k, dim, &mut groups, &mut centers) {
        Ok(Some(pad(centers, k)))
    } else {
        Ok(None)
    }
}

fn partition(
    body: &ConvexBody,
    points: &[Point],
    next: usize,
    k: usize,
    dim: usize,
    groups: &mut Vec<Vec<Point>>,
    centers: &mut Vec<Point>,
) -> bool {
    if next == points.len() {
        return true;
    }
    let p = &points[next];
    for g in 0..groups.len() {
        groups[g].push(p.clone());
        if let Some(c) = fit_unchecked(body, &groups[g], dim) {
            let old = std::mem::replace(&mut centers[g], c);
            if partition(body, points, next + 1, k, dim, groups, centers) {
                return true;
            }
            centers[g] = old;
        }
        groups[g].pop();
    }
    if groups.len() < k {
        groups.push(vec![p.clone()]);
        centers.push(p.clone());
        if partition(body, points, next + 1, k, dim, groups, centers) {
            return true;
        }
        groups.pop();
        centers.pop();
    }
    false
}

fn pad(mut centers: Vec<Point>, k: usize) -> Vec<Point> {
    let filler = centers[0].clone();
    centers.resize(k, filler);
    centers
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::body::Facet;

    fn pts(raw: &[[f64; 2]]) -> Vec<Point> {
        raw.iter().map(|&c| Point::from(c)).collect()
    }

    fn close(p: &Point, q: [f64; 2]) -> bool {
        (p[0] - q[0]).abs() < 1e-9 && (p[1] - q[1]).abs() < 1e-9
    }

    #[test]
    fn translate_examples() {
        let ball = ConvexBody::ball(1.0).unwrap();
        let c = fits_in_translate(&ball, &pts(&[[0.0, 0.0], [2.0, 0.0]])).unwrap().unwrap();
        assert!(close(&c, [1.0, 0.0]));
        assert!(fits_in_translate(&ball, &pts(&[[0.0, 0.0], [2.5, 0.0]])).unwrap().is_none());
        let bx = ConvexBody::axis_box(vec![1.0, 1.0]).unwrap();
        let c = fits_in_translate(&bx, &pts(&[[0.0, 0.0], [1.5, 1.9], [2.0, 0.0]]))
            .unwrap()
            .unwrap();
        assert!(close(&c, [1.0, 0.95]));
    }

    #[test]
    fn translate_errors() {
        let ball = ConvexBody::ball(1.0).unwrap();
        assert_eq!(fits_in_translate(&ball, &[]).unwrap_err(), Error::Empty("points"));
        let bad = vec![Point::from([0.0, 0.0]), Point::from([0.0])];
        assert!(matches!(
            fits_in_translate(&ball, &bad),
            Err(Error::DimensionMismatch { .. })
        ));
        let bx = ConvexBody::axis_box(vec![1.0, 1.0, 1.0]).unwrap();
        assert!(fits_in_translate(&bx, &pts(&[[0.0, 0.0]])).is_err());
    }

    #[test]
    fn ellipsoid_translate() {
        // semi-axes 2 (x) and 1 (y)
        let e = ConvexBody::ellipsoid(vec![vec![0.25, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(fits_in_translate(&e, &pts(&[[0.0, 0.0], [4.0, 0.0], [2.0, 0.9]])).unwrap().is_some());
        assert!(fits_in_translate(&e, &pts(&[[0.0, 0.0], [0.0, 2.2]])).unwrap().is_none());
    }

    #[test]
    fn polytope_translate() {
        // diamond |x| + |y| <= 1
        let facets = [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]]
            .iter()
            .map(|n| Facet { normal: n.to_vec(), offset: 1.0 })
            .collect();
        let diamond = ConvexBody::sym_polytope(facets).unwrap();
        let c = fits_in_translate(&diamond, &pts(&[[0.0, 0.0], [2.0, 0.0], [1.0, 0.0]]))
            .unwrap()
            .unwrap();
        assert!(close(&c, [1.0, 0.0]));
        assert!(fits_in_translate(&diamond, &pts(&[[0.0, 0.0], [1.0, 1.0], [0.0, 0.5]]))
            .unwrap()
            .is_some());
        assert!(fits_in_translate(&diamond, &pts(&[[0.0, 0.0], [1.0, 1.2], [2.0, 0.0]]))
            .unwrap()
            .is_none());
    }

    #[test]
    fn k_translate_examples() {
        let ball = ConvexBody::ball(1.0).unwrap();
        let far = pts(&[[0.0, 0.0], [10.0, 0.0], [20.0, 0.0]]);
        assert!(fits_in_k_translates(&ball, &far, 2).unwrap().is_none());
        let near = pts(&[[0.0, 0.0], [1.0, 0.0], [10.0, 0.0]]);
        let c = fits_in_k_translates(&ball, &near, 2).unwrap().unwrap();
        assert!(close(&c[0], [0.5, 0.0]) && close(&c[1], [10.0, 0.0]));
        let bx = ConvexBody::axis_box(vec![1.0, 1.0]).unwrap();
        let sq = pts(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        let c = fits_in_k_translates(&bx, &sq, 1).unwrap().unwrap();
        assert!(close(&c[0], [0.5, 0.5]));
    }

    #[test]
    fn k_translate_partition_path() {
        let ball = ConvexBody::ball(1.0).unwrap();
        let two_blobs = pts(&[[0.0, 0.0], [10.0, 0.0], [0.5, 0.5], [10.5, 0.0], [0.0, 1.0]]);
        let c = fits_in_k_translates(&ball, &two_blobs, 2).unwrap().unwrap();
        assert_eq!(c.len(), 2);
        for p in &two_blobs {
            assert!(c.iter().any(|c| ball.contains(c, p).unwrap()));
        }
        let three = pts(&[[0.0, 0.0], [10.0, 0.0], [0.5, 0.5], [20.0, 0.0]]);
        assert!(fits_in_k_translates(&ball, &three, 2).unwrap().is_none());
        let few = pts(&[[0.0, 0.0]]);
        assert_eq!(fits_in_k_translates(&ball, &few, 3).unwrap().unwrap().len(), 3);
        let many: Vec<Point> = (0..25).map(|i| Point::from([i as f64 * 0.01, 0.0])).collect();
        assert!(matches!(
            fits_in_k_translates(&ball, &many, 2),
            Err(Error::CapExceeded { .. })
        ));
        assert!(fits_in_k_translates(&ball, &few, 0).is_err());
    }
}
