//! Minimum enclosing ball by move-to-front randomized incremental construction.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::linalg::{dot, solve};
use super::point::{common_dim, Point};
use crate::error::Result;

/// Shuffle seed used by [`meb`].
pub const MEB_DEFAULT_SEED: u64 = 0x005e_ed0f_ba11;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        p.dist(&self.center) <= self.radius + tol
    }
}

pub fn meb(points: &[Point]) -> Result<Ball> {
    meb_seeded(points, MEB_DEFAULT_SEED)
}

/// Smallest Euclidean ball containing `points`; deterministic for a given `seed`.
pub fn meb_seeded(points: &[Point], seed: u64) -> Result<Ball> {
    let d = common_dim(points)?;
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut support = Vec::with_capacity(d + 1);
    let end = order.len();
    let (center, _) = mtf(points, &mut order, end, &mut support, d)
        .expect("non-empty input always yields a ball");
    // Report the exact enclosing radius for the computed centre.
    let center = Point::from_vec_unchecked(center);
    let radius = points.iter().map(|p| p.dist(&center)).fold(0.0, f64::max);
    Ok(Ball { center, radius })
}

type RawBall = (Vec<f64>, f64);

fn inside(ball: &Option<RawBall>, p: &Point) -> bool {
    match ball {
        None => false,
        Some((c, r)) => {
            let d2: f64 = c.iter().zip(p.coords()).map(|(a, b)| (a - b) * (a - b)).sum();
            d2.sqrt() <= r + 1e-12 * (1.0 + r)
        }
    }
}

fn mtf(
    pts: &[Point],
    order: &mut Vec<usize>,
    end: usize,
    support: &mut Vec<usize>,
    d: usize,
) -> Option<RawBall> {
    let mut ball = support_ball(pts, support);
    if support.len() == d + 1 {
        return ball;
    }
    for i in 0..end {
        let idx = order[i];
        if !inside(&ball, &pts[idx]) {
            support.push(idx);
            ball = mtf(pts, order, i, support, d);
            support.pop();
            let v = order.remove(i);
            order.insert(0, v);
        }
    }
    ball
}

/// Smallest ball with every support point on its boundary.
fn support_ball(pts: &[Point], support: &[usize]) -> Option<RawBall> {
    let refs: Vec<&Point> = support.iter().map(|&i| &pts[i]).collect();
    match circumball(&refs) {
        Some(b) => Some(b),
        None if refs.is_empty() => None,
        None => Some(degenerate_ball(&refs)),
    }
}

/// Circumcentre in the affine hull of `support`; `None` if affinely dependent.
pub(crate) fn circumball(support: &[&Point]) -> Option<RawBall> {
    let q0 = support.first()?;
    if support.len() == 1 {
        return Some((q0.coords().to_vec(), 0.0));
    }
    let vs: Vec<Vec<f64>> = support[1..].iter().map(|q| q.sub(q0)).collect();
    let gram: Vec<Vec<f64>> = vs
        .iter()
        .map(|a| vs.iter().map(|b| dot(a, b)).collect())
        .collect();
    let rhs: Vec<f64> = vs.iter().map(|v| 0.5 * dot(v, v)).collect();
    let lambda = solve(gram, rhs, 1e-12)?;
    let mut c = q0.coords().to_vec();
    for (l, v) in lambda.iter().zip(&vs) {
        for (ci, vi) in c.iter_mut().zip(v) {
            *ci += l * vi;
        }
    }
    let r = support
        .iter()
        .map(|q| {
            q.coords()
                .iter()
                .zip(&c)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);
    Some((c, r))
}

/// Fallback for numerically dependent support sets: drop one older support
/// point at a time and keep the smallest ball that still covers every support
/// point.
fn degenerate_ball(support: &[&Point]) -> RawBall {
    let newest = support.len() - 1;
    let mut best: Option<RawBall> = None;
    for skip in 0..newest {
        let reduced: Vec<&Point> = support
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, p)| *p)
            .collect();
        let cand = circumball(&reduced).unwrap_or_else(|| degenerate_ball(&reduced));
        let r = support
            .iter()
            .map(|q| {
                q.coords()
                    .iter()
                    .zip(&cand.0)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if best.as_ref().is_none_or(|b| r < b.1) {
            best = Some((cand.0, r));
        }
    }
    best.unwrap_or_else(|| (support[0].coords().to_vec(), 0.0))
}
