//! Seeded synthetic instances whose structure is known by construction.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, Point, PointSet};
use crate::helly::ceil_count;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Truth {
    Clusterable {
        centers: Vec<Point>,
    },
    Far {
        epsilon: f64,
        /// Equals the exact farness of the instance.
        spike_count: usize,
    },
    Outliers {
        centers: Vec<Point>,
        outlier_indices: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub points: PointSet,
    pub truth: Truth,
}

fn check_common(body: &ConvexBody, k: usize, n: usize, d: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::OutOfRange { name: "k", value: 0.0 });
    }
    if n == 0 {
        return Err(Error::OutOfRange { name: "n", value: 0.0 });
    }
    if d == 0 {
        return Err(Error::OutOfRange { name: "d", value: 0.0 });
    }
    body.check_dim(d)
}

/// Uniform point of `center + body`, proposing from the bounding box.
fn sample_in(body: &ConvexBody, center: &[f64], ext: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let x: Vec<f64> = ext.iter().map(|&e| rng.gen_range(-e..=e)).collect();
        if body.contains_offset(&x) {
            return x.iter().zip(center).map(|(a, c)| a + c).collect();
        }
    }
}

fn planted(body: &ConvexBody, k: usize, n: usize, d: usize, rng: &mut ChaCha8Rng) -> (Vec<Point>, Vec<Point>) {
    let half = 2.0 * body.diameter() * k as f64;
    let centers: Vec<Vec<f64>> = (0..k)
        .map(|_| (0..d).map(|_| rng.gen_range(-half..=half)).collect())
        .collect();
    let ext = body.bounding_half_extents(d);
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let c = &centers[rng.gen_range(0..k)];
        let x = sample_in(body, c, &ext, rng);
        // Thin by overlap multiplicity so the result is uniform on the union.
        let covering = centers
            .iter()
            .filter(|c| {
                let off: Vec<f64> = x.iter().zip(c.iter()).map(|(a, b)| a - b).collect();
                body.contains_offset(&off)
            })
            .count()
            .max(1);
        if covering == 1 || rng.gen_range(0..covering) == 0 {
            points.push(Point::new(x).expect("finite"));
        }
    }
    let centers = centers.into_iter().map(|c| Point::new(c).expect("finite")).collect();
    (centers, points)
}

/// `n` points drawn uniformly from the union of `k` random translates.
pub fn gen_clusterable(body: &ConvexBody, k: usize, n: usize, d: usize, seed: u64) -> Result<Instance> {
    check_common(body, k, n, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (centers, points) = planted(body, k, n, d, &mut rng);
    Ok(Instance {
        points: PointSet::new(d, points)?,
        truth: Truth::Clusterable { centers },
    })
}

/// Lattice anchors with spacing `step`, in a near-cubic block.
fn lattice(count: usize, d: usize, step: f64) -> Vec<Vec<f64>> {
    let mut side = 1usize;
    while side.checked_pow(d as u32).is_some_and(|v| v < count) {
        side += 1;
    }
    (0..count)
        .map(|mut i| {
            (0..d)
                .map(|_| {
                    let c = (i % side) as f64 * step;
                    i /= side;
                    c
                })
                .collect()
        })
        .collect()
}

/// `ceil(εn)` isolated spikes plus `k` equal groups, each group inside one
/// translate. All components are more than `2·diam` apart, so a translate
/// meets at most one of them and the exact farness is the spike count.
pub fn gen_far(body: &ConvexBody, k: usize, n: usize, d: usize, epsilon: f64, seed: u64) -> Result<Instance> {
    check_common(body, k, n, d)?;
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::OutOfRange { name: "epsilon", value: epsilon });
    }
    let spikes = ceil_count(epsilon * n as f64)? as usize;
    if epsilon * n as f64 + 1e-9 < (k + 1) as f64 {
        return Err(Error::Infeasible(format!(
            "epsilon*n = {} must be at least k+1 = {}",
            epsilon * n as f64,
            k + 1
        )));
    }
    let grouped = n.saturating_sub(spikes);
    if grouped < k {
        return Err(Error::Infeasible(format!(
            "{grouped} non-spike points cannot fill {k} groups"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let diam = body.diameter();
    let ext = body.bounding_half_extents(d);
    let anchors = lattice(k + spikes, d, 4.0 * diam);
    let mut points = Vec::with_capacity(n);
    for g in 0..k {
        let size = grouped / k + usize::from(g < grouped % k);
        for _ in 0..size {
            points.push(Point::new(sample_in(body, &anchors[g], &ext, &mut rng)).expect("finite"));
        }
    }
    points.extend(anchors[k..].iter().map(|a| Point::new(a.clone()).expect("finite")));
    points.shuffle(&mut rng);
    Ok(Instance {
        points: PointSet::new(d, points)?,
        truth: Truth::Far {
            epsilon,
            spike_count: spikes,
        },
    })
}

/// A clusterable instance of `n - floor(εn)` points followed by `floor(εn)`
/// outliers, each at distance at least `spread` from every planted centre.
pub fn gen_outliers(
    body: &ConvexBody,
    k: usize,
    n: usize,
    d: usize,
    epsilon: f64,
    spread: f64,
    seed: u64,
) -> Result<Instance> {
    check_common(body, k, n, d)?;
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::OutOfRange { name: "epsilon", value: epsilon });
    }
    let diam = body.diameter();
    if !(spread > 2.0 * diam) || !spread.is_finite() {
        return Err(Error::Infeasible(format!(
            "spread {spread} must exceed twice the body diameter {}",
            2.0 * diam
        )));
    }
    let raw = epsilon * n as f64;
    let outliers = if (raw - raw.round()).abs() <= 1e-9 * raw.max(1.0) {
        raw.round()
    } else {
        raw.floor()
    } as usize;
    if outliers >= n {
        return Err(Error::Infeasible("no inliers left".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (centers, mut points) = planted(body, k, n - outliers, d, &mut rng);
    let half = 2.0 * diam * k as f64 + 2.0 * spread;
    let mut outlier_indices = Vec::with_capacity(outliers);
    while outlier_indices.len() < outliers {
        let x = Point::new((0..d).map(|_| rng.gen_range(-half..=half)).collect()).expect("finite");
        if centers.iter().all(|c| c.dist(&x) >= spread) {
            outlier_indices.push(points.len());
            points.push(x);
        }
    }
    Ok(Instance {
        points: PointSet::new(d, points)?,
        truth: Truth::Outliers {
            centers,
            outlier_indices,
        },
    })
}
