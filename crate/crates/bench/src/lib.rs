//! Shared fixtures for the criterion benches.

use clustertest_core::{gen_clusterable, gen_far, gen_outliers, ConvexBody, PointSet};

pub fn unit_ball() -> ConvexBody {
    ConvexBody::ball(1.0).expect("positive radius")
}

pub fn clusterable(k: usize, n: usize, d: usize) -> PointSet {
    gen_clusterable(&unit_ball(), k, n, d, 1).expect("valid parameters").points
}

pub fn far(n: usize, d: usize, epsilon: f64) -> PointSet {
    gen_far(&unit_ball(), 1, n, d, epsilon, 1).expect("valid parameters").points
}

pub fn with_outliers(n: usize, epsilon: f64) -> PointSet {
    gen_outliers(&unit_ball(), 1, n, 2, epsilon, 50.0, 1).expect("valid parameters").points
}
