//! Sample-based property testers for geometric clusterability.
//!
//! A point set is `(k, G)`-clusterable when `k` translates of the body `G`
//! cover it, and `ε`-far when at least `εn` points must be deleted first.
//! The testers here read a constant number of random points, never reject a
//! clusterable set, and reject far sets with probability at least `1 - δ`.

pub mod error;
pub mod gen;
pub mod geometry;
pub mod helly;
pub mod io;
pub mod kcenter;
pub mod oracle;
pub mod outliers;
pub mod sampler;
pub mod tester;

pub use error::{Error, Result};
pub use geometry::{
    contains, covering_t, fits_in_k_translates, fits_in_translate, meb, BodySpec, ConvexBody,
    CoveringEstimate, Point, PointSet,
};
pub use gen::{gen_clusterable, gen_far, gen_outliers, Instance, Truth};
pub use oracle::{farness, is_k_clusterable, max_coverage_1, FarnessResult};
pub use outliers::{cluster_1_outliers, cluster_k_outliers, ClusterReport, KClusterOptions};
pub use sampler::{CountingSource, SampleSource, TesterParams};
pub use tester::{test_1_cluster, test_k_cluster, TestReport, Verdict};
