//! Clustering with outliers from a constant-size sample: draw uniformly,
//! then solve the small enclosing-ball problem on the sample.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{meb_seeded, Point, TOL};
use crate::helly::{ceil_count, farness_subset_fraction, witness_density};
use crate::kcenter::{gonzalez, k_center_exact_with_cap, KCENTER_EXACT_CAP};
use crate::sampler::{SampleSource, TesterParams};

/// Largest number of index draws a single run may request.
pub const MAX_DRAWS: u64 = 1_000_000_000;
/// Size of the independent sample used for the coverage estimate.
pub const HOLDOUT_CAP: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SampleMode {
    /// `(d+1)/ε^{d+1} · ln(1/δ)` for a single ball.
    OneCenter,
    /// `k(d+1)/c · ln(1/δ)` with the unconditional witness density `c(k, t)`.
    Unconditional { t: u64 },
    /// Caller-supplied sample size.
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterReport {
    pub centers: Vec<Point>,
    pub radii: Vec<f64>,
    /// Number of uniform draws `m`.
    pub sample_size: u64,
    pub distinct_points: usize,
    /// Fraction of an independent uniform sample covered by the reported balls.
    pub covered_fraction_estimate: f64,
    /// Whether the balls are an optimal k-center of the sample.
    pub exact: bool,
    pub sample_mode: SampleMode,
}

impl ClusterReport {
    pub fn max_radius(&self) -> f64 {
        self.radii.iter().cloned().fold(0.0, f64::max)
    }

    pub fn covers(&self, p: &Point) -> bool {
        self.centers
            .iter()
            .zip(&self.radii)
            .any(|(c, r)| p.dist(c) <= r + TOL)
    }
}

/// Sample size function `(ε, k, d, δ) -> m`.
pub type SampleSizeFn<'a> = &'a (dyn Fn(f64, usize, usize, f64) -> u64 + Sync);

#[derive(Clone, Copy)]
pub struct KClusterOptions<'a> {
    /// Annulus covering number used by the unconditional sample size.
    pub t: u64,
    /// Largest distinct-sample size solved exactly.
    pub exact_cap: usize,
    pub sample_size_fn: Option<SampleSizeFn<'a>>,
}

impl<'a> KClusterOptions<'a> {
    pub fn new(t: u64) -> Self {
        KClusterOptions {
            t,
            exact_cap: KCENTER_EXACT_CAP,
            sample_size_fn: None,
        }
    }
}

/// `m = ceil((d+1)/ε^{d+1} · ln(1/δ))`.
pub fn outlier_sample_size_1(d: usize, epsilon: f64, delta: f64) -> Result<u64> {
    let frac = farness_subset_fraction(d, epsilon)?;
    check_delta(delta)?;
    ceil_count((d as f64 + 1.0) * -delta.ln() / frac)
}

/// `m = ceil(k(d+1)/c(k,t) · ln(1/δ))`.
pub fn outlier_sample_size_k(k: usize, d: usize, t: u64, delta: f64) -> Result<u64> {
    let c = witness_density(k, t)?;
    check_delta(delta)?;
    ceil_count(k as f64 * (d as f64 + 1.0) * -delta.ln() / c)
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta <= 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "delta",
            value: delta,
        })
    }
}

/// `m` uniform draws with replacement; returns the distinct indices, sorted.
fn draw_distinct(n: usize, m: u64, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    if m > MAX_DRAWS {
        return Err(Error::CapExceeded {
            what: "sample draws",
            size: m as usize,
            cap: MAX_DRAWS as usize,
        });
    }
    let mut seen = BTreeSet::new();
    for _ in 0..m {
        seen.insert(rng.gen_range(0..n));
        if seen.len() == n {
            // Every index already drawn; the remaining draws cannot add points.
            break;
        }
    }
    Ok(seen.into_iter().collect())
}

fn holdout_fraction<S: SampleSource + ?Sized>(
    src: &S,
    report: &ClusterReport,
    m: u64,
    rng: &mut ChaCha8Rng,
) -> f64 {
    let h = m.min(HOLDOUT_CAP);
    let n = src.size();
    let hits = (0..h)
        .filter(|_| report.covers(&src.get(rng.gen_range(0..n))))
        .count();
    hits as f64 / h as f64
}

/// One ball covering all but about `εn` points.
pub fn cluster_1_outliers<S: SampleSource + ?Sized>(
    src: &S,
    params: &TesterParams,
) -> Result<ClusterReport> {
    params.validate()?;
    if src.size() == 0 {
        return Err(Error::Empty("sample source"));
    }
    let m = outlier_sample_size_1(src.dim(), params.epsilon, params.delta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let idx = draw_distinct(src.size(), m, &mut rng)?;
    let sample: Vec<Point> = idx.iter().map(|&i| src.get(i)).collect();
    let ball = meb_seeded(&sample, params.seed)?;
    let mut report = ClusterReport {
        centers: vec![ball.center],
        radii: vec![ball.radius],
        sample_size: m,
        distinct_points: sample.len(),
        covered_fraction_estimate: 0.0,
        exact: true,
        sample_mode: SampleMode::OneCenter,
    };
    report.covered_fraction_estimate = holdout_fraction(src, &report, m, &mut rng);
    Ok(report)
}

/// `k` balls covering all but about `εn` points. Exact on the sample when
/// the number of distinct sampled points is at most `opts.exact_cap`,
/// otherwise farthest-point seeding (flagged `exact: false`).
pub fn cluster_k_outliers<S: SampleSource + ?Sized>(
    src: &S,
    k: usize,
    params: &TesterParams,
    opts: &KClusterOptions<'_>,
) -> Result<ClusterReport> {
    params.validate()?;
    if k == 0 {
        return Err(Error::OutOfRange { name: "k", value: 0.0 });
    }
    if src.size() == 0 {
        return Err(Error::Empty("sample source"));
    }
    let d = src.dim();
    let (m, mode) = match opts.sample_size_fn {
        Some(f) => (f(params.epsilon, k, d, params.delta), SampleMode::Custom),
        None => (
            outlier_sample_size_k(k, d, opts.t, params.delta)?,
            SampleMode::Unconditional { t: opts.t },
        ),
    };
    if (k as u64) > m {
        return Err(Error::Infeasible(format!("k = {k} exceeds sample size {m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let idx = draw_distinct(src.size(), m, &mut rng)?;
    let sample: Vec<Point> = idx.iter().map(|&i| src.get(i)).collect();
    let exact = sample.len() <= opts.exact_cap;
    let sol = if exact {
        k_center_exact_with_cap(&sample, k, opts.exact_cap)?
    } else {
        gonzalez(&sample, k)?
    };
    let mut report = ClusterReport {
        centers: sol.centers,
        radii: sol.radii,
        sample_size: m,
        distinct_points: sample.len(),
        covered_fraction_estimate: 0.0,
        exact,
        sample_mode: mode,
    };
    report.covered_fraction_estimate = holdout_fraction(src, &report, m, &mut rng);
    Ok(report)
}
