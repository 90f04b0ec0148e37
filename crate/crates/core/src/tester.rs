//! One-sided testers for `(1, A)`- and `(k, G)`-clusterability.
//!
//! Both repeatedly draw a small subset and stop at the first subset that no
//! admissible placement of translates covers. A clusterable input therefore
//! never produces a witness.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{fits_in_k_translates, fits_in_translate, ConvexBody, Point};
use crate::helly::{budget_1, budget_k, epsilon_threshold};
use crate::sampler::{draw, SampleSource, TesterParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject {
        witness: Vec<Point>,
        iterations_used: u64,
    },
}

impl Verdict {
    pub fn is_reject(&self) -> bool {
        matches!(self, Verdict::Reject { .. })
    }

    pub fn witness(&self) -> Option<&[Point]> {
        match self {
            Verdict::Accept => None,
            Verdict::Reject { witness, .. } => Some(witness),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub verdict: Verdict,
    /// Iterations the budget allowed; fewer run when a witness turns up.
    pub iterations: u64,
    pub subset_size: usize,
    /// Set when `ε` lies at or below the proven threshold of the k-tester.
    pub guarantee_void: bool,
}

fn check_source<S: SampleSource + ?Sized>(src: &S, body: &ConvexBody, needed: usize) -> Result<()> {
    body.check_dim(src.dim())?;
    if src.size() < needed {
        return Err(Error::SourceTooSmall {
            needed,
            have: src.size(),
        });
    }
    Ok(())
}

fn run<S, F>(src: &S, seed: u64, iterations: u64, subset: usize, mut is_witness: F) -> Result<Verdict>
where
    S: SampleSource + ?Sized,
    F: FnMut(&[Point]) -> Result<bool>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for it in 1..=iterations {
        let w = draw(src, &mut rng, subset);
        if is_witness(&w)? {
            return Ok(Verdict::Reject {
                witness: w,
                iterations_used: it,
            });
        }
    }
    Ok(Verdict::Accept)
}

/// Tests whether the source fits in one translate of the symmetric body.
pub fn test_1_cluster<S: SampleSource + ?Sized>(
    src: &S,
    body: &ConvexBody,
    params: &TesterParams,
) -> Result<TestReport> {
    params.validate()?;
    let d = src.dim();
    check_source(src, body, d + 1)?;
    let budget = budget_1(d, params.epsilon, params.delta)?;
    let verdict = run(src, params.seed, budget.iterations, budget.subset_size, |w| {
        Ok(fits_in_translate(body, w)?.is_none())
    })?;
    Ok(TestReport {
        verdict,
        iterations: budget.iterations,
        subset_size: budget.subset_size,
        guarantee_void: false,
    })
}

/// Tests whether the source fits in `k` translates of `body`. `t` is the
/// annulus covering number of the body (see [`crate::geometry::covering_t`]).
/// Below the farness threshold the run still happens, flagged `guarantee_void`.
pub fn test_k_cluster<S: SampleSource + ?Sized>(
    src: &S,
    body: &ConvexBody,
    k: usize,
    params: &TesterParams,
    t: u64,
) -> Result<TestReport> {
    params.validate()?;
    if k == 0 {
        return Err(Error::OutOfRange { name: "k", value: 0.0 });
    }
    check_source(src, body, k + 1)?;
    let budget = budget_k(k, t, params.delta)?;
    let guarantee_void = params.epsilon <= epsilon_threshold(k, t)?;
    let verdict = run(src, params.seed, budget.iterations, budget.subset_size, |w| {
        Ok(fits_in_k_translates(body, w, k)?.is_none())
    })?;
    Ok(TestReport {
        verdict,
        iterations: budget.iterations,
        subset_size: budget.subset_size,
        guarantee_void,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PointSet;

    fn line(xs: &[f64]) -> PointSet {
        PointSet::new(1, xs.iter().map(|&x| Point::from([x])).collect()).unwrap()
    }

    #[test]
    fn accepts_points_in_one_ball() {
        let set = line(&[0.0, 0.3, 1.0, 1.9, 2.0]);
        let ball = ConvexBody::ball(1.0).unwrap();
        for seed in 0..50 {
            let p = TesterParams::new(0.1, 0.1, seed).unwrap();
            let r = test_1_cluster(&set, &ball, &p).unwrap();
            assert_eq!(r.verdict, Verdict::Accept);
        }
    }

    #[test]
    fn rejects_with_verifiable_witness() {
        let set = line(&[0.0, 10.0, 20.0, 30.0]);
        let ball = ConvexBody::ball(1.0).unwrap();
        let p = TesterParams::new(0.9, 0.01, 3).unwrap();
        let r = test_1_cluster(&set, &ball, &p).unwrap();
        let w = r.verdict.witness().unwrap();
        assert_eq!(w.len(), 2);
        assert!(fits_in_translate(&ball, w).unwrap().is_none());
    }

    #[test]
    fn k_tester_flags_void_guarantee() {
        let set = line(&[0.0, 0.5, 10.0, 10.5]);
        let ball = ConvexBody::ball(1.0).unwrap();
        let p = TesterParams::new(0.5, 0.9, 0).unwrap();
        let r = test_k_cluster(&set, &ball, 2, &p, 8).unwrap();
        assert!(r.guarantee_void);
        assert_eq!(r.verdict, Verdict::Accept);
        let p = TesterParams::new(0.99, 0.9, 0).unwrap();
        assert!(!test_k_cluster(&set, &ball, 2, &p, 8).unwrap().guarantee_void);
    }

    #[test]
    fn small_or_mismatched_source_is_error() {
        let set = line(&[0.0]);
        let ball = ConvexBody::ball(1.0).unwrap();
        let p = TesterParams::new(0.5, 0.5, 0).unwrap();
        assert!(matches!(
            test_1_cluster(&set, &ball, &p),
            Err(Error::SourceTooSmall { needed: 2, have: 1 })
        ));
        let bx = ConvexBody::axis_box(vec![1.0, 1.0]).unwrap();
        let set = line(&[0.0, 1.0, 2.0]);
        assert!(matches!(
            test_1_cluster(&set, &bx, &p),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
