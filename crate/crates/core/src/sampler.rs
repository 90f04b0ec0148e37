//! Black-box random access to the input point set.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, PointSet};

/// Random access to `n` points. `get` must be deterministic per index and
/// callable from several threads at once.
pub trait SampleSource: Sync {
    fn size(&self) -> usize;
    fn dim(&self) -> usize;
    fn get(&self, i: usize) -> Point;
}

impl SampleSource for PointSet {
    fn size(&self) -> usize {
        self.len()
    }

    fn dim(&self) -> usize {
        PointSet::dim(self)
    }

    fn get(&self, i: usize) -> Point {
        self[i].clone()
    }
}

impl<S: SampleSource + ?Sized> SampleSource for &S {
    fn size(&self) -> usize {
        (**self).size()
    }

    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn get(&self, i: usize) -> Point {
        (**self).get(i)
    }
}

/// Wraps a source and counts every `get`.
pub struct CountingSource<S> {
    inner: S,
    reads: AtomicU64,
}

impl<S: SampleSource> CountingSource<S> {
    pub fn new(inner: S) -> Self {
        CountingSource {
            inner,
            reads: AtomicU64::new(0),
        }
    }

    pub fn reads(&self) -> u64 {
        self.reads.load(Ordering::Relaxed)
    }
}

impl<S: SampleSource> SampleSource for CountingSource<S> {
    fn size(&self) -> usize {
        self.inner.size()
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn get(&self, i: usize) -> Point {
        self.reads.fetch_add(1, Ordering::Relaxed);
        self.inner.get(i)
    }
}

/// Proximity `ε`, failure probability `δ` and the RNG seed of one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TesterParams {
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
}

impl TesterParams {
    /// Default failure probability, matching the usual 2/3 success bound.
    pub const DEFAULT_DELTA: f64 = 1.0 / 3.0;

    pub fn new(epsilon: f64, delta: f64, seed: u64) -> Result<Self> {
        let p = TesterParams { epsilon, delta, seed };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::OutOfRange {
                name: "epsilon",
                value: self.epsilon,
            });
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::OutOfRange {
                name: "delta",
                value: self.delta,
            });
        }
        Ok(())
    }
}

/// `count` independent uniform draws (with replacement).
pub(crate) fn draw<S: SampleSource + ?Sized>(src: &S, rng: &mut ChaCha8Rng, count: usize) -> Vec<Point> {
    let n = src.size();
    (0..count).map(|_| src.get(rng.gen_range(0..n))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn counting_wrapper_counts() {
        let set = PointSet::new(1, vec![Point::from([1.0]), Point::from([2.0])]).unwrap();
        let src = CountingSource::new(&set);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let got = draw(&src, &mut rng, 5);
        assert_eq!(got.len(), 5);
        assert_eq!(src.reads(), 5);
    }

    #[test]
    fn params_validation() {
        assert!(TesterParams::new(0.5, 0.1, 0).is_ok());
        assert!(TesterParams::new(1.0, 1.0, 0).is_ok());
        assert!(TesterParams::new(0.0, 0.1, 0).is_err());
        assert!(TesterParams::new(0.5, 0.0, 0).is_err());
        assert!(TesterParams::new(1.5, 0.1, 0).is_err());
    }
}
