//! Closed-form Helly-type quantities: the fractional Helly fraction, sample
//! counts for both testers, the k-tester farness threshold and Danzer's
//! piercing numbers for boxes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest count we hand out; beyond this `f64` no longer represents integers exactly.
const MAX_COUNT: f64 = 9_007_199_254_740_992.0; // 2^53

/// `h(d, m)`: every `h`-subfamily of boxes being `m`-pierceable forces the
/// whole family to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PiercingNumber {
    Finite(u64),
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TesterBudget {
    /// Number of sampled subsets.
    pub iterations: u64,
    /// Points per subset: `d + 1` or `k + 1`.
    pub subset_size: usize,
    /// Lower bound on the fraction of subsets that are witnesses on far inputs.
    pub witness_density: f64,
}

fn check_unit(name: &'static str, v: f64, closed_low: bool) -> Result<()> {
    let ok = if closed_low {
        (0.0..=1.0).contains(&v)
    } else {
        v > 0.0 && v <= 1.0
    };
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value: v })
    }
}

fn check_positive(name: &'static str, v: usize) -> Result<()> {
    if v == 0 {
        Err(Error::OutOfRange { name, value: 0.0 })
    } else {
        Ok(())
    }
}

/// `ceil(x)` with at least one iteration. Values within `1e-9` relative of an
/// integer are snapped to it so `ln` rounding cannot push `8.000…01` to 9.
pub(crate) fn ceil_count(x: f64) -> Result<u64> {
    if !x.is_finite() || x > MAX_COUNT {
        return Err(Error::Overflow(format!("{x:e}")));
    }
    let r = x.round();
    let c = if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x.ceil()
    };
    Ok((c as u64).max(1))
}

/// `β(d, α) = 1 - (1 - α)^{1/(d+1)}`.
pub fn fractional_helly_beta(d: usize, alpha: f64) -> Result<f64> {
    check_positive("d", d)?;
    check_unit("alpha", alpha, false)?;
    Ok(1.0 - (1.0 - alpha).powf(1.0 / (d as f64 + 1.0)))
}

/// Fraction `ε^{d+1}` of `(d+1)`-subsets that cannot share a translate when
/// `εn` points must be removed.
pub fn farness_subset_fraction(d: usize, epsilon: f64) -> Result<f64> {
    check_positive("d", d)?;
    check_unit("epsilon", epsilon, false)?;
    Ok(epsilon.powi(d as i32 + 1))
}

/// Iterations of the one-translate tester: `ceil(ln(1/δ) / ε^{d+1})`.
pub fn sample_count_1(d: usize, epsilon: f64, delta: f64) -> Result<u64> {
    let frac = farness_subset_fraction(d, epsilon)?;
    check_unit("delta", delta, false)?;
    ceil_count(-delta.ln() / frac)
}

/// Farness threshold `ε'(k, t) = 1 - 1/(2(t+1)(k+1))` above which the
/// k-translate tester is guaranteed.
pub fn epsilon_threshold(k: usize, t: u64) -> Result<f64> {
    Ok(1.0 - 1.0 / bucket_factor(k, t)?)
}

/// Witness density `c = (1/(2(t+1)(k+1)))^{k+1}`.
pub fn witness_density(k: usize, t: u64) -> Result<f64> {
    Ok(bucket_factor(k, t)?.powi(k as i32 + 1).recip())
}

fn bucket_factor(k: usize, t: u64) -> Result<f64> {
    check_positive("k", k)?;
    if t == 0 {
        return Err(Error::OutOfRange { name: "t", value: 0.0 });
    }
    Ok(2.0 * (t as f64 + 1.0) * (k as f64 + 1.0))
}

/// Iterations of the k-translate tester: `ceil(ln(1/δ) / c)`.
pub fn sample_count_k(k: usize, t: u64, delta: f64) -> Result<u64> {
    check_unit("delta", delta, false)?;
    // (2(t+1)(k+1))^{k+1} directly, so moderately large k, t keep full precision.
    let inv_c = bucket_factor(k, t)?.powi(k as i32 + 1);
    ceil_count(-delta.ln() * inv_c)
}

pub fn budget_1(d: usize, epsilon: f64, delta: f64) -> Result<TesterBudget> {
    Ok(TesterBudget {
        iterations: sample_count_1(d, epsilon, delta)?,
        subset_size: d + 1,
        witness_density: farness_subset_fraction(d, epsilon)?,
    })
}

pub fn budget_k(k: usize, t: u64, delta: f64) -> Result<TesterBudget> {
    Ok(TesterBudget {
        iterations: sample_count_k(k, t, delta)?,
        subset_size: k + 1,
        witness_density: witness_density(k, t)?,
    })
}

/// Danzer's piercing numbers for axis-parallel boxes.
pub fn piercing_helly_number(d: usize, m: usize) -> Result<PiercingNumber> {
    check_positive("d", d)?;
    check_positive("m", m)?;
    let (d64, m64) = (d as u64, m as u64);
    Ok(match (d, m) {
        (_, 1) => PiercingNumber::Finite(2),
        (1, _) => PiercingNumber::Finite(m64 + 1),
        (_, 2) if d % 2 == 1 => PiercingNumber::Finite(3 * d64),
        (_, 2) => PiercingNumber::Finite(3 * d64 - 1),
        (2, 3) => PiercingNumber::Finite(16),
        _ => PiercingNumber::Unbounded,
    })
}
