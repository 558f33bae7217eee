//! Minkowski-type distances.
//!
//! The plain `ℓᵖ` distance `(Σ |x_j - y_j|^p)^(1/p)` and its attribute-weighted
//! form `(Σ c_j |x_j - y_j|^p)^(1/p)`. Both accumulate in index order. The
//! potential evaluation works with the un-rooted power sum directly, since
//! `d^α = (Σ ...)^(α/p)` and the root is never needed there.

use crate::error::{Error, Result};
use crate::model::MetricParams;

/// `|d|^p`, with the common exponents done without `powf`.
#[inline]
pub(crate) fn abs_pow(diff: f64, p: f64) -> f64 {
    if p == 2.0 {
        diff * diff
    } else if p == 1.0 {
        diff.abs()
    } else {
        diff.abs().powf(p)
    }
}

#[inline]
fn root(sum: f64, p: f64) -> f64 {
    if p == 2.0 {
        sum.sqrt()
    } else if p == 1.0 {
        sum
    } else {
        sum.powf(p.recip())
    }
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponent(p))
    }
}

fn check_dims(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(())
}

/// Weighted power sum `Σ c_j |x_j - y_j|^p` without validation.
#[inline]
pub(crate) fn weighted_power_sum(x: &[f64], y: &[f64], c: &[f64], p: f64) -> f64 {
    let mut sum = 0.0;
    for ((xi, yi), ci) in x.iter().zip(y).zip(c) {
        sum += ci * abs_pow(xi - yi, p);
    }
    sum
}

/// The `ℓᵖ` distance between `x` and `y`.
pub fn lp_distance(x: &[f64], y: &[f64], p: f64) -> Result<f64> {
    check_dims(x, y)?;
    check_exponent(p)?;
    let mut sum = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        sum += abs_pow(xi - yi, p);
    }
    Ok(root(sum, p))
}

/// The attribute-weighted distance `d_{c,p}(x, y)`.
pub fn weighted_distance(x: &[f64], y: &[f64], metric: &MetricParams) -> Result<f64> {
    check_dims(x, y)?;
    if metric.dim() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: metric.dim(),
            found: x.len(),
        });
    }
    Ok(root(
        weighted_power_sum(x, y, metric.weights(), metric.p()),
        metric.p(),
    ))
}
