//! Data-derived weights: per-point weights from the distance to the nearest
//! point of the other class, and attribute weights from univariate
//! statistics.

use rayon::prelude::*;

use crate::dataset::{Label, LabeledDataset};
use crate::error::{Error, Result};
use crate::metrics::weighted_distance;
use crate::model::{AttributeWeights, MetricParams, WeightingScheme};
use crate::stats::{point_biserial, welch_p_values};

/// Lower clamp applied to every attribute weight.
pub const ATTRIBUTE_WEIGHT_FLOOR: f64 = 1e-6;

/// For every row of class `from`, the distance to the nearest row of the
/// other class, plus that row's index.
fn nearest_opposite(
    data: &LabeledDataset,
    metric: &MetricParams,
    from: &[usize],
    to: &[usize],
) -> Result<Vec<(f64, usize)>> {
    from.par_iter()
        .map(|&i| {
            let mut best = (f64::INFINITY, usize::MAX);
            for &j in to {
                let d = weighted_distance(data.row(i), data.row(j), metric)?;
                if d < best.0 {
                    best = (d, j);
                }
            }
            Ok(best)
        })
        .collect()
}

/// Point weights `a` (for the positive rows) and `b` (for the negative
/// rows), each the `d_{c,p}` distance to the nearest row of the opposite
/// class. Both vectors follow dataset order within their class.
pub fn opposite_class_distances(
    data: &LabeledDataset,
    metric: &MetricParams,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let positives = data.indices_of(Label::Positive);
    let negatives = data.indices_of(Label::Negative);
    if positives.is_empty() {
        return Err(Error::MissingClass(Label::Positive));
    }
    if negatives.is_empty() {
        return Err(Error::MissingClass(Label::Negative));
    }
    if metric.dim() != data.dim() {
        return Err(Error::DimensionMismatch {
            expected: data.dim(),
            found: metric.dim(),
        });
    }
    let a = nearest_opposite(data, metric, &positives, &negatives)?;
    if let Some((k, &(_, j))) = a.iter().enumerate().find(|(_, (d, _))| *d == 0.0) {
        return Err(Error::DuplicateCrossClassPoint {
            positive: positives[k],
            negative: j,
        });
    }
    let b = nearest_opposite(data, metric, &negatives, &positives)?;
    Ok((
        a.into_iter().map(|(d, _)| d).collect(),
        b.into_iter().map(|(d, _)| d).collect(),
    ))
}

/// Attribute weights `c` for the scheme, clamped to
/// `[ATTRIBUTE_WEIGHT_FLOOR, 1]`.
pub fn attribute_weights(data: &LabeledDataset, scheme: WeightingScheme) -> Result<Vec<f64>> {
    let raw = match scheme.attribute_weights {
        AttributeWeights::Unit => return Ok(vec![1.0; data.dim()]),
        AttributeWeights::OneMinusPValue => welch_p_values(data)?
            .into_iter()
            .map(|p| 1.0 - p)
            .collect::<Vec<_>>(),
        AttributeWeights::AbsCorrelation => point_biserial(data)?
            .into_iter()
            .map(f64::abs)
            .collect(),
    };
    Ok(raw
        .into_iter()
        .map(|c| c.clamp(ATTRIBUTE_WEIGHT_FLOOR, 1.0))
        .collect())
}
