//! Evaluation of the potential
//!
//! ```text
//! I(x) = Σ_i (1+ε) a_i^β / d(x, y_i)^α  -  Σ_i (1-ε) b_i^β / d(x, z_i)^α
//! ```
//!
//! with `d = d_{c,p}`, and everything built on it: classification, batch
//! classification, decision rasters, plus the k-nearest-neighbor baseline.
//!
//! Terms are summed in log space. With `s_i = Σ_j c_j |x_j - y_ij|^p` each
//! term is `exp(ln w_i - (α/p) ln s_i)`; the largest exponent is factored
//! out before summing, so large `α` (the nearest-neighbor regime) neither
//! overflows nor underflows. A query at zero distance from a training point
//! short-circuits to an infinite sentinel of that point's class.

use rayon::prelude::*;

use crate::dataset::{Label, LabeledDataset};
use crate::error::{Error, Result};
use crate::metrics::{weighted_distance, weighted_power_sum};
use crate::model::{MetricParams, PotentialModel};

/// Label and potential of a single query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub label: Label,
    /// `I(x)`. `±∞` only when the query coincides with a training point;
    /// otherwise finite, saturating at `±f64::MAX` and never rounding a
    /// nonzero value to zero.
    pub potential: f64,
    pub exact_hit: bool,
}

/// Per-query scratch space: `ln s_i` for every training point.
#[derive(Debug, Default)]
pub(crate) struct Scratch {
    pub(crate) ln_s_pos: Vec<f64>,
    pub(crate) ln_s_neg: Vec<f64>,
}

fn fill_log_sums(points: &[f64], dim: usize, x: &[f64], metric: &MetricParams, out: &mut Vec<f64>) -> bool {
    out.clear();
    let mut hit = false;
    for point in points.chunks_exact(dim) {
        let s = weighted_power_sum(x, point, metric.weights(), metric.p());
        hit |= s == 0.0;
        out.push(s.ln());
    }
    hit
}

/// Fills `scratch` with the log power sums for `x`. Returns the class of a
/// coinciding training point, if any.
pub(crate) fn probe(model: &PotentialModel, x: &[f64], scratch: &mut Scratch) -> Result<Option<Label>> {
    if x.len() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: x.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("query must be finite".into()));
    }
    let dim = model.dim();
    let metric = model.metric();
    let hit_pos = fill_log_sums(model.positive_buffer(), dim, x, metric, &mut scratch.ln_s_pos);
    let hit_neg = fill_log_sums(model.negative_buffer(), dim, x, metric, &mut scratch.ln_s_neg);
    match (hit_pos, hit_neg) {
        (true, true) => Err(Error::AmbiguousSingularity),
        (true, false) => Ok(Some(Label::Positive)),
        (false, true) => Ok(Some(Label::Negative)),
        (false, false) => Ok(None),
    }
}

/// Returns `(Σ_pos e^{l_i - M} - Σ_neg e^{l_i - M}, M)` with
/// `l_i = ln w_i - exponent · ln s_i` and `M = max l_i`.
pub(crate) fn scaled_sum(
    log_weights_pos: &[f64],
    ln_s_pos: &[f64],
    log_weights_neg: &[f64],
    ln_s_neg: &[f64],
    exponent: f64,
) -> (f64, f64) {
    let mut max = f64::NEG_INFINITY;
    for (w, s) in log_weights_pos.iter().zip(ln_s_pos).chain(log_weights_neg.iter().zip(ln_s_neg)) {
        max = max.max(w - exponent * s);
    }
    let mut pos = 0.0;
    for (w, s) in log_weights_pos.iter().zip(ln_s_pos) {
        pos += (w - exponent * s - max).exp();
    }
    let mut neg = 0.0;
    for (w, s) in log_weights_neg.iter().zip(ln_s_neg) {
        neg += (w - exponent * s - max).exp();
    }
    (pos - neg, max)
}

pub(crate) fn finish(diff: f64, log_scale: f64) -> Classification {
    let label = if diff >= 0.0 { Label::Positive } else { Label::Negative };
    let potential = if diff == 0.0 {
        0.0
    } else {
        let magnitude = (log_scale + diff.abs().ln()).exp();
        magnitude.clamp(f64::MIN_POSITIVE, f64::MAX).copysign(diff)
    };
    Classification {
        label,
        potential,
        exact_hit: false,
    }
}

pub(crate) fn hit(label: Label) -> Classification {
    Classification {
        label,
        potential: match label {
            Label::Positive => f64::INFINITY,
            Label::Negative => f64::NEG_INFINITY,
        },
        exact_hit: true,
    }
}

fn classify_with(model: &PotentialModel, x: &[f64], scratch: &mut Scratch) -> Result<Classification> {
    if let Some(label) = probe(model, x, scratch)? {
        return Ok(hit(label));
    }
    let exponent = model.params().alpha() / model.metric().p();
    let (diff, scale) = scaled_sum(
        &model.log_weights_pos,
        &scratch.ln_s_pos,
        &model.log_weights_neg,
        &scratch.ln_s_neg,
        exponent,
    );
    Ok(finish(diff, scale))
}

/// The potential `I(x)`.
pub fn evaluate(model: &PotentialModel, x: &[f64]) -> Result<f64> {
    classify(model, x).map(|c| c.potential)
}

/// Classifies `x` by the sign of `I(x)`; `I(x) = 0` goes to `+1`.
pub fn classify(model: &PotentialModel, x: &[f64]) -> Result<Classification> {
    classify_with(model, x, &mut Scratch::default())
}

fn first_error(results: Vec<Result<Classification>>) -> Result<Vec<Classification>> {
    results
        .into_iter()
        .enumerate()
        .map(|(index, r)| {
            r.map_err(|e| Error::Batch {
                index,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Classifies every query, in parallel, preserving order. On failure the
/// error names the lowest failing index.
pub fn classify_batch<P: AsRef<[f64]> + Sync>(model: &PotentialModel, xs: &[P]) -> Result<Vec<Classification>> {
    let results = xs
        .par_iter()
        .map_init(Scratch::default, |scratch, x| classify_with(model, x.as_ref(), scratch))
        .collect();
    first_error(results)
}

/// Classifies every row of `data` (labels are ignored).
pub fn classify_rows(model: &PotentialModel, data: &LabeledDataset) -> Result<Vec<Classification>> {
    if data.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: data.dim(),
        });
    }
    let results = data
        .features()
        .par_chunks_exact(data.dim())
        .map_init(Scratch::default, |scratch, x| classify_with(model, x, scratch))
        .collect();
    first_error(results)
}

/// A row-major grid of predicted labels. Row 0 is the top of the region
/// (largest second coordinate).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub cells: Vec<Label>,
}

impl Raster {
    pub fn get(&self, row: usize, col: usize) -> Label {
        self.cells[row * self.width + col]
    }
}

/// Cell-center sample points of a `width × height` grid over `[lo, hi)`,
/// in raster order: rows from the top (largest y) down, columns left to
/// right.
pub fn raster_centers(lo: [f64; 2], hi: [f64; 2], resolution: (usize, usize)) -> Result<Vec<[f64; 2]>> {
    let (width, height) = resolution;
    let finite = lo.iter().chain(&hi).all(|v| v.is_finite());
    if !finite || width == 0 || height == 0 || !(lo[0] < hi[0] && lo[1] < hi[1]) {
        return Err(Error::DegenerateBounds);
    }
    let dx = (hi[0] - lo[0]) / width as f64;
    let dy = (hi[1] - lo[1]) / height as f64;
    let mut centers = Vec::with_capacity(width * height);
    for row in 0..height {
        let y = lo[1] + (height - 1 - row) as f64 * dy + 0.5 * dy;
        for col in 0..width {
            centers.push([lo[0] + col as f64 * dx + 0.5 * dx, y]);
        }
    }
    Ok(centers)
}

/// Classifies the cell centers of a grid over `[lo, hi)` for a
/// two-dimensional model.
pub fn decision_raster(
    model: &PotentialModel,
    lo: [f64; 2],
    hi: [f64; 2],
    resolution: (usize, usize),
) -> Result<Raster> {
    if model.dim() != 2 {
        return Err(Error::NotTwoDimensional(model.dim()));
    }
    let centers = raster_centers(lo, hi, resolution)?;
    let cells = classify_batch(model, &centers)?.into_iter().map(|c| c.label).collect();
    Ok(Raster {
        width: resolution.0,
        height: resolution.1,
        cells,
    })
}

/// Majority label among the `k` nearest rows of `data` under `metric`.
/// Equal distances are ordered by row index; `k` must be odd.
pub fn knn_classify(data: &LabeledDataset, x: &[f64], k: usize, metric: &MetricParams) -> Result<Label> {
    if k == 0 || k.is_multiple_of(2) || k > data.len() {
        return Err(Error::InvalidK {
            k,
            reason: format!("must be odd and lie in 1..={}", data.len()),
        });
    }
    let mut neighbors = data
        .rows()
        .enumerate()
        .map(|(i, row)| weighted_distance(x, row, metric).map(|d| (d, i)))
        .collect::<Result<Vec<_>>>()?;
    neighbors.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let votes: i32 = neighbors[..k].iter().map(|&(_, i)| data.label(i).sign()).sum();
    Ok(if votes > 0 { Label::Positive } else { Label::Negative })
}
