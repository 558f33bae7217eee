//! Parameter types, the frozen potential model and its construction from a
//! labeled dataset.

use crate::dataset::{Label, LabeledDataset};
use crate::error::{Error, Result};
use crate::metrics::check_exponent;
use crate::weighting::{attribute_weights, opposite_class_distances};

/// Exponent `p` and attribute weights `c` of the distance `d_{c,p}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricParams {
    p: f64,
    c: Vec<f64>,
}

impl MetricParams {
    pub fn new(p: f64, c: Vec<f64>) -> Result<Self> {
        check_exponent(p)?;
        if c.is_empty() {
            return Err(Error::InvalidParameter("attribute weights are empty".into()));
        }
        if c.iter().any(|&w| !(w.is_finite() && w >= 0.0)) {
            return Err(Error::InvalidParameter(
                "attribute weights must be finite and non-negative".into(),
            ));
        }
        if c.iter().all(|&w| w == 0.0) {
            return Err(Error::InvalidParameter(
                "at least one attribute weight must be positive".into(),
            ));
        }
        Ok(MetricParams { p, c })
    }

    /// Plain `ℓᵖ` metric in `dim` dimensions.
    pub fn unit(dim: usize, p: f64) -> Result<Self> {
        Self::new(p, vec![1.0; dim])
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn weights(&self) -> &[f64] {
        &self.c
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }
}

/// Distance exponent `α`, point-weight exponent `β` and class bias `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    alpha: f64,
    beta: f64,
    epsilon: f64,
}

impl PotentialParams {
    pub fn new(alpha: f64, beta: f64, epsilon: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} must be > 0")));
        }
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::InvalidParameter(format!("beta = {beta} must be >= 0")));
        }
        if !(0.0..1.0).contains(&epsilon) {
            return Err(Error::InvalidParameter(format!(
                "epsilon = {epsilon} must lie in [0, 1)"
            )));
        }
        Ok(PotentialParams {
            alpha,
            beta,
            epsilon,
        })
    }

    /// `β = ε = 0`: the unit-weight potential with distance exponent `alpha`.
    pub fn unweighted(alpha: f64) -> Result<Self> {
        Self::new(alpha, 0.0, 0.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

impl Default for PotentialParams {
    fn default() -> Self {
        PotentialParams {
            alpha: 4.5,
            beta: 0.0,
            epsilon: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PointWeights {
    #[default]
    Unit,
    /// Distance to the nearest training point of the other class.
    OppositeClassDistance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum AttributeWeights {
    #[default]
    Unit,
    /// `1 - p_j` with `p_j` the attribute's Welch p-value.
    OneMinusPValue,
    /// `|r_j|`, the absolute point-biserial correlation.
    AbsCorrelation,
}

/// Selects how the per-point weights `a, b` and attribute weights `c` are
/// derived from the training data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct WeightingScheme {
    pub point_weights: PointWeights,
    pub attribute_weights: AttributeWeights,
}

impl WeightingScheme {
    pub const UNIT: WeightingScheme = WeightingScheme {
        point_weights: PointWeights::Unit,
        attribute_weights: AttributeWeights::Unit,
    };

    /// Opposite-class point weights with `1 - p` attribute weights.
    pub const FULL: WeightingScheme = WeightingScheme {
        point_weights: PointWeights::OppositeClassDistance,
        attribute_weights: AttributeWeights::OneMinusPValue,
    };

    pub fn new(point_weights: PointWeights, attribute_weights: AttributeWeights) -> Self {
        WeightingScheme {
            point_weights,
            attribute_weights,
        }
    }
}

/// A frozen potential classifier.
///
/// Holds the positive points `y_i` and negative points `z_i` with their
/// weights `a_i`, `b_i`, the metric and the exponents. The per-term log
/// weights `ln((1±ε) w^β)` are precomputed at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialModel {
    dim: usize,
    positives: Vec<f64>,
    negatives: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
    metric: MetricParams,
    params: PotentialParams,
    single_class: bool,
    pub(crate) log_weights_pos: Vec<f64>,
    pub(crate) log_weights_neg: Vec<f64>,
}

pub(crate) fn log_weights(weights: &[f64], beta: f64, factor: f64) -> Vec<f64> {
    let ln_factor = factor.ln();
    weights
        .iter()
        .map(|&w| ln_factor + beta * w.ln())
        .collect()
}

impl PotentialModel {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        dim: usize,
        positives: Vec<f64>,
        negatives: Vec<f64>,
        a: Vec<f64>,
        b: Vec<f64>,
        metric: MetricParams,
        params: PotentialParams,
        single_class: bool,
    ) -> Result<Self> {
        if metric.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: metric.dim(),
            });
        }
        for (points, weights) in [(&positives, &a), (&negatives, &b)] {
            if points.len() != weights.len() * dim {
                return Err(Error::InvalidParameter(format!(
                    "{} coordinates for {} weights in dimension {dim}",
                    points.len(),
                    weights.len()
                )));
            }
            if points.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter("training points must be finite".into()));
            }
            if weights.iter().any(|&w| !(w.is_finite() && w > 0.0)) {
                return Err(Error::InvalidParameter(
                    "point weights must be finite and > 0".into(),
                ));
            }
        }
        let log_weights_pos = log_weights(&a, params.beta, 1.0 + params.epsilon);
        let log_weights_neg = log_weights(&b, params.beta, 1.0 - params.epsilon);
        Ok(PotentialModel {
            dim,
            positives,
            negatives,
            a,
            b,
            metric,
            params,
            single_class,
            log_weights_pos,
            log_weights_neg,
        })
    }

    /// Builds a model from row-major point buffers. Both classes must be
    /// non-empty.
    pub fn from_parts(
        dim: usize,
        positives: Vec<f64>,
        negatives: Vec<f64>,
        a: Vec<f64>,
        b: Vec<f64>,
        metric: MetricParams,
        params: PotentialParams,
    ) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::MissingClass(Label::Positive));
        }
        if b.is_empty() {
            return Err(Error::MissingClass(Label::Negative));
        }
        Self::assemble(dim, positives, negatives, a, b, metric, params, false)
    }

    /// A model with training points of one class only. Its potential has a
    /// single sign, so every query receives `label`.
    pub fn single_class(
        dim: usize,
        label: Label,
        points: Vec<f64>,
        weights: Vec<f64>,
        metric: MetricParams,
        params: PotentialParams,
    ) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::MissingClass(label));
        }
        let (positives, negatives, a, b) = match label {
            Label::Positive => (points, Vec::new(), weights, Vec::new()),
            Label::Negative => (Vec::new(), points, Vec::new(), weights),
        };
        Self::assemble(dim, positives, negatives, a, b, metric, params, true)
    }

    /// Freezes `data` with caller-supplied weights. `a` and `b` follow the
    /// dataset order of the positive and negative rows respectively.
    pub fn from_dataset(
        data: &LabeledDataset,
        metric: MetricParams,
        a: Vec<f64>,
        b: Vec<f64>,
        params: PotentialParams,
    ) -> Result<Self> {
        let gather = |label| -> Vec<f64> {
            data.indices_of(label)
                .into_iter()
                .flat_map(|i| data.row(i).iter().copied())
                .collect()
        };
        Self::from_parts(
            data.dim(),
            gather(Label::Positive),
            gather(Label::Negative),
            a,
            b,
            metric,
            params,
        )
    }

    /// The same model with the class roles exchanged and `ε` negated, so
    /// the swapped model's potential is exactly `-I(x)`.
    pub fn with_roles_swapped(&self) -> PotentialModel {
        let params = PotentialParams {
            epsilon: -self.params.epsilon,
            ..self.params
        };
        PotentialModel {
            dim: self.dim,
            positives: self.negatives.clone(),
            negatives: self.positives.clone(),
            a: self.b.clone(),
            b: self.a.clone(),
            metric: self.metric.clone(),
            params,
            single_class: self.single_class,
            log_weights_pos: self.log_weights_neg.clone(),
            log_weights_neg: self.log_weights_pos.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn positives(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.positives.chunks_exact(self.dim)
    }

    pub fn negatives(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.negatives.chunks_exact(self.dim)
    }

    pub(crate) fn positive_buffer(&self) -> &[f64] {
        &self.positives
    }

    pub(crate) fn negative_buffer(&self) -> &[f64] {
        &self.negatives
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn metric(&self) -> &MetricParams {
        &self.metric
    }

    pub fn params(&self) -> &PotentialParams {
        &self.params
    }

    pub fn is_single_class(&self) -> bool {
        self.single_class
    }
}

/// Computes the attribute weights and point weights selected by `scheme`
/// from `data` and freezes them into a model.
pub fn build_model(
    data: &LabeledDataset,
    p: f64,
    params: PotentialParams,
    scheme: WeightingScheme,
) -> Result<PotentialModel> {
    for label in [Label::Positive, Label::Negative] {
        if data.count(label) == 0 {
            return Err(Error::MissingClass(label));
        }
    }
    let metric = MetricParams::new(p, attribute_weights(data, scheme)?)?;
    let (a, b) = match scheme.point_weights {
        PointWeights::Unit => (
            vec![1.0; data.count(Label::Positive)],
            vec![1.0; data.count(Label::Negative)],
        ),
        PointWeights::OppositeClassDistance => opposite_class_distances(data, &metric)?,
    };
    PotentialModel::from_dataset(data, metric, a, b, params)
}
