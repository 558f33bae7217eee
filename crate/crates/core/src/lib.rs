//! Binary classification with potential functions.
//!
//! A query `x` is scored by a signed sum of inverse-distance terms over the
//! labeled training points,
//!
//! ```text
//! I(x) = Σ_i (1+ε) a_i^β / d_{c,p}(x, y_i)^α  -  Σ_i (1-ε) b_i^β / d_{c,p}(x, z_i)^α
//! ```
//!
//! and classified `+1` when `I(x) >= 0`, `-1` otherwise. `y_i` are the
//! positive training points, `z_i` the negative ones, `d_{c,p}` an
//! attribute-weighted Minkowski distance, and `a_i`, `b_i` optional per-point
//! weights (distance to the nearest point of the other class).
//!
//! The crate also carries the experiment harness around the classifier:
//! checkerboard benchmark data, holdout and leave-one-out accuracy,
//! parameter sweeps and univariate feature selection.

pub mod cli;
pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod io;
pub mod metrics;
pub mod model;
pub mod potential;
pub mod special;
pub mod stats;
pub mod weighting;

pub use dataset::{Label, LabeledDataset};
pub use error::{Error, Result};
pub use evaluation::{
    checkerboard_grid, checkerboard_label, checkerboard_sample, grid_search, holdout_accuracy,
    loocv_accuracy, loocv_accuracy_with, synthetic_expression, Accuracy, LoocvOptions, Protocol,
    SweepCell, SweepGrid, SweepResult,
};
pub use metrics::{lp_distance, weighted_distance};
pub use model::{
    build_model, AttributeWeights, MetricParams, PointWeights, PotentialModel, PotentialParams,
    WeightingScheme,
};
pub use potential::{
    classify, classify_batch, classify_rows, decision_raster, evaluate, knn_classify,
    raster_centers, Classification, Raster,
};
pub use stats::{point_biserial, select_top_features, welch_p_values, welch_t_test, FeatureStats};
pub use weighting::{attribute_weights, opposite_class_distances};
