//! Experiment harness: checkerboard data, holdout and leave-one-out
//! accuracy, and parameter sweeps.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::dataset::{Label, LabeledDataset};
use crate::error::{Error, Result};
use crate::model::{
    build_model, log_weights, MetricParams, PointWeights, PotentialModel, PotentialParams,
    WeightingScheme,
};
use crate::potential::{classify, classify_rows, finish, hit, probe, scaled_sum, Scratch};
use crate::stats::select_top_features;
use crate::weighting::{attribute_weights, opposite_class_distances};

/// Generator behind every seeded dataset in this crate.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.9, seed_from_u64)";

/// Side length of the checkerboard `[0, 4)²`, made of unit cells.
pub const BOARD_SIZE: f64 = 4.0;

/// Correct predictions out of a total, kept exact until reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Accuracy {
    pub correct: usize,
    pub total: usize,
}

impl Accuracy {
    pub fn value(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.correct as f64 / self.total as f64
        }
    }

    /// Exact comparison of the two fractions.
    pub fn cmp_value(&self, other: &Accuracy) -> Ordering {
        (self.correct as u128 * other.total as u128).cmp(&(other.correct as u128 * self.total as u128))
    }
}

/// `+1` on cells whose integer coordinates have an even sum.
pub fn checkerboard_label(x: [f64; 2]) -> Result<Label> {
    if !x.iter().all(|v| (0.0..BOARD_SIZE).contains(v)) {
        return Err(Error::OutOfBoard(x[0], x[1]));
    }
    let parity = (x[0].floor() as i64 + x[1].floor() as i64) % 2;
    Ok(if parity == 0 { Label::Positive } else { Label::Negative })
}

fn board_dataset(points: Vec<[f64; 2]>) -> Result<LabeledDataset> {
    let labels = points
        .iter()
        .map(|&pt| checkerboard_label(pt))
        .collect::<Result<Vec<_>>>()?;
    LabeledDataset::from_flat(2, points.into_iter().flatten().collect(), labels)
}

/// `count` points drawn uniformly from the board and labeled by cell parity.
pub fn checkerboard_sample(seed: u64, count: usize) -> Result<LabeledDataset> {
    if count == 0 {
        return Err(Error::InvalidParameter("sample count must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..count)
        .map(|_| {
            let x: f64 = rng.random();
            let y: f64 = rng.random();
            [x * BOARD_SIZE, y * BOARD_SIZE]
        })
        .collect();
    board_dataset(points)
}

/// Cell centers of a `resolution × resolution` grid over the board, rows of
/// increasing y.
pub fn checkerboard_grid(resolution: usize) -> Result<LabeledDataset> {
    if resolution == 0 {
        return Err(Error::InvalidParameter("grid resolution must be >= 1".into()));
    }
    let step = BOARD_SIZE / resolution as f64;
    let mut points = Vec::with_capacity(resolution * resolution);
    for iy in 0..resolution {
        for ix in 0..resolution {
            points.push([(ix as f64 + 0.5) * step, (iy as f64 + 0.5) * step]);
        }
    }
    board_dataset(points)
}

/// Two-group stand-in for a gene-expression matrix.
///
/// Labels alternate `+1, -1, ...`. Every value is standard normal; the first
/// `informative` attributes are additionally shifted by `±shift / 2`
/// according to the label.
pub fn synthetic_expression(
    seed: u64,
    samples: usize,
    features: usize,
    informative: usize,
    shift: f64,
) -> Result<LabeledDataset> {
    if informative > features {
        return Err(Error::InvalidParameter(format!(
            "{informative} informative attributes exceed {features} total"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<Label> = (0..samples)
        .map(|i| if i % 2 == 0 { Label::Positive } else { Label::Negative })
        .collect();
    let mut values = Vec::with_capacity(samples * features);
    for label in &labels {
        for j in 0..features {
            let noise: f64 = rng.sample(StandardNormal);
            let offset = if j < informative { 0.5 * shift * label.as_f64() } else { 0.0 };
            values.push(noise + offset);
        }
    }
    LabeledDataset::from_flat(features, values, labels)
}

/// Fraction of `test` rows whose predicted label matches the stored one.
pub fn holdout_accuracy(model: &PotentialModel, test: &LabeledDataset) -> Result<Accuracy> {
    let predictions = classify_rows(model, test)?;
    let correct = predictions
        .iter()
        .zip(test.labels())
        .filter(|(c, &l)| c.label == l)
        .count();
    Ok(Accuracy {
        correct,
        total: test.len(),
    })
}

/// Options for [`loocv_accuracy_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoocvOptions {
    /// Keep only the `k` attributes with the smallest p-values.
    pub top_k: Option<usize>,
    /// Compute feature selection and all weights once on the full data
    /// instead of inside each fold. Leaks the held-out sample; for
    /// comparison only.
    pub leaky: bool,
}

/// The label every query gets from a fold with only one class left.
fn sole_class(train: &LabeledDataset) -> Option<Label> {
    let pos = train.count(Label::Positive);
    match (pos, train.len() - pos) {
        (0, _) => Some(Label::Negative),
        (_, 0) => Some(Label::Positive),
        _ => None,
    }
}

fn select(point: &[f64], columns: Option<&[usize]>) -> Vec<f64> {
    match columns {
        Some(cols) => cols.iter().map(|&c| point[c]).collect(),
        None => point.to_vec(),
    }
}

fn honest_fold(
    data: &LabeledDataset,
    held_out: usize,
    p: f64,
    params: PotentialParams,
    scheme: WeightingScheme,
    top_k: Option<usize>,
) -> Result<Label> {
    let train = data.without_row(held_out);
    if let Some(label) = sole_class(&train) {
        return Ok(label);
    }
    let columns = top_k.map(|k| select_top_features(&train, k)).transpose()?;
    let train = match &columns {
        Some(cols) => train.select_columns(cols)?,
        None => train,
    };
    let model = build_model(&train, p, params, scheme)?;
    let x = select(data.row(held_out), columns.as_deref());
    Ok(classify(&model, &x)?.label)
}

struct LeakyWeights {
    columns: Option<Vec<usize>>,
    metric: MetricParams,
    // per dataset row: a_i or b_i
    point_weight: Vec<f64>,
}

fn leaky_weights(
    data: &LabeledDataset,
    p: f64,
    scheme: WeightingScheme,
    top_k: Option<usize>,
) -> Result<LeakyWeights> {
    let columns = top_k.map(|k| select_top_features(data, k)).transpose()?;
    let selected = match &columns {
        Some(cols) => data.select_columns(cols)?,
        None => data.clone(),
    };
    let metric = MetricParams::new(p, attribute_weights(&selected, scheme)?)?;
    let mut point_weight = vec![1.0; data.len()];
    if scheme.point_weights == PointWeights::OppositeClassDistance {
        let (a, b) = opposite_class_distances(&selected, &metric)?;
        for (i, w) in data.indices_of(Label::Positive).into_iter().zip(a) {
            point_weight[i] = w;
        }
        for (i, w) in data.indices_of(Label::Negative).into_iter().zip(b) {
            point_weight[i] = w;
        }
    }
    Ok(LeakyWeights {
        columns,
        metric,
        point_weight,
    })
}

fn leaky_fold(
    data: &LabeledDataset,
    held_out: usize,
    weights: &LeakyWeights,
    params: PotentialParams,
) -> Result<Label> {
    let train = data.without_row(held_out);
    if let Some(label) = sole_class(&train) {
        return Ok(label);
    }
    let keep = |label| -> Vec<f64> {
        data.indices_of(label)
            .into_iter()
            .filter(|&i| i != held_out)
            .map(|i| weights.point_weight[i])
            .collect()
    };
    let train = match &weights.columns {
        Some(cols) => train.select_columns(cols)?,
        None => train,
    };
    let model = PotentialModel::from_dataset(
        &train,
        weights.metric.clone(),
        keep(Label::Positive),
        keep(Label::Negative),
        params,
    )?;
    let x = select(data.row(held_out), weights.columns.as_deref());
    Ok(classify(&model, &x)?.label)
}

/// Leave-one-out accuracy with feature selection and all weights
/// recomputed inside every fold.
pub fn loocv_accuracy(
    data: &LabeledDataset,
    p: f64,
    params: PotentialParams,
    scheme: WeightingScheme,
    top_k: Option<usize>,
) -> Result<Accuracy> {
    loocv_accuracy_with(data, p, params, scheme, LoocvOptions { top_k, leaky: false })
}

/// Leave-one-out accuracy. A fold left with a single class predicts that
/// class for the held-out sample.
pub fn loocv_accuracy_with(
    data: &LabeledDataset,
    p: f64,
    params: PotentialParams,
    scheme: WeightingScheme,
    options: LoocvOptions,
) -> Result<Accuracy> {
    for label in [Label::Positive, Label::Negative] {
        if data.count(label) == 0 {
            return Err(Error::MissingClass(label));
        }
    }
    if let Some(k) = options.top_k {
        if k == 0 || k > data.dim() {
            return Err(Error::InvalidK {
                k,
                reason: format!("must lie in 1..={}", data.dim()),
            });
        }
    }
    let leaky = if options.leaky {
        Some(leaky_weights(data, p, scheme, options.top_k)?)
    } else {
        None
    };
    let outcomes: Vec<Result<bool>> = (0..data.len())
        .into_par_iter()
        .map(|i| {
            let predicted = match &leaky {
                Some(w) => leaky_fold(data, i, w, params),
                None => honest_fold(data, i, p, params, scheme, options.top_k),
            };
            predicted.map(|l| l == data.label(i))
        })
        .collect();
    let mut correct = 0;
    for (index, outcome) in outcomes.into_iter().enumerate() {
        if outcome.map_err(|e| Error::Batch {
            index,
            source: Box::new(e),
        })? {
            correct += 1;
        }
    }
    Ok(Accuracy {
        correct,
        total: data.len(),
    })
}

/// How each sweep cell is scored.
#[derive(Debug, Clone, PartialEq)]
pub enum Protocol {
    /// Train on the sweep data, score on this test set.
    Holdout(LabeledDataset),
    Loocv { top_k: Option<usize> },
}

/// Parameter axes of a sweep. Each axis is non-empty and strictly
/// ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub p_values: Vec<f64>,
    pub alpha_values: Vec<f64>,
    pub beta_values: Vec<f64>,
    pub epsilon_values: Vec<f64>,
    pub scheme: WeightingScheme,
    pub protocol: Protocol,
}

impl SweepGrid {
    pub fn new(
        p_values: Vec<f64>,
        alpha_values: Vec<f64>,
        beta_values: Vec<f64>,
        epsilon_values: Vec<f64>,
        scheme: WeightingScheme,
        protocol: Protocol,
    ) -> Result<Self> {
        let grid = SweepGrid {
            p_values,
            alpha_values,
            beta_values,
            epsilon_values,
            scheme,
            protocol,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        let axes = [
            ("p", &self.p_values),
            ("alpha", &self.alpha_values),
            ("beta", &self.beta_values),
            ("epsilon", &self.epsilon_values),
        ];
        for (name, axis) in axes {
            if axis.is_empty() {
                return Err(Error::InvalidParameter(format!("{name} axis is empty")));
            }
            if axis.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less)) {
                return Err(Error::InvalidParameter(format!("{name} axis is not strictly ascending")));
            }
        }
        for &p in &self.p_values {
            crate::metrics::check_exponent(p)?;
        }
        for &alpha in &self.alpha_values {
            for &beta in &self.beta_values {
                for &epsilon in &self.epsilon_values {
                    PotentialParams::new(alpha, beta, epsilon)?;
                }
            }
        }
        Ok(())
    }

    pub fn cell_count(&self) -> usize {
        self.p_values.len() * self.alpha_values.len() * self.beta_values.len() * self.epsilon_values.len()
    }
}

/// One parameter tuple with its accuracy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell {
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub accuracy: Accuracy,
}

/// Accuracy over every grid cell. `best` is the lexicographically smallest
/// `(p, α, β, ε)` attaining the maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub p_values: Vec<f64>,
    pub alpha_values: Vec<f64>,
    pub beta_values: Vec<f64>,
    pub epsilon_values: Vec<f64>,
    /// Indexed `((ip * nα + iα) * nβ + iβ) * nε + iε`.
    pub accuracies: Vec<Accuracy>,
    pub best: SweepCell,
    pub ties_at_best: usize,
}

impl SweepResult {
    fn from_accuracies(grid: &SweepGrid, accuracies: Vec<Accuracy>) -> SweepResult {
        let mut result = SweepResult {
            p_values: grid.p_values.clone(),
            alpha_values: grid.alpha_values.clone(),
            beta_values: grid.beta_values.clone(),
            epsilon_values: grid.epsilon_values.clone(),
            accuracies,
            best: SweepCell {
                p: 0.0,
                alpha: 0.0,
                beta: 0.0,
                epsilon: 0.0,
                accuracy: Accuracy { correct: 0, total: 0 },
            },
            ties_at_best: 0,
        };
        let mut best: Option<SweepCell> = None;
        let mut ties = 0;
        for cell in result.cells() {
            match best.map(|b| cell.accuracy.cmp_value(&b.accuracy)) {
                None | Some(Ordering::Greater) => {
                    best = Some(cell);
                    ties = 1;
                }
                Some(Ordering::Equal) => ties += 1,
                Some(Ordering::Less) => {}
            }
        }
        result.best = best.expect("sweep grids are non-empty");
        result.ties_at_best = ties;
        result
    }

    pub fn index(&self, ip: usize, ia: usize, ib: usize, ie: usize) -> usize {
        ((ip * self.alpha_values.len() + ia) * self.beta_values.len() + ib) * self.epsilon_values.len() + ie
    }

    pub fn accuracy(&self, ip: usize, ia: usize, ib: usize, ie: usize) -> Accuracy {
        self.accuracies[self.index(ip, ia, ib, ie)]
    }

    /// All cells in lexicographic `(p, α, β, ε)` order.
    pub fn cells(&self) -> impl Iterator<Item = SweepCell> + '_ {
        let (na, nb, ne) = (self.alpha_values.len(), self.beta_values.len(), self.epsilon_values.len());
        self.accuracies.iter().enumerate().map(move |(k, &accuracy)| SweepCell {
            p: self.p_values[k / (na * nb * ne)],
            alpha: self.alpha_values[k / (nb * ne) % na],
            beta: self.beta_values[k / ne % nb],
            epsilon: self.epsilon_values[k % ne],
            accuracy,
        })
    }
}

fn cell_error(p: f64, alpha: f64, beta: f64, epsilon: f64, e: Error) -> Error {
    Error::SweepCell {
        p,
        alpha,
        beta,
        epsilon,
        source: Box::new(e),
    }
}

/// Scores every `(α, β, ε)` cell for one `p` on a holdout set, sharing the
/// distance computations across cells.
fn holdout_slice(
    train: &LabeledDataset,
    test: &LabeledDataset,
    c: &[f64],
    p: f64,
    grid: &SweepGrid,
) -> Result<Vec<Accuracy>> {
    let first = |e| cell_error(p, grid.alpha_values[0], grid.beta_values[0], grid.epsilon_values[0], e);
    let metric = MetricParams::new(p, c.to_vec()).map_err(first)?;
    let (a, b) = match grid.scheme.point_weights {
        PointWeights::Unit => (
            vec![1.0; train.count(Label::Positive)],
            vec![1.0; train.count(Label::Negative)],
        ),
        PointWeights::OppositeClassDistance => opposite_class_distances(train, &metric).map_err(first)?,
    };
    let mut weight_tables = Vec::new();
    for &beta in &grid.beta_values {
        for &epsilon in &grid.epsilon_values {
            weight_tables.push((log_weights(&a, beta, 1.0 + epsilon), log_weights(&b, beta, 1.0 - epsilon)));
        }
    }
    let base = PotentialModel::from_dataset(train, metric, a, b, PotentialParams::default()).map_err(first)?;
    if test.dim() != base.dim() {
        return Err(first(Error::DimensionMismatch {
            expected: base.dim(),
            found: test.dim(),
        }));
    }
    let exponents: Vec<f64> = grid.alpha_values.iter().map(|alpha| alpha / p).collect();
    let cells = exponents.len() * weight_tables.len();

    let counts = test
        .features()
        .par_chunks_exact(test.dim())
        .zip(test.labels().par_iter())
        .try_fold(
            || (Scratch::default(), vec![0usize; cells]),
            |(mut scratch, mut counts), (x, &truth)| {
                match probe(&base, x, &mut scratch)? {
                    Some(label) => {
                        if hit(label).label == truth {
                            counts.iter_mut().for_each(|c| *c += 1);
                        }
                    }
                    None => {
                        let mut k = 0;
                        for &exponent in &exponents {
                            for (lw_pos, lw_neg) in &weight_tables {
                                let (diff, scale) =
                                    scaled_sum(lw_pos, &scratch.ln_s_pos, lw_neg, &scratch.ln_s_neg, exponent);
                                if finish(diff, scale).label == truth {
                                    counts[k] += 1;
                                }
                                k += 1;
                            }
                        }
                    }
                }
                Ok((scratch, counts))
            },
        )
        .map(|r| r.map(|(_, counts)| counts))
        .try_reduce(
            || vec![0usize; cells],
            |mut acc, counts| {
                acc.iter_mut().zip(counts).for_each(|(a, c)| *a += c);
                Ok(acc)
            },
        )
        .map_err(first)?;
    Ok(counts
        .into_iter()
        .map(|correct| Accuracy {
            correct,
            total: test.len(),
        })
        .collect())
}

/// Scores every cell of `grid` on `data` under the grid's protocol.
pub fn grid_search(data: &LabeledDataset, grid: &SweepGrid) -> Result<SweepResult> {
    grid.validate()?;
    let mut accuracies = Vec::with_capacity(grid.cell_count());
    match &grid.protocol {
        Protocol::Holdout(test) => {
            for label in [Label::Positive, Label::Negative] {
                if data.count(label) == 0 {
                    return Err(cell_error(
                        grid.p_values[0],
                        grid.alpha_values[0],
                        grid.beta_values[0],
                        grid.epsilon_values[0],
                        Error::MissingClass(label),
                    ));
                }
            }
            let c = attribute_weights(data, grid.scheme).map_err(|e| {
                cell_error(grid.p_values[0], grid.alpha_values[0], grid.beta_values[0], grid.epsilon_values[0], e)
            })?;
            for &p in &grid.p_values {
                accuracies.extend(holdout_slice(data, test, &c, p, grid)?);
            }
        }
        Protocol::Loocv { top_k } => {
            for &p in &grid.p_values {
                for &alpha in &grid.alpha_values {
                    for &beta in &grid.beta_values {
                        for &epsilon in &grid.epsilon_values {
                            let params = PotentialParams::new(alpha, beta, epsilon)?;
                            let acc = loocv_accuracy(data, p, params, grid.scheme, *top_k)
                                .map_err(|e| cell_error(p, alpha, beta, epsilon, e))?;
                            accuracies.push(acc);
                        }
                    }
                }
            }
        }
    }
    Ok(SweepResult::from_accuracies(grid, accuracies))
}
