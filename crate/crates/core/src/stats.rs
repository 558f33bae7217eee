//! Univariate per-attribute statistics: Welch two-sample p-values,
//! point-biserial correlation with the label vector, and p-value ranking.

use crate::dataset::{LabeledDataset, Label};
use crate::error::{Error, Result};
use crate::special::student_t_two_sided;

/// Added to each group variance when both groups are constant but their
/// means differ, so the statistic stays finite.
pub const VARIANCE_FLOOR: f64 = 1e-24;

/// Outcome of one Welch two-sample test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelchTest {
    pub t: f64,
    pub df: f64,
    pub p_value: f64,
}

fn mean_and_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, ss / (n - 1.0))
}

/// Two-sided Welch t-test between `first` and `second` using the
/// Welch–Satterthwaite degrees of freedom.
pub fn welch_t_test(first: &[f64], second: &[f64]) -> Result<WelchTest> {
    let found = first.len().min(second.len());
    if found < 2 {
        return Err(Error::InsufficientSamples { needed: 2, found });
    }
    let (n1, n2) = (first.len() as f64, second.len() as f64);
    let (m1, mut v1) = mean_and_variance(first);
    let (m2, mut v2) = mean_and_variance(second);
    if v1 == 0.0 && v2 == 0.0 {
        if m1 == m2 {
            return Ok(WelchTest {
                t: 0.0,
                df: n1 + n2 - 2.0,
                p_value: 1.0,
            });
        }
        v1 = VARIANCE_FLOOR;
        v2 = VARIANCE_FLOOR;
    }
    let (s1, s2) = (v1 / n1, v2 / n2);
    let se2 = s1 + s2;
    let t = (m1 - m2) / se2.sqrt();
    let df = se2 * se2 / (s1 * s1 / (n1 - 1.0) + s2 * s2 / (n2 - 1.0));
    let p_value = student_t_two_sided(t, df)?;
    Ok(WelchTest { t, df, p_value })
}

fn split_column(data: &LabeledDataset, j: usize, pos: &mut Vec<f64>, neg: &mut Vec<f64>) {
    pos.clear();
    neg.clear();
    for (row, &label) in data.rows().zip(data.labels()) {
        match label {
            Label::Positive => pos.push(row[j]),
            Label::Negative => neg.push(row[j]),
        }
    }
}

/// Per-attribute Welch p-values comparing the `+1` rows against the `-1` rows.
pub fn welch_p_values(data: &LabeledDataset) -> Result<Vec<f64>> {
    let found = data.count(Label::Positive).min(data.count(Label::Negative));
    if found < 2 {
        return Err(Error::InsufficientSamples { needed: 2, found });
    }
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    (0..data.dim())
        .map(|j| {
            split_column(data, j, &mut pos, &mut neg);
            welch_t_test(&pos, &neg).map(|w| w.p_value)
        })
        .collect()
}

/// Per-attribute Pearson correlation between the column and the `±1` labels.
/// Constant columns (or a constant label vector) give 0.
pub fn point_biserial(data: &LabeledDataset) -> Result<Vec<f64>> {
    if data.len() < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            found: data.len(),
        });
    }
    let n = data.len() as f64;
    let label_mean = data.labels().iter().map(|l| l.as_f64()).sum::<f64>() / n;
    let label_ss: f64 = data
        .labels()
        .iter()
        .map(|l| (l.as_f64() - label_mean).powi(2))
        .sum();
    (0..data.dim())
        .map(|j| {
            let mean = data.column(j).sum::<f64>() / n;
            let mut ss = 0.0;
            let mut cross = 0.0;
            for (v, l) in data.column(j).zip(data.labels()) {
                let dv = v - mean;
                ss += dv * dv;
                cross += dv * (l.as_f64() - label_mean);
            }
            if ss == 0.0 || label_ss == 0.0 {
                return Ok(0.0);
            }
            Ok((cross / (ss.sqrt() * label_ss.sqrt())).clamp(-1.0, 1.0))
        })
        .collect()
}

/// Per-attribute p-values and absolute label correlations.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureStats {
    pub p_values: Vec<f64>,
    pub abs_correlation: Vec<f64>,
}

impl FeatureStats {
    pub fn compute(data: &LabeledDataset) -> Result<FeatureStats> {
        Ok(FeatureStats {
            p_values: welch_p_values(data)?,
            abs_correlation: point_biserial(data)?.into_iter().map(f64::abs).collect(),
        })
    }
}

/// Orders attribute indices by ascending p-value, ties to the lower index.
pub fn rank_by_p_value(p_values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..p_values.len()).collect();
    order.sort_by(|&i, &j| p_values[i].total_cmp(&p_values[j]).then(i.cmp(&j)));
    order
}

/// Indices of the `k` attributes with the smallest Welch p-values, most
/// significant first.
pub fn select_top_features(data: &LabeledDataset, k: usize) -> Result<Vec<usize>> {
    if k == 0 || k > data.dim() {
        return Err(Error::InvalidK {
            k,
            reason: format!("must lie in 1..={}", data.dim()),
        });
    }
    let p_values = welch_p_values(data)?;
    let mut order = rank_by_p_value(&p_values);
    order.truncate(k);
    Ok(order)
}
