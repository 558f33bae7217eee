//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls into the evaluation paths it is compared against:
//! distances, potentials, nearest-opposite weights, Welch p-values and LOOCV
//! are all recomputed from their definitions with straightforward loops.
#![allow(dead_code)]

use potential_core::{Label, LabeledDataset};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, StudentsT};
use statrs::function::gamma::ln_gamma;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform points in `[0, scale)^dim` with the requested class counts,
/// classes interleaved randomly.
pub fn random_dataset(rng: &mut Rng64, n_pos: usize, n_neg: usize, dim: usize, scale: f64) -> LabeledDataset {
    let mut labels: Vec<Label> = std::iter::repeat_n(Label::Positive, n_pos)
        .chain(std::iter::repeat_n(Label::Negative, n_neg))
        .collect();
    for i in (1..labels.len()).rev() {
        let j = rng.random_range(0..=i);
        labels.swap(i, j);
    }
    let features = (0..labels.len() * dim).map(|_| rng.random::<f64>() * scale).collect();
    LabeledDataset::from_flat(dim, features, labels).unwrap()
}

pub fn random_point(rng: &mut Rng64, dim: usize, scale: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.random::<f64>() * scale).collect()
}

/// `(Σ c_j |x_j - y_j|^p)^(1/p)`.
pub fn distance(x: &[f64], y: &[f64], c: &[f64], p: f64) -> f64 {
    let mut s = 0.0;
    for j in 0..x.len() {
        s += c[j] * (x[j] - y[j]).abs().powf(p);
    }
    s.powf(1.0 / p)
}

/// Plain summation of the potential. `Err(())` when the query coincides
/// with points of both classes; `±∞` on a single-class hit.
pub struct Direct<'a> {
    pub pos: Vec<&'a [f64]>,
    pub neg: Vec<&'a [f64]>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
}

impl Direct<'_> {
    /// Returns `(I(x), Σ |terms|)`.
    pub fn eval(&self, x: &[f64]) -> Result<(f64, f64), ()> {
        let hit_pos = self.pos.iter().any(|y| distance(x, y, &self.c, self.p) == 0.0);
        let hit_neg = self.neg.iter().any(|z| distance(x, z, &self.c, self.p) == 0.0);
        match (hit_pos, hit_neg) {
            (true, true) => return Err(()),
            (true, false) => return Ok((f64::INFINITY, f64::INFINITY)),
            (false, true) => return Ok((f64::NEG_INFINITY, f64::INFINITY)),
            _ => {}
        }
        let mut plus = 0.0;
        for (y, a) in self.pos.iter().zip(&self.a) {
            plus += (1.0 + self.epsilon) * a.powf(self.beta) / distance(x, y, &self.c, self.p).powf(self.alpha);
        }
        let mut minus = 0.0;
        for (z, b) in self.neg.iter().zip(&self.b) {
            minus += (1.0 - self.epsilon) * b.powf(self.beta) / distance(x, z, &self.c, self.p).powf(self.alpha);
        }
        Ok((plus - minus, plus + minus))
    }

    pub fn label(&self, x: &[f64]) -> Result<Label, ()> {
        let (v, _) = self.eval(x)?;
        Ok(if v >= 0.0 { Label::Positive } else { Label::Negative })
    }
}

pub fn rows_of(data: &LabeledDataset, label: Label) -> Vec<&[f64]> {
    data.rows().zip(data.labels()).filter(|(_, &l)| l == label).map(|(r, _)| r).collect()
}

/// Exhaustive double loop over cross-class pairs.
pub fn brute_opposite(data: &LabeledDataset, c: &[f64], p: f64) -> (Vec<f64>, Vec<f64>) {
    let pos = rows_of(data, Label::Positive);
    let neg = rows_of(data, Label::Negative);
    let mut a = vec![f64::INFINITY; pos.len()];
    let mut b = vec![f64::INFINITY; neg.len()];
    for (i, y) in pos.iter().enumerate() {
        for (k, z) in neg.iter().enumerate() {
            let d = distance(y, z, c, p);
            a[i] = a[i].min(d);
            b[k] = b[k].min(d);
        }
    }
    (a, b)
}

/// Welch statistic and Welch–Satterthwaite degrees of freedom.
pub fn welch_t_df(x: &[f64], y: &[f64]) -> (f64, f64) {
    let stats = |v: &[f64]| {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|a| (a - m).powi(2)).sum::<f64>() / (n - 1.0);
        (n, m, var)
    };
    let (n1, m1, v1) = stats(x);
    let (n2, m2, v2) = stats(y);
    let se2 = v1 / n1 + v2 / n2;
    let t = (m1 - m2) / se2.sqrt();
    let df = se2 * se2 / ((v1 / n1).powi(2) / (n1 - 1.0) + (v2 / n2).powi(2) / (n2 - 1.0));
    (t, df)
}

fn t_density(s: f64, df: f64) -> f64 {
    let ln_norm = ln_gamma((df + 1.0) / 2.0) - ln_gamma(df / 2.0) - 0.5 * (df * std::f64::consts::PI).ln();
    (ln_norm - (df + 1.0) / 2.0 * (s * s / df).ln_1p()).exp()
}

#[allow(clippy::too_many_arguments)]
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Two-sided Student-t tail by quadrature of the density. Small `|t|` uses
/// `1 - 2 ∫_0^|t| f`, larger `|t|` integrates the tail directly after the
/// substitution `s = |t| / u` (bounded integrand for `df >= 1`).
pub fn t_two_sided_by_quadrature(t: f64, df: f64) -> f64 {
    let t = t.abs();
    let f = |s: f64| t_density(s, df);
    let p = if t <= 1.0 {
        1.0 - 2.0 * integrate(&f, 0.0, t, 1e-15)
    } else {
        let g = |u: f64| f(t / u) * t / (u * u);
        2.0 * integrate(&g, 1e-12, 1.0, 1e-15)
    };
    p.clamp(0.0, 1.0)
}

/// Welch p-value via the `statrs` Student-t CDF.
pub fn welch_p_statrs(x: &[f64], y: &[f64]) -> f64 {
    let (t, df) = welch_t_df(x, y);
    if !t.is_finite() {
        return if t.is_nan() { 1.0 } else { 0.0 };
    }
    let dist = StudentsT::new(0.0, 1.0, df).unwrap();
    (2.0 * (1.0 - dist.cdf(t.abs()))).clamp(0.0, 1.0)
}

pub fn column_groups(data: &LabeledDataset, j: usize) -> (Vec<f64>, Vec<f64>) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (row, &l) in data.rows().zip(data.labels()) {
        if l == Label::Positive {
            pos.push(row[j]);
        } else {
            neg.push(row[j]);
        }
    }
    (pos, neg)
}

/// Pearson correlation of column `j` with the ±1 labels.
pub fn pearson_with_labels(data: &LabeledDataset, j: usize) -> f64 {
    let x: Vec<f64> = data.column(j).collect();
    let y: Vec<f64> = data.labels().iter().map(|l| l.as_f64()).collect();
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if sxx == 0.0 || syy == 0.0 {
        0.0
    } else {
        sxy / (sxx * syy).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OraclePoint {
    Unit,
    Opposite,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OracleAttr {
    Unit,
    PValue,
    Correlation,
}

pub struct OracleSetup {
    pub point: OraclePoint,
    pub attr: OracleAttr,
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub top_k: Option<usize>,
}

/// Label predicted for `x` by a model trained on `train` per `setup`.
pub fn oracle_predict(train: &LabeledDataset, x: &[f64], setup: &OracleSetup) -> Result<Label, ()> {
    let n_pos = train.count(Label::Positive);
    if n_pos == 0 {
        return Ok(Label::Negative);
    }
    if n_pos == train.len() {
        return Ok(Label::Positive);
    }
    let columns: Vec<usize> = match setup.top_k {
        None => (0..train.dim()).collect(),
        Some(k) => {
            let p_values: Vec<f64> = (0..train.dim())
                .map(|j| {
                    let (a, b) = column_groups(train, j);
                    welch_p_statrs(&a, &b)
                })
                .collect();
            let mut order: Vec<usize> = (0..train.dim()).collect();
            order.sort_by(|&i, &j| p_values[i].partial_cmp(&p_values[j]).unwrap().then(i.cmp(&j)));
            order.truncate(k);
            order
        }
    };
    let train = train.select_columns(&columns).unwrap();
    let x: Vec<f64> = columns.iter().map(|&j| x[j]).collect();
    let c: Vec<f64> = (0..train.dim())
        .map(|j| {
            let raw = match setup.attr {
                OracleAttr::Unit => return 1.0,
                OracleAttr::PValue => {
                    let (a, b) = column_groups(&train, j);
                    1.0 - welch_p_statrs(&a, &b)
                }
                OracleAttr::Correlation => pearson_with_labels(&train, j).abs(),
            };
            raw.clamp(1e-6, 1.0)
        })
        .collect();
    let (a, b) = match setup.point {
        OraclePoint::Unit => (vec![1.0; n_pos], vec![1.0; train.len() - n_pos]),
        OraclePoint::Opposite => brute_opposite(&train, &c, setup.p),
    };
    let direct = Direct {
        pos: rows_of(&train, Label::Positive),
        neg: rows_of(&train, Label::Negative),
        a,
        b,
        c,
        p: setup.p,
        alpha: setup.alpha,
        beta: setup.beta,
        epsilon: setup.epsilon,
    };
    direct.label(&x)
}

/// Leave-one-out by explicit refitting on each fold.
pub fn naive_loocv(data: &LabeledDataset, setup: &OracleSetup) -> Result<usize, ()> {
    let mut correct = 0;
    for i in 0..data.len() {
        let train = data.without_row(i);
        if oracle_predict(&train, data.row(i), setup)? == data.label(i) {
            correct += 1;
        }
    }
    Ok(correct)
}

pub fn rel_close(a: f64, b: f64, scale: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * scale.abs()
}
