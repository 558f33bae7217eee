//! File formats: dataset CSV, sweep CSV, binary PGM rasters and
//! `key = value` config files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use crate::dataset::{Label, LabeledDataset};
use crate::error::{Error, Result};
use crate::evaluation::{checkerboard_grid, checkerboard_sample, synthetic_expression, SweepResult};
use crate::potential::Raster;

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Name of the mandatory last column of a dataset CSV.
pub const LABEL_COLUMN: &str = "label";

/// Parses a dataset CSV: a header naming the feature columns followed by
/// `label`, then one row per sample with labels spelled `1`, `+1` or `-1`.
pub fn read_dataset<R: Read>(reader: R) -> Result<LabeledDataset> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = csv.headers().map_err(|e| Error::Parse {
        line: 1,
        column: 1,
        message: e.to_string(),
    })?;
    let width = header.len();
    if width < 2 || header.get(width - 1) != Some(LABEL_COLUMN) {
        return Err(Error::Parse {
            line: 1,
            column: width.max(1),
            message: format!("header must list at least one feature followed by `{LABEL_COLUMN}`"),
        });
    }
    let dim = width - 1;
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for record in csv.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            column: 0,
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != width {
            return Err(Error::RaggedRows {
                line,
                expected: width,
                found: record.len(),
            });
        }
        for (j, cell) in record.iter().take(dim).enumerate() {
            let value: f64 = cell.parse().map_err(|_| Error::Parse {
                line,
                column: j + 1,
                message: format!("{cell:?} is not a number"),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    line,
                    column: j + 1,
                    message: format!("{cell:?} is not finite"),
                });
            }
            features.push(value);
        }
        let cell = &record[dim];
        let label = cell
            .parse::<i64>()
            .ok()
            .and_then(Label::from_sign)
            .ok_or_else(|| Error::Label {
                line,
                value: cell.to_string(),
            })?;
        labels.push(label);
    }
    LabeledDataset::from_flat(dim, features, labels)
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(io_error(path))?;
    read_dataset(file).map_err(|e| match e {
        Error::Io { .. } => e,
        other => Error::InvalidDataset(format!("{}: {other}", path.display())),
    })
}

/// Dataset CSV text. Values use the shortest representation that parses
/// back to the same double.
pub fn dataset_csv(data: &LabeledDataset) -> String {
    let mut out = String::new();
    for j in 0..data.dim() {
        let _ = write!(out, "f{},", j + 1);
    }
    out.push_str(LABEL_COLUMN);
    out.push('\n');
    for (row, label) in data.rows().zip(data.labels()) {
        for v in row {
            let _ = write!(out, "{v},");
        }
        let _ = writeln!(out, "{}", label.sign());
    }
    out
}

pub fn save_dataset(data: &LabeledDataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, dataset_csv(data)).map_err(io_error(path))
}

/// Binary PGM (`P5`, maxval 255) bytes: `+1` is white, `-1` black.
pub fn pgm_bytes(raster: &Raster) -> Vec<u8> {
    let mut bytes = format!("P5\n{} {}\n255\n", raster.width, raster.height).into_bytes();
    bytes.extend(raster.cells.iter().map(|l| match l {
        Label::Positive => 255u8,
        Label::Negative => 0u8,
    }));
    bytes
}

pub fn save_raster(raster: &Raster, path: impl AsRef<Path>) -> Result<()> {
    if raster.width == 0 || raster.height == 0 || raster.cells.len() != raster.width * raster.height {
        return Err(Error::InvalidParameter("raster must be non-empty and rectangular".into()));
    }
    let path = path.as_ref();
    fs::write(path, pgm_bytes(raster)).map_err(io_error(path))
}

/// Sweep CSV: header `p,alpha,beta,epsilon,accuracy`, one row per cell in
/// lexicographic order, then a `# best:` comment.
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::from("p,alpha,beta,epsilon,accuracy\n");
    for cell in result.cells() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            cell.p,
            cell.alpha,
            cell.beta,
            cell.epsilon,
            cell.accuracy.value()
        );
    }
    let b = &result.best;
    let _ = writeln!(
        out,
        "# best: p={} alpha={} beta={} epsilon={} accuracy={} correct={} total={} ties={}",
        b.p,
        b.alpha,
        b.beta,
        b.epsilon,
        b.accuracy.value(),
        b.accuracy.correct,
        b.accuracy.total,
        result.ties_at_best
    );
    out
}

pub fn save_sweep(result: &SweepResult, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, sweep_csv(result)).map_err(io_error(path))
}

/// One data row of a sweep CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub accuracy: f64,
}

/// Reads the data rows of a sweep CSV, skipping `#` comments.
pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let values = line
            .split(',')
            .enumerate()
            .map(|(j, cell)| {
                cell.trim().parse::<f64>().map_err(|_| Error::Parse {
                    line: i as u64 + 1,
                    column: j + 1,
                    message: format!("{cell:?} is not a number"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if values.len() != 5 {
            return Err(Error::RaggedRows {
                line: i as u64 + 1,
                expected: 5,
                found: values.len(),
            });
        }
        rows.push(SweepRow {
            p: values[0],
            alpha: values[1],
            beta: values[2],
            epsilon: values[3],
            accuracy: values[4],
        });
    }
    Ok(rows)
}

/// Parses `key = value` lines. `#` starts a comment; blank lines are
/// ignored; later keys override earlier ones.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::Config(format!("line {}: empty key", i + 1)));
        }
        map.insert(key.replace('-', "_"), value.trim().to_string());
    }
    Ok(map)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<BTreeMap<String, String>> {
    let path = path.as_ref();
    parse_config(&fs::read_to_string(path).map_err(io_error(path))?)
}

/// Where a dataset comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    File(PathBuf),
    /// `checkerboard:<seed>:<count>`
    Checkerboard { seed: u64, count: usize },
    /// `checkerboard-grid:<resolution>`
    CheckerboardGrid { resolution: usize },
    /// `synthetic:<seed>:<samples>:<features>:<informative>:<shift>`
    Synthetic {
        seed: u64,
        samples: usize,
        features: usize,
        informative: usize,
        shift: f64,
    },
}

fn field<T: std::str::FromStr>(spec: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("bad data source {spec:?}: cannot parse {value:?}")))
}

impl DataSource {
    pub fn parse(spec: &str) -> Result<DataSource> {
        let parts: Vec<&str> = spec.split(':').collect();
        let wrong = || Error::Config(format!("bad data source {spec:?}"));
        match parts[0] {
            "checkerboard" if parts.len() == 3 => Ok(DataSource::Checkerboard {
                seed: field(spec, parts[1])?,
                count: field(spec, parts[2])?,
            }),
            "checkerboard-grid" if parts.len() == 2 => Ok(DataSource::CheckerboardGrid {
                resolution: field(spec, parts[1])?,
            }),
            "synthetic" if parts.len() == 6 => Ok(DataSource::Synthetic {
                seed: field(spec, parts[1])?,
                samples: field(spec, parts[2])?,
                features: field(spec, parts[3])?,
                informative: field(spec, parts[4])?,
                shift: field(spec, parts[5])?,
            }),
            "checkerboard" | "checkerboard-grid" | "synthetic" => Err(wrong()),
            _ => Ok(DataSource::File(PathBuf::from(spec))),
        }
    }

    pub fn load(&self) -> Result<LabeledDataset> {
        match self {
            DataSource::File(path) => load_dataset(path),
            DataSource::Checkerboard { seed, count } => checkerboard_sample(*seed, *count),
            DataSource::CheckerboardGrid { resolution } => checkerboard_grid(*resolution),
            DataSource::Synthetic {
                seed,
                samples,
                features,
                informative,
                shift,
            } => synthetic_expression(*seed, *samples, *features, *informative, *shift),
        }
    }
}
