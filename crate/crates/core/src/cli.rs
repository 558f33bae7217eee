//! The `potential` command-line tool.
//!
//! Every subcommand accepts `--config FILE` with `key = value` lines.
//! Settings resolve as flags, then the config file, then built-in defaults.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::evaluation::{
    grid_search, holdout_accuracy, loocv_accuracy_with, LoocvOptions, Protocol, SweepGrid,
};
use crate::io::{load_config, save_dataset, save_raster, save_sweep, DataSource};
use crate::model::{build_model, AttributeWeights, PointWeights, PotentialParams, WeightingScheme};
use crate::potential::decision_raster;
use crate::stats::{select_top_features, welch_p_values};

#[derive(Debug, Parser)]
#[command(name = "potential", version, about = "Potential-function binary classifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a checkerboard training sample (or test grid) as CSV.
    Generate(GenerateArgs),
    /// Train on one dataset and report accuracy on another.
    FitEval(FitEvalArgs),
    /// Leave-one-out accuracy.
    Loocv(LoocvArgs),
    /// Accuracy over a (p, alpha, beta, epsilon) grid, written as CSV.
    Sweep(SweepArgs),
    /// Decision regions of a 2-D model as a binary PGM.
    Raster(RasterArgs),
    /// The k attributes with the smallest Welch p-values.
    SelectFeatures(SelectArgs),
}

#[derive(Debug, Args)]
struct ConfigArg {
    /// `key = value` file; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    /// `unit`, `full`, or `POINT:ATTR` with POINT in {unit, opposite} and
    /// ATTR in {unit, pvalue, correlation}.
    #[arg(long)]
    scheme: Option<String>,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    count: Option<String>,
    /// Emit the cell-center test grid of this resolution instead of a sample.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Args)]
struct FitEvalArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[command(flatten)]
    model: ModelArgs,
    /// Training data: a CSV path or `checkerboard:<seed>:<count>`.
    #[arg(long)]
    train: Option<String>,
    #[arg(long)]
    test: Option<String>,
    /// Repeat with consecutive seeds of a checkerboard training source and
    /// report the mean accuracy.
    #[arg(long)]
    replicates: Option<String>,
}

#[derive(Debug, Args)]
struct LoocvArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    data: Option<String>,
    #[arg(long)]
    top_k: Option<String>,
    /// Compute selection and weights once on the full data.
    #[arg(long)]
    leaky: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    config: ConfigArg,
    // model flags take axes here: `a,b,c` or `start:stop:step`
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    data: Option<String>,
    /// Holdout test set; omit and pass `--protocol loocv` for leave-one-out.
    #[arg(long)]
    test: Option<String>,
    #[arg(long)]
    protocol: Option<String>,
    #[arg(long)]
    top_k: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Args)]
struct RasterArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    data: Option<String>,
    /// Lower corner `x,y`.
    #[arg(long)]
    lo: Option<String>,
    /// Upper corner `x,y`.
    #[arg(long)]
    hi: Option<String>,
    /// `WIDTHxHEIGHT` or a single number for a square raster.
    #[arg(long)]
    resolution: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Args)]
struct SelectArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long)]
    data: Option<String>,
    #[arg(long)]
    k: Option<String>,
}

/// Resolved settings of one invocation: flags layered over the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentConfig {
    values: BTreeMap<String, String>,
}

impl ExperimentConfig {
    /// Layers `flags` over `file`.
    pub fn resolve(file: BTreeMap<String, String>, flags: &[(&str, Option<&String>)]) -> Self {
        let mut values = file;
        for (key, value) in flags {
            if let Some(v) = value {
                values.insert(key.to_string(), v.to_string());
            }
        }
        ExperimentConfig { values }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.raw(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::Config(format!("cannot parse {key} = {v:?}")))
            })
            .transpose()
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.raw(key)
            .ok_or_else(|| Error::Config(format!("missing required setting `{key}`")))
    }

    pub fn scheme(&self) -> Result<WeightingScheme> {
        parse_scheme(self.raw("scheme").unwrap_or("unit"))
    }

    /// `p`, `alpha`, `beta`, `epsilon` as single values (defaults 2, 4.5, 0, 0).
    pub fn params(&self) -> Result<(f64, PotentialParams)> {
        let p = self.get_or("p", 2.0)?;
        let params = PotentialParams::new(
            self.get_or("alpha", 4.5)?,
            self.get_or("beta", 0.0)?,
            self.get_or("epsilon", 0.0)?,
        )?;
        Ok((p, params))
    }

    pub fn axis(&self, key: &str, default: f64) -> Result<Vec<f64>> {
        match self.raw(key) {
            None => Ok(vec![default]),
            Some(spec) => parse_axis(spec),
        }
    }
}

pub fn parse_scheme(spec: &str) -> Result<WeightingScheme> {
    let bad = || Error::Config(format!("unknown scheme {spec:?}"));
    match spec {
        "unit" => return Ok(WeightingScheme::UNIT),
        "full" => return Ok(WeightingScheme::FULL),
        _ => {}
    }
    let (point, attr) = spec.split_once(':').ok_or_else(bad)?;
    let point = match point {
        "unit" => PointWeights::Unit,
        "opposite" => PointWeights::OppositeClassDistance,
        _ => return Err(bad()),
    };
    let attr = match attr {
        "unit" => AttributeWeights::Unit,
        "pvalue" => AttributeWeights::OneMinusPValue,
        "correlation" => AttributeWeights::AbsCorrelation,
        _ => return Err(bad()),
    };
    Ok(WeightingScheme::new(point, attr))
}

/// `a,b,c` or an inclusive `start:stop:step` range.
pub fn parse_axis(spec: &str) -> Result<Vec<f64>> {
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("bad axis value {s:?} in {spec:?}")))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() == 3 {
        let (start, stop, step) = (number(parts[0])?, number(parts[1])?, number(parts[2])?);
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(Error::Config(format!("bad axis range {spec:?}")));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        return Ok((0..=n).map(|i| start + i as f64 * step).collect());
    }
    spec.split(',').map(number).collect()
}

fn parse_pair(spec: &str) -> Result<[f64; 2]> {
    let v = parse_axis(spec)?;
    match v.as_slice() {
        [x, y] => Ok([*x, *y]),
        _ => Err(Error::Config(format!("expected `x,y`, got {spec:?}"))),
    }
}

fn parse_resolution(spec: &str) -> Result<(usize, usize)> {
    let bad = || Error::Config(format!("bad resolution {spec:?}"));
    match spec.split_once('x') {
        Some((w, h)) => Ok((w.parse().map_err(|_| bad())?, h.parse().map_err(|_| bad())?)),
        None => {
            let n = spec.parse().map_err(|_| bad())?;
            Ok((n, n))
        }
    }
}

fn file_config(arg: &ConfigArg) -> Result<BTreeMap<String, String>> {
    match &arg.config {
        Some(path) => load_config(path),
        None => Ok(BTreeMap::new()),
    }
}

fn model_flags(m: &ModelArgs) -> [(&'static str, Option<&String>); 5] {
    [
        ("p", m.p.as_ref()),
        ("alpha", m.alpha.as_ref()),
        ("beta", m.beta.as_ref()),
        ("epsilon", m.epsilon.as_ref()),
        ("scheme", m.scheme.as_ref()),
    ]
}

fn load_source(spec: &str) -> Result<crate::dataset::LabeledDataset> {
    DataSource::parse(spec)?.load()
}

fn generate(args: &GenerateArgs) -> Result<String> {
    let cfg = ExperimentConfig::resolve(
        file_config(&args.config)?,
        &[
            ("seed", args.seed.as_ref()),
            ("count", args.count.as_ref()),
            ("grid", args.grid.as_ref()),
            ("out", args.out.as_ref()),
        ],
    );
    let out = cfg.require("out")?;
    let (data, what) = match cfg.get::<usize>("grid")? {
        Some(resolution) => (
            DataSource::CheckerboardGrid { resolution }.load()?,
            format!("grid resolution {resolution}"),
        ),
        None => {
            let seed = cfg.get_or("seed", 0u64)?;
            let count = cfg.get_or("count", 1000usize)?;
            (DataSource::Checkerboard { seed, count }.load()?, format!("seed {seed}"))
        }
    };
    save_dataset(&data, out)?;
    Ok(format!("generate: wrote {} rows ({what}) to {out}", data.len()))
}

fn fit_eval(args: &FitEvalArgs) -> Result<String> {
    let mut flags = model_flags(&args.model).to_vec();
    flags.extend([
        ("train", args.train.as_ref()),
        ("test", args.test.as_ref()),
        ("replicates", args.replicates.as_ref()),
    ]);
    let cfg = ExperimentConfig::resolve(file_config(&args.config)?, &flags);
    let (p, params) = cfg.params()?;
    let scheme = cfg.scheme()?;
    let test = load_source(cfg.require("test")?)?;
    let train_spec = cfg.require("train")?;
    let replicates = cfg.get_or("replicates", 1usize)?;
    let sources = match (DataSource::parse(train_spec)?, replicates) {
        (_, 0) => return Err(Error::Config("replicates must be >= 1".into())),
        (source, 1) => vec![source],
        (DataSource::Checkerboard { seed, count }, n) => (0..n as u64)
            .map(|i| DataSource::Checkerboard {
                seed: seed + i,
                count,
            })
            .collect(),
        _ => {
            return Err(Error::Config(
                "replicates > 1 needs a checkerboard:<seed>:<count> training source".into(),
            ))
        }
    };
    let mut total = 0.0;
    let mut last = None;
    for source in &sources {
        let model = build_model(&source.load()?, p, params, scheme)?;
        let acc = holdout_accuracy(&model, &test)?;
        total += acc.value();
        last = Some(acc);
    }
    let mean = total / sources.len() as f64;
    Ok(match (sources.len(), last) {
        (1, Some(acc)) => format!(
            "fit-eval: accuracy {mean:.6} ({}/{}) p={p} alpha={} beta={} epsilon={}",
            acc.correct,
            acc.total,
            params.alpha(),
            params.beta(),
            params.epsilon()
        ),
        (n, _) => format!(
            "fit-eval: mean accuracy {mean:.6} over {n} training sets p={p} alpha={} beta={} epsilon={}",
            params.alpha(),
            params.beta(),
            params.epsilon()
        ),
    })
}

fn loocv(args: &LoocvArgs) -> Result<String> {
    let mut flags = model_flags(&args.model).to_vec();
    let leaky = args.leaky.then(|| "true".to_string());
    flags.extend([
        ("data", args.data.as_ref()),
        ("top_k", args.top_k.as_ref()),
        ("leaky", leaky.as_ref()),
    ]);
    let cfg = ExperimentConfig::resolve(file_config(&args.config)?, &flags);
    let (p, params) = cfg.params()?;
    let data = load_source(cfg.require("data")?)?;
    let options = LoocvOptions {
        top_k: cfg.get("top_k")?,
        leaky: cfg.get_or("leaky", false)?,
    };
    let acc = loocv_accuracy_with(&data, p, params, cfg.scheme()?, options)?;
    Ok(format!(
        "loocv: accuracy {:.6} ({}/{})",
        acc.value(),
        acc.correct,
        acc.total
    ))
}

fn sweep(args: &SweepArgs) -> Result<String> {
    let mut flags = model_flags(&args.model).to_vec();
    flags.extend([
        ("data", args.data.as_ref()),
        ("test", args.test.as_ref()),
        ("protocol", args.protocol.as_ref()),
        ("top_k", args.top_k.as_ref()),
        ("out", args.out.as_ref()),
    ]);
    let cfg = ExperimentConfig::resolve(file_config(&args.config)?, &flags);
    let out = cfg.require("out")?;
    let data = load_source(cfg.require("data")?)?;
    let protocol = match cfg.raw("protocol").unwrap_or("holdout") {
        "holdout" => Protocol::Holdout(load_source(cfg.require("test")?)?),
        "loocv" => Protocol::Loocv {
            top_k: cfg.get("top_k")?,
        },
        other => return Err(Error::Config(format!("unknown protocol {other:?}"))),
    };
    let grid = SweepGrid::new(
        cfg.axis("p", 2.0)?,
        cfg.axis("alpha", 4.5)?,
        cfg.axis("beta", 0.0)?,
        cfg.axis("epsilon", 0.0)?,
        cfg.scheme()?,
        protocol,
    )?;
    let result = grid_search(&data, &grid)?;
    save_sweep(&result, out)?;
    let b = &result.best;
    Ok(format!(
        "sweep: {} cells, best accuracy {:.6} at p={} alpha={} beta={} epsilon={} ({} tied), wrote {out}",
        result.accuracies.len(),
        b.accuracy.value(),
        b.p,
        b.alpha,
        b.beta,
        b.epsilon,
        result.ties_at_best
    ))
}

fn raster(args: &RasterArgs) -> Result<String> {
    let mut flags = model_flags(&args.model).to_vec();
    flags.extend([
        ("data", args.data.as_ref()),
        ("lo", args.lo.as_ref()),
        ("hi", args.hi.as_ref()),
        ("resolution", args.resolution.as_ref()),
        ("out", args.out.as_ref()),
    ]);
    let cfg = ExperimentConfig::resolve(file_config(&args.config)?, &flags);
    let out = cfg.require("out")?;
    let (p, params) = cfg.params()?;
    let data = load_source(cfg.require("data")?)?;
    let lo = parse_pair(cfg.raw("lo").unwrap_or("0,0"))?;
    let hi = parse_pair(cfg.raw("hi").unwrap_or("4,4"))?;
    let resolution = parse_resolution(cfg.raw("resolution").unwrap_or("200"))?;
    let model = build_model(&data, p, params, cfg.scheme()?)?;
    let grid = decision_raster(&model, lo, hi, resolution)?;
    save_raster(&grid, out)?;
    let positive = grid.cells.iter().filter(|l| **l == crate::Label::Positive).count();
    Ok(format!(
        "raster: {}x{} cells ({positive} positive), wrote {out}",
        grid.width, grid.height
    ))
}

fn select_features(args: &SelectArgs) -> Result<String> {
    let cfg = ExperimentConfig::resolve(
        file_config(&args.config)?,
        &[("data", args.data.as_ref()), ("k", args.k.as_ref())],
    );
    let data = load_source(cfg.require("data")?)?;
    let k = cfg.get_or("k", 20usize.min(data.dim()))?;
    let top = select_top_features(&data, k)?;
    let p_values = welch_p_values(&data)?;
    let listed: Vec<String> = top.iter().map(|&j| format!("{j}:{:.6e}", p_values[j])).collect();
    Ok(format!("select-features: top {k} (index:p-value) {}", listed.join(" ")))
}

fn is_usage(e: &Error) -> bool {
    matches!(e, Error::Config(_))
}

/// Runs the CLI on `argv` (program name first), writing the summary line to
/// `stdout` and diagnostics to `stderr`. Returns the process exit code:
/// 0 on success, 1 for data or runtime errors, 2 for usage errors.
pub fn run_cli_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{rendered}");
            } else {
                let _ = write!(stderr, "{rendered}");
            }
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Generate(a) => generate(a),
        Command::FitEval(a) => fit_eval(a),
        Command::Loocv(a) => loocv(a),
        Command::Sweep(a) => sweep(a),
        Command::Raster(a) => raster(a),
        Command::SelectFeatures(a) => select_features(a),
    };
    match outcome {
        Ok(summary) => {
            let _ = writeln!(stdout, "{summary}");
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if is_usage(&e) {
                2
            } else {
                1
            }
        }
    }
}

/// [`run_cli_with`] on the process's standard streams.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_cli_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}
