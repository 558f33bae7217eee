//! C ABI for `potential-core`.
//!
//! Datasets and models cross the boundary as opaque handles created by a
//! `pot_*_new`/`pot_*_build` call and released with the matching `_free`.
//! Every fallible call returns a [`PotStatus`]; on failure a description is
//! available from [`pot_last_error`] on the same thread until the next
//! failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use potential_core::{
    build_model, checkerboard_sample, classify, classify_batch, holdout_accuracy, loocv_accuracy, select_top_features,
    welch_p_values, AttributeWeights, Error, Label, LabeledDataset, PointWeights, PotentialModel, PotentialParams,
    WeightingScheme,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    MissingClass = 4,
    DuplicatePoint = 5,
    AmbiguousSingularity = 6,
    InsufficientSamples = 7,
    InvalidK = 8,
    Io = 9,
    Parse = 10,
    ConvergenceFailure = 11,
    Panic = 12,
}

pub const POT_POINT_WEIGHTS_UNIT: u32 = 0;
pub const POT_POINT_WEIGHTS_OPPOSITE_DISTANCE: u32 = 1;

pub const POT_ATTRIBUTE_WEIGHTS_UNIT: u32 = 0;
pub const POT_ATTRIBUTE_WEIGHTS_ONE_MINUS_P_VALUE: u32 = 1;
pub const POT_ATTRIBUTE_WEIGHTS_ABS_CORRELATION: u32 = 2;

/// Opaque labeled dataset.
pub struct PotDataset(LabeledDataset);

/// Opaque trained model.
pub struct PotModel(PotentialModel);

/// Exponents and weighting scheme of a model.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PotModelConfig {
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    /// One of the `POT_POINT_WEIGHTS_*` constants.
    pub point_weights: u32,
    /// One of the `POT_ATTRIBUTE_WEIGHTS_*` constants.
    pub attribute_weights: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn status_of(error: &Error) -> PotStatus {
    match error {
        Error::DimensionMismatch { .. } | Error::NotTwoDimensional(_) => PotStatus::DimensionMismatch,
        Error::MissingClass(_) => PotStatus::MissingClass,
        Error::DuplicateCrossClassPoint { .. } => PotStatus::DuplicatePoint,
        Error::AmbiguousSingularity => PotStatus::AmbiguousSingularity,
        Error::InsufficientSamples { .. } => PotStatus::InsufficientSamples,
        Error::InvalidK { .. } => PotStatus::InvalidK,
        Error::Io { .. } => PotStatus::Io,
        Error::Parse { .. } | Error::Label { .. } | Error::RaggedRows { .. } => PotStatus::Parse,
        Error::ConvergenceFailure(_) => PotStatus::ConvergenceFailure,
        Error::Batch { source, .. } | Error::SweepCell { source, .. } => status_of(source),
        _ => PotStatus::InvalidArgument,
    }
}

struct Failure(PotStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(PotStatus::NullPointer, format!("{what} is null"))
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure(PotStatus::InvalidArgument, message.into())
}

/// Runs `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PotStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PotStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(format!("internal panic: {message}"));
            PotStatus::Panic
        }
    }
}

unsafe fn slice_in<'a, T>(ptr: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(ptr, len))
}

unsafe fn slice_out<'a, T>(ptr: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts_mut(ptr, len))
}

unsafe fn handle<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(|| null(what))
}

unsafe fn store<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn scheme_of(config: &PotModelConfig) -> Result<WeightingScheme, Failure> {
    let point = match config.point_weights {
        POT_POINT_WEIGHTS_UNIT => PointWeights::Unit,
        POT_POINT_WEIGHTS_OPPOSITE_DISTANCE => PointWeights::OppositeClassDistance,
        other => return Err(invalid(format!("unknown point weighting {other}"))),
    };
    let attr = match config.attribute_weights {
        POT_ATTRIBUTE_WEIGHTS_UNIT => AttributeWeights::Unit,
        POT_ATTRIBUTE_WEIGHTS_ONE_MINUS_P_VALUE => AttributeWeights::OneMinusPValue,
        POT_ATTRIBUTE_WEIGHTS_ABS_CORRELATION => AttributeWeights::AbsCorrelation,
        other => return Err(invalid(format!("unknown attribute weighting {other}"))),
    };
    Ok(WeightingScheme::new(point, attr))
}

fn params_of(config: &PotModelConfig) -> Result<PotentialParams, Failure> {
    Ok(PotentialParams::new(config.alpha, config.beta, config.epsilon)?)
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pot_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a NUL-terminated string with static lifetime.
#[no_mangle]
pub extern "C" fn pot_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies `n` rows of `dim` features (row-major) and `n` labels (`+1` or
/// `-1`) into a new dataset.
///
/// # Safety
/// `features` must point to `n * dim` doubles, `labels` to `n` ints and
/// `out` to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn pot_dataset_new(
    features: *const f64,
    labels: *const i32,
    n: usize,
    dim: usize,
    out: *mut *mut PotDataset,
) -> PotStatus {
    guard(|| {
        let total = n.checked_mul(dim).ok_or_else(|| invalid("n * dim overflows"))?;
        let features = slice_in(features, total, "features")?.to_vec();
        let labels = slice_in(labels, n, "labels")?
            .iter()
            .map(|&v| Label::from_sign(v as i64).ok_or_else(|| invalid(format!("label {v} is not +1 or -1"))))
            .collect::<Result<Vec<_>, _>>()?;
        let data = LabeledDataset::from_flat(dim, features, labels)?;
        store(out, boxed(PotDataset(data)), "out")
    })
}

/// Reads a dataset CSV (header row, label column `label`).
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pot_dataset_load_csv(path: *const c_char, out: *mut *mut PotDataset) -> PotStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        let path = CStr::from_ptr(path).to_str().map_err(|_| invalid("path is not UTF-8"))?;
        let data = potential_core::io::load_dataset(path).map_err(|e| match e {
            Error::InvalidDataset(message) => Failure(PotStatus::Parse, message),
            other => other.into(),
        })?;
        store(out, boxed(PotDataset(data)), "out")
    })
}

/// Uniform checkerboard sample of `count` points.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pot_dataset_checkerboard(seed: u64, count: usize, out: *mut *mut PotDataset) -> PotStatus {
    guard(|| {
        let data = checkerboard_sample(seed, count)?;
        store(out, boxed(PotDataset(data)), "out")
    })
}

/// Number of rows; 0 for a null handle.
///
/// # Safety
/// `data` must be null or a live dataset handle.
#[no_mangle]
pub unsafe extern "C" fn pot_dataset_len(data: *const PotDataset) -> usize {
    data.as_ref().map_or(0, |d| d.0.len())
}

/// Number of features per row; 0 for a null handle.
///
/// # Safety
/// `data` must be null or a live dataset handle.
#[no_mangle]
pub unsafe extern "C" fn pot_dataset_dim(data: *const PotDataset) -> usize {
    data.as_ref().map_or(0, |d| d.0.dim())
}

/// # Safety
/// `data` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pot_dataset_free(data: *mut PotDataset) {
    if !data.is_null() {
        drop(Box::from_raw(data));
    }
}

/// Fits weights on `data` and freezes them into a model.
///
/// # Safety
/// `data` must be a live dataset handle, `config` readable and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn pot_model_build(
    data: *const PotDataset,
    config: *const PotModelConfig,
    out: *mut *mut PotModel,
) -> PotStatus {
    guard(|| {
        let data = handle(data, "data")?;
        let config = handle(config, "config")?;
        let model = build_model(&data.0, config.p, params_of(config)?, scheme_of(config)?)?;
        store(out, boxed(PotModel(model)), "out")
    })
}

/// # Safety
/// `model` must be null or a live model handle.
#[no_mangle]
pub unsafe extern "C" fn pot_model_dim(model: *const PotModel) -> usize {
    model.as_ref().map_or(0, |m| m.0.dim())
}

/// # Safety
/// `model` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pot_model_free(model: *mut PotModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Classifies one query of `len` features. `label` receives `+1` or `-1`;
/// `potential` and `exact_hit` may be null.
///
/// # Safety
/// `x` must point to `len` doubles; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn pot_model_classify(
    model: *const PotModel,
    x: *const f64,
    len: usize,
    label: *mut i32,
    potential: *mut f64,
    exact_hit: *mut bool,
) -> PotStatus {
    guard(|| {
        let model = handle(model, "model")?;
        let x = slice_in(x, len, "x")?;
        let result = classify(&model.0, x)?;
        store(label, result.label.sign(), "label")?;
        if !potential.is_null() {
            potential.write(result.potential);
        }
        if !exact_hit.is_null() {
            exact_hit.write(result.exact_hit);
        }
        Ok(())
    })
}

/// Classifies `n` queries of `dim` features (row-major) in parallel.
/// `labels` receives `n` values; `potentials` may be null.
///
/// # Safety
/// `xs` must point to `n * dim` doubles, `labels` to `n` writable ints and
/// `potentials` to null or `n` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn pot_model_classify_batch(
    model: *const PotModel,
    xs: *const f64,
    n: usize,
    dim: usize,
    labels: *mut i32,
    potentials: *mut f64,
) -> PotStatus {
    guard(|| {
        let model = handle(model, "model")?;
        if dim == 0 {
            return Err(invalid("dim must be positive"));
        }
        let total = n.checked_mul(dim).ok_or_else(|| invalid("n * dim overflows"))?;
        let xs = slice_in(xs, total, "xs")?;
        let rows: Vec<&[f64]> = xs.chunks_exact(dim).collect();
        let results = classify_batch(&model.0, &rows)?;
        let labels = slice_out(labels, n, "labels")?;
        for (slot, r) in labels.iter_mut().zip(&results) {
            *slot = r.label.sign();
        }
        if !potentials.is_null() {
            for (slot, r) in slice_out(potentials, n, "potentials")?.iter_mut().zip(&results) {
                *slot = r.potential;
            }
        }
        Ok(())
    })
}

/// Fraction of `test` rows the model labels correctly.
///
/// # Safety
/// Handles must be live and `accuracy` writable.
#[no_mangle]
pub unsafe extern "C" fn pot_holdout_accuracy(
    model: *const PotModel,
    test: *const PotDataset,
    accuracy: *mut f64,
) -> PotStatus {
    guard(|| {
        let model = handle(model, "model")?;
        let test = handle(test, "test")?;
        let acc = holdout_accuracy(&model.0, &test.0)?;
        store(accuracy, acc.value(), "accuracy")
    })
}

/// Leave-one-out accuracy with selection and weights refit per fold.
/// `top_k == 0` disables feature selection.
///
/// # Safety
/// `data` must be live, `config` readable and `accuracy` writable.
#[no_mangle]
pub unsafe extern "C" fn pot_loocv_accuracy(
    data: *const PotDataset,
    config: *const PotModelConfig,
    top_k: usize,
    accuracy: *mut f64,
) -> PotStatus {
    guard(|| {
        let data = handle(data, "data")?;
        let config = handle(config, "config")?;
        let top_k = (top_k > 0).then_some(top_k);
        let acc = loocv_accuracy(&data.0, config.p, params_of(config)?, scheme_of(config)?, top_k)?;
        store(accuracy, acc.value(), "accuracy")
    })
}

/// Welch two-sided p-value of every attribute. `out_len` must equal the
/// dataset dimension.
///
/// # Safety
/// `data` must be live and `out` point to `out_len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn pot_welch_p_values(data: *const PotDataset, out: *mut f64, out_len: usize) -> PotStatus {
    guard(|| {
        let data = handle(data, "data")?;
        if out_len != data.0.dim() {
            return Err(Failure(
                PotStatus::DimensionMismatch,
                format!("output holds {out_len} values, dataset has {} attributes", data.0.dim()),
            ));
        }
        let p = welch_p_values(&data.0)?;
        slice_out(out, out_len, "out")?.copy_from_slice(&p);
        Ok(())
    })
}

/// Indices of the `k` attributes with the smallest p-values, best first.
///
/// # Safety
/// `data` must be live and `out` point to `k` writable values.
#[no_mangle]
pub unsafe extern "C" fn pot_select_top_features(data: *const PotDataset, k: usize, out: *mut usize) -> PotStatus {
    guard(|| {
        let data = handle(data, "data")?;
        let top = select_top_features(&data.0, k)?;
        slice_out(out, k, "out")?.copy_from_slice(&top);
        Ok(())
    })
}
