//! Python bindings: geometry, the zoom curve, fusion, the tracker, metrics
//! and whole-stream runs.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use szoom_core::observation::{evaluate_prf as core_prf, ObservationKind};
use szoom_core::pipeline::{read_trajectory, read_truth, run_paths, zoom_accuracy as core_accuracy, RunPaths};
use szoom_core::tracking::{init_tracker, TrackerParams, TrackerState};
use szoom_core::{Error, Frame, FusionWeights, PipelineConfig, ScalarMap};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

#[pyclass(name = "Rect", eq, frozen, from_py_object)]
#[derive(Clone, Copy, PartialEq)]
struct PyRect {
    inner: szoom_core::Rect,
}

#[pymethods]
impl PyRect {
    #[new]
    fn new(x: i32, y: i32, w: i32, h: i32) -> PyResult<Self> {
        if w < 1 || h < 1 {
            return Err(PyValueError::new_err(format!("empty rect {w}x{h}")));
        }
        Ok(PyRect { inner: szoom_core::Rect::new(x, y, w, h) })
    }

    #[getter]
    fn x(&self) -> i32 {
        self.inner.x
    }

    #[getter]
    fn y(&self) -> i32 {
        self.inner.y
    }

    #[getter]
    fn w(&self) -> i32 {
        self.inner.w
    }

    #[getter]
    fn h(&self) -> i32 {
        self.inner.h
    }

    fn center(&self) -> (f64, f64) {
        self.inner.center()
    }

    fn area(&self) -> i64 {
        self.inner.area()
    }

    fn iou(&self, other: &PyRect) -> f64 {
        self.inner.iou(&other.inner)
    }

    fn contains(&self, other: &PyRect) -> bool {
        self.inner.contains(&other.inner)
    }

    fn as_tuple(&self) -> (i32, i32, i32, i32) {
        (self.inner.x, self.inner.y, self.inner.w, self.inner.h)
    }

    fn __repr__(&self) -> String {
        format!("Rect({}, {}, {}, {})", self.inner.x, self.inner.y, self.inner.w, self.inner.h)
    }
}

/// Grows `rect` to `aspect` (width / height) and keeps it inside the frame.
#[pyfunction]
fn adjust_aspect(rect: &PyRect, aspect: f64, frame_w: usize, frame_h: usize) -> PyRect {
    PyRect { inner: szoom_core::adjust_aspect(rect.inner, aspect, frame_w, frame_h) }
}

#[pyfunction]
fn clamp_rect(rect: &PyRect, frame_w: usize, frame_h: usize) -> PyRect {
    PyRect { inner: szoom_core::clamp_rect(rect.inner, frame_w, frame_h) }
}

/// Cubic ease with zero end slopes from `a0` (f = 0) to `a1` (f = 1).
#[pyfunction]
fn hermite(a0: f64, a1: f64, f: f64) -> PyResult<f64> {
    szoom_core::hermite(a0, a1, f).map_err(to_py)
}

/// Frame counts of the full, zoom-in, hold and zoom-out phases.
#[pyfunction]
#[pyo3(signature = (cycle_len, a_pct = 20.0, b_pct = 30.0))]
fn phase_lengths(cycle_len: usize, a_pct: f64, b_pct: f64) -> PyResult<[usize; 4]> {
    Ok(szoom_core::AbSchedule::new(cycle_len, a_pct, b_pct).map_err(to_py)?.phase_lengths())
}

fn map_from_rows(rows: Vec<Vec<f64>>) -> PyResult<ScalarMap> {
    let h = rows.len();
    let w = rows.first().map_or(0, Vec::len);
    if w == 0 || rows.iter().any(|r| r.len() != w) {
        return Err(PyValueError::new_err("maps must be non-empty rectangular lists of rows"));
    }
    ScalarMap::from_values(w, h, rows.into_iter().flatten().collect()).map_err(to_py)
}

fn map_to_rows(map: &ScalarMap) -> Vec<Vec<f64>> {
    map.values().chunks(map.width()).map(<[f64]>::to_vec).collect()
}

/// Weighted per-pixel combination of observation maps keyed by kind.
#[pyfunction]
fn fuse(observations: BTreeMap<String, Vec<Vec<f64>>>, weights: BTreeMap<String, f64>) -> PyResult<Vec<Vec<f64>>> {
    let weights = FusionWeights::new(weights.into_iter().map(|(k, v)| (ObservationKind::from(k), v))).map_err(to_py)?;
    let maps = observations
        .into_iter()
        .map(|(k, rows)| Ok((ObservationKind::from(k), map_from_rows(rows)?)))
        .collect::<PyResult<BTreeMap<_, _>>>()?;
    Ok(map_to_rows(&szoom_core::fuse(&maps, &weights).map_err(to_py)?))
}

/// Pixel-level (precision, recall, f1) of two binary maps.
#[pyfunction]
fn evaluate_prf(pred: Vec<Vec<f64>>, truth: Vec<Vec<f64>>) -> PyResult<(f64, f64, f64)> {
    let p = core_prf(&map_from_rows(pred)?, &map_from_rows(truth)?).map_err(to_py)?;
    Ok((p.precision, p.recall, p.f1))
}

fn frame_from_bytes(data: &[u8], width: usize, height: usize) -> PyResult<Frame> {
    Frame::from_raw(width, height, 0, data.to_vec()).map_err(to_py)
}

/// Fixed-size mean-shift tracker over interleaved RGB frames.
#[pyclass(name = "Tracker")]
struct PyTracker {
    state: TrackerState,
    dims: (usize, usize),
}

#[pymethods]
impl PyTracker {
    #[new]
    fn new(frame: &[u8], width: usize, height: usize, rect: &PyRect) -> PyResult<Self> {
        let f = frame_from_bytes(frame, width, height)?;
        let state = init_tracker(&f, rect.inner, TrackerParams::default()).map_err(to_py)?;
        Ok(PyTracker { state, dims: (width, height) })
    }

    fn step(&mut self, frame: &[u8]) -> PyResult<PyRect> {
        let f = frame_from_bytes(frame, self.dims.0, self.dims.1)?;
        Ok(PyRect { inner: self.state.step(&f) })
    }

    #[getter]
    fn rect(&self) -> PyRect {
        PyRect { inner: self.state.rect() }
    }
}

/// Runs the whole pipeline and returns the run summary as a dict.
#[pyfunction]
#[pyo3(signature = (input, detections = None, mask = None, config = None, out = None, trajectory = None, seed = None))]
#[allow(clippy::too_many_arguments)]
fn run<'py>(
    py: Python<'py>,
    input: PathBuf,
    detections: Option<PathBuf>,
    mask: Option<PathBuf>,
    config: Option<PathBuf>,
    out: Option<PathBuf>,
    trajectory: Option<PathBuf>,
    seed: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let mut cfg = match config {
        Some(p) => PipelineConfig::load(&p).map_err(to_py)?,
        None => PipelineConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let paths = RunPaths { input, detections, mask, out_dir: out, trajectory };
    let summary = py.detach(|| run_paths(cfg, &paths)).map_err(to_py)?;
    let text = serde_json::to_string(&summary).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Share of zoom operations whose held view contains the truth box.
#[pyfunction]
fn zoom_accuracy(trajectory: PathBuf, truth: PathBuf) -> PyResult<f64> {
    let open = |p: &PathBuf| File::open(p).map(BufReader::new).map_err(|e| PyIOError::new_err(format!("{}: {e}", p.display())));
    let entries = read_trajectory(open(&trajectory)?).map_err(to_py)?;
    let truth = read_truth(open(&truth)?).map_err(to_py)?;
    core_accuracy(&entries, &truth).map_err(to_py)
}

#[pymodule]
fn szoom(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRect>()?;
    m.add_class::<PyTracker>()?;
    m.add_function(wrap_pyfunction!(adjust_aspect, m)?)?;
    m.add_function(wrap_pyfunction!(clamp_rect, m)?)?;
    m.add_function(wrap_pyfunction!(hermite, m)?)?;
    m.add_function(wrap_pyfunction!(phase_lengths, m)?)?;
    m.add_function(wrap_pyfunction!(fuse, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_prf, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(zoom_accuracy, m)?)?;
    Ok(())
}
