//! Python bindings for the `sigpair` crate.
//!
//! Paths are passed as sequences of `(x1, x2)` pairs; indicator columns come
//! back as lists with `None` where a value is not yet defined.

// `!(x > y)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use sigpair::cli::compare_variants;
use sigpair::config::RunConfig;
use sigpair::data_io::{align_pair, load_bars, AlignedPairSeries};
use sigpair::indicators::{self, IndicatorConfig, SessionMode};
use sigpair::metrics::{self, build_report, BacktestReport};
use sigpair::path::{self, Path2D};
use sigpair::segmented::{self, DEFAULT_TOLERANCE};
use sigpair::strategy::{run_backtest, LotMode, StrategyConfig, Variant};
use sigpair::synth::{generate_synthetic, SynthParams};

/// `(segment index, fraction, (x1, x2))`
type CrossingTuple = (usize, f64, (f64, f64));

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn to_path(points: Vec<(f64, f64)>) -> PyResult<Path2D> {
    Path2D::new(points.into_iter().map(|(a, b)| [a, b]).collect()).map_err(value_err)
}

/// Degree-2 signature of a 2-D path.
#[pyclass(frozen, from_py_object, name = "Level2Signature")]
#[derive(Clone)]
struct PyLevel2Signature {
    inner: path::Level2Signature,
}

#[pymethods]
impl PyLevel2Signature {
    #[getter]
    fn inc(&self) -> (f64, f64) {
        (self.inner.inc[0], self.inner.inc[1])
    }

    #[getter]
    fn tensor(&self) -> [[f64; 2]; 2] {
        self.inner.tensor
    }

    #[getter]
    fn levy(&self) -> f64 {
        self.inner.levy
    }

    #[getter]
    fn sym(&self) -> [[f64; 2]; 2] {
        self.inner.sym
    }

    fn __repr__(&self) -> String {
        format!(
            "Level2Signature(inc={:?}, tensor={:?}, levy={})",
            self.inner.inc, self.inner.tensor, self.inner.levy
        )
    }
}

#[pyclass(frozen, name = "SegmentedLevyArea")]
struct PySegmentedLevyArea {
    inner: segmented::SegmentedLevyArea,
}

#[pymethods]
impl PySegmentedLevyArea {
    #[getter]
    fn chord(&self) -> ((f64, f64), (f64, f64)) {
        let [a, b] = self.inner.chord;
        ((a[0], a[1]), (b[0], b[1]))
    }

    #[getter]
    fn crossings(&self) -> Vec<CrossingTuple> {
        self.inner
            .crossings
            .iter()
            .map(|c| (c.segment, c.fraction, (c.point[0], c.point[1])))
            .collect()
    }

    #[getter]
    fn segment_areas(&self) -> Vec<f64> {
        self.inner.segment_areas.clone()
    }

    #[getter]
    fn c_value(&self) -> f64 {
        self.inner.c_value
    }

    #[getter]
    fn total_levy(&self) -> f64 {
        self.inner.total_levy
    }

    fn __repr__(&self) -> String {
        format!(
            "SegmentedLevyArea(c_value={}, total_levy={}, crossings={})",
            self.inner.c_value,
            self.inner.total_levy,
            self.inner.crossings.len()
        )
    }
}

/// Time-aligned prices for one asset pair.
#[pyclass(frozen, name = "PairSeries")]
struct PyPairSeries {
    inner: AlignedPairSeries,
}

#[pymethods]
impl PyPairSeries {
    /// Loads and aligns two `timestamp,price` CSV files.
    #[staticmethod]
    #[pyo3(signature = (asset1, asset2, symbol1 = "ASSET1", symbol2 = "ASSET2"))]
    fn load(asset1: &str, asset2: &str, symbol1: &str, symbol2: &str) -> PyResult<Self> {
        let b1 = load_bars(asset1, symbol1).map_err(value_err)?;
        let b2 = load_bars(asset2, symbol2).map_err(value_err)?;
        Ok(PyPairSeries {
            inner: align_pair(&b1, &b2).map_err(value_err)?,
        })
    }

    /// Seeded synthetic pair (43 days of 345 minutes by default).
    #[staticmethod]
    #[pyo3(signature = (seed, days = 43, minutes_per_day = 345))]
    fn synthetic(seed: u64, days: usize, minutes_per_day: usize) -> PyResult<Self> {
        if days == 0
            || minutes_per_day == 0
            || minutes_per_day > sigpair::synth::MAX_MINUTES_PER_DAY
        {
            return Err(PyValueError::new_err(
                "days and minutes_per_day must be positive",
            ));
        }
        let params = SynthParams {
            days,
            minutes_per_day,
            ..SynthParams::default()
        };
        let (b1, b2) = generate_synthetic(seed, &params, ("ASSET1", "ASSET2"));
        Ok(PyPairSeries {
            inner: align_pair(&b1, &b2).map_err(value_err)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn timestamps(&self) -> Vec<String> {
        self.inner
            .timestamps
            .iter()
            .map(sigpair::data_io::format_timestamp)
            .collect()
    }

    #[getter]
    fn raw_1(&self) -> Vec<f64> {
        self.inner.raw_1.clone()
    }

    #[getter]
    fn raw_2(&self) -> Vec<f64> {
        self.inner.raw_2.clone()
    }

    #[getter]
    fn n_days(&self) -> usize {
        self.inner.n_days()
    }
}

#[pyfunction]
fn level1(points: Vec<(f64, f64)>) -> PyResult<(f64, f64)> {
    let inc = path::level1(&to_path(points)?);
    Ok((inc[0], inc[1]))
}

#[pyfunction]
fn level2(points: Vec<(f64, f64)>) -> PyResult<PyLevel2Signature> {
    Ok(PyLevel2Signature {
        inner: path::level2(&to_path(points)?),
    })
}

#[pyfunction]
fn chen_concat(a: &PyLevel2Signature, b: &PyLevel2Signature) -> PyLevel2Signature {
    PyLevel2Signature {
        inner: path::chen_concat(&a.inner, &b.inner),
    }
}

#[pyfunction]
fn total_variation(points: Vec<(f64, f64)>) -> PyResult<f64> {
    Ok(path::total_variation(&to_path(points)?))
}

#[pyfunction]
#[pyo3(signature = (points, tolerance = DEFAULT_TOLERANCE))]
fn chord_crossings(points: Vec<(f64, f64)>, tolerance: f64) -> PyResult<Vec<CrossingTuple>> {
    let crossings = segmented::chord_crossings(&to_path(points)?, tolerance).map_err(value_err)?;
    Ok(crossings
        .into_iter()
        .map(|c| (c.segment, c.fraction, (c.point[0], c.point[1])))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (points, tolerance = DEFAULT_TOLERANCE))]
fn segmented_levy(points: Vec<(f64, f64)>, tolerance: f64) -> PyResult<PySegmentedLevyArea> {
    Ok(PySegmentedLevyArea {
        inner: segmented::segmented_levy(&to_path(points)?, tolerance),
    })
}

#[pyfunction]
fn expanding_mean(values: Vec<Option<f64>>, min_history: usize) -> Vec<Option<f64>> {
    indicators::expanding_mean(&values, min_history)
}

#[pyfunction]
#[pyo3(signature = (values, shift_to_positive = false))]
fn coefficient_of_variation(values: Vec<f64>, shift_to_positive: bool) -> PyResult<f64> {
    indicators::coefficient_of_variation(&values, shift_to_positive).map_err(value_err)
}

fn parse_session(s: &str) -> PyResult<SessionMode> {
    s.parse()
        .map_err(|_| PyValueError::new_err(format!("unknown session mode `{s}`")))
}

/// Indicator frame as a dict of equal-length columns.
#[pyfunction]
#[pyo3(signature = (series, sig_window = 60, z_window = 60, min_history = 30, session_mode = "continuous"))]
fn compute_indicators<'py>(
    py: Python<'py>,
    series: &PyPairSeries,
    sig_window: usize,
    z_window: usize,
    min_history: usize,
    session_mode: &str,
) -> PyResult<Bound<'py, PyDict>> {
    if sig_window < 2 || z_window < 2 {
        return Err(PyValueError::new_err("windows must be at least 2"));
    }
    let cfg = IndicatorConfig {
        sig_window,
        z_window,
        min_history,
    };
    let f = indicators::compute_frame(&series.inner, &cfg, parse_session(session_mode)?);
    let d = PyDict::new(py);
    d.set_item("spread", f.spread)?;
    d.set_item("z", f.z)?;
    d.set_item("sig", f.sig)?;
    d.set_item("seg_sig", f.seg_sig)?;
    d.set_item("diff_prod", f.diff_prod)?;
    d.set_item("hist_mean_sig", f.hist_mean_sig)?;
    d.set_item("hist_mean_seg", f.hist_mean_seg)?;
    Ok(d)
}

#[pyfunction]
fn overall_return(equity: Vec<f64>) -> PyResult<f64> {
    metrics::overall_return(&equity).map_err(value_err)
}

#[pyfunction]
fn max_drawdown(equity: Vec<f64>) -> f64 {
    metrics::max_drawdown(&equity)
}

#[pyfunction]
#[pyo3(signature = (daily_returns, risk_free_annual = 0.0))]
fn sharpe(daily_returns: Vec<f64>, risk_free_annual: f64) -> PyResult<f64> {
    metrics::sharpe(&daily_returns, risk_free_annual).map_err(value_err)
}

fn report_dict<'py>(
    py: Python<'py>,
    variant: Variant,
    r: &BacktestReport,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("variant", variant.as_str())?;
    d.set_item("overall_return", r.overall_return)?;
    d.set_item("mean_daily_return", r.mean_daily_return)?;
    d.set_item("max_drawdown", r.max_drawdown)?;
    d.set_item("std", r.daily_std)?;
    d.set_item("sharpe", r.sharpe)?;
    d.set_item("count", r.count)?;
    d.set_item(
        "equity",
        r.equity.iter().map(|p| p.equity).collect::<Vec<_>>(),
    )?;
    Ok(d)
}

#[allow(clippy::too_many_arguments)]
fn strategy_config(
    variant: &str,
    buy_threshold: f64,
    sell_threshold: f64,
    fee_bps: f64,
    initial_balance: f64,
    integer_lots: bool,
    session_mode: &str,
    sig_window: usize,
    z_window: usize,
    min_history: usize,
) -> PyResult<StrategyConfig> {
    if !(buy_threshold > sell_threshold) {
        return Err(PyValueError::new_err(
            "buy_threshold must exceed sell_threshold",
        ));
    }
    if sig_window < 2 || z_window < 2 || !(initial_balance > 0.0) || !(fee_bps >= 0.0) {
        return Err(PyValueError::new_err("invalid strategy parameters"));
    }
    Ok(StrategyConfig {
        variant: variant
            .parse()
            .map_err(|_| PyValueError::new_err(format!("unknown variant `{variant}`")))?,
        buy_threshold,
        sell_threshold,
        fee_bps,
        initial_balance,
        lot_mode: if integer_lots {
            LotMode::Integer
        } else {
            LotMode::Fractional
        },
        session_mode: parse_session(session_mode)?,
        indicator: IndicatorConfig {
            sig_window,
            z_window,
            min_history,
        },
    })
}

/// Backtests one variant and returns its metrics (plus the equity curve).
#[pyfunction]
#[pyo3(signature = (
    series, variant = "NO_SIG", buy_threshold = 2.0, sell_threshold = -2.0, fee_bps = 0.0,
    initial_balance = 1_000_000.0, integer_lots = false, session_mode = "continuous",
    sig_window = 60, z_window = 60, min_history = 30, risk_free_annual = 0.0
))]
#[allow(clippy::too_many_arguments)]
fn backtest<'py>(
    py: Python<'py>,
    series: &PyPairSeries,
    variant: &str,
    buy_threshold: f64,
    sell_threshold: f64,
    fee_bps: f64,
    initial_balance: f64,
    integer_lots: bool,
    session_mode: &str,
    sig_window: usize,
    z_window: usize,
    min_history: usize,
    risk_free_annual: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = strategy_config(
        variant,
        buy_threshold,
        sell_threshold,
        fee_bps,
        initial_balance,
        integer_lots,
        session_mode,
        sig_window,
        z_window,
        min_history,
    )?;
    let frame = indicators::compute_frame(&series.inner, &cfg.indicator, cfg.session_mode);
    let (ledger, equity) = run_backtest(&series.inner, &frame, &cfg).map_err(runtime_err)?;
    let report = build_report(&equity, &ledger, risk_free_annual).map_err(runtime_err)?;
    report_dict(py, cfg.variant, &report)
}

/// Runs all four variants on a seeded synthetic pair; one dict per variant.
#[pyfunction]
#[pyo3(signature = (seed, days = 43, minutes_per_day = 345))]
fn compare_synthetic<'py>(
    py: Python<'py>,
    seed: u64,
    days: usize,
    minutes_per_day: usize,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let mut cfg = RunConfig {
        seed: Some(seed),
        ..RunConfig::default()
    };
    cfg.synth.days = days;
    cfg.synth.minutes_per_day = minutes_per_day;
    let results = compare_variants(&cfg).map_err(runtime_err)?;
    results
        .iter()
        .map(|(v, _, r)| report_dict(py, *v, r))
        .collect()
}

#[pymodule]
fn pysigpair(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLevel2Signature>()?;
    m.add_class::<PySegmentedLevyArea>()?;
    m.add_class::<PyPairSeries>()?;
    m.add_function(wrap_pyfunction!(level1, m)?)?;
    m.add_function(wrap_pyfunction!(level2, m)?)?;
    m.add_function(wrap_pyfunction!(chen_concat, m)?)?;
    m.add_function(wrap_pyfunction!(total_variation, m)?)?;
    m.add_function(wrap_pyfunction!(chord_crossings, m)?)?;
    m.add_function(wrap_pyfunction!(segmented_levy, m)?)?;
    m.add_function(wrap_pyfunction!(expanding_mean, m)?)?;
    m.add_function(wrap_pyfunction!(coefficient_of_variation, m)?)?;
    m.add_function(wrap_pyfunction!(compute_indicators, m)?)?;
    m.add_function(wrap_pyfunction!(overall_return, m)?)?;
    m.add_function(wrap_pyfunction!(max_drawdown, m)?)?;
    m.add_function(wrap_pyfunction!(sharpe, m)?)?;
    m.add_function(wrap_pyfunction!(backtest, m)?)?;
    m.add_function(wrap_pyfunction!(compare_synthetic, m)?)?;
    Ok(())
}
