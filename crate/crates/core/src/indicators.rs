//! Rolling indicator series over an aligned asset pair.
//!
//! Signature features use log prices; spread, Z-score and the path
//! difference product use raw prices. Every windowed value at row `t` is
//! computed from the `w` rows ending at `t`, so nothing looks ahead.

use std::ops::Range;
use std::str::FromStr;

use chrono::NaiveDateTime;

use crate::data_io::AlignedPairSeries;
use crate::error::IndicatorError;
use crate::path::{level2, Path2D};
use crate::segmented::{segmented_levy, DEFAULT_TOLERANCE};

/// Spread standard deviations below this are treated as a flat spread.
pub const MIN_SPREAD_STD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndicatorConfig {
    pub sig_window: usize,
    pub z_window: usize,
    pub min_history: usize,
}

impl Default for IndicatorConfig {
    fn default() -> Self {
        IndicatorConfig {
            sig_window: 60,
            z_window: 60,
            min_history: 30,
        }
    }
}

/// Whether rolling windows and histories span trading-day boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SessionMode {
    #[default]
    Continuous,
    PerDay,
}

impl FromStr for SessionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "continuous" => Ok(SessionMode::Continuous),
            "per_day" | "per-day" | "perday" => Ok(SessionMode::PerDay),
            _ => Err(s.to_string()),
        }
    }
}

impl std::fmt::Display for SessionMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SessionMode::Continuous => "continuous",
            SessionMode::PerDay => "per_day",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorFrame {
    pub timestamps: Vec<NaiveDateTime>,
    pub spread: Vec<f64>,
    pub z: Vec<Option<f64>>,
    pub sig: Vec<Option<f64>>,
    pub seg_sig: Vec<Option<f64>>,
    pub diff_prod: Vec<Option<f64>>,
    pub hist_mean_sig: Vec<Option<f64>>,
    pub hist_mean_seg: Vec<Option<f64>>,
}

/// One timestamp's worth of indicator values.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FrameRow {
    pub spread: f64,
    pub z: Option<f64>,
    pub sig: Option<f64>,
    pub seg_sig: Option<f64>,
    pub diff_prod: Option<f64>,
    pub hist_mean_sig: Option<f64>,
    pub hist_mean_seg: Option<f64>,
}

impl IndicatorFrame {
    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    pub fn row(&self, t: usize) -> FrameRow {
        FrameRow {
            spread: self.spread[t],
            z: self.z[t],
            sig: self.sig[t],
            seg_sig: self.seg_sig[t],
            diff_prod: self.diff_prod[t],
            hist_mean_sig: self.hist_mean_sig[t],
            hist_mean_seg: self.hist_mean_seg[t],
        }
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (divisor `n - 1`).
pub(crate) fn sample_std(values: &[f64]) -> f64 {
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

fn rolling_z(spread: &[f64], window: usize) -> Vec<Option<f64>> {
    (0..spread.len())
        .map(|t| {
            if t + 1 < window {
                return None;
            }
            let win = &spread[t + 1 - window..=t];
            let sd = sample_std(win);
            (sd >= MIN_SPREAD_STD).then(|| (spread[t] - mean(win)) / sd)
        })
        .collect()
}

fn rolling_path<F>(x1: &[f64], x2: &[f64], w: usize, f: F) -> Vec<Option<f64>>
where
    F: Fn(&Path2D) -> f64,
{
    (0..x1.len())
        .map(|t| {
            if t + 1 < w {
                return None;
            }
            let path = Path2D::from_coords(&x1[t + 1 - w..=t], &x2[t + 1 - w..=t]).ok()?;
            Some(f(&path))
        })
        .collect()
}

fn lagged_product(r1: &[f64], r2: &[f64], w: usize) -> Vec<Option<f64>> {
    (0..r1.len())
        .map(|t| (t >= w).then(|| (r1[t] - r1[t - w]) * (r2[t] - r2[t - w])))
        .collect()
}

fn spread_of(series: &AlignedPairSeries) -> Vec<f64> {
    series
        .raw_1
        .iter()
        .zip(&series.raw_2)
        .map(|(a, b)| a - b)
        .collect()
}

/// Rolling Z-score of the raw spread `raw_1 - raw_2`.
pub fn z_score(series: &AlignedPairSeries, z_window: usize) -> Vec<Option<f64>> {
    assert!(z_window >= 2, "z_window must be at least 2");
    rolling_z(&spread_of(series), z_window)
}

/// Rolling `X^{(1,2)}` of the log-price path over `w` points.
pub fn windowed_signature(series: &AlignedPairSeries, w: usize) -> Vec<Option<f64>> {
    assert!(w >= 2, "signature window must be at least 2");
    rolling_path(&series.log_1, &series.log_2, w, |p| level2(p).tensor[0][1])
}

/// Rolling segmented Lévy area `C^{1,2}` of the log-price path.
pub fn windowed_segmented(series: &AlignedPairSeries, w: usize) -> Vec<Option<f64>> {
    assert!(w >= 2, "signature window must be at least 2");
    rolling_path(&series.log_1, &series.log_2, w, |p| {
        segmented_levy(p, DEFAULT_TOLERANCE).c_value
    })
}

/// Product of the two assets' raw-price changes over lag `w`.
pub fn diff_product(series: &AlignedPairSeries, w: usize) -> Vec<Option<f64>> {
    assert!(w >= 1, "lag must be at least 1");
    lagged_product(&series.raw_1, &series.raw_2, w)
}

/// Mean of all present values strictly before each position.
pub fn expanding_mean(values: &[Option<f64>], min_history: usize) -> Vec<Option<f64>> {
    let mut sum = 0.0;
    let mut count = 0usize;
    values
        .iter()
        .map(|v| {
            let out = (count >= min_history && count > 0).then(|| sum / count as f64);
            if let Some(x) = v {
                sum += x;
                count += 1;
            }
            out
        })
        .collect()
}

/// Sample coefficient of variation `σ / μ`.
///
/// With `shift_to_positive`, values are first replaced by `v - min(v)` so a
/// signed series becomes nonnegative.
pub fn coefficient_of_variation(
    values: &[f64],
    shift_to_positive: bool,
) -> Result<f64, IndicatorError> {
    if values.is_empty() {
        return Err(IndicatorError::EmptyInput);
    }
    let shifted: Vec<f64> = if shift_to_positive {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        values.iter().map(|v| v - lo).collect()
    } else {
        values.to_vec()
    };
    let mu = mean(&shifted);
    if !(mu > 0.0) || mu < 1e-15 {
        return Err(IndicatorError::UndefinedCv(mu));
    }
    if shifted.len() == 1 {
        return Ok(0.0);
    }
    Ok(sample_std(&shifted) / mu)
}

fn session_ranges(series: &AlignedPairSeries, mode: SessionMode) -> Vec<Range<usize>> {
    match mode {
        SessionMode::Continuous => std::iter::once(0..series.len()).collect(),
        SessionMode::PerDay => series.day_ranges(),
    }
}

/// All indicator columns for `series`; in per-day mode every window and
/// history restarts at each trading day.
pub fn compute_frame(
    series: &AlignedPairSeries,
    cfg: &IndicatorConfig,
    mode: SessionMode,
) -> IndicatorFrame {
    assert!(
        cfg.sig_window >= 2 && cfg.z_window >= 2,
        "windows must be at least 2"
    );
    let spread = spread_of(series);
    let n = series.len();
    let mut frame = IndicatorFrame {
        timestamps: series.timestamps.clone(),
        spread: spread.clone(),
        z: Vec::with_capacity(n),
        sig: Vec::with_capacity(n),
        seg_sig: Vec::with_capacity(n),
        diff_prod: Vec::with_capacity(n),
        hist_mean_sig: Vec::with_capacity(n),
        hist_mean_seg: Vec::with_capacity(n),
    };
    let w = cfg.sig_window;
    for r in session_ranges(series, mode) {
        let (l1, l2) = (&series.log_1[r.clone()], &series.log_2[r.clone()]);
        let sig = rolling_path(l1, l2, w, |p| level2(p).tensor[0][1]);
        let seg = rolling_path(l1, l2, w, |p| segmented_levy(p, DEFAULT_TOLERANCE).c_value);
        frame.z.extend(rolling_z(&spread[r.clone()], cfg.z_window));
        frame.diff_prod.extend(lagged_product(
            &series.raw_1[r.clone()],
            &series.raw_2[r.clone()],
            w,
        ));
        frame
            .hist_mean_sig
            .extend(expanding_mean(&sig, cfg.min_history));
        frame
            .hist_mean_seg
            .extend(expanding_mean(&seg, cfg.min_history));
        frame.sig.extend(sig);
        frame.seg_sig.extend(seg);
    }
    frame
}
