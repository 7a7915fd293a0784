//! Level-2 path-signature features for asset pairs and a Z-score pair-trading
//! backtester that uses them as entry filters.
//!
//! * [`path`]: polylines, exact level-2 signatures, Chen concatenation.
//! * [`segmented`]: chord crossings and the segmented Lévy area `C^{1,2}`.
//! * [`indicators`]: rolling Z-score, signature features, difference product.
//! * [`strategy`]: signals, filters, sizing and the backtest loop.
//! * [`metrics`]: return/risk metrics and CSV/SVG reports.
//! * [`data_io`], [`synth`], [`config`], [`cli`]: data and workflow plumbing.

// `!(x > y)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod data_io;
pub mod error;
pub mod exact;
pub mod indicators;
pub mod metrics;
pub mod path;
pub mod segmented;
pub mod strategy;
pub mod synth;

pub use data_io::{align_pair, load_bars, AlignedPairSeries, MinuteBar};
pub use error::{Error, Result};
pub use indicators::{compute_frame, IndicatorConfig, IndicatorFrame, SessionMode};
pub use metrics::BacktestReport;
pub use path::{chen_concat, decompose, level1, level2, total_variation, Level2Signature, Path2D};
pub use segmented::{chord_crossings, segmented_levy, Crossing, SegmentedLevyArea};
pub use strategy::{run_backtest, LotMode, StrategyConfig, TradeLedger, Variant};
