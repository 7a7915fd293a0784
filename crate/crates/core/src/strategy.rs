//! Z-score pair trading with optional signature filters.
//!
//! Four variants share one signal generator and differ only in the entry
//! filter: `NO_SIG` trades every threshold crossing, `SIG` requires the
//! windowed `X^{(1,2)}` to sit below its historical mean, `SE_SIG` applies
//! the same test to the segmented signature, and `SE_SIG_DIFF` additionally
//! requires both assets to have moved in the same direction over the window
//! (positive path difference product). Exits are never filtered.

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDateTime;

use crate::data_io::AlignedPairSeries;
use crate::error::StrategyError;
use crate::indicators::{FrameRow, IndicatorConfig, IndicatorFrame, SessionMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    NoSig,
    Sig,
    SeSig,
    SeSigDiff,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::NoSig,
        Variant::Sig,
        Variant::SeSig,
        Variant::SeSigDiff,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::NoSig => "NO_SIG",
            Variant::Sig => "SIG",
            Variant::SeSig => "SE_SIG",
            Variant::SeSigDiff => "SE_SIG_DIFF",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().replace('-', "_").as_str() {
            "NO_SIG" | "NOSIG" => Ok(Variant::NoSig),
            "SIG" => Ok(Variant::Sig),
            "SE_SIG" => Ok(Variant::SeSig),
            "SE_SIG_DIFF" => Ok(Variant::SeSigDiff),
            _ => Err(s.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LotMode {
    #[default]
    Fractional,
    Integer,
}

impl FromStr for LotMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fractional" => Ok(LotMode::Fractional),
            "integer" => Ok(LotMode::Integer),
            _ => Err(s.to_string()),
        }
    }
}

impl fmt::Display for LotMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LotMode::Fractional => "fractional",
            LotMode::Integer => "integer",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyConfig {
    pub variant: Variant,
    pub buy_threshold: f64,
    pub sell_threshold: f64,
    pub fee_bps: f64,
    pub initial_balance: f64,
    pub lot_mode: LotMode,
    pub session_mode: SessionMode,
    pub indicator: IndicatorConfig,
}

impl Default for StrategyConfig {
    fn default() -> Self {
        StrategyConfig {
            variant: Variant::NoSig,
            buy_threshold: 2.0,
            sell_threshold: -2.0,
            fee_bps: 0.0,
            initial_balance: 1_000_000.0,
            lot_mode: LotMode::Fractional,
            session_mode: SessionMode::Continuous,
            indicator: IndicatorConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signal {
    EnterShort1Long2,
    EnterLong1Short2,
    ExitToFlat,
    Hold,
}

impl Signal {
    pub fn is_entry(&self) -> bool {
        matches!(self, Signal::EnterShort1Long2 | Signal::EnterLong1Short2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PositionState {
    #[default]
    Flat,
    Short1Long2,
    Long1Short2,
}

impl PositionState {
    fn entered_by(signal: Signal) -> Option<PositionState> {
        match signal {
            Signal::EnterShort1Long2 => Some(PositionState::Short1Long2),
            Signal::EnterLong1Short2 => Some(PositionState::Long1Short2),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Position {
    pub state: PositionState,
    pub lots_1: f64,
    pub lots_2: f64,
    pub entry_timestamp: Option<NaiveDateTime>,
    pub entry_prices: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Buy,
    Sell,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Buy => "BUY",
            Side::Sell => "SELL",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Order {
    pub timestamp: NaiveDateTime,
    pub symbol: String,
    pub side: Side,
    pub lots: f64,
    pub price: f64,
    pub fee: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundTrip {
    pub entry: NaiveDateTime,
    pub exit: NaiveDateTime,
    /// Gross mark-to-market gain of both legs; fees are on the orders.
    pub pnl: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TradeLedger {
    pub orders: Vec<Order>,
    pub round_trips: Vec<RoundTrip>,
    /// Entry events plus exit events.
    pub count: usize,
}

impl TradeLedger {
    pub fn total_fees(&self) -> f64 {
        self.orders.iter().map(|o| o.fee).sum()
    }

    pub fn total_pnl(&self) -> f64 {
        self.round_trips.iter().map(|r| r.pnl).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquityPoint {
    pub timestamp: NaiveDateTime,
    pub equity: f64,
}

/// Unfiltered Z-score signal given the current position.
///
/// An open position exits once Z reaches zero from its entry side; crossing
/// the opposite threshold yields the opposite entry (a flip).
pub fn raw_pair_signal(z: Option<f64>, state: PositionState, cfg: &StrategyConfig) -> Signal {
    let Some(z) = z else {
        return Signal::Hold;
    };
    match state {
        PositionState::Flat if z > cfg.buy_threshold => Signal::EnterShort1Long2,
        PositionState::Flat if z < cfg.sell_threshold => Signal::EnterLong1Short2,
        PositionState::Flat => Signal::Hold,
        PositionState::Short1Long2 if z < cfg.sell_threshold => Signal::EnterLong1Short2,
        PositionState::Short1Long2 if z <= 0.0 => Signal::ExitToFlat,
        PositionState::Long1Short2 if z > cfg.buy_threshold => Signal::EnterShort1Long2,
        PositionState::Long1Short2 if z >= 0.0 => Signal::ExitToFlat,
        _ => Signal::Hold,
    }
}

fn below_mean(value: Option<f64>, mean: Option<f64>) -> bool {
    matches!((value, mean), (Some(v), Some(m)) if v < m)
}

/// Whether `variant`'s filter admits a new entry at this row.
pub fn entry_allowed(row: &FrameRow, variant: Variant) -> bool {
    match variant {
        Variant::NoSig => true,
        Variant::Sig => below_mean(row.sig, row.hist_mean_sig),
        Variant::SeSig => below_mean(row.seg_sig, row.hist_mean_seg),
        Variant::SeSigDiff => {
            below_mean(row.seg_sig, row.hist_mean_seg)
                && matches!(row.diff_prod, Some(d) if d > 0.0)
        }
    }
}

/// Blocks entries that fail the variant's filter; other signals pass.
pub fn apply_filters(signal: Signal, row: &FrameRow, variant: Variant) -> Signal {
    if signal.is_entry() && !entry_allowed(row, variant) {
        Signal::Hold
    } else {
        signal
    }
}

/// Lots per leg so that each leg carries half of `budget` in notional.
pub fn size_position(
    price_1: f64,
    price_2: f64,
    budget: f64,
    lot_mode: LotMode,
) -> Result<(f64, f64), StrategyError> {
    if !(price_1 > 0.0 && price_2 > 0.0 && budget > 0.0)
        || !(price_1.is_finite() && price_2.is_finite() && budget.is_finite())
    {
        return Err(StrategyError::InvalidSizingInput(price_1, price_2, budget));
    }
    let half = budget / 2.0;
    match lot_mode {
        LotMode::Fractional => Ok((half / price_1, half / price_2)),
        LotMode::Integer => {
            for price in [price_1, price_2] {
                if budget < price {
                    return Err(StrategyError::Sizing { budget, price });
                }
            }
            let lots = |p: f64| (half / p).round().max(1.0);
            Ok((lots(price_1), lots(price_2)))
        }
    }
}

struct Book<'a> {
    series: &'a AlignedPairSeries,
    fee_rate: f64,
    cash: f64,
    position: Position,
    ledger: TradeLedger,
}

impl Book<'_> {
    fn order(&mut self, t: usize, leg: usize, signed_lots: f64) {
        let (symbol, price) = match leg {
            0 => (&self.series.symbols.0, self.series.raw_1[t]),
            _ => (&self.series.symbols.1, self.series.raw_2[t]),
        };
        let fee = self.fee_rate * signed_lots.abs() * price;
        self.cash -= signed_lots * price + fee;
        self.ledger.orders.push(Order {
            timestamp: self.series.timestamps[t],
            symbol: symbol.clone(),
            side: if signed_lots > 0.0 {
                Side::Buy
            } else {
                Side::Sell
            },
            lots: signed_lots.abs(),
            price,
            fee,
        });
    }

    fn close(&mut self, t: usize) {
        let pos = self.position;
        if pos.state == PositionState::Flat {
            return;
        }
        let (p1, p2) = (self.series.raw_1[t], self.series.raw_2[t]);
        self.order(t, 0, -pos.lots_1);
        self.order(t, 1, -pos.lots_2);
        let pnl = pos.lots_1 * (p1 - pos.entry_prices[0]) + pos.lots_2 * (p2 - pos.entry_prices[1]);
        self.ledger.round_trips.push(RoundTrip {
            entry: pos
                .entry_timestamp
                .expect("open position has an entry time"),
            exit: self.series.timestamps[t],
            pnl,
        });
        self.ledger.count += 1;
        self.position = Position::default();
    }

    fn open(
        &mut self,
        t: usize,
        state: PositionState,
        lot_mode: LotMode,
    ) -> Result<(), StrategyError> {
        let (p1, p2) = (self.series.raw_1[t], self.series.raw_2[t]);
        let (n1, n2) = size_position(p1, p2, self.cash, lot_mode)?;
        let (lots_1, lots_2) = match state {
            PositionState::Short1Long2 => (-n1, n2),
            PositionState::Long1Short2 => (n1, -n2),
            PositionState::Flat => unreachable!("open called with flat state"),
        };
        self.order(t, 0, lots_1);
        self.order(t, 1, lots_2);
        self.position = Position {
            state,
            lots_1,
            lots_2,
            entry_timestamp: Some(self.series.timestamps[t]),
            entry_prices: [p1, p2],
        };
        self.ledger.count += 1;
        Ok(())
    }

    fn equity(&self, t: usize) -> f64 {
        self.cash
            + self.position.lots_1 * self.series.raw_1[t]
            + self.position.lots_2 * self.series.raw_2[t]
    }
}

/// Last row of each session; open positions are liquidated there.
fn forced_close_rows(series: &AlignedPairSeries, mode: SessionMode) -> Vec<bool> {
    let mut forced = vec![false; series.len()];
    match mode {
        SessionMode::Continuous => {
            if let Some(last) = forced.last_mut() {
                *last = true;
            }
        }
        SessionMode::PerDay => {
            for r in series.day_ranges() {
                forced[r.end - 1] = true;
            }
        }
    }
    forced
}

/// Single pass over the series, executing at each bar's raw prices.
///
/// Positions are sized from the cash available at entry. Whatever is open
/// at the end of a session (the final bar in continuous mode, each day's last
/// bar in per-day mode) is closed there, and no entry is taken on that bar.
#[allow(clippy::needless_range_loop)]
pub fn run_backtest(
    series: &AlignedPairSeries,
    frame: &IndicatorFrame,
    cfg: &StrategyConfig,
) -> Result<(TradeLedger, Vec<EquityPoint>), StrategyError> {
    if frame.len() != series.len() {
        return Err(StrategyError::LengthMismatch {
            frame: frame.len(),
            series: series.len(),
        });
    }
    let forced = forced_close_rows(series, cfg.session_mode);
    let mut book = Book {
        series,
        fee_rate: cfg.fee_bps * 1e-4,
        cash: cfg.initial_balance,
        position: Position::default(),
        ledger: TradeLedger::default(),
    };
    let mut equity = Vec::with_capacity(series.len());

    for t in 0..series.len() {
        let row = frame.row(t);
        let state = book.position.state;
        let raw = raw_pair_signal(row.z, state, cfg);
        let filtered = apply_filters(raw, &row, cfg.variant);

        let target = PositionState::entered_by(raw);
        let leaving = state != PositionState::Flat
            && (raw == Signal::ExitToFlat || matches!(target, Some(s) if s != state));
        if leaving || forced[t] {
            book.close(t);
        }
        if !forced[t] && book.position.state == PositionState::Flat {
            if let Some(next) = PositionState::entered_by(filtered) {
                book.open(t, next, cfg.lot_mode)?;
            }
        }
        equity.push(EquityPoint {
            timestamp: series.timestamps[t],
            equity: book.equity(t),
        });
    }
    Ok((book.ledger, equity))
}
