//! Seeded synthetic minute data for a co-moving asset pair.
//!
//! Asset 1 follows a geometric random walk. Asset 2 is asset 1 scaled by
//! `exp(-s_t)`, where the log spread `s_t` is a discretised
//! Ornstein-Uhlenbeck process, so the pair is cointegrated whenever the
//! reversion rate is positive.

use std::path::{Path, PathBuf};

use chrono::{Datelike, Duration, NaiveDate, Weekday};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::data_io::{write_bars, MinuteBar};

/// Decimal places kept in generated prices (and written to CSV).
pub const PRICE_DECIMALS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    pub days: usize,
    pub minutes_per_day: usize,
    pub start_date: NaiveDate,
    pub start_price: f64,
    /// Per-minute log volatility of asset 1.
    pub asset_vol: f64,
    /// Per-minute pull of the log spread toward its mean.
    pub reversion: f64,
    /// Per-minute volatility of the log spread.
    pub spread_vol: f64,
    pub spread_mean: f64,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            days: 43,
            minutes_per_day: 345,
            start_date: NaiveDate::from_ymd_opt(2024, 11, 1).expect("valid date"),
            start_price: 500.0,
            asset_vol: 0.0008,
            reversion: 0.02,
            spread_vol: 0.0005,
            spread_mean: 0.0,
        }
    }
}

/// Longest session that still fits after the 09:00 open.
pub const MAX_MINUTES_PER_DAY: usize = 899;

fn trading_days(start: NaiveDate, n: usize) -> Vec<NaiveDate> {
    let mut days = Vec::with_capacity(n);
    let mut d = start;
    while days.len() < n {
        if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
            days.push(d);
        }
        d = d.succ_opt().expect("date in range");
    }
    days
}

fn round_price(p: f64) -> f64 {
    let scale = 10f64.powi(PRICE_DECIMALS as i32);
    (p * scale).round() / scale
}

/// Generates both assets' bars; the same seed always yields the same bars.
pub fn generate_synthetic(
    seed: u64,
    params: &SynthParams,
    symbols: (&str, &str),
) -> (Vec<MinuteBar>, Vec<MinuteBar>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut normal = move || -> f64 { StandardNormal.sample(&mut rng) };

    let n = params.days * params.minutes_per_day;
    let mut bars_1 = Vec::with_capacity(n);
    let mut bars_2 = Vec::with_capacity(n);
    let mut log_p = params.start_price.ln();
    let mut spread = params.spread_mean;

    for day in trading_days(params.start_date, params.days) {
        let open = day.and_hms_opt(9, 0, 0).expect("valid time");
        for m in 0..params.minutes_per_day {
            let timestamp = open + Duration::minutes(m as i64 + 1);
            let p1 = log_p.exp();
            let p2 = p1 * (-spread).exp();
            bars_1.push(MinuteBar {
                timestamp,
                price: round_price(p1),
                symbol: symbols.0.to_string(),
            });
            bars_2.push(MinuteBar {
                timestamp,
                price: round_price(p2),
                symbol: symbols.1.to_string(),
            });
            log_p += params.asset_vol * normal();
            spread +=
                params.reversion * (params.spread_mean - spread) + params.spread_vol * normal();
        }
    }
    (bars_1, bars_2)
}

/// Writes `asset1.csv` and `asset2.csv` into `dir`.
pub fn write_synthetic(
    seed: u64,
    params: &SynthParams,
    symbols: (&str, &str),
    dir: &Path,
) -> std::io::Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(dir)?;
    let (b1, b2) = generate_synthetic(seed, params, symbols);
    let (p1, p2) = (dir.join("asset1.csv"), dir.join("asset2.csv"));
    write_bars(&p1, &b1, PRICE_DECIMALS)?;
    write_bars(&p2, &b2, PRICE_DECIMALS)?;
    Ok((p1, p2))
}
