//! Minute-bar ingestion and pair alignment.
//!
//! Each asset lives in its own CSV with header `timestamp,price`, timestamps in
//! `YYYY-MM-DDTHH:MM` form. Two assets are aligned by an inner join on exact
//! timestamps; minutes observed by only one asset are dropped.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::ops::Range;
use std::path::Path;

use chrono::{NaiveDate, NaiveDateTime};

use crate::error::DataError;

pub const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M";

#[derive(Debug, Clone, PartialEq)]
pub struct MinuteBar {
    pub timestamp: NaiveDateTime,
    pub price: f64,
    pub symbol: String,
}

/// Time-aligned raw and log prices for one asset pair.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedPairSeries {
    pub symbols: (String, String),
    pub timestamps: Vec<NaiveDateTime>,
    pub raw_1: Vec<f64>,
    pub raw_2: Vec<f64>,
    pub log_1: Vec<f64>,
    pub log_2: Vec<f64>,
    pub trading_day: Vec<NaiveDate>,
}

pub fn parse_timestamp(text: &str) -> Option<NaiveDateTime> {
    NaiveDateTime::parse_from_str(text.trim(), TIMESTAMP_FORMAT).ok()
}

pub fn format_timestamp(ts: &NaiveDateTime) -> String {
    ts.format(TIMESTAMP_FORMAT).to_string()
}

/// Reads one asset's bars from `file_path`.
pub fn load_bars(file_path: impl AsRef<Path>, symbol: &str) -> Result<Vec<MinuteBar>, DataError> {
    let path = file_path.as_ref();
    let file = File::open(path).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_bars(file, path, symbol)
}

/// Parses bars from any reader; `path` is only used in diagnostics.
pub fn read_bars<R: std::io::Read>(
    reader: R,
    path: &Path,
    symbol: &str,
) -> Result<Vec<MinuteBar>, DataError> {
    let parse_err = |line: u64, message: String| DataError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = rdr
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    if headers.len() != 2 || &headers[0] != "timestamp" || &headers[1] != "price" {
        return Err(parse_err(
            1,
            format!(
                "expected header `timestamp,price`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }

    let mut bars: Vec<MinuteBar> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 2 {
            return Err(parse_err(
                line,
                format!("expected 2 fields, got {}", record.len()),
            ));
        }
        let timestamp = parse_timestamp(&record[0])
            .ok_or_else(|| parse_err(line, format!("bad timestamp `{}`", &record[0])))?;
        let price: f64 = record[1]
            .parse()
            .map_err(|_| parse_err(line, format!("bad price `{}`", &record[1])))?;
        if !price.is_finite() {
            return Err(parse_err(line, format!("bad price `{}`", &record[1])));
        }
        if price <= 0.0 {
            return Err(DataError::NonPositivePrice {
                path: path.to_path_buf(),
                line,
                price,
            });
        }
        if let Some(prev) = bars.last() {
            if timestamp <= prev.timestamp {
                return Err(DataError::NonMonotone {
                    path: path.to_path_buf(),
                    line,
                    timestamp: record[0].to_string(),
                });
            }
        }
        bars.push(MinuteBar {
            timestamp,
            price,
            symbol: symbol.to_string(),
        });
    }
    Ok(bars)
}

/// Writes bars in the `timestamp,price` format, prices with `decimals` digits.
pub fn write_bars(
    path: impl AsRef<Path>,
    bars: &[MinuteBar],
    decimals: usize,
) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "timestamp,price")?;
    for bar in bars {
        writeln!(
            out,
            "{},{:.*}",
            format_timestamp(&bar.timestamp),
            decimals,
            bar.price
        )?;
    }
    out.flush()
}

/// Inner-joins two sorted bar lists on exact timestamps.
pub fn align_pair(
    bars_1: &[MinuteBar],
    bars_2: &[MinuteBar],
) -> Result<AlignedPairSeries, DataError> {
    let symbol_of = |bars: &[MinuteBar], fallback: &str| {
        bars.first()
            .map(|b| b.symbol.clone())
            .unwrap_or_else(|| fallback.to_string())
    };
    if bars_1.is_empty() {
        return Err(DataError::Empty(symbol_of(bars_1, "asset 1")));
    }
    if bars_2.is_empty() {
        return Err(DataError::Empty(symbol_of(bars_2, "asset 2")));
    }

    let mut series = AlignedPairSeries {
        symbols: (symbol_of(bars_1, "asset 1"), symbol_of(bars_2, "asset 2")),
        timestamps: Vec::new(),
        raw_1: Vec::new(),
        raw_2: Vec::new(),
        log_1: Vec::new(),
        log_2: Vec::new(),
        trading_day: Vec::new(),
    };
    let (mut i, mut j) = (0, 0);
    while i < bars_1.len() && j < bars_2.len() {
        let (a, b) = (&bars_1[i], &bars_2[j]);
        match a.timestamp.cmp(&b.timestamp) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                series.push(a.timestamp, a.price, b.price);
                i += 1;
                j += 1;
            }
        }
    }
    if series.is_empty() {
        return Err(DataError::EmptyIntersection);
    }
    Ok(series)
}

impl AlignedPairSeries {
    /// Builds a series directly from raw prices (timestamps must be strictly increasing).
    pub fn from_raw(
        symbols: (String, String),
        timestamps: Vec<NaiveDateTime>,
        raw_1: Vec<f64>,
        raw_2: Vec<f64>,
    ) -> Self {
        assert_eq!(timestamps.len(), raw_1.len());
        assert_eq!(timestamps.len(), raw_2.len());
        let mut series = AlignedPairSeries {
            symbols,
            timestamps: Vec::with_capacity(raw_1.len()),
            raw_1: Vec::with_capacity(raw_1.len()),
            raw_2: Vec::with_capacity(raw_1.len()),
            log_1: Vec::with_capacity(raw_1.len()),
            log_2: Vec::with_capacity(raw_1.len()),
            trading_day: Vec::with_capacity(raw_1.len()),
        };
        for ((ts, p1), p2) in timestamps.into_iter().zip(raw_1).zip(raw_2) {
            series.push(ts, p1, p2);
        }
        series
    }

    fn push(&mut self, ts: NaiveDateTime, p1: f64, p2: f64) {
        self.timestamps.push(ts);
        self.raw_1.push(p1);
        self.raw_2.push(p2);
        self.log_1.push(p1.ln());
        self.log_2.push(p2.ln());
        self.trading_day.push(ts.date());
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    /// Index ranges of consecutive rows sharing a trading day.
    pub fn day_ranges(&self) -> Vec<Range<usize>> {
        let mut ranges = Vec::new();
        let mut start = 0;
        for i in 1..=self.len() {
            if i == self.len() || self.trading_day[i] != self.trading_day[start] {
                ranges.push(start..i);
                start = i;
            }
        }
        ranges
    }

    pub fn n_days(&self) -> usize {
        self.day_ranges().len()
    }

    /// Copy of the first `n` rows.
    pub fn prefix(&self, n: usize) -> Self {
        let n = n.min(self.len());
        AlignedPairSeries {
            symbols: self.symbols.clone(),
            timestamps: self.timestamps[..n].to_vec(),
            raw_1: self.raw_1[..n].to_vec(),
            raw_2: self.raw_2[..n].to_vec(),
            log_1: self.log_1[..n].to_vec(),
            log_2: self.log_2[..n].to_vec(),
            trading_day: self.trading_day[..n].to_vec(),
        }
    }

    /// The same series with the asset roles exchanged.
    pub fn swapped(&self) -> Self {
        AlignedPairSeries {
            symbols: (self.symbols.1.clone(), self.symbols.0.clone()),
            timestamps: self.timestamps.clone(),
            raw_1: self.raw_2.clone(),
            raw_2: self.raw_1.clone(),
            log_1: self.log_2.clone(),
            log_2: self.log_1.clone(),
            trading_day: self.trading_day.clone(),
        }
    }
}
