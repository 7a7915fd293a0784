//! Performance metrics and report output.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::data_io::format_timestamp;
use crate::error::MetricsError;
use crate::indicators::sample_std;
use crate::strategy::{EquityPoint, TradeLedger};

pub const TRADING_DAYS_PER_YEAR: f64 = 252.0;

pub const METRICS_HEADER: &str =
    "variant,overall_return,mean_daily_return,max_drawdown,std,sharpe,count";

#[derive(Debug, Clone, PartialEq)]
pub struct BacktestReport {
    pub overall_return: f64,
    pub mean_daily_return: f64,
    pub max_drawdown: f64,
    /// Sample std of daily returns, in percent. Absent with fewer than two days.
    pub daily_std: Option<f64>,
    /// Absent when daily returns have no dispersion.
    pub sharpe: Option<f64>,
    pub count: usize,
    pub equity: Vec<EquityPoint>,
}

/// `(last - first) / first`.
pub fn overall_return(equity: &[f64]) -> Result<f64, MetricsError> {
    let (&first, &last) = match (equity.first(), equity.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(MetricsError::EmptyCurve),
    };
    if !(first > 0.0) {
        return Err(MetricsError::NonPositiveStart(first));
    }
    Ok((last - first) / first)
}

/// Arithmetic per-day share of the overall return.
pub fn mean_daily_return(overall: f64, n_days: usize) -> Result<f64, MetricsError> {
    if n_days == 0 {
        return Err(MetricsError::NoDays);
    }
    Ok(overall / n_days as f64)
}

/// Deepest decline from a running peak, as a nonpositive fraction.
pub fn max_drawdown(equity: &[f64]) -> f64 {
    let mut peak = f64::NEG_INFINITY;
    let mut worst = 0.0f64;
    for &v in equity {
        peak = peak.max(v);
        worst = worst.min((v - peak) / peak);
    }
    worst
}

/// Annualized Sharpe ratio of daily returns over a daily risk-free rate.
pub fn sharpe(daily_returns: &[f64], risk_free_annual: f64) -> Result<f64, MetricsError> {
    if daily_returns.len() < 2 {
        return Err(MetricsError::UndefinedSharpe("fewer than two returns"));
    }
    let sd = sample_std(daily_returns);
    if !(sd > 0.0) {
        return Err(MetricsError::UndefinedSharpe("zero standard deviation"));
    }
    let rf = risk_free_annual / TRADING_DAYS_PER_YEAR;
    let excess = daily_returns.iter().map(|r| r - rf).sum::<f64>() / daily_returns.len() as f64;
    Ok(excess / sd * TRADING_DAYS_PER_YEAR.sqrt())
}

/// End-of-day returns; the first day is measured against the first point.
pub fn daily_returns(equity: &[EquityPoint]) -> Vec<f64> {
    let Some(first) = equity.first() else {
        return Vec::new();
    };
    let mut closes: Vec<f64> = Vec::new();
    for (i, p) in equity.iter().enumerate() {
        let last_of_day = equity
            .get(i + 1)
            .is_none_or(|next| next.timestamp.date() != p.timestamp.date());
        if last_of_day {
            closes.push(p.equity);
        }
    }
    let mut prev = first.equity;
    closes
        .into_iter()
        .map(|c| {
            let r = c / prev - 1.0;
            prev = c;
            r
        })
        .collect()
}

fn distinct_days(equity: &[EquityPoint]) -> usize {
    let mut n = 0;
    for (i, p) in equity.iter().enumerate() {
        if i == 0 || equity[i - 1].timestamp.date() != p.timestamp.date() {
            n += 1;
        }
    }
    n
}

pub fn build_report(
    equity: &[EquityPoint],
    ledger: &TradeLedger,
    risk_free_annual: f64,
) -> Result<BacktestReport, MetricsError> {
    let values: Vec<f64> = equity.iter().map(|p| p.equity).collect();
    let overall = overall_return(&values)?;
    let returns = daily_returns(equity);
    Ok(BacktestReport {
        overall_return: overall,
        mean_daily_return: mean_daily_return(overall, distinct_days(equity))?,
        max_drawdown: max_drawdown(&values),
        daily_std: (returns.len() >= 2).then(|| 100.0 * sample_std(&returns)),
        sharpe: sharpe(&returns, risk_free_annual).ok(),
        count: ledger.count,
        equity: equity.to_vec(),
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One `metrics.csv` data row.
pub fn metrics_row(label: &str, r: &BacktestReport) -> String {
    format!(
        "{label},{},{},{},{},{},{}",
        r.overall_return,
        r.mean_daily_return,
        r.max_drawdown,
        opt(r.daily_std),
        opt(r.sharpe),
        r.count
    )
}

pub fn metrics_csv(reports: &[(String, BacktestReport)]) -> String {
    let mut out = String::from(METRICS_HEADER);
    out.push('\n');
    for (label, r) in reports {
        out.push_str(&metrics_row(label, r));
        out.push('\n');
    }
    out
}

pub fn equity_csv(equity: &[EquityPoint]) -> String {
    let mut out = String::from("timestamp,equity\n");
    for p in equity {
        let _ = writeln!(out, "{},{}", format_timestamp(&p.timestamp), p.equity);
    }
    out
}

pub fn ledger_csv(ledger: &TradeLedger) -> String {
    let mut out = String::from("timestamp,symbol,side,lots,price,fee\n");
    for o in &ledger.orders {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            format_timestamp(&o.timestamp),
            o.symbol,
            o.side,
            o.lots,
            o.price,
            o.fee
        );
    }
    out
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];
const MAX_SVG_POINTS: usize = 1500;

/// Line chart of all equity curves on shared axes.
pub fn cumulative_balance_svg(reports: &[(String, BacktestReport)]) -> String {
    let (width, height) = (900.0, 500.0);
    let (left, right, top, bottom) = (90.0, 170.0, 40.0, 50.0);
    let plot_w = width - left - right;
    let plot_h = height - top - bottom;

    let n = reports
        .iter()
        .map(|(_, r)| r.equity.len())
        .max()
        .unwrap_or(0);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (_, r) in reports {
        for p in &r.equity {
            lo = lo.min(p.equity);
            hi = hi.max(p.equity);
        }
    }
    if !lo.is_finite() {
        (lo, hi) = (0.0, 1.0);
    }
    if hi - lo < 1e-9 * hi.abs().max(1.0) {
        let pad = hi.abs().max(1.0) * 1e-3;
        lo -= pad;
        hi += pad;
    }
    let x_of = |i: usize| left + plot_w * i as f64 / (n.max(2) - 1) as f64;
    let y_of = |v: f64| top + plot_h * (hi - v) / (hi - lo);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="16">Cumulative balance</text>"#,
        left + plot_w / 2.0
    );
    let _ = writeln!(
        svg,
        r##"<rect x="{left}" y="{top}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#444"/>"##
    );
    for k in 0..=4 {
        let v = lo + (hi - lo) * k as f64 / 4.0;
        let y = y_of(v);
        let _ = writeln!(
            svg,
            r##"<line x1="{left}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{v:.0}</text>"##,
            left + plot_w,
            left - 6.0,
            y + 4.0
        );
    }
    if let Some((_, first)) = reports.iter().find(|(_, r)| r.equity.len() == n) {
        if let (Some(a), Some(b)) = (first.equity.first(), first.equity.last()) {
            let _ = writeln!(
                svg,
                r#"<text x="{left}" y="{:.2}">{}</text><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                top + plot_h + 20.0,
                format_timestamp(&a.timestamp),
                left + plot_w,
                top + plot_h + 20.0,
                format_timestamp(&b.timestamp)
            );
        }
    }

    for (k, (label, r)) in reports.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let stride = r.equity.len().div_ceil(MAX_SVG_POINTS).max(1);
        let mut pts = String::new();
        for (i, p) in r.equity.iter().enumerate() {
            if i % stride == 0 || i + 1 == r.equity.len() {
                let _ = write!(pts, "{:.2},{:.2} ", x_of(i), y_of(p.equity));
            }
        }
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{}"><title>{label}</title></polyline>"#,
            pts.trim_end()
        );
        let ly = top + 16.0 + 20.0 * k as f64;
        let lx = left + plot_w + 14.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{label}</text>"#,
            lx + 24.0,
            lx + 30.0,
            ly + 4.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn write_file(path: PathBuf, contents: &str) -> Result<(), MetricsError> {
    fs::write(&path, contents).map_err(|source| MetricsError::Io { path, source })
}

/// Writes `metrics.csv`, `equity_<label>.csv` per report and
/// `cumulative_balance.svg` into `out_dir`.
pub fn emit_report(
    reports: &[(String, BacktestReport)],
    out_dir: &Path,
) -> Result<(), MetricsError> {
    if reports.is_empty() {
        return Err(MetricsError::NoReports);
    }
    fs::create_dir_all(out_dir).map_err(|source| MetricsError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    write_file(out_dir.join("metrics.csv"), &metrics_csv(reports))?;
    for (label, r) in reports {
        write_file(
            out_dir.join(format!("equity_{label}.csv")),
            &equity_csv(&r.equity),
        )?;
    }
    write_file(
        out_dir.join("cumulative_balance.svg"),
        &cumulative_balance_svg(reports),
    )
}
