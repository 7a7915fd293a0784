//! `sigpair` command-line workflows.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{load_config, Overrides, RunConfig};
use crate::data_io::MinuteBar;
use crate::data_io::{align_pair, format_timestamp, load_bars, AlignedPairSeries};
use crate::error::{ConfigError, Error, Result};
use crate::indicators::{compute_frame, IndicatorFrame};
use crate::metrics::{build_report, emit_report, ledger_csv, BacktestReport};
use crate::strategy::{run_backtest, StrategyConfig, TradeLedger, Variant};
use crate::synth::{generate_synthetic, write_synthetic};

#[derive(Debug, Parser)]
#[command(
    name = "sigpair",
    version,
    about = "Signature-filtered pair-trading backtests"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the per-timestamp indicator frame as CSV
    Indicators(CommonArgs),
    /// Backtest a single strategy variant
    Backtest(CommonArgs),
    /// Backtest all four variants on the same data
    Compare(CommonArgs),
    /// Generate a seeded synthetic asset pair
    Synth(CommonArgs),
}

#[derive(Debug, Args, Clone, Default)]
pub struct CommonArgs {
    /// Config file with `key = value` lines
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// CSV for asset 1 (`timestamp,price`)
    #[arg(long)]
    pub asset1: Option<PathBuf>,
    /// CSV for asset 2 (`timestamp,price`)
    #[arg(long)]
    pub asset2: Option<PathBuf>,
    /// NO_SIG, SIG, SE_SIG or SE_SIG_DIFF
    #[arg(long)]
    pub variant: Option<String>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for synthetic data (used when no asset files are given)
    #[arg(long)]
    pub seed: Option<u64>,
}

impl CommonArgs {
    fn run_config(&self) -> Result<RunConfig> {
        let overrides = Overrides {
            asset1: self.asset1.clone(),
            asset2: self.asset2.clone(),
            variant: self.variant.clone(),
            out: self.out.clone(),
            seed: self.seed,
        };
        Ok(load_config(self.config.as_deref(), &overrides)?)
    }
}

fn write_out(path: PathBuf, contents: &str) -> Result<()> {
    fs::write(&path, contents).map_err(|source| Error::Io { path, source })
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })
}

/// Loads and aligns the configured pair, or generates it from the seed.
pub fn load_series(cfg: &RunConfig) -> Result<AlignedPairSeries> {
    let (s1, s2) = (&cfg.symbols.0, &cfg.symbols.1);
    let (b1, b2): (Vec<MinuteBar>, Vec<MinuteBar>) =
        match (&cfg.asset_1_file, &cfg.asset_2_file, cfg.seed) {
            (Some(f1), Some(f2), _) => (load_bars(f1, s1)?, load_bars(f2, s2)?),
            (None, None, Some(seed)) => generate_synthetic(seed, &cfg.synth, (s1, s2)),
            (None, _, _) => return Err(ConfigError::Missing("asset1").into()),
            (_, None, _) => return Err(ConfigError::Missing("asset2").into()),
        };
    Ok(align_pair(&b1, &b2)?)
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// The indicator frame as CSV; absent values are empty cells.
pub fn indicators_csv(frame: &IndicatorFrame) -> String {
    let mut out =
        String::from("timestamp,spread,z,sig,seg_sig,diff_prod,hist_mean_sig,hist_mean_seg\n");
    for t in 0..frame.len() {
        let r = frame.row(t);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            format_timestamp(&frame.timestamps[t]),
            r.spread,
            cell(r.z),
            cell(r.sig),
            cell(r.seg_sig),
            cell(r.diff_prod),
            cell(r.hist_mean_sig),
            cell(r.hist_mean_seg)
        );
    }
    out
}

fn backtest_variant(
    series: &AlignedPairSeries,
    frame: &IndicatorFrame,
    base: &StrategyConfig,
    variant: Variant,
    risk_free_annual: f64,
) -> Result<(TradeLedger, BacktestReport)> {
    let cfg = StrategyConfig {
        variant,
        ..base.clone()
    };
    let (ledger, equity) = run_backtest(series, frame, &cfg)?;
    let report = build_report(&equity, &ledger, risk_free_annual)?;
    Ok((ledger, report))
}

fn write_results(out: &Path, results: Vec<(Variant, TradeLedger, BacktestReport)>) -> Result<()> {
    ensure_dir(out)?;
    for (variant, ledger, _) in &results {
        write_out(
            out.join(format!("ledger_{variant}.csv")),
            &ledger_csv(ledger),
        )?;
    }
    let reports: Vec<(String, BacktestReport)> = results
        .into_iter()
        .map(|(v, _, r)| (v.to_string(), r))
        .collect();
    Ok(emit_report(&reports, out)?)
}

pub fn cmd_indicators(cfg: &RunConfig) -> Result<()> {
    let series = load_series(cfg)?;
    let frame = compute_frame(&series, &cfg.strategy.indicator, cfg.strategy.session_mode);
    ensure_dir(&cfg.output_dir)?;
    write_out(
        cfg.output_dir.join("indicators.csv"),
        &indicators_csv(&frame),
    )
}

pub fn cmd_backtest(cfg: &RunConfig) -> Result<()> {
    let series = load_series(cfg)?;
    let frame = compute_frame(&series, &cfg.strategy.indicator, cfg.strategy.session_mode);
    let variant = cfg.strategy.variant;
    let (ledger, report) = backtest_variant(
        &series,
        &frame,
        &cfg.strategy,
        variant,
        cfg.risk_free_annual,
    )?;
    write_results(&cfg.output_dir, vec![(variant, ledger, report)])
}

/// Runs every variant on one shared indicator frame.
pub fn compare_variants(cfg: &RunConfig) -> Result<Vec<(Variant, TradeLedger, BacktestReport)>> {
    let series = load_series(cfg)?;
    let frame = compute_frame(&series, &cfg.strategy.indicator, cfg.strategy.session_mode);
    let results: Vec<Result<(TradeLedger, BacktestReport)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = Variant::ALL
            .iter()
            .map(|&v| {
                let (series, frame) = (&series, &frame);
                scope.spawn(move || {
                    backtest_variant(series, frame, &cfg.strategy, v, cfg.risk_free_annual)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("backtest thread panicked"))
            .collect()
    });
    Variant::ALL
        .iter()
        .zip(results)
        .map(|(&v, r)| r.map(|(ledger, report)| (v, ledger, report)))
        .collect()
}

pub fn cmd_compare(cfg: &RunConfig) -> Result<()> {
    let results = compare_variants(cfg)?;
    write_results(&cfg.output_dir, results)
}

pub fn cmd_synth(cfg: &RunConfig) -> Result<()> {
    let seed = cfg.seed.ok_or(ConfigError::Missing("seed"))?;
    write_synthetic(
        seed,
        &cfg.synth,
        (&cfg.symbols.0, &cfg.symbols.1),
        &cfg.output_dir,
    )
    .map_err(|source| Error::Io {
        path: cfg.output_dir.clone(),
        source,
    })?;
    Ok(())
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Indicators(a) => cmd_indicators(&a.run_config()?),
        Command::Backtest(a) => cmd_backtest(&a.run_config()?),
        Command::Compare(a) => cmd_compare(&a.run_config()?),
        Command::Synth(a) => cmd_synth(&a.run_config()?),
    }
}
