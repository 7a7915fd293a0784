//! Run configuration: a flat `key = value` file plus command-line overrides.
//!
//! Recognised keys:
//!
//! | key | default |
//! |-----|---------|
//! | `asset1`, `asset2` | none (synthetic data when `seed` is set) |
//! | `symbol1`, `symbol2` | file stem, or `ASSET1` / `ASSET2` |
//! | `output_dir` | `out` |
//! | `seed` | none |
//! | `variant` | `NO_SIG` |
//! | `buy_threshold`, `sell_threshold` | `2.0`, `-2.0` |
//! | `fee_bps` | `0` |
//! | `initial_balance` | `1000000` |
//! | `lot_mode` | `fractional` (`integer`) |
//! | `session_mode` | `continuous` (`per_day`) |
//! | `sig_window`, `z_window`, `min_history` | `60`, `60`, `30` |
//! | `risk_free_annual` | `0` |
//! | `synth_days`, `synth_minutes_per_day` | `43`, `345` |
//! | `synth_start_price`, `synth_asset_vol` | `500`, `0.0008` |
//! | `synth_reversion`, `synth_spread_vol`, `synth_spread_mean` | `0.02`, `0.0005`, `0` |
//!
//! Blank lines and lines starting with `#` are ignored.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::ConfigError;
use crate::strategy::{StrategyConfig, Variant};
use crate::synth::{SynthParams, MAX_MINUTES_PER_DAY};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub asset_1_file: Option<PathBuf>,
    pub asset_2_file: Option<PathBuf>,
    pub symbols: (String, String),
    pub strategy: StrategyConfig,
    pub output_dir: PathBuf,
    pub seed: Option<u64>,
    pub risk_free_annual: f64,
    pub synth: SynthParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            asset_1_file: None,
            asset_2_file: None,
            symbols: ("ASSET1".into(), "ASSET2".into()),
            strategy: StrategyConfig::default(),
            output_dir: PathBuf::from("out"),
            seed: None,
            risk_free_annual: 0.0,
            synth: SynthParams::default(),
        }
    }
}

/// Values given on the command line; they win over the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub asset1: Option<PathBuf>,
    pub asset2: Option<PathBuf>,
    pub variant: Option<String>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::InvalidValue {
        key: key.to_string(),
        value: value.to_string(),
    })
}

fn stem_of(path: &Option<PathBuf>) -> Option<String> {
    path.as_ref()?
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
}

impl RunConfig {
    fn set(
        &mut self,
        key: &str,
        value: &str,
        symbols: &mut (Option<String>, Option<String>),
    ) -> Result<(), ConfigError> {
        let s = &mut self.strategy;
        match key {
            "asset1" => self.asset_1_file = Some(PathBuf::from(value)),
            "asset2" => self.asset_2_file = Some(PathBuf::from(value)),
            "symbol1" => symbols.0 = Some(value.to_string()),
            "symbol2" => symbols.1 = Some(value.to_string()),
            "output_dir" => self.output_dir = PathBuf::from(value),
            "seed" => self.seed = Some(parse_value(key, value)?),
            "variant" => s.variant = parse_value::<Variant>(key, value)?,
            "buy_threshold" => s.buy_threshold = parse_value(key, value)?,
            "sell_threshold" => s.sell_threshold = parse_value(key, value)?,
            "fee_bps" => s.fee_bps = parse_value(key, value)?,
            "initial_balance" => s.initial_balance = parse_value(key, value)?,
            "lot_mode" => s.lot_mode = parse_value(key, value)?,
            "session_mode" => s.session_mode = parse_value(key, value)?,
            "sig_window" => s.indicator.sig_window = parse_value(key, value)?,
            "z_window" => s.indicator.z_window = parse_value(key, value)?,
            "min_history" => s.indicator.min_history = parse_value(key, value)?,
            "risk_free_annual" => self.risk_free_annual = parse_value(key, value)?,
            "synth_days" => self.synth.days = parse_value(key, value)?,
            "synth_minutes_per_day" => self.synth.minutes_per_day = parse_value(key, value)?,
            "synth_start_price" => self.synth.start_price = parse_value(key, value)?,
            "synth_asset_vol" => self.synth.asset_vol = parse_value(key, value)?,
            "synth_reversion" => self.synth.reversion = parse_value(key, value)?,
            "synth_spread_vol" => self.synth.spread_vol = parse_value(key, value)?,
            "synth_spread_mean" => self.synth.spread_mean = parse_value(key, value)?,
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let s = &self.strategy;
        let fail = |msg: String| Err(ConfigError::Invariant(msg));
        if !(s.buy_threshold > s.sell_threshold) {
            return fail(format!(
                "buy_threshold ({}) must exceed sell_threshold ({})",
                s.buy_threshold, s.sell_threshold
            ));
        }
        if !(s.fee_bps >= 0.0) {
            return fail(format!("fee_bps must be nonnegative, got {}", s.fee_bps));
        }
        if !(s.initial_balance > 0.0) {
            return fail(format!(
                "initial_balance must be positive, got {}",
                s.initial_balance
            ));
        }
        if s.indicator.sig_window < 2 || s.indicator.z_window < 2 {
            return fail("sig_window and z_window must be at least 2".into());
        }
        if s.indicator.min_history < 1 {
            return fail("min_history must be positive".into());
        }
        let p = &self.synth;
        if p.days == 0 || p.minutes_per_day == 0 || p.minutes_per_day > MAX_MINUTES_PER_DAY {
            return fail(format!("synth_minutes_per_day must be in 1..={MAX_MINUTES_PER_DAY} and synth_days positive"));
        }
        if !(p.start_price > 0.0) || p.asset_vol < 0.0 || p.spread_vol < 0.0 || p.reversion < 0.0 {
            return fail(
                "synthetic price and volatility parameters must be nonnegative (price positive)"
                    .into(),
            );
        }
        Ok(())
    }
}

/// Parses `text` (the config file body, if any), then applies `overrides`.
pub fn parse_config(text: Option<&str>, overrides: &Overrides) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut symbols = (None, None);
    for (i, raw) in text.unwrap_or("").lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: i + 1,
            text: line.to_string(),
        })?;
        cfg.set(key.trim(), value.trim(), &mut symbols)?;
    }

    if let Some(p) = &overrides.asset1 {
        cfg.asset_1_file = Some(p.clone());
    }
    if let Some(p) = &overrides.asset2 {
        cfg.asset_2_file = Some(p.clone());
    }
    if let Some(v) = &overrides.variant {
        cfg.strategy.variant = parse_value("variant", v)?;
    }
    if let Some(o) = &overrides.out {
        cfg.output_dir = o.clone();
    }
    if overrides.seed.is_some() {
        cfg.seed = overrides.seed;
    }

    cfg.symbols = (
        symbols
            .0
            .or_else(|| stem_of(&cfg.asset_1_file))
            .unwrap_or_else(|| "ASSET1".into()),
        symbols
            .1
            .or_else(|| stem_of(&cfg.asset_2_file))
            .unwrap_or_else(|| "ASSET2".into()),
    );
    cfg.validate()?;
    Ok(cfg)
}

/// Reads the optional config file at `path` and applies `overrides`.
pub fn load_config(path: Option<&Path>, overrides: &Overrides) -> Result<RunConfig, ConfigError> {
    let text = match path {
        Some(p) => {
            Some(std::fs::read_to_string(p).map_err(|_| ConfigError::Unreadable(p.to_path_buf()))?)
        }
        None => None,
    };
    parse_config(text.as_deref(), overrides)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indicators::SessionMode;
    use crate::strategy::LotMode;

    fn files() -> Overrides {
        Overrides {
            asset1: Some("data/AU.csv".into()),
            asset2: Some("data/AG.csv".into()),
            ..Overrides::default()
        }
    }

    #[test]
    fn empty_config_gives_defaults() {
        let cfg = parse_config(Some(""), &files()).unwrap();
        assert_eq!(cfg.strategy, StrategyConfig::default());
        assert_eq!(cfg.strategy.indicator.sig_window, 60);
        assert_eq!(cfg.strategy.buy_threshold, 2.0);
        assert_eq!(cfg.strategy.sell_threshold, -2.0);
        assert_eq!(cfg.strategy.fee_bps, 0.0);
        assert_eq!(cfg.strategy.lot_mode, LotMode::Fractional);
        assert_eq!(cfg.strategy.session_mode, SessionMode::Continuous);
        assert_eq!(cfg.symbols, ("AU".to_string(), "AG".to_string()));
    }

    #[test]
    fn file_values_apply() {
        let text =
            "# comment\nsig_window = 30\nsession_mode = per_day\nlot_mode=integer\nsymbol1 = AU\n";
        let cfg = parse_config(Some(text), &Overrides::default()).unwrap();
        assert_eq!(cfg.strategy.indicator.sig_window, 30);
        assert_eq!(cfg.strategy.session_mode, SessionMode::PerDay);
        assert_eq!(cfg.strategy.lot_mode, LotMode::Integer);
        assert_eq!(cfg.symbols, ("AU".to_string(), "ASSET2".to_string()));
    }

    #[test]
    fn flags_override_file() {
        let text = "variant = SIG\noutput_dir = a\nseed = 1\n";
        let o = Overrides {
            variant: Some("SE_SIG_DIFF".into()),
            out: Some("b".into()),
            seed: Some(9),
            ..Overrides::default()
        };
        let cfg = parse_config(Some(text), &o).unwrap();
        assert_eq!(cfg.strategy.variant, Variant::SeSigDiff);
        assert_eq!(cfg.output_dir, PathBuf::from("b"));
        assert_eq!(cfg.seed, Some(9));
    }

    #[test]
    fn inverted_thresholds_rejected() {
        let err =
            parse_config(Some("buy_threshold = -1\nsell_threshold = 1\n"), &files()).unwrap_err();
        assert!(matches!(err, ConfigError::Invariant(_)));
    }

    #[test]
    fn unknown_key_is_named() {
        let err = parse_config(Some("window = 5\n"), &files()).unwrap_err();
        assert_eq!(err, ConfigError::UnknownKey("window".into()));
        assert!(err.to_string().contains("window"));
    }

    #[test]
    fn malformed_lines_and_values() {
        assert!(matches!(
            parse_config(Some("sig_window\n"), &files()),
            Err(ConfigError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_config(Some("sig_window = many\n"), &files()),
            Err(ConfigError::InvalidValue { .. })
        ));
        assert!(matches!(
            parse_config(Some("sig_window = 1\n"), &files()),
            Err(ConfigError::Invariant(_))
        ));
        assert!(matches!(
            parse_config(Some("lot_mode = half\n"), &files()),
            Err(ConfigError::InvalidValue { .. })
        ));
    }
}
