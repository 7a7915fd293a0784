use std::path::PathBuf;

use thiserror::Error;

/// Failures while reading or aligning price data.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("{path}:{line}: timestamp {timestamp} does not follow the previous row")]
    NonMonotone {
        path: PathBuf,
        line: u64,
        timestamp: String,
    },
    #[error("{path}:{line}: price {price} is not positive")]
    NonPositivePrice {
        path: PathBuf,
        line: u64,
        price: f64,
    },
    #[error("{0} contains no bars")]
    Empty(String),
    #[error("the two assets share no timestamps")]
    EmptyIntersection,
}

/// Invalid path construction.
#[derive(Debug, Error, PartialEq)]
pub enum PathError {
    #[error("a path needs at least 2 points, got {0}")]
    TooShort(usize),
    #[error("point {0} is not finite")]
    NonFinite(usize),
    #[error("{points} points but {times} timestamps")]
    LengthMismatch { points: usize, times: usize },
    #[error("timestamp {0} is not strictly increasing")]
    NonIncreasingTime(usize),
}

#[derive(Debug, Error, PartialEq)]
pub enum IndicatorError {
    #[error("coefficient of variation needs at least one value")]
    EmptyInput,
    #[error("coefficient of variation undefined: mean {0} is not positive")]
    UndefinedCv(f64),
}

#[derive(Debug, Error, PartialEq)]
pub enum StrategyError {
    #[error("budget {budget} is smaller than one lot at price {price}")]
    Sizing { budget: f64, price: f64 },
    #[error("invalid sizing input: prices ({0}, {1}), budget {2}")]
    InvalidSizingInput(f64, f64, f64),
    #[error("indicator frame has {frame} rows but the series has {series}")]
    LengthMismatch { frame: usize, series: usize },
}

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("equity curve is empty")]
    EmptyCurve,
    #[error("first equity value {0} is not positive")]
    NonPositiveStart(f64),
    #[error("number of trading days must be at least 1")]
    NoDays,
    #[error("sharpe ratio undefined: {0}")]
    UndefinedSharpe(&'static str),
    #[error("no reports to emit")]
    NoReports,
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("invalid value `{value}` for `{key}`")]
    InvalidValue { key: String, value: String },
    #[error("{0}")]
    Invariant(String),
    #[error("cannot read config {0}")]
    Unreadable(PathBuf),
    #[error("missing required setting `{0}`")]
    Missing(&'static str),
}

/// Top-level error with a process exit code per failure class.
#[derive(Debug, Error)]
pub enum Error {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("data error: {0}")]
    Data(#[from] DataError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Indicator(#[from] IndicatorError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Data(_) => 3,
            _ => 4,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
