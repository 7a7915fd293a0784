mod common;

use chrono::{Duration, NaiveDate};
use proptest::prelude::*;

use sigpair::error::MetricsError;
use sigpair::indicators::{compute_frame, IndicatorConfig, SessionMode};
use sigpair::metrics::{
    build_report, daily_returns, emit_report, max_drawdown, sharpe, BacktestReport, METRICS_HEADER,
};
use sigpair::strategy::{run_backtest, EquityPoint, StrategyConfig, TradeLedger, Variant};

fn curve(values_per_day: &[&[f64]]) -> Vec<EquityPoint> {
    let d0 = NaiveDate::from_ymd_opt(2024, 11, 4).unwrap();
    let mut out = Vec::new();
    for (d, values) in values_per_day.iter().enumerate() {
        let open = (d0 + Duration::days(d as i64))
            .and_hms_opt(9, 1, 0)
            .unwrap();
        for (i, &v) in values.iter().enumerate() {
            out.push(EquityPoint {
                timestamp: open + Duration::minutes(i as i64),
                equity: v,
            });
        }
    }
    out
}

fn fixture_reports(variants: &[Variant]) -> Vec<(String, BacktestReport)> {
    let s = common::small_fixture(4, 200);
    let frame = compute_frame(&s, &IndicatorConfig::default(), SessionMode::Continuous);
    variants
        .iter()
        .map(|&v| {
            let cfg = StrategyConfig {
                variant: v,
                ..StrategyConfig::default()
            };
            let (ledger, equity) = run_backtest(&s, &frame, &cfg).unwrap();
            (v.to_string(), build_report(&equity, &ledger, 0.0).unwrap())
        })
        .collect()
}

#[test]
fn headline_examples() {
    assert_eq!(max_drawdown(&[100.0, 110.0, 99.0, 120.0]), -0.1);
    assert_eq!(sharpe(&[0.01, -0.01], 0.0).unwrap(), 0.0);
    assert!((sharpe(&[0.002, 0.0, 0.001], 0.0).unwrap() - 252f64.sqrt()).abs() < 1e-12);
    assert!(matches!(
        sharpe(&[0.002; 5], 0.0),
        Err(MetricsError::UndefinedSharpe(_))
    ));
}

#[test]
fn daily_returns_use_end_of_day_equity() {
    let eq = curve(&[&[100.0, 90.0, 110.0], &[120.0, 99.0]]);
    let r = daily_returns(&eq);
    assert_eq!(r.len(), 2);
    assert!((r[0] - 0.1).abs() < 1e-15);
    assert!((r[1] - (99.0 / 110.0 - 1.0)).abs() < 1e-15);
}

#[test]
fn report_fields() {
    let eq = curve(&[&[100.0, 110.0], &[99.0], &[120.0]]);
    let ledger = TradeLedger {
        count: 6,
        ..TradeLedger::default()
    };
    let r = build_report(&eq, &ledger, 0.0).unwrap();
    assert_eq!(r.overall_return, 0.2);
    assert!((r.mean_daily_return - 0.2 / 3.0).abs() < 1e-15);
    assert_eq!(r.max_drawdown, -0.1);
    assert_eq!(r.count, 6);
    assert!(r.daily_std.is_some() && r.sharpe.is_some());

    let single_day = build_report(&curve(&[&[100.0, 101.0]]), &ledger, 0.0).unwrap();
    assert_eq!((single_day.daily_std, single_day.sharpe), (None, None));
}

#[test]
fn metrics_csv_round_trips() {
    let reports = fixture_reports(&Variant::ALL);
    let dir = tempfile::tempdir().unwrap();
    emit_report(&reports, dir.path()).unwrap();

    let text = std::fs::read_to_string(dir.path().join("metrics.csv")).unwrap();
    assert_eq!(text.lines().next(), Some(METRICS_HEADER));
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    for (row, (label, r)) in rows.iter().zip(&reports) {
        assert_eq!(&row[0], label);
        assert_eq!(row[1].parse::<f64>().unwrap(), r.overall_return);
        assert_eq!(row[2].parse::<f64>().unwrap(), r.mean_daily_return);
        assert_eq!(row[3].parse::<f64>().unwrap(), r.max_drawdown);
        assert_eq!(row[4].parse::<f64>().ok(), r.daily_std);
        assert_eq!(row[5].parse::<f64>().ok(), r.sharpe);
        assert_eq!(row[6].parse::<usize>().unwrap(), r.count);
    }

    let svg = std::fs::read_to_string(dir.path().join("cumulative_balance.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 4);
    for v in Variant::ALL {
        assert!(svg.contains(&format!("<title>{v}</title>")));
        let eq = std::fs::read_to_string(dir.path().join(format!("equity_{v}.csv"))).unwrap();
        assert_eq!(eq.lines().count(), 801);
    }
}

#[test]
fn single_and_empty_report_lists() {
    let dir = tempfile::tempdir().unwrap();
    emit_report(&fixture_reports(&[Variant::Sig]), dir.path()).unwrap();
    let text = std::fs::read_to_string(dir.path().join("metrics.csv")).unwrap();
    assert_eq!(text.lines().count(), 2);
    let svg = std::fs::read_to_string(dir.path().join("cumulative_balance.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 1);

    assert!(matches!(
        emit_report(&[], dir.path()),
        Err(MetricsError::NoReports)
    ));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let err = emit_report(&fixture_reports(&[Variant::NoSig]), &blocker.join("out")).unwrap_err();
    assert!(matches!(err, MetricsError::Io { .. }));
}

proptest! {
    #[test]
    fn drawdown_only_deepens_with_more_data(values in prop::collection::vec(1.0f64..1000.0, 1..200), cut in 0usize..200) {
        let cut = cut.min(values.len() - 1) + 1;
        let full = max_drawdown(&values);
        let prefix = max_drawdown(&values[..cut]);
        prop_assert!(full <= prefix);
        prop_assert!((-1.0..=0.0).contains(&full));
    }

    #[test]
    fn daily_returns_compound_to_overall(days in prop::collection::vec(prop::collection::vec(50.0f64..150.0, 1..20), 1..15)) {
        let refs: Vec<&[f64]> = days.iter().map(Vec::as_slice).collect();
        let eq = curve(&refs);
        let r = daily_returns(&eq);
        prop_assert_eq!(r.len(), days.len());
        let growth: f64 = r.iter().map(|x| 1.0 + x).product();
        let expected = eq.last().unwrap().equity / eq[0].equity;
        prop_assert!((growth - expected).abs() <= 1e-12 * expected);
    }
}
