use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sigpair(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sigpair"))
        .args(args)
        .output()
        .unwrap()
}

fn small_config(dir: &Path, extra: &str) -> String {
    let path = dir.join("run.conf");
    fs::write(
        &path,
        format!("# short fixture\nsynth_days = 3\nsynth_minutes_per_day = 150\n{extra}"),
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

fn read(path: impl AsRef<Path>) -> String {
    fs::read_to_string(path).unwrap()
}

#[test]
fn synth_writes_the_default_row_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = sigpair(&["synth", "--seed", "42", "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["asset1.csv", "asset2.csv"] {
        let text = read(dir.path().join(f));
        assert_eq!(text.lines().next(), Some("timestamp,price"));
        assert_eq!(text.lines().count(), 14_835 + 1);
    }
}

#[test]
fn compare_from_files_matches_in_memory_synthetic_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    let data = dir.path().join("data");
    assert!(sigpair(&[
        "synth",
        "--config",
        &cfg,
        "--seed",
        "5",
        "--out",
        data.to_str().unwrap()
    ])
    .status
    .success());

    let from_files = dir.path().join("a");
    let o = sigpair(&[
        "compare",
        "--config",
        &cfg,
        "--asset1",
        data.join("asset1.csv").to_str().unwrap(),
        "--asset2",
        data.join("asset2.csv").to_str().unwrap(),
        "--out",
        from_files.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let from_seed = dir.path().join("b");
    assert!(sigpair(&[
        "compare",
        "--config",
        &cfg,
        "--seed",
        "5",
        "--out",
        from_seed.to_str().unwrap()
    ])
    .status
    .success());

    let metrics = read(from_files.join("metrics.csv"));
    assert_eq!(metrics.lines().count(), 5);
    assert_eq!(metrics, read(from_seed.join("metrics.csv")));
    for v in ["NO_SIG", "SIG", "SE_SIG", "SE_SIG_DIFF"] {
        assert!(from_files.join(format!("ledger_{v}.csv")).exists());
        assert!(from_files.join(format!("equity_{v}.csv")).exists());
    }
    assert!(read(from_files.join("cumulative_balance.svg")).starts_with("<svg"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "fee_bps = 2\n");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        assert!(sigpair(&[
            "compare",
            "--config",
            &cfg,
            "--seed",
            "9",
            "--out",
            out.to_str().unwrap()
        ])
        .status
        .success());
    }
    let mut names: Vec<_> = fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 10);
    for name in names {
        assert_eq!(
            fs::read(a.join(&name)).unwrap(),
            fs::read(b.join(&name)).unwrap(),
            "{name:?}"
        );
    }
}

#[test]
fn backtest_and_indicators_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "session_mode = per_day\nlot_mode = integer\n");
    let out = dir.path().join("bt");
    let o = sigpair(&[
        "backtest",
        "--config",
        &cfg,
        "--seed",
        "1",
        "--variant",
        "SE_SIG",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let metrics = read(out.join("metrics.csv"));
    assert_eq!(metrics.lines().count(), 2);
    assert!(metrics.lines().nth(1).unwrap().starts_with("SE_SIG,"));
    assert!(
        read(out.join("ledger_SE_SIG.csv")).starts_with("timestamp,symbol,side,lots,price,fee\n")
    );

    let ind = dir.path().join("ind");
    assert!(sigpair(&[
        "indicators",
        "--config",
        &cfg,
        "--seed",
        "1",
        "--out",
        ind.to_str().unwrap()
    ])
    .status
    .success());
    let text = read(ind.join("indicators.csv"));
    assert_eq!(text.lines().count(), 451);
    assert!(
        text.starts_with("timestamp,spread,z,sig,seg_sig,diff_prod,hist_mean_sig,hist_mean_seg\n")
    );
}

#[test]
fn missing_data_file_is_reported_by_path() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.csv");
    let o = sigpair(&[
        "compare",
        "--asset1",
        missing.to_str().unwrap(),
        "--asset2",
        missing.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains(missing.to_str().unwrap()));
}

#[test]
fn config_errors_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "sig_windw = 30\n");
    let o = sigpair(&["compare", "--config", &cfg, "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sig_windw"));

    let cfg = small_config(dir.path(), "buy_threshold = -1\nsell_threshold = 1\n");
    assert_eq!(
        sigpair(&["compare", "--config", &cfg, "--seed", "1"])
            .status
            .code(),
        Some(2)
    );

    // neither data files nor a seed
    assert_eq!(
        sigpair(&["compare", "--out", dir.path().to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        sigpair(&["backtest", "--seed", "1", "--variant", "FANCY"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn malformed_data_exits_with_code_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(
        &bad,
        "timestamp,price\n2024-11-04T09:02,100\n2024-11-04T09:01,101\n",
    )
    .unwrap();
    let o = sigpair(&[
        "compare",
        "--asset1",
        bad.to_str().unwrap(),
        "--asset2",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":3:"));
}
