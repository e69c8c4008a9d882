//! End-to-end tests against the compiled `puck` binary.

use std::path::Path;
use std::process::{Command, Output};

use puck_cli::ingest::{ingest, price_csv, IngestSpec};
use puck_cli::report::{parse_records, ReportRecord};

fn puck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_puck"))
        .args(args)
        .output()
        .expect("binary must run")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn simulate_fixture(dir: &Path, name: &str, extra: &[&str]) -> std::path::PathBuf {
    let path = dir.join(name);
    let mut args = vec![
        "simulate",
        "--b-quad",
        "0.5",
        "--m",
        "4",
        "--sigma",
        "0.03",
        "--n",
        "1200",
        "--seed",
        "9",
        "--out",
    ];
    let path_str = path.to_str().unwrap().to_string();
    args.push(Box::leak(path_str.into_boxed_str()));
    args.extend_from_slice(extra);
    let out = puck(&args);
    assert!(out.status.success(), "simulate failed: {}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn simulate_writes_warmup_plus_n_rows_and_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = puck(&[
            "simulate", "--b-quad", "0.5", "--m", "4", "--sigma", "0.03", "--n", "2000",
            "--seed", "7", "--out", path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b);
    let text = String::from_utf8(bytes_a).unwrap();
    assert_eq!(text.lines().count(), 2004); // m warm-up rows + n generated
    for line in text.lines() {
        line.parse::<f64>().unwrap();
    }
}

#[test]
fn stability_prints_plus_minus_two_for_span_two() {
    let out = puck(&["stability", "--m", "2"]);
    assert!(out.status.success());
    let records = parse_records(&stdout(&out)).unwrap();
    match &records[..] {
        [ReportRecord::Stability { m, b_low, b_high }] => {
            assert_eq!(*m, 2);
            assert!((b_low + 2.0).abs() < 1e-6, "b_low {b_low}");
            assert!((b_high - 2.0).abs() < 1e-6, "b_high {b_high}");
        }
        other => panic!("unexpected records: {other:?}"),
    }
}

#[test]
fn stability_rejects_span_one_with_exit_one() {
    let out = puck(&["stability", "--m", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("m >= 2"), "diagnostic was: {err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(puck(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(puck(&["fit", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(puck(&["fit"]).status.code(), Some(2)); // missing --input
}

#[test]
fn missing_input_file_exits_one() {
    let out = puck(&["fit", "--input", "/nonexistent/prices.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot open"));
}

#[test]
fn fit_report_round_trips_and_recovers_the_generator() {
    let dir = tempfile::tempdir().unwrap();
    let input = simulate_fixture(dir.path(), "prices.csv", &[]);
    let report_path = dir.path().join("report.jsonl");
    let out = puck(&[
        "fit",
        "--input",
        input.to_str().unwrap(),
        "--criterion",
        "bic",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let text = std::fs::read_to_string(&report_path).unwrap();
    let records = parse_records(&text).unwrap();
    assert_eq!(records.len(), 2);
    match &records[0] {
        ReportRecord::Header { command, config, input } => {
            assert_eq!(command, "fit");
            assert_eq!(config.as_ref().unwrap().criterion, puck_core::Criterion::Bic);
            let input = input.as_ref().unwrap();
            assert_eq!(input.stats.rows_used, 1204);
        }
        other => panic!("expected header, got {other:?}"),
    }
    match &records[1] {
        ReportRecord::Fit { selection, regime } => {
            assert!(regime.is_none());
            assert_eq!(selection.winner, puck_core::ModelFamily::Quadratic);
            assert_eq!(selection.fit.model.m, 4);
            assert!((selection.fit.model.b_quad - 0.5).abs() <= 0.15);
            assert!(selection.fit.selected);
        }
        other => panic!("expected fit, got {other:?}"),
    }
    // Byte-exact round trip of the whole report.
    assert_eq!(puck_cli::report::render_records(&records), text);
}

#[test]
fn classify_labels_stable_market() {
    let dir = tempfile::tempdir().unwrap();
    let input = simulate_fixture(dir.path(), "prices.csv", &[]);
    let out = puck(&["classify", "--input", input.to_str().unwrap(), "--criterion", "bic"]);
    assert!(out.status.success());
    let records = parse_records(&stdout(&out)).unwrap();
    match &records[1] {
        ReportRecord::Fit { regime: Some(regime), .. } => {
            assert_eq!(regime.state, puck_core::MarketState::Stable);
            assert!(!regime.precursor_cubic);
        }
        other => panic!("expected classified fit, got {other:?}"),
    }
}

#[test]
fn scan_emits_one_record_per_window() {
    let dir = tempfile::tempdir().unwrap();
    let input = simulate_fixture(dir.path(), "prices.csv", &[]);
    let out = puck(&[
        "scan",
        "--input",
        input.to_str().unwrap(),
        "--window",
        "600",
        "--step",
        "300",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let records = parse_records(&stdout(&out)).unwrap();
    // 1204 ticks, window 600, step 300 -> starts 0, 300, 600.
    assert_eq!(records.len(), 1 + 3);
    for record in &records[1..] {
        match record {
            ReportRecord::Window { degenerate, selection, regime, length, .. } => {
                assert!(!degenerate);
                assert!(selection.is_some() && regime.is_some());
                assert_eq!(*length, 600);
            }
            other => panic!("expected window, got {other:?}"),
        }
    }
}

#[test]
fn fit_on_constant_prices_reports_degenerate_and_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("flat.csv");
    std::fs::write(&input, "100\n".repeat(500)).unwrap();
    let out = puck(&["fit", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));
}

#[test]
fn potential_writes_two_column_plot_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = simulate_fixture(dir.path(), "prices.csv", &[]);
    let curve = dir.path().join("u.txt");
    let force = dir.path().join("force.txt");
    let out = puck(&[
        "potential",
        "--input",
        input.to_str().unwrap(),
        "--m",
        "4",
        "--bins",
        "21",
        "--out",
        curve.to_str().unwrap(),
        "--increments-out",
        force.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let records = parse_records(&stdout(&out)).unwrap();
    let kept = match &records[1] {
        ReportRecord::Potential { bins_kept, bins_requested, m } => {
            assert_eq!(*bins_requested, 21);
            assert_eq!(*m, 4);
            *bins_kept
        }
        other => panic!("expected potential record, got {other:?}"),
    };
    for path in [&curve, &force] {
        let text = std::fs::read_to_string(path).unwrap();
        assert_eq!(text.lines().count(), kept);
        for line in text.lines() {
            let mut fields = line.split(' ');
            fields.next().unwrap().parse::<f64>().unwrap();
            fields.next().unwrap().parse::<f64>().unwrap();
            assert!(fields.next().is_none());
        }
    }
}

#[test]
fn make_demo_is_deterministic_and_reports_segments() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("demo_a.csv");
    let b = dir.path().join("demo_b.csv");
    let mut cubic_starts = Vec::new();
    for path in [&a, &b] {
        let out = puck(&["make-demo", "--seed", "7", "--out", path.to_str().unwrap()]);
        assert!(out.status.success());
        let records = parse_records(&stdout(&out)).unwrap();
        match &records[0] {
            ReportRecord::Series { cubic_start, crash_start, rows, demo, .. } => {
                assert_eq!(*cubic_start, Some(1500));
                assert_eq!(*crash_start, Some(3000));
                assert!(*rows > 3000);
                assert!(demo.is_some());
                cubic_starts.push(cubic_start.unwrap());
            }
            other => panic!("expected series record, got {other:?}"),
        }
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(cubic_starts[0], cubic_starts[1]);
}

#[test]
fn config_file_overrides_defaults_and_flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let input = simulate_fixture(dir.path(), "prices.csv", &[]);
    let config_path = dir.path().join("run.toml");
    std::fs::write(
        &config_path,
        "window = 700\nstep = 350\ncriterion = \"bic\"\n\n[grid]\ngamma_set = [2]\nm_set = [2, 4]\nrefine = false\n\n[grid.b_quad_range]\nlow = -1.0\nhigh = 1.0\nstep = 0.1\n\n[grid.b_nl_range]\nlow = -0.2\nhigh = 0.2\nstep = 0.1\n",
    )
    .unwrap();

    let out = puck(&[
        "scan",
        "--input",
        input.to_str().unwrap(),
        "--grid-spec",
        config_path.to_str().unwrap(),
        "--step",
        "500",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let records = parse_records(&stdout(&out)).unwrap();
    match &records[0] {
        ReportRecord::Header { config: Some(config), .. } => {
            assert_eq!(config.window, 700); // from file
            assert_eq!(config.step, 500); // flag wins over file
            assert_eq!(config.criterion, puck_core::Criterion::Bic);
            assert_eq!(config.grid.m_set, vec![2, 4]);
        }
        other => panic!("expected header, got {other:?}"),
    }
    // 1204 ticks, window 700, step 500 -> starts 0, 500.
    assert_eq!(records.len(), 1 + 2);
}

#[test]
fn ingest_then_emit_preserves_prices_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let input = simulate_fixture(dir.path(), "prices.csv", &[]);
    let original = std::fs::read_to_string(&input).unwrap();
    let (series, _) = ingest(&IngestSpec::new(&input)).unwrap();
    assert_eq!(price_csv(&series), original);
}
