use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use extbc::Rating;

fn extbc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_extbc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_b_dataset(path: &Path) {
    let mut text = String::from("year,pod_percent\n");
    for (i, p) in Rating::B.observed_percent().iter().enumerate() {
        text.push_str(&format!("{},{p}\n", i + 1));
    }
    fs::write(path, text).unwrap();
}

#[test]
fn pod_output_is_stable() {
    let args = ["pod", "--preset", "b_ebc", "--t-points", "5"];
    let a = extbc(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    let text = stdout(&a);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t_yr,pod_pct");
    assert_eq!(lines.len(), 6);
    assert!(!text.contains('\r'));
    assert_eq!(extbc(&args).stdout, a.stdout);
}

#[test]
fn out_flag_and_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "preset = bb_ebc\nt-points = 3\nkc-tilde = 0.5\n").unwrap();
    let out = dir.path().join("spread.csv");
    let o = extbc(&[
        "spread",
        "--config",
        cfg.to_str().unwrap(),
        "--kc-tilde",
        "0.18",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let from_file = fs::read_to_string(&out).unwrap();
    let direct = extbc(&["spread", "--preset", "bb_ebc", "--t-points", "3"]);
    assert_eq!(from_file, stdout(&direct));
    assert!(from_file.starts_with("t_yr,spread_bp\n"));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(extbc(&["pod"]).status.code(), Some(1));
    assert_eq!(extbc(&["pod", "--bogus"]).status.code(), Some(1));
    assert_eq!(extbc(&["report", "table9"]).status.code(), Some(1));
    assert_eq!(extbc(&["hazard", "--preset", "b_ebc", "--t-min", "5", "--t-max", "1"]).status.code(), Some(1));
    assert_eq!(extbc(&["--help"]).status.code(), Some(0));
}

#[test]
fn data_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "year,pod_percent\n1,1.0\n2,2.0\n3,abc\n").unwrap();
    let o = extbc(&["calibrate", "--dataset", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("row 4, column 2"), "{}", stderr(&o));
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    let o = extbc(&["calibrate", "--dataset", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let missing = dir.path().join("missing.csv");
    assert_eq!(extbc(&["calibrate", "--dataset", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_3() {
    let o = extbc(&[
        "hazard", "--a-tilde", "-5", "--x0-tilde", "0.01", "--kc-tilde", "100", "--t-min", "20", "--t-max", "30",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("too small"));
}

#[test]
fn calibrate_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("b_observed.csv");
    write_b_dataset(&data);
    let args = ["calibrate", "--dataset", data.to_str().unwrap(), "--trials", "2000", "--variant", "radiation"];
    let o = extbc(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "b_observed");
    assert_eq!(row[1], "radiation");
    let rho: f64 = row[5].parse().unwrap();
    assert!(rho < 0.5, "rho = {rho}");
    assert_eq!(extbc(&args).stdout, o.stdout);
}

#[test]
fn report_table1_layout() {
    let o = extbc(&["report", "table1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 21);
    assert!(lines.iter().all(|l| l.split(',').count() == 7));
}

#[test]
fn report_figures_have_unit_columns() {
    for (kind, suffix) in [("fig1", "_pct"), ("fig2", "_bp"), ("fig3", "_bp")] {
        let o = extbc(&["report", kind, "--t-points", "11"]);
        assert_eq!(o.status.code(), Some(0), "{kind}: {}", stderr(&o));
        let text = stdout(&o);
        let header = text.lines().next().unwrap();
        assert!(header.split(',').skip(1).filter(|h| *h != "t_yr").all(|h| h.ends_with(suffix)), "{header}");
    }
}

#[test]
fn quick_validation_passes() {
    let start = Instant::now();
    let o = extbc(&["validate", "--quick"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(start.elapsed().as_secs_f64() < 30.0);
    let text = stdout(&o);
    assert!(text.starts_with("check,case,t_yr,"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn corrupted_constant_fails_validation() {
    let o = extbc(&["validate", "--quick", "--fault-contact-factor", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("mc_contact_constant b_ebc"), "{}", stderr(&o));
    assert!(stdout(&o).lines().any(|l| l.ends_with(",false")));
}
