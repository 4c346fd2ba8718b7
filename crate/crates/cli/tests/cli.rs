use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mixspin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixspin")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn ground_sweep_writes_rows_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("ground.csv");
    let out = mixspin(&["ground-sweep", "--n", "8", "--alpha-grid", "0:1:0.5", "--out", path(&file)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&file).unwrap();
    assert!(text.starts_with('#'));
    let rows = text.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 1 + 3 * 4);

    let ok = mixspin(&["verify", path(&file)]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stdout));

    // corrupt the log-negativity of the first data row
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let header = lines.iter().position(|l| !l.starts_with('#')).unwrap();
    let columns: Vec<&str> = lines[header].split(',').collect();
    let col = columns.iter().position(|c| *c == "logneg").unwrap();
    let mut cells: Vec<String> = lines[header + 1].split(',').map(String::from).collect();
    cells[col] = "0.123".into();
    lines[header + 1] = cells.join(",");
    let tampered = dir.path().join("tampered.csv");
    fs::write(&tampered, lines.join("\n") + "\n").unwrap();
    let bad = mixspin(&["verify", path(&tampered)]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn qmc_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let file = dir.path().join(name);
        let out = mixspin(&[
            "thermal-sweep", "--n", "8", "--alpha", "0.768", "--kbt-grid", "0.5,1", "--method", "qmc",
            "--sweeps", "1600", "--walkers", "2", "--seed", "5", "--no-timestamp", "--out", path(&file),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        fs::read(&file).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn config_file_and_single_point_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# thermal point\nn = 8\nalpha = 0.5\nkbt-grid = 0.25\npairs = 12\n").unwrap();
    let out = mixspin(&["thermal-sweep", "--config", path(&cfg), "--no-timestamp"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 2);

    // the command line wins over the file
    let out = mixspin(&["thermal-sweep", "--config", path(&cfg), "--alpha", "1.0", "--no-timestamp"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("alpha=1"));
}

#[test]
fn validation_errors_exit_with_2() {
    assert_eq!(code(&mixspin(&["ground-sweep", "--n", "6", "--alpha", "0.5"])), 2);
    assert_eq!(code(&mixspin(&["ground-sweep", "--n", "8", "--alpha", "-0.1"])), 2);
    assert_eq!(code(&mixspin(&["thermal-sweep", "--n", "8", "--alpha", "0.5", "--kbt", "0.2", "--method", "qmc", "--bins", "4"])), 2);
    assert_eq!(code(&mixspin(&["thermal-sweep", "--n", "40", "--alpha", "0.5", "--kbt", "0.2", "--method", "qmc"])), 2);
    assert_eq!(code(&mixspin(&["excited", "--n", "8", "--alpha", "0.5", "--beta-probe", "1"])), 2);
}

#[test]
fn excessive_probe_beta_is_a_numerical_failure() {
    let out = mixspin(&["excited", "--n", "8", "--alpha", "0.5", "--beta-probe", "2000"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}
