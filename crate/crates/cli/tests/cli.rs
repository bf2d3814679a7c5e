//! End-to-end runs of the `spinbath` binary.

use std::path::Path;
use std::process::{Command, Output};

fn spinbath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinbath")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Header line, column names and numeric rows (non-numeric cells become NaN).
fn parse_csv(text: &str) -> (String, Vec<String>, Vec<Vec<f64>>) {
    let header = text.lines().next().unwrap().to_string();
    assert!(header.starts_with("# "), "{header}");
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let cols = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows = rdr
        .records()
        .map(|r| r.unwrap().iter().map(|x| x.parse().unwrap_or(f64::NAN)).collect())
        .collect();
    (header, cols, rows)
}

fn col(cols: &[String], rows: &[Vec<f64>], name: &str) -> Vec<f64> {
    let i = cols.iter().position(|c| c == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i]).collect()
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn phase_columns_and_examples() {
    let o = spinbath(&["phase", "--w", "0", "--T-over-Tc", "0.25,0.5,0.75,1.0,1.25"]);
    assert!(o.status.success());
    let (_, cols, rows) = parse_csv(&stdout(&o));
    assert_eq!(cols, ["T", "T_over_Tc", "theta", "m", "phase"]);
    let m = col(&cols, &rows, "m");
    assert!(m.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(&m[3..], &[0.0, 0.0]);
    assert!(stdout(&o).lines().last().unwrap().ends_with(",disordered"));

    let o = spinbath(&["phase", "--w", "0.1", "--T-over-Tc", "0.5"]);
    let (_, cols, rows) = parse_csv(&stdout(&o));
    assert!((col(&cols, &rows, "theta")[0] - 1.915).abs() < 1e-3);
}

#[test]
fn coherence_columns() {
    let o = spinbath(&["coherence", "--mode", "finite", "--N", "1000000", "--points", "41"]);
    assert!(o.status.success());
    let (_, cols, rows) = parse_csv(&stdout(&o));
    assert_eq!(cols, ["t", "J0_t", "re_r", "im_r", "abs_r", "abs_r_asymptotic", "tau"]);
    assert_eq!(rows[0][4], 1.0);
    assert_eq!(rows[0][5], 1.0);
    let gap = rows.iter().map(|r| (r[4] - r[5]).abs()).fold(0.0, f64::max);
    assert!(gap < 1e-4, "{gap}");
}

#[test]
fn concurrence_values_in_range() {
    for case in ["1", "2", "3", "4"] {
        for mode in [["--mode", "finite"], ["--mode", "asymptotic"]] {
            let o = spinbath(&["concurrence", "--case", case, mode[0], mode[1], "--N", "50", "--xi0", "0.4"]);
            assert!(o.status.success());
            let (_, cols, rows) = parse_csv(&stdout(&o));
            assert!(col(&cols, &rows, "C").iter().all(|c| (0.0..=1.0).contains(c)));
            for name in ["abs_A", "abs_B"] {
                assert!(col(&cols, &rows, name).iter().all(|x| (0.0..=1.0 + 1e-12).contains(x)));
            }
            assert_eq!(cols.iter().any(|c| c == "C_no_bath"), case == "4");
        }
    }
    let o = spinbath(&["concurrence", "--case", "1"]);
    let (_, cols, rows) = parse_csv(&stdout(&o));
    assert!(col(&cols, &rows, "C").iter().all(|c| (c - 1.0).abs() < 1e-12));
    let o = spinbath(&["concurrence", "--case", "3"]);
    let (_, cols, rows) = parse_csv(&stdout(&o));
    assert!(col(&cols, &rows, "C").iter().all(|c| c.abs() < 1e-12));
}

#[test]
fn output_is_deterministic() {
    let args = ["concurrence", "--amplitudes", "0.3+0.2i,0.5,-0.1i,0.6", "--mode", "finite", "--N", "300", "--points", "301"];
    let a = spinbath(&args);
    let b = spinbath(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let dir = tempfile::tempdir().unwrap();
    let d1 = dir.path().join("a");
    let d2 = dir.path().join("b");
    assert!(spinbath(&["fig1", "--out", d1.to_str().unwrap()]).status.success());
    assert!(spinbath(&["fig1", "--out", d2.to_str().unwrap()]).status.success());
    for r in ["0.75", "0.5", "0.35", "0.25"] {
        let name = format!("fig1_T_over_Tc_{r}.csv");
        assert_eq!(read(&d1.join(&name)), read(&d2.join(&name)));
    }
}

#[test]
fn config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.csv");
    let o = spinbath(&[
        "coherence", "--J", "3", "--w", "0.2", "--T", "0.6", "--J0", "0.7", "--mu0", "0.25", "--mode", "finite",
        "--N", "123", "--t-max", "5", "--points", "17", "--out", first.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = read(&first);

    // The header alone re-creates the run.
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, text.lines().next().unwrap().trim_start_matches("# ").replace("command=coherence", "")).unwrap();
    let again = spinbath(&["coherence", "--config", cfg.to_str().unwrap()]);
    assert_eq!(stdout(&again), text);

    // Flags override the file.
    let o = spinbath(&["coherence", "--config", cfg.to_str().unwrap(), "--points", "5"]);
    let (header, _, rows) = parse_csv(&stdout(&o));
    assert_eq!(rows.len(), 5);
    assert!(header.contains("points=5"));
}

#[test]
fn presets_write_one_file_per_curve() {
    let dir = tempfile::tempdir().unwrap();
    let o = spinbath(&["fig2", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let text = read(&dir.path().join("fig2_T_over_Tc_0.25.csv"));
    let (header, cols, rows) = parse_csv(&text);
    assert!(header.contains("xi0=0.3") && header.contains("case=4") && header.contains("T-over-Tc=0.25"));
    assert_eq!(cols, ["t", "J0_t", "C", "abs_A", "abs_B", "C_no_bath"]);
    assert!(col(&cols, &rows, "C")[0].abs() < 1e-12);
}

#[test]
fn verify_exit_codes() {
    let o = spinbath(&["verify", "--points", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("dense_vs_factorised,6,"));
    let o = spinbath(&["verify", "--points", "6", "--corrupt", "1e-6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
    let o = spinbath(&["verify", "--points", "4", "--extended"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("reduced_state_vs_closed_form,8,"));
}

#[test]
fn invalid_input_exit_code() {
    for args in [
        &["phase", "--J", "-1"][..],
        &["coherence", "--T-over-Tc", "0.5,0.6"],
        &["concurrence", "--case", "7"],
        &["concurrence", "--points", "1"],
        &["coherence", "--config", "/nonexistent/cfg"],
        &["frobnicate"],
    ] {
        assert_eq!(spinbath(args).status.code(), Some(2), "{args:?}");
    }
}
