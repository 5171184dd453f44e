use std::path::Path;
use std::process::{Command, Output};

fn spiral(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spiral")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn spectrum_free_box() {
    let o = spiral(&["spectrum", "--alpha", "-1", "--beta", "0", "--gamma", "-1", "--delta", "0", "--levels", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,energy,momentum,nodes");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("0,4.93480220054,"));
    assert!(lines[2].starts_with("1,19.7392088022,"));
}

#[test]
fn slice_form_matches_full_form() {
    // gamma0 = -1, alpha = -1.5, beta = 0.5  <=>  (-1.5, 0.5, -1, (1.5 - 1) / 0.5)
    let a = spiral(&["spectrum", "--gamma0", "-1", "--alpha", "-1.5", "--beta", "0.5"]);
    let b = spiral(&["spectrum", "--alpha", "-1.5", "--beta", "0.5", "--gamma", "-1", "--delta", "1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn input_errors_exit_2() {
    let cases: [&[&str]; 5] = [
        &["spectrum", "--alpha", "1", "--beta", "1", "--gamma", "1", "--delta", "1"],
        &["spectrum", "--alpha", "-1"],
        &["spectrum", "--gamma0", "-1", "--alpha", "-1", "--beta", "0"],
        &["converge", "--alpha", "-1", "--beta", "0", "--gamma", "-1", "--delta", "0"],
        &["spectrum", "--alpha", "-1", "--beta", "0", "--gamma", "-1", "--delta", "0", "--r", "1.5"],
    ];
    for args in cases {
        let o = spiral(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn surface_is_deterministic_and_marks_singularity() {
    let dir = tempfile::tempdir().unwrap();
    let (p1, p2) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let args = |p: &Path| {
        vec![
            "surface".to_string(),
            "--alpha-steps".into(),
            "5".into(),
            "--beta-steps".into(),
            "5".into(),
            "--levels".into(),
            "2".into(),
            "--output".into(),
            p.display().to_string(),
        ]
    };
    for p in [&p1, &p2] {
        let o = Command::new(env!("CARGO_BIN_EXE_spiral")).args(args(p)).output().unwrap();
        assert_eq!(o.status.code(), Some(0));
    }
    let text = read(&p1);
    assert_eq!(text, read(&p2));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("alpha,beta,level,energy"));
    // the 5x5 grid over [-2,0] x [-1,1] contains (-1, 0)
    assert!(text.lines().any(|l| l == "-1,0,singular,"));
    assert!(text.lines().count() > 25);
}

#[test]
fn loop_report() {
    let o = spiral(&["loop", "--steps", "400", "--levels", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["winding"], 1);
    assert_eq!(v["shift"], 2);
    assert!(v["spectra_match_error"].as_f64().unwrap() <= 1e-8);
    let levels = v["levels"].as_array().unwrap();
    assert!(levels.iter().any(|l| l["status"] == "tracked" && l["start_index"] == 0 && l["end_index"] == 2));
    assert!(v.get("evolution").is_none());
}

#[test]
fn loop_with_overlaps_and_offset() {
    let o = spiral(&["loop", "--steps", "400", "--levels", "2", "--overlaps", "--center-offset", "5,5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["winding"], 0);
    assert_eq!(v["shift"], 0);
    let u = v["evolution"].as_array().unwrap();
    assert_eq!(u.len(), 2);
    assert!(u[0][0].as_f64().unwrap().abs() > 0.99);
}

#[test]
fn loop_rejects_csv() {
    assert_eq!(spiral(&["loop", "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn wave_samples() {
    let o = spiral(&["wave", "--alpha", "-1", "--beta", "0", "--gamma", "-1", "--delta", "0", "--samples", "64"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,psi"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (x, p) = l.split_once(',').unwrap();
            (x.parse().unwrap(), p.parse().unwrap())
        })
        .collect();
    assert!(rows.len() >= 64);
    assert!(rows.windows(2).all(|w| w[0].0 <= w[1].0));
    let peak = rows.iter().map(|r| r.1.abs()).fold(0.0, f64::max);
    assert!((peak - 2f64.sqrt()).abs() < 1e-3);
}

#[test]
fn converge_json() {
    let o = spiral(&[
        "converge", "--alpha", "2", "--beta", "1", "--gamma", "1", "--delta", "1", "--levels", "2", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows[0].get("abs_error").is_some());
}
