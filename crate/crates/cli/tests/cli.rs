use std::path::Path;
use std::process::{Command, Output};

fn dce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dce"))
        .args(args)
        .output()
        .expect("spawn dce")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Parses CSV text into a header and rows of strings.
fn table(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(str::to_string).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn strong_coupling_matches_the_perfect_mirror() {
    let o = dce(&["beta", "--k", "1", "--u0", "30", "--omega", "1", "--omega-p", "100", "--alpha", "1e12"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = table(&stdout(&o));
    let b: f64 = rows[0][column(&h, "beta_sq_exact")].parse().unwrap();
    assert!((b / 2.978e-6 - 1.0).abs() < 0.05, "{b}");
    assert_eq!(rows[0][column(&h, "regime")], "perfect_like");
}

#[test]
fn infinite_alpha_routes_to_the_perfect_mirror() {
    let o = dce(&["beta", "--omega", "1", "--omega-p", "100", "--alpha", "inf"]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = table(&stdout(&o));
    let b: f64 = rows[0][column(&h, "beta_sq_exact")].parse().unwrap();
    assert!((b / 2.978e-6 - 1.0).abs() < 0.01, "{b}");
    assert_eq!(rows[0][column(&h, "beta_sq_rl")], "");
}

#[test]
fn csv_header_is_stable() {
    let o = dce(&["beta", "--omega", "1", "--omega-p", "100", "--rl"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).lines().next().unwrap(),
        "omega,omega_p,beta_sq_exact,beta_sq_asym,beta_sq_rl,regime,est_error,status"
    );
    let o = dce(&["spectrum", "--k", "0.01", "--alpha", "0.005", "--omega-count", "2"]);
    assert_eq!(stdout(&o).lines().next().unwrap(), "omega,n_numeric,n_closed,err,status");
    let o = dce(&["energy"]);
    assert_eq!(
        stdout(&o).lines().next().unwrap(),
        "k,alpha,energy_numeric,energy_closed,abs_err,status"
    );
}

#[test]
fn exit_codes() {
    assert_eq!(dce(&["beta", "--k", "0"]).status.code(), Some(1));
    assert_eq!(dce(&["beta", "--bogus"]).status.code(), Some(1));
    assert_eq!(dce(&["spectrum", "--omega-min", "2", "--omega-max", "1"]).status.code(), Some(1));
    assert_eq!(dce(&["spectrum", "--alpha", "inf"]).status.code(), Some(1));
    assert_eq!(dce(&["classify", "--input", "/nonexistent/x.csv"]).status.code(), Some(1));

    let o = dce(&["beta", "--alpha", "1", "--omega-p", "500", "--max-subdivisions", "1"]);
    assert_eq!(o.status.code(), Some(2));
    // the failed point still gets a row, with empty fields and no NaN
    let text = stdout(&o);
    assert!(text.contains("nonconvergence") && !text.contains("NaN"), "{text}");

    let o = dce(&["verify", "--group", "criterion-3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(dce(&["verify", "--group", "no-such-group"]).status.code(), Some(1));
    assert_eq!(dce(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(
        &cfg,
        "# energy sweep\nk = 2\nalpha = 0.5   # weak coupling\nomega-p = 100\nformat = json\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let o = dce(&["energy", "--config", cfg, "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"][0]["k"], 2.0);
    assert_eq!(v["rows"][0]["alpha"], 1.0);

    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "no-such-flag = 1\n").unwrap();
    assert_eq!(dce(&["energy", "--config", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn csv_is_byte_identical_across_thread_counts() {
    let base = ["beta", "--alpha", "1", "--omega-min", "0.25", "--omega-max", "2", "--omega-count", "4",
        "--omega-p-min", "50", "--omega-p-max", "500", "--omega-p-count", "3"];
    let run = |threads: &str| {
        let mut a = base.to_vec();
        a.extend(["--threads", threads]);
        let o = dce(&a);
        assert_eq!(o.status.code(), Some(0));
        o.stdout
    };
    let one = run("1");
    assert_eq!(one, run("1"));
    assert_eq!(one, run("3"));
    assert_eq!(one, run("0"));
}

#[test]
fn json_document_layout() {
    let o = dce(&["beta", "--omega", "1", "--omega-p", "100", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["config"].is_object());
    assert_eq!(v["config"]["physics"]["alpha"], 1.0);
    // JSON has no infinity literal
    let o = dce(&["beta", "--omega", "1", "--omega-p", "100", "--alpha", "inf", "--format", "json"]);
    let w: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(w["config"]["physics"]["alpha"], "inf");
    let row = &v["rows"][0];
    for key in ["omega", "omega_p", "beta_sq_exact", "beta_sq_asym", "beta_sq_rl", "regime", "est_error", "status"] {
        assert!(row.get(key).is_some(), "missing {key}");
    }
    assert!(v.get("summary").is_some());
}

#[test]
fn output_file_and_spectrum_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spectrum.csv");
    let o = dce(&["spectrum", "--k", "0.01", "--alpha", "0.005", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(Path::new(&path).exists());

    // the closed-form column carries the thermal signal
    let o = dce(&["classify", "--input", path.to_str().unwrap(), "--column", "n_closed"]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = table(&stdout(&o));
    assert_eq!(rows[0][column(&h, "statistics")], "fermi_dirac");
    let k: f64 = rows[0][column(&h, "k_fit")].parse().unwrap();
    assert!((k / 0.01 - 1.0).abs() < 0.02, "{k}");

    let o = dce(&["classify", "--input", path.to_str().unwrap(), "--column", "missing"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn energy_agrees_with_closed_form() {
    let o = dce(&["energy", "--k", "1", "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = table(&stdout(&o));
    let n: f64 = rows[0][column(&h, "energy_numeric")].parse().unwrap();
    let c: f64 = rows[0][column(&h, "energy_closed")].parse().unwrap();
    assert!((n / c - 1.0).abs() < 1e-8, "{n} {c}");
}
