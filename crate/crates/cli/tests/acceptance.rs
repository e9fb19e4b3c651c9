//! Acceptance battery: one test per criterion.
//!
//! Every check prints a PASS/FAIL line, then the criterion prints its own
//! verdict line. Run with `--nocapture` to see them; the tolerances live in
//! `dce_core::verification` and are not relaxed here.

use std::process::Command;

use dce_core::verification::{run_group, Check};

fn verdict(criterion: &str, extra: Vec<Check>) {
    let mut checks = run_group(criterion);
    checks.extend(extra);
    for c in &checks {
        println!("{c}");
    }
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed).collect();
    let tag = if failed.is_empty() { "PASS" } else { "FAIL" };
    println!(
        "{tag} {criterion}: {} of {} checks passed",
        checks.len() - failed.len(),
        checks.len()
    );
    assert!(
        failed.is_empty(),
        "{criterion} failed:\n{}",
        failed.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("\n")
    );
}

fn dce(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_dce"))
        .args(args)
        .output()
        .expect("spawn dce")
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check { group: "criterion-9", name: name.to_string(), passed, detail }
}

#[test]
fn criterion_1_bose_einstein() {
    verdict("criterion-1", Vec::new());
}

#[test]
fn criterion_2_fermi_dirac() {
    verdict("criterion-2", Vec::new());
}

#[test]
fn criterion_3_transparent_limit() {
    verdict("criterion-3", Vec::new());
}

#[test]
fn criterion_4_subleading_left_coefficient() {
    verdict("criterion-4", Vec::new());
}

#[test]
fn criterion_5_particle_number_and_energy() {
    verdict("criterion-5", Vec::new());
}

#[test]
fn criterion_6_logarithmic_divergence() {
    verdict("criterion-6", Vec::new());
}

#[test]
fn criterion_7_identities() {
    verdict("criterion-7", Vec::new());
}

#[test]
fn criterion_8_oracle_equivalence() {
    verdict("criterion-8", Vec::new());
}

#[test]
fn criterion_9_classifier_and_gate() {
    let mut extra = Vec::new();

    // spectrum output fed straight into classify, default column
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spectrum.csv");
    let path = path.to_str().unwrap();
    let s = dce(&["spectrum", "--k", "0.01", "--alpha", "0.005", "--output", path]);
    let c = dce(&["classify", "--input", path]);
    let text = String::from_utf8_lossy(&c.stdout).to_string();
    let stats = text.lines().nth(1).and_then(|l| l.split(',').next()).unwrap_or("").to_string();
    extra.push(check(
        "classify on spectrum output (k=0.01, alpha=0.005)",
        s.status.success() && c.status.success() && stats == "fermi_dirac",
        format!("got `{stats}`, need fermi_dirac"),
    ));

    let v = dce(&["verify", "--threads", "0"]);
    extra.push(check(
        "verify exits 0",
        v.status.code() == Some(0),
        format!("exit {:?}", v.status.code()),
    ));

    verdict("criterion-9", extra);
}

#[test]
fn limits_and_cli_examples() {
    let o = dce(&["beta", "--k", "1", "--u0", "30", "--omega", "1", "--omega-p", "100", "--alpha", "1e12"]);
    let text = String::from_utf8_lossy(&o.stdout).to_string();
    let b = text
        .lines()
        .nth(1)
        .and_then(|l| l.split(',').nth(2))
        .and_then(|x| x.parse::<f64>().ok())
        .unwrap_or(f64::NAN);
    let example = Check {
        group: "limits",
        name: "beta at alpha=1e12 (omega=1, omega'=100)".to_string(),
        passed: o.status.success() && (b / 2.978e-6 - 1.0).abs() < 0.05,
        detail: format!("{b:e} against 2.978e-6, need within 5%"),
    };
    verdict("limits", vec![example]);
}
