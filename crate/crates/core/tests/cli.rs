//! Runs the `nhssh` binary against the fixture configs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nhssh::config::RunConfig;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn nhssh(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nhssh"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn run_fixture(cmd: &str, name: &str, extra: &[&str]) -> (Output, tempfile::TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture(name);
    let mut args = vec![cmd, "--config", cfg.to_str().unwrap()];
    args.extend_from_slice(extra);
    (nhssh(&args, dir.path()), dir)
}

fn summary(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is the summary JSON")
}

#[test]
fn hermitian_fixture_passes() {
    let (out, dir) = run_fixture("spectrum", "hermitian_spectrum.toml", &["--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let s = summary(&out);
    assert_eq!(s["command"], "spectrum");
    assert_eq!(s["assertions"].as_array().unwrap().len(), 4);
    assert!(s["assertions"].as_array().unwrap().iter().all(|a| a["pass"] == true));
    for f in ["spectrum.csv", "spectrum.json", "spectrum_summary.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let csv = std::fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    // 6x6 open lattice, two 6-cell ribbons at 8 momenta, 12x12 Bloch grid
    assert_eq!(csv.lines().count(), 1 + 144 + 2 * 192 + 144 * 4);
}

#[test]
fn failing_assertion_exits_one() {
    let (out, _dir) = run_fixture("spectrum", "failing_assertion.toml", &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("all_real[PBC]"));
}

#[test]
fn unknown_key_exits_two() {
    let (out, _dir) = run_fixture("spectrum", "bad_config.toml", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hopping"));
}

#[test]
fn bad_flags_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(nhssh(&["spectrum", "--format", "png"], dir.path()).status.code(), Some(2));
    assert_eq!(nhssh(&["spectrum", "--tol", "-1"], dir.path()).status.code(), Some(2));
    assert_eq!(nhssh(&["nonsense"], dir.path()).status.code(), Some(2));
    assert_eq!(nhssh(&["scan"], dir.path()).status.code(), Some(2));
}

#[test]
fn degenerate_polynomial_exits_three() {
    let (out, _dir) = run_fixture("check", "degenerate_gbz.toml", &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));
}

#[test]
fn alpha_scan_fixture() {
    let (out, dir) = run_fixture("scan", "alpha_scan.toml", &["--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("scan.csv")).unwrap();
    assert!(csv.starts_with("param,value,max_abs_im,fraction_real,line_gap\n"));
    assert_eq!(csv.lines().count(), 8);
    let t = summary(&out)["reports"][0]["curve"]["detected_transition"].as_f64().unwrap();
    assert!(t > 0.2 && t < 0.4);
}

#[test]
fn theta_scan_fixture() {
    let (out, dir) = run_fixture("scan", "theta_scan.toml", &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("scan.csv")).unwrap();
    assert!(csv.contains("theta@PBC") && csv.contains("theta@xyOBC"));
}

#[test]
fn beta_check_fixture() {
    let (out, _dir) = run_fixture("check", "beta_check.toml", &["--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let names: Vec<String> = summary(&out)["assertions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["name"].as_str().unwrap().to_string())
        .collect();
    for n in ["preserved[RMy]", "broken[P]", "x_winding_zero", "y_winding_nonzero", "skin_x", "skin_y"] {
        assert!(names.iter().any(|x| x == n), "{n} missing from {names:?}");
    }
}

#[test]
fn reruns_are_byte_identical() {
    let (_, a) = run_fixture("spectrum", "hermitian_spectrum.toml", &["--format", "csv,json,svg"]);
    let (_, b) = run_fixture("spectrum", "hermitian_spectrum.toml", &["--format", "csv,json,svg"]);
    for f in ["spectrum.csv", "spectrum.svg"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    // JSON embeds the output directory; compare the spectra only.
    let spectra = |d: &Path| {
        let v: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("spectrum.json")).unwrap()).unwrap();
        v["spectra"].clone()
    };
    assert_eq!(spectra(a.path()), spectra(b.path()));
}

#[test]
fn worker_count_does_not_change_output() {
    let (_, a) = run_fixture("spectrum", "hermitian_spectrum.toml", &["--workers", "1"]);
    let (_, b) = run_fixture("spectrum", "hermitian_spectrum.toml", &["--workers", "3"]);
    let csv = |d: &Path| std::fs::read(d.join("spectrum.csv")).unwrap();
    assert_eq!(csv(a.path()), csv(b.path()));
}

#[test]
fn summary_config_reproduces_the_run() {
    let (out, dir) = run_fixture("spectrum", "hermitian_spectrum.toml", &["--set", "model.alpha=0.3", "--json"]);
    let cfg: RunConfig = serde_json::from_value(summary(&out)["config"].clone()).unwrap();
    let path = dir.path().join("replay.toml");
    std::fs::write(&path, cfg.to_toml().unwrap()).unwrap();
    let replay = tempfile::tempdir().unwrap();
    let again = nhssh(&["spectrum", "--config", path.to_str().unwrap()], replay.path());
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(
        std::fs::read(dir.path().join("spectrum.csv")).unwrap(),
        std::fs::read(replay.path().join("spectrum.csv")).unwrap()
    );
}

#[test]
fn plot_reads_spectrum_csv() {
    let (_, dir) = run_fixture("spectrum", "hermitian_spectrum.toml", &[]);
    let out = nhssh(&["plot"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let svg = std::fs::read_to_string(dir.path().join("plot.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("xyOBC"));
}

#[test]
fn help_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = nhssh(&["--help"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for c in ["spectrum", "scan", "check", "plot"] {
        assert!(text.contains(c));
    }
}
