// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::Command;

fn sipf(args: &[&str]) -> (Option<i32>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sipf"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn run_text(dir: &Path, text: &str) -> (Option<i32>, String) {
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, text).unwrap();
    let out = dir.join("out");
    sipf(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
}

const SMALL: &str = "name: small\n\n[sweep]\nstart: 4.9 GHz\nstop: 5.1 GHz\nstep: 10 MHz\n";

#[test]
fn successful_run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = run_text(dir.path(), SMALL);
    assert_eq!(code, Some(0), "{err}");
    for f in [
        "small.csv",
        "small.s2p",
        "small.svg",
        "small.gp",
        "manifest.json",
    ] {
        assert!(dir.path().join("out").join(f).is_file(), "{f}");
    }
}

#[test]
fn zero_length_sweep_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = run_text(dir.path(), "[sweep]\nstart: 5 GHz\nstop: 5 GHz\n");
    assert_eq!(code, Some(2));
    assert!(err.contains("sweep.stop"), "{err}");
}

#[test]
fn unitless_length_names_line_and_field() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = run_text(
        dir.path(),
        "[scenario]\nkind: standalone-sipf\ntrace_length: 10\n",
    );
    assert_eq!(code, Some(2));
    assert!(err.contains("line 3") && err.contains("trace"), "{err}");
}

#[test]
fn unreachable_linewidth_is_a_calibration_failure() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = run_text(dir.path(), &format!("{SMALL}\n[scenario]\nkappa: 1 GHz\n"));
    assert_eq!(code, Some(3), "{err}");
}

#[test]
fn missing_config_is_an_io_error() {
    let (code, _) = sipf(&["run", "/nonexistent/run.cfg"]);
    assert_eq!(code, Some(1));
}

#[test]
fn unknown_subcommand_is_rejected() {
    let (code, _) = sipf(&["figure-9"]);
    assert_eq!(code, Some(2));
}
