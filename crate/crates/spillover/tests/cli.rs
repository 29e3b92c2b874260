//! Black-box tests of the command-line binary: exit codes, stderr on
//! failure, artifact placement, and cross-thread determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spillover"))
}

const BASE_CONFIG: &str = "\
seed = 42
dgp.n = 2
dgp.t = 120
bvar.lags = 2
bvar.horizon = 4
bvar.draws = 60
lp.horizon = 4
lp.lags = 2
";

fn write_config(dir: &Path, extra: &str) -> PathBuf {
    let path = dir.join("run.cfg");
    std::fs::write(&path, format!("{BASE_CONFIG}{extra}")).unwrap();
    path
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn estimate_writes_bands_and_lists_them_on_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "");
    let out_dir = dir.path().join("out");
    let output = bin()
        .args(["estimate", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("rotation angle:"), "{text}");
    assert!(text.contains("irf_bvar_pure_mp.csv"), "{text}");
    for name in [
        "irf_bvar_pure_mp.csv",
        "irf_local_projection_pure_mp.csv",
        "y0_bvar_pure_mp.svg",
        "shocks.csv",
        "run_meta",
    ] {
        assert!(out_dir.join(name).exists(), "missing artifact {name}");
    }
}

#[test]
fn unknown_config_key_names_the_key_and_fails() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "bvar.lagz = 3\n");
    let output = bin()
        .args(["estimate", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(stderr(&output).contains("bvar.lagz"), "{}", stderr(&output));
}

#[test]
fn missing_config_flag_is_an_error() {
    let output = bin().arg("estimate").output().unwrap();
    assert!(!output.status.success());
    assert!(stderr(&output).contains("--config"), "{}", stderr(&output));
}

#[test]
fn seed_override_wins_over_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "");
    let out_dir = dir.path().join("out");
    let output = bin()
        .args(["identify", "--seed", "7", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let meta = std::fs::read_to_string(out_dir.join("run_meta")).unwrap();
    assert!(meta.contains("seed = 7\n"), "{meta}");
}

#[test]
fn artifacts_are_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "");
    let mut contents = Vec::new();
    for (threads, sub) in [("1", "t1"), ("4", "t4")] {
        let out_dir = dir.path().join(sub);
        let output = bin()
            .args(["estimate", "--threads", threads, "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&out_dir)
            .output()
            .unwrap();
        assert!(output.status.success(), "stderr: {}", stderr(&output));
        contents.push((
            std::fs::read(out_dir.join("irf_bvar_pure_mp.csv")).unwrap(),
            std::fs::read(out_dir.join("irf_local_projection_pure_mp.csv")).unwrap(),
            std::fs::read(out_dir.join("run_meta")).unwrap(),
        ));
    }
    assert_eq!(contents[0], contents[1], "artifacts depend on the thread count");
}

#[test]
fn simulate_dumps_the_synthetic_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "");
    let out_dir = dir.path().join("out");
    let output = bin()
        .args(["simulate", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let panel = std::fs::read_to_string(out_dir.join("panel.csv")).unwrap();
    assert!(panel.starts_with("date,y0,y1\n"), "{}", &panel[..40.min(panel.len())]);
    assert_eq!(panel.lines().count(), 121);
    assert!(out_dir.join("surprises.csv").exists());
    assert!(out_dir.join("truth_irf.csv").exists());
}

#[test]
fn compare_variants_writes_the_side_by_side_table() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "engines = bvar\n");
    let out_dir = dir.path().join("out");
    let output = bin()
        .args(["compare-variants", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let table = std::fs::read_to_string(out_dir.join("irf_comparison_bvar.csv")).unwrap();
    assert!(table.starts_with("variable,horizon,pure_mp_lo"), "{table}");
    assert!(out_dir.join("irf_bvar_raw_hfi.csv").exists());
}

#[test]
fn rotation_bands_takes_the_count_from_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "engines = bvar\n");
    let out_dir = dir.path().join("out");
    let output = bin()
        .args(["rotation-bands", "--rotations", "3", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let meta = std::fs::read_to_string(out_dir.join("run_meta")).unwrap();
    assert!(meta.contains("rotation.count = 3\n"), "{meta}");
    assert!(out_dir.join("irf_bvar_pure_mp_rotations.csv").exists());
}

#[test]
fn inadmissible_fixed_angle_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "identification.method = fixed_angle\nidentification.angle = 1.5\n",
    );
    let output = bin()
        .args(["identify", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(stderr(&output).contains("sign restrictions"), "{}", stderr(&output));
}
