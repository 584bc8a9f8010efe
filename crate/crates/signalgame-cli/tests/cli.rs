//! End-to-end tests of the `signalgame` binary: exit-code contract, JSON
//! and CSV shapes, seed plumbing, and byte-level determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_signalgame"));
    // Shield the tests from any ambient seed override.
    cmd.env_remove("SIGNALGAME_SEED");
    cmd
}

fn write_scenario(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn stdout_json(output: &Output) -> Value {
    assert!(
        output.status.success(),
        "expected success, got {:?}: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is a JSON document")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("process exited normally")
}

const ALIGNED_2D: &str = r#"
version = "signalgame/1"

[source]
covariance = [1.0, 0.0, 0.0, 1.5]

[bias]
A = [0.8, 0.0, 0.0, 0.2]
b = [0.0, 0.0]
rho = 0.0
"#;

const SCALAR_NOISY: &str = r#"
version = "signalgame/1"

[source]
covariance = [1.0]

[bias]
A = [0.8]
b = [0.0]
rho = 0.6

[channel]
covariance = [0.5]
"#;

#[test]
fn solve_cheaptalk_emits_versioned_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(dir.path(), "aligned.toml", ALIGNED_2D);
    let output = bin().arg("solve-cheaptalk").arg(&path).output().unwrap();
    let doc = stdout_json(&output);

    assert_eq!(doc["schema"], "signalgame/1");
    assert_eq!(doc["kind"], "cheaptalk-equilibrium");
    assert_eq!(doc["regime"], "partially-revealing");
    assert_eq!(doc["k"], 1);
    assert_eq!(doc["Sigma_u_star"], serde_json::json!([[1.0, 0.0], [0.0, 0.0]]));
    assert_eq!(doc["L"], serde_json::json!([[1.0, 0.0], [0.0, 0.0]]));
}

#[test]
fn solve_cheaptalk_rejects_priced_transmission() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(dir.path(), "noisy.toml", SCALAR_NOISY);
    let output = bin().arg("solve-cheaptalk").arg(&path).output().unwrap();
    assert_eq!(exit_code(&output), 3);
    assert!(String::from_utf8_lossy(&output.stderr).contains("cheap-talk"));
}

#[test]
fn solve_noisy_matches_the_library_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(dir.path(), "noisy.toml", SCALAR_NOISY);
    let output = bin().arg("solve-noisy").arg(&path).output().unwrap();
    let doc = stdout_json(&output);

    let expected = signalgame::noisy::scalar_power(0.8, 0.0, 1.0, 0.5, 0.6).unwrap();
    assert_eq!(doc["regime"], "informative");
    assert_eq!(doc["certified"], true);
    // Shortest round-trip decimal serialization is lossless.
    assert_eq!(doc["P_star"].as_f64().unwrap(), expected.p_star);
    assert_eq!(doc["rho_threshold"].as_f64().unwrap(), expected.rho_threshold);
    assert_eq!(doc["fP_star"].as_f64().unwrap(), expected.f_p_star);
    assert_eq!(doc["alpha"].as_f64().unwrap(), expected.alpha);
}

#[test]
fn solve_noisy_on_costless_scenario_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(dir.path(), "aligned.toml", ALIGNED_2D);
    let output = bin().arg("solve-noisy").arg(&path).output().unwrap();
    assert_eq!(exit_code(&output), 3);
    assert!(String::from_utf8_lossy(&output.stderr).contains("cheap-talk solver"));
}

#[test]
fn solve_noisy_anisotropic_multidim_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(
        dir.path(),
        "aniso.toml",
        r#"
version = "signalgame/1"

[source]
covariance = [1.0, 0.0, 0.0, 1.0]

[bias]
A = [0.8, 0.0, 0.0, 0.3]
b = [0.0, 0.0]
rho = 0.6

[channel]
covariance = [0.5, 0.0, 0.0, 0.5]
"#,
    );
    let output = bin().arg("solve-noisy").arg(&path).output().unwrap();
    assert_eq!(exit_code(&output), 3);
    assert!(String::from_utf8_lossy(&output.stderr).contains("isotropic"));
}

#[test]
fn scenario_parse_failures_exit_2_with_context() {
    let dir = tempfile::tempdir().unwrap();

    let missing = dir.path().join("absent.toml");
    let output = bin().arg("solve-cheaptalk").arg(&missing).output().unwrap();
    assert_eq!(exit_code(&output), 2);

    let bad_syntax = write_scenario(dir.path(), "syntax.toml", "version = \"signalgame/1\"\n[source\n");
    let output = bin().arg("solve-cheaptalk").arg(&bad_syntax).output().unwrap();
    assert_eq!(exit_code(&output), 2);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("syntax.toml"), "no path in: {stderr}");

    let bad_version = write_scenario(dir.path(), "version.toml", &ALIGNED_2D.replace("signalgame/1", "signalgame/9"));
    let output = bin().arg("solve-cheaptalk").arg(&bad_version).output().unwrap();
    assert_eq!(exit_code(&output), 2);
    assert!(String::from_utf8_lossy(&output.stderr).contains("signalgame/9"));

    let unknown_key = write_scenario(dir.path(), "unknown.toml", &format!("{ALIGNED_2D}\n[extra]\nx = 1\n"));
    let output = bin().arg("solve-cheaptalk").arg(&unknown_key).output().unwrap();
    assert_eq!(exit_code(&output), 2);

    let wrong_dims = write_scenario(dir.path(), "dims.toml", &ALIGNED_2D.replace("[1.0, 0.0, 0.0, 1.5]", "[1.0, 0.0, 0.0]"));
    let output = bin().arg("solve-cheaptalk").arg(&wrong_dims).output().unwrap();
    assert_eq!(exit_code(&output), 2);
    assert!(String::from_utf8_lossy(&output.stderr).contains("source.covariance"));
}

#[test]
fn simulate_is_byte_deterministic_under_a_fixed_seed() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(dir.path(), "noisy.toml", SCALAR_NOISY);
    let scatter_a = dir.path().join("a.csv");
    let scatter_b = dir.path().join("b.csv");

    let run = |scatter: &Path| {
        bin()
            .arg("simulate")
            .arg(&path)
            .args(["--samples", "4000", "--seed", "42"])
            .arg("--scatter")
            .arg(scatter)
            .output()
            .unwrap()
    };
    let first = run(&scatter_a);
    let second = run(&scatter_b);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(fs::read(&scatter_a).unwrap(), fs::read(&scatter_b).unwrap());

    let other = bin()
        .arg("simulate")
        .arg(&path)
        .args(["--samples", "4000", "--seed", "43"])
        .output()
        .unwrap();
    assert!(other.status.success());
    assert_ne!(first.stdout, other.stdout);
}

#[test]
fn seed_resolution_prefers_flag_then_env_then_file() {
    let dir = tempfile::tempdir().unwrap();
    let with_file_seed = write_scenario(
        dir.path(),
        "seeded.toml",
        &format!("{SCALAR_NOISY}\n[sim]\nsamples = 500\nseed = 7\n"),
    );

    let seed_of = |cmd: &mut Command| {
        let doc = stdout_json(&cmd.output().unwrap());
        (doc["seed"].as_u64().unwrap(), doc["samples"].as_u64().unwrap())
    };

    // File default.
    let (seed, samples) = seed_of(bin().arg("simulate").arg(&with_file_seed));
    assert_eq!((seed, samples), (7, 500));

    // Environment beats the file.
    let (seed, _) = seed_of(bin().arg("simulate").arg(&with_file_seed).env("SIGNALGAME_SEED", "123"));
    assert_eq!(seed, 123);

    // Flag beats both.
    let (seed, _) = seed_of(
        bin()
            .arg("simulate")
            .arg(&with_file_seed)
            .args(["--seed", "5"])
            .env("SIGNALGAME_SEED", "123"),
    );
    assert_eq!(seed, 5);

    // Flag beats the file's sample count too.
    let (_, samples) = seed_of(bin().arg("simulate").arg(&with_file_seed).args(["--samples", "600"]));
    assert_eq!(samples, 600);

    // Nothing specified anywhere: seed 0, default sample count.
    let bare = write_scenario(dir.path(), "bare.toml", SCALAR_NOISY);
    let (seed, samples) = seed_of(bin().arg("simulate").arg(&bare).args(["--samples", "500"]));
    assert_eq!(seed, 0);
    assert_eq!(samples, 500);

    let invalid = bin()
        .arg("simulate")
        .arg(&bare)
        .env("SIGNALGAME_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(exit_code(&invalid), 2);
}

#[test]
fn simulate_scatter_suppresses_the_weak_component() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(dir.path(), "aligned.toml", ALIGNED_2D);
    let scatter = dir.path().join("scatter.csv");
    let output = bin()
        .arg("simulate")
        .arg(&path)
        .args(["--samples", "1000", "--seed", "3"])
        .arg("--scatter")
        .arg(&scatter)
        .output()
        .unwrap();
    assert!(output.status.success());

    let csv = fs::read_to_string(&scatter).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "m1,m2,u1,u2");
    assert_eq!(lines.len(), 1001);
    // The second estimate coordinate is identically zero: its encoder row is
    // exactly zero, so no float dust appears. Either zero sign is fine
    // (0·y carries y's sign bit).
    for line in &lines[1..] {
        let u2 = line.split(',').nth(3).unwrap();
        assert!(u2 == "0" || u2 == "-0", "nonzero suppressed coordinate: {line}");
    }
}

#[test]
fn simulate_write_failure_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(dir.path(), "noisy.toml", SCALAR_NOISY);
    let output = bin()
        .arg("simulate")
        .arg(&path)
        .args(["--samples", "100"])
        .arg("--out")
        .arg(dir.path().join("no-such-dir").join("report.json"))
        .output()
        .unwrap();
    assert_eq!(exit_code(&output), 4);
}

#[test]
fn phase_diagram_grid_is_classified_consistently() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("grid.csv");
    let output = bin()
        .arg("phase-diagram")
        .args(["--a", "0.0:1.5:16", "--rho", "0.0:2.0:21"])
        .args(["--sigma-m2", "1", "--sigma-w2", "0.5"])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success());

    let csv = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "a,rho,regime,p_star");
    assert_eq!(lines.len(), 1 + 16 * 21);

    let mut informative = 0usize;
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        let a: f64 = fields[0].parse().unwrap();
        let rho: f64 = fields[1].parse().unwrap();
        let p_star: f64 = fields[3].parse().unwrap();
        match fields[2] {
            "informative" => {
                informative += 1;
                assert!(p_star > 0.0, "informative cell with zero power: {line}");
                assert!(a > 0.5 && rho > 0.0, "mislabeled cell: {line}");
            }
            "non-informative" => {
                assert_eq!(p_star, 0.0, "non-informative cell with power: {line}");
            }
            other => panic!("unexpected regime {other:?}"),
        }
    }
    assert!(informative > 0, "grid contains no informative region");
}

#[test]
fn phase_diagram_rejects_bad_flags() {
    let output = bin()
        .arg("phase-diagram")
        .args(["--a", "0.0:1.5:16", "--rho", "0.0:2.0:21"])
        .args(["--sigma-m2", "-1", "--sigma-w2", "0.5"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&output), 2);

    let output = bin()
        .arg("phase-diagram")
        .args(["--a", "1.5:0.0:16", "--rho", "0.0:2.0:21"])
        .args(["--sigma-m2", "1", "--sigma-w2", "0.5"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&output), 2);
}

#[test]
fn waterfill_matches_known_allocations() {
    let output = bin().args(["waterfill", "--eigs", "1,1", "--power", "2"]).output().unwrap();
    let doc = stdout_json(&output);
    assert!((doc["capacity_bits"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((doc["nu"].as_f64().unwrap() - 2.0).abs() < 1e-9);

    let output = bin().args(["waterfill", "--eigs", "1,3", "--power", "1"]).output().unwrap();
    let doc = stdout_json(&output);
    assert!((doc["capacity_bits"].as_f64().unwrap() - 0.5).abs() < 1e-9);

    // The scenario path feeds the channel covariance's eigenvalues.
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(dir.path(), "noisy.toml", SCALAR_NOISY);
    let from_file = bin().arg("waterfill").arg(&path).args(["--power", "1"]).output().unwrap();
    let doc_file = stdout_json(&from_file);
    let from_eigs = bin().args(["waterfill", "--eigs", "0.5", "--power", "1"]).output().unwrap();
    let doc_eigs = stdout_json(&from_eigs);
    assert!(
        (doc_file["capacity_bits"].as_f64().unwrap() - doc_eigs["capacity_bits"].as_f64().unwrap())
            .abs()
            < 1e-12
    );
}

#[test]
fn waterfill_rejects_bad_inputs() {
    let output = bin().args(["waterfill", "--eigs", "1,-3", "--power", "1"]).output().unwrap();
    assert_eq!(exit_code(&output), 2);

    let output = bin().args(["waterfill", "--eigs", "1,3", "--power", "-1"]).output().unwrap();
    assert_eq!(exit_code(&output), 2);

    // Either --eigs or a scenario file is required; both together clash.
    let output = bin().args(["waterfill", "--power", "1"]).output().unwrap();
    assert_eq!(exit_code(&output), 2);
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(dir.path(), "noisy.toml", SCALAR_NOISY);
    let output = bin()
        .arg("waterfill")
        .args(["--eigs", "1"])
        .arg(&path)
        .args(["--power", "1"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&output), 2);
}

#[test]
fn usage_errors_exit_2_and_help_exits_0() {
    let output = bin().output().unwrap();
    assert_eq!(exit_code(&output), 2);

    let output = bin().arg("no-such-command").output().unwrap();
    assert_eq!(exit_code(&output), 2);

    let output = bin().arg("--help").output().unwrap();
    assert_eq!(exit_code(&output), 0);
}

#[test]
fn emitted_json_reparses_to_the_same_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(dir.path(), "noisy.toml", SCALAR_NOISY);
    for subcmd in ["solve-noisy", "solve-cheaptalk"] {
        let scenario = if subcmd == "solve-cheaptalk" {
            write_scenario(dir.path(), "aligned.toml", ALIGNED_2D)
        } else {
            path.clone()
        };
        let output = bin().arg(subcmd).arg(&scenario).output().unwrap();
        let text = String::from_utf8(output.stdout).unwrap();
        let doc: Value = serde_json::from_str(&text).unwrap();
        let again: Value = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(doc, again);
    }
}
