//! End-to-end tests of the `torus-homotopy` binary: every exit code of the
//! contract (0 success, 2 domain rejection, 64 usage, 70 numerical failure),
//! the JSON report shapes, grid precedence, sample export, and the automatic
//! grid refinement on coarse detections.

use std::path::PathBuf;
use std::process::{Command, Output};

const GRID_ENV: &str = "TORUS_HOMOTOPY_GRID";

/// The binary under test, isolated from any ambient grid override.
fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_torus-homotopy"));
    cmd.env_remove(GRID_ENV);
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}); stdout: {} stderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn stderr_text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// A scratch file path in the target-local temp dir, cleaned up by the OS.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("torus-homotopy-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir.join(name)
}

// ---------------------------------------------------------------------------
// realize
// ---------------------------------------------------------------------------

#[test]
fn realize_triple_measures_back_exactly() {
    let out = run(&["realize", "--type-i", "--triple", "0,2,0", "--grid", "64"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    let report = stdout_json(&out);
    assert_eq!(report["command"], "realize");
    assert_eq!(report["involution"], "type-i");
    assert_eq!(report["requested"]["d"], 2);
    assert_eq!(report["triple"]["d0"], 0);
    assert_eq!(report["triple"]["d"], 2);
    assert_eq!(report["triple"]["d1"], 0);
    assert_eq!(report["grid"], 64);
    assert_eq!(report["matches"], true);
}

#[test]
fn realize_negative_entries_parse() {
    let out = run(&["realize", "--triple", "-1,1,0", "--grid", "64"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    let report = stdout_json(&out);
    assert_eq!(report["involution"], "type-i");
    assert_eq!(report["triple"]["d0"], -1);
    assert_eq!(report["matches"], true);
}

#[test]
fn realize_parity_violation_exits_2_with_explanation() {
    let out = run(&["realize", "--type-i", "--triple", "0,1,0"]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty(), "no report for a rejected invariant");
    let err = stderr_text(&out);
    assert!(
        err.contains("parity"),
        "stderr must cite the parity law: {err}"
    );
    assert!(err.contains("mod 2"), "stderr must state the law: {err}");
}

#[test]
fn realize_pair_measures_back_exactly() {
    let out = run(&["realize", "--type-ii", "--pair", "1,3", "--grid", "128"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    let report = stdout_json(&out);
    assert_eq!(report["involution"], "type-ii");
    assert_eq!(report["pair"]["dC"], 1);
    assert_eq!(report["pair"]["d"], 3);
    assert_eq!(report["matches"], true);
}

#[test]
fn realize_pair_parity_violation_exits_2() {
    let out = run(&["realize", "--type-ii", "--pair", "0,1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr_text(&out).contains("parity"));
}

// ---------------------------------------------------------------------------
// classify: builtins
// ---------------------------------------------------------------------------

#[test]
fn classify_weierstrass_p() {
    let out = run(&["classify", "--builtin", "weierstrass-p", "--grid", "128"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    let report = stdout_json(&out);
    assert_eq!(report["source"], "builtin:weierstrass-p");
    assert_eq!(report["involution"], "type-i");
    assert_eq!(report["triple"]["d0"], 0);
    assert_eq!(report["triple"]["d"], 2);
    assert_eq!(report["triple"]["d1"], 0);
}

#[test]
fn classify_weierstrass_p_prime() {
    let out = run(&[
        "classify",
        "--builtin",
        "weierstrass-p-prime",
        "--grid",
        "128",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    let report = stdout_json(&out);
    assert_eq!(report["triple"]["d0"], 1);
    assert_eq!(report["triple"]["d"], 3);
    assert_eq!(report["triple"]["d1"], 0);
}

#[test]
fn classify_physics_band() {
    let out = run(&[
        "classify",
        "--builtin",
        "physics",
        "--t",
        "1",
        "--m",
        "1",
        "--grid",
        "64",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    let report = stdout_json(&out);
    assert_eq!(report["triple"]["d0"], -1);
    assert_eq!(report["triple"]["d"], 1);
    assert_eq!(report["triple"]["d1"], 0);
}

#[test]
fn classify_singular_physics_parameter_exits_2() {
    let out = run(&["classify", "--builtin", "physics", "--t", "2", "--m", "1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr_text(&out).contains("singular"));
}

#[test]
fn classify_physics_requires_t_and_m() {
    assert_eq!(
        code(&run(&["classify", "--builtin", "physics", "--t", "1"])),
        64
    );
    assert_eq!(
        code(&run(&["classify", "--builtin", "physics", "--m", "1"])),
        64
    );
}

// ---------------------------------------------------------------------------
// classify: sampled files and export round trip
// ---------------------------------------------------------------------------

#[test]
fn realize_export_classify_round_trip() {
    let path = scratch("roundtrip.json");
    let path_str = path.to_str().unwrap();
    let out = run(&[
        "realize", "--type-i", "--triple", "1,1,0", "--grid", "64", "--output", path_str,
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    assert_eq!(stdout_json(&out)["samples_written"], path_str);

    let out = run(&["classify", "--input", path_str]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    let report = stdout_json(&out);
    assert_eq!(report["involution"], "type-i");
    assert_eq!(report["triple"]["d0"], 1);
    assert_eq!(report["triple"]["d"], 1);
    assert_eq!(report["triple"]["d1"], 0);
    assert_eq!(report["grid"], 64, "defaults to the file's own grid");
}

#[test]
fn type_ii_round_trip_keeps_kind() {
    let path = scratch("pair.json");
    let path_str = path.to_str().unwrap();
    let out = run(&[
        "realize",
        "--type-ii",
        "--pair",
        "0,2",
        "--grid",
        "64",
        "--output",
        path_str,
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));

    let out = run(&["classify", "--input", path_str]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    let report = stdout_json(&out);
    assert_eq!(report["involution"], "type-ii", "kind read from the file");
    assert_eq!(report["pair"]["dC"], 0);
    assert_eq!(report["pair"]["d"], 2);
}

#[test]
fn csv_export_has_mandatory_header() {
    let path = scratch("samples.csv");
    let out = run(&[
        "realize",
        "--triple",
        "0,0,0",
        "--grid",
        "16",
        "--output",
        path.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    let csv = std::fs::read_to_string(&path).expect("csv written");
    assert!(csv.starts_with("x,y,fx,fy,fz\n"), "header row is mandatory");
    assert_eq!(csv.lines().count(), 1 + 16 * 16, "one row per grid point");
}

#[test]
fn classify_missing_file_exits_64() {
    let out = run(&["classify", "--input", "/nonexistent/samples.json"]);
    assert_eq!(code(&out), 64);
}

#[test]
fn classify_malformed_file_exits_64() {
    let path = scratch("garbage.json");
    std::fs::write(&path, "{\"not\": \"a sampled map\"}").unwrap();
    let out = run(&["classify", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&out), 64);
}

// ---------------------------------------------------------------------------
// jump
// ---------------------------------------------------------------------------

#[test]
fn jump_type1_confirms_predicted_points() {
    let out = run(&[
        "jump", "--type-i", "--from", "1,1,0", "--to", "1,3,0", "--grid", "128",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], "confirmed");
    assert_eq!(report["predicted_count"], 2);
    assert_eq!(report["detected"].as_array().unwrap().len(), 2);
    assert_eq!(report["rank"], 2);
    assert_eq!(report["endpoints"]["minus"]["matches"], true);
    assert_eq!(report["endpoints"]["plus"]["matches"], true);
}

#[test]
fn jump_type2_inferred_from_pair_arity() {
    // No --type-ii flag: two-entry endpoints imply a type II jump.
    let out = run(&["jump", "--from", "1,1", "--to", "0,2", "--grid", "128"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], "confirmed");
    assert_eq!(report["predicted_count"], 3);
    assert_eq!(report["detected"].as_array().unwrap().len(), 3);
}

#[test]
fn jump_between_equal_invariants_has_empty_singular_set() {
    let out = run(&[
        "jump", "--type-i", "--from", "0,0,0", "--to", "0,0,0", "--grid", "64",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], "confirmed");
    assert_eq!(report["predicted_count"], 0);
    assert!(report["detected"].as_array().unwrap().is_empty());
}

#[test]
fn jump_unrealizable_endpoint_exits_2() {
    let out = run(&["jump", "--type-i", "--from", "0,1,0", "--to", "0,2,0"]);
    assert_eq!(code(&out), 2);
    assert!(stderr_text(&out).contains("parity"));
}

#[test]
fn rank_n_jump_carries_signatures() {
    let out = run(&[
        "jump", "--rank", "3", "--p", "2", "--q", "1", "--from", "0,0,0", "--to", "0,2,0",
        "--grid", "128",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    let report = stdout_json(&out);
    assert_eq!(report["rank"], 3);
    assert_eq!(report["verdict"], "confirmed");
    assert_eq!(report["endpoint_signatures"][0]["p"], 2);
    assert_eq!(report["endpoint_signatures"][0]["q"], 1);
    assert_eq!(report["endpoint_signatures"][1]["p"], 2);
    assert_eq!(report["detected"].as_array().unwrap().len(), 2);
}

#[test]
fn rank_contradiction_exits_64() {
    let out = run(&[
        "jump", "--rank", "4", "--p", "2", "--q", "1", "--from", "0,0,0", "--to", "0,2,0",
    ]);
    assert_eq!(code(&out), 64);
}

#[test]
fn rank_2_block_embedding_exits_64() {
    let out = run(&[
        "jump", "--p", "1", "--q", "1", "--from", "0,0,0", "--to", "0,2,0",
    ]);
    assert_eq!(code(&out), 64);
}

#[test]
fn coarse_grid_recovers_after_one_doubling() {
    // Eight singular points spaced 1/8 apart: too close at grid 16, separable
    // after the automatic doubling to 32.
    let out = run(&[
        "jump", "--type-i", "--from", "0,0,0", "--to", "8,8,0", "--grid", "16",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    assert!(stderr_text(&out).contains("retrying at 32"));
    let report = stdout_json(&out);
    assert_eq!(report["grid"], 32, "report reflects the refined grid");
    assert_eq!(report["verdict"], "confirmed");
    assert_eq!(report["detected"].as_array().unwrap().len(), 8);
}

#[test]
fn coarse_grid_exits_70_after_one_doubling() {
    // Twelve singular points spaced 1/12 apart cannot be separated at grid 16
    // or 32; after the single automatic refinement the command must give up.
    let out = run(&[
        "jump", "--type-i", "--from", "0,0,0", "--to", "12,12,0", "--grid", "16",
    ]);
    assert_eq!(code(&out), 70);
    let err = stderr_text(&out);
    assert!(
        err.contains("retrying at 32"),
        "one refinement attempted: {err}"
    );
    assert!(
        err.contains("32 points per side"),
        "final error names the refined grid: {err}"
    );
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[test]
fn verify_parity_suite_passes() {
    let out = run(&["verify", "parity", "--grid", "64"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("suite: parity"));
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));
    assert!(text.contains("0 failed"));
}

#[test]
fn verify_jumps_suite_passes() {
    let out = run(&["verify", "jumps", "--grid", "128"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("suite: jumps"));
    assert!(text.contains("0 failed"));
}

#[test]
fn verify_unknown_suite_exits_64() {
    let out = run(&["verify", "nonsense"]);
    assert_eq!(code(&out), 64);
    assert!(stderr_text(&out).contains("parity, weierstrass, jumps"));
}

// ---------------------------------------------------------------------------
// grid precedence and usage errors
// ---------------------------------------------------------------------------

#[test]
fn env_var_overrides_default_grid() {
    let out = bin()
        .args(["realize", "--triple", "1,1,0"])
        .env(GRID_ENV, "128")
        .output()
        .expect("binary runs");
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    assert_eq!(stdout_json(&out)["grid"], 128);
}

#[test]
fn flag_overrides_env_var() {
    let out = bin()
        .args(["realize", "--triple", "1,1,0", "--grid", "64"])
        .env(GRID_ENV, "128")
        .output()
        .expect("binary runs");
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    assert_eq!(stdout_json(&out)["grid"], 64);
}

#[test]
fn invalid_env_grid_exits_64() {
    for bad in ["100", "abc", "8"] {
        let out = bin()
            .args(["realize", "--triple", "1,1,0"])
            .env(GRID_ENV, bad)
            .output()
            .expect("binary runs");
        assert_eq!(code(&out), 64, "env grid {bad} must be rejected");
    }
}

#[test]
fn invalid_grid_flags_exit_64() {
    assert_eq!(
        code(&run(&["realize", "--triple", "1,1,0", "--grid", "100"])),
        64
    );
    assert_eq!(
        code(&run(&["realize", "--triple", "1,1,0", "--grid", "8"])),
        64
    );
    assert_eq!(
        code(&run(&[
            "jump", "--from", "0,0,0", "--to", "0,0,0", "--grid", "100"
        ])),
        64
    );
}

#[test]
fn malformed_invocations_exit_64() {
    // Unknown flag, missing invariant, kind/invariant mismatch, malformed
    // values, missing subcommand.
    assert_eq!(code(&run(&["realize", "--nope"])), 64);
    assert_eq!(code(&run(&["realize", "--type-i"])), 64);
    assert_eq!(
        code(&run(&["realize", "--type-ii", "--triple", "0,2,0"])),
        64
    );
    assert_eq!(code(&run(&["realize", "--type-i", "--pair", "0,2"])), 64);
    assert_eq!(code(&run(&["realize", "--triple", "0,2"])), 64);
    assert_eq!(code(&run(&["realize", "--triple", "a,b,c"])), 64);
    assert_eq!(
        code(&run(&[
            "jump",
            "--type-ii",
            "--from",
            "1,1,0",
            "--to",
            "0,2,0"
        ])),
        64
    );
    assert_eq!(code(&run(&[])), 64);
}

#[test]
fn help_and_version_exit_0() {
    let help = run(&["--help"]);
    assert_eq!(code(&help), 0);
    assert!(String::from_utf8_lossy(&help.stdout).contains("torus-homotopy"));
    assert_eq!(code(&run(&["--version"])), 0);
}

// ---------------------------------------------------------------------------
// determinism
// ---------------------------------------------------------------------------

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "classify",
        "--builtin",
        "physics",
        "--t",
        "1",
        "--m",
        "2",
        "--grid",
        "64",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout, "reports must be deterministic");

    let args = [
        "jump", "--type-i", "--from", "1,1,0", "--to", "1,3,0", "--grid", "64",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
}
