//! CLI contract tests: exit codes, report determinism, generator output
//! shapes, and the DP-limit override.

use std::process::Command;

fn hlab_env(args: &[&str], env: &[(&str, &str)]) -> (String, String, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hlab"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
        out.status.code().unwrap_or(-1),
    )
}

fn hlab(args: &[&str]) -> (String, String, i32) {
    hlab_env(args, &[])
}

fn tmp(name: &str) -> String {
    let dir = std::env::temp_dir().join("hlab-cli-tests");
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn parse_errors_exit_2() {
    let missing = tmp("does-not-exist.json");
    let (_, _, code) = hlab(&["content", &missing, "--alpha", "1"]);
    assert_eq!(code, 2);

    let garbage = tmp("garbage.json");
    std::fs::write(&garbage, "not json").unwrap();
    let (_, _, code) = hlab(&["content", &garbage, "--alpha", "1"]);
    assert_eq!(code, 2);

    let cloud = tmp("cloud2.json");
    std::fs::write(&cloud, r#"{"points": [[0.0], [1.0]]}"#).unwrap();
    let (_, _, code) = hlab(&["content", &cloud, "--alpha", "-1"]);
    assert_eq!(code, 2);
    let (_, _, code) = hlab(&["content", &cloud, "--alpha", "1", "--mode", "nonsense"]);
    assert_eq!(code, 2);
    let (_, _, code) = hlab(&["content", &cloud, "--alpha", "1", "--delta", "0"]);
    assert_eq!(code, 2);
    let (_, _, code) = hlab(&["verify", "not-a-suite"]);
    assert_eq!(code, 2);
}

#[test]
fn limit_violations_exit_3() {
    // 18 points exceed the default DP limit of 16.
    let coords: Vec<String> = (0..18).map(|i| format!("[{i}.0]")).collect();
    let big = tmp("cloud18.json");
    std::fs::write(&big, format!(r#"{{"points": [{}]}}"#, coords.join(","))).unwrap();
    let (_, stderr, code) = hlab(&["content", &big, "--alpha", "1"]);
    assert_eq!(code, 3, "stderr: {stderr}");

    // Oversized materialization: 4^7 > 4096 cells.
    let (_, _, code) = hlab(&[
        "gen", "seqspace", "--n", "4", "--rho", "0.5", "--depth", "7",
    ]);
    assert_eq!(code, 3);

    // Degenerate dimension grids: too few scales, or not decreasing.
    let cloud = tmp("dimcloud.json");
    std::fs::write(&cloud, r#"{"points": [[0.0], [1.0], [2.0]]}"#).unwrap();
    let (_, _, code) = hlab(&["dim", &cloud, "--scales", "0.5,0.25"]);
    assert_eq!(code, 3);
    let (_, _, code) = hlab(&["dim", &cloud, "--scales", "0.5,0.25,0.25"]);
    assert_eq!(code, 3);
}

#[test]
fn dp_limit_env_var_is_clamped() {
    let cloud5 = tmp("cloud5.json");
    let coords: Vec<String> = (0..5).map(|i| format!("[{i}.0]")).collect();
    std::fs::write(&cloud5, format!(r#"{{"points": [{}]}}"#, coords.join(","))).unwrap();

    // Lowering the limit below the atom count rejects the request.
    let (_, _, code) = hlab_env(
        &["content", &cloud5, "--alpha", "1"],
        &[("HLAB_DP_LIMIT", "4")],
    );
    assert_eq!(code, 3);

    // Raising it past the hard cap still rejects 21 atoms.
    let coords: Vec<String> = (0..21).map(|i| format!("[{i}.0]")).collect();
    let big = tmp("cloud21.json");
    std::fs::write(&big, format!(r#"{{"points": [{}]}}"#, coords.join(","))).unwrap();
    let (_, stderr, code) = hlab_env(
        &["content", &big, "--alpha", "1"],
        &[("HLAB_DP_LIMIT", "64")],
    );
    assert_eq!(code, 3);
    assert!(stderr.contains("limit of 20"), "stderr: {stderr}");
}

#[test]
fn reports_are_deterministic() {
    let a = tmp("verify_a.json");
    let b = tmp("verify_b.json");
    for out in [&a, &b] {
        let (_, _, code) = hlab(&[
            "verify",
            "content-laws",
            "--seed",
            "11",
            "--cases",
            "20",
            "--out",
            out,
        ]);
        assert_eq!(code, 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    // Reports embed the config that produced them.
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).expect("valid json");
    assert_eq!(doc["config"]["seed"], 11);
    assert_eq!(doc["config"]["cases"], 20);
    assert_eq!(doc["result"]["seed"], 11);
}

#[test]
fn generator_shapes() {
    // 3^2 = 9 cells.
    let (_, _, code) = hlab(&[
        "gen",
        "seqspace",
        "--n",
        "3",
        "--rho",
        "0.5",
        "--depth",
        "2",
        "--out",
        &tmp("seq9.json"),
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp("seq9.json")).unwrap()).unwrap();
    assert_eq!(doc["atom_diam"].as_array().unwrap().len(), 9);
    assert_eq!(doc["provenance"], "cell-space");

    // Cantor depth 3: 8 atoms of diameter 1/27.
    let (_, _, code) = hlab(&["gen", "cantor", "--depth", "3", "--out", &tmp("c3.json")]);
    assert_eq!(code, 0);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp("c3.json")).unwrap()).unwrap();
    let diams = doc["atom_diam"].as_array().unwrap();
    assert_eq!(diams.len(), 8);
    assert!((diams[0].as_f64().unwrap() - 1.0 / 27.0).abs() < 1e-15);

    // Circle with N chords: N + 1 CSV rows, each t,x,y.
    let (_, _, code) = hlab(&["gen", "circle", "--samples", "10", "--out", &tmp("c10.csv")]);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(tmp("c10.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0].split(',').count(), 3);

    // Grid cloud endpoints are exact.
    let (_, _, code) = hlab(&[
        "gen",
        "grid-cloud",
        "--count",
        "5",
        "--lo",
        "0",
        "--hi",
        "1",
        "--out",
        &tmp("g5.json"),
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp("g5.json")).unwrap()).unwrap();
    let pts = doc["points"].as_array().unwrap();
    assert_eq!(pts.len(), 5);
    assert_eq!(pts[0][0], 0.0);
    assert_eq!(pts[4][0], 1.0);
}

#[test]
fn content_modes_and_targets() {
    let c3 = tmp("c3b.json");
    let (_, _, code) = hlab(&["gen", "cantor", "--depth", "3", "--out", &c3]);
    assert_eq!(code, 0);

    // Greedy mode needs a finite delta and reports an upper bound.
    let (report, _, code) = hlab(&[
        "content",
        &c3,
        "--alpha",
        "0.6309297535714574",
        "--delta",
        "0.4",
        "--mode",
        "greedy",
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(doc["result"]["bound"], "upper");
    let (_, _, code) = hlab(&["content", &c3, "--alpha", "1", "--mode", "greedy"]);
    assert_eq!(code, 2, "greedy without a finite delta");

    // Lower mode with uniform weights certifies the Cantor value.
    let (report, _, code) = hlab(&[
        "content",
        &c3,
        "--alpha",
        "0.6309297535714574",
        "--mode",
        "lower",
        "--weights",
        "0.125,0.125,0.125,0.125,0.125,0.125,0.125,0.125",
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(doc["result"]["bound"], "lower");
    assert!((doc["result"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    // Restricting the target to one depth-1 cell: 4 cells of the
    // depth-3 presentation have content (1/3)^alpha = 1/2.
    let (report, _, code) = hlab(&[
        "content",
        &c3,
        "--alpha",
        "0.6309297535714574",
        "--target",
        "0,1,2,3",
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert!((doc["result"]["value"].as_f64().unwrap() - 0.5).abs() < 1e-9);

    // Empty target has zero content.
    let (report, _, code) = hlab(&["content", &c3, "--alpha", "1", "--target", ""]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(doc["result"]["value"], 0.0);
}
