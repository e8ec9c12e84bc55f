use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn tetk(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tetk"))
        .args(args)
        .current_dir(cwd)
        .env_remove("TETK_BUDGET")
        .output()
        .expect("binary runs")
}

fn exported() -> TempDir {
    let dir = TempDir::new().unwrap();
    let out = tetk(&["fixtures", "export", "--dir", "fx"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    dir
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn standard_cocycle_checks_out() {
    let dir = exported();
    let out = tetk(&["cocycle", "check", "--in", "fx/alpha_std_2_1.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["data"]["order"], 2);
}

#[test]
fn trivial_alpha_transgresses_to_trivial_theta() {
    let dir = exported();
    let out = tetk(
        &["transgress", "--alpha", "fx/trivial.json", "--action", "fx/point_z2.json", "--out", "theta.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("theta.json")).unwrap()).unwrap();
    assert_eq!(v["data"]["trivial"], true);
    let classes = v["data"]["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 2);
    assert!(classes.iter().all(|c| c["trivial"] == true));
}

#[test]
fn nontrivial_alpha_gives_nontrivial_theta_one() {
    let dir = exported();
    let out = tetk(&["transgress", "--alpha", "fx/alpha_std_2_1.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let classes = v["data"]["classes"].as_array().unwrap();
    assert_eq!(classes[0]["trivial"], true);
    assert_eq!(classes[1]["trivial"], false);
}

#[test]
fn emitted_theta_blocks_reload() {
    let dir = exported();
    let out = tetk(&["transgress", "--alpha", "fx/alpha_std_4_1.json"], dir.path());
    let v = json(&out);
    for (i, c) in v["data"]["classes"].as_array().unwrap().iter().enumerate() {
        let path = dir.path().join(format!("theta_{i}.json"));
        fs::write(&path, serde_json::to_string(&c["theta"]).unwrap()).unwrap();
        let out = tetk(&["cocycle", "check", "--in", path.to_str().unwrap()], dir.path());
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn malformed_json_is_an_input_error_with_position() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("bad.json"), "{\"degree\": 3,\n \"modulus\": 2\n \"entries\": []}").unwrap();
    let out = tetk(&["cocycle", "check", "--in", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3 column 2"), "{err}");
}

#[test]
fn missing_file_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let out = tetk(&["cocycle", "check", "--in", "nope.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_cocycle_fails_with_witness() {
    let dir = exported();
    let path = dir.path().join("fx/alpha_std_2_1.json");
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let entries = v["entries"].as_array_mut().expect("dense entries");
    let flipped = (entries[3].as_i64().unwrap() + 1) % 2;
    entries[3] = flipped.into();
    fs::write(dir.path().join("broken.json"), v.to_string()).unwrap();

    let out = tetk(&["cocycle", "check", "--in", "broken.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["data"]["cocycle"], false);
    assert!(report["data"]["witness"]["tuple"].is_array());

    let out = tetk(&["transgress", "--alpha", "broken.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn budget_exceeded_exits_three() {
    let dir = exported();
    let out = tetk(&["cocycle", "check", "--in", "fx/alpha_sign_q8.json", "--budget", "100"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_tetk"))
        .args(["cohomology", "--builtin", "S3", "--degree", "6", "--modulus", "6"])
        .env("TETK_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn modulus_flag_embeds() {
    let dir = exported();
    let out = tetk(&["cocycle", "check", "--in", "fx/alpha_std_2_1.json", "--modulus", "6"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["data"]["modulus"], 6);
    let out = tetk(&["cocycle", "check", "--in", "fx/alpha_std_2_1.json", "--modulus", "3"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cohomology_of_cyclic_groups() {
    let dir = TempDir::new().unwrap();
    for n in ["2", "3", "4"] {
        let out = tetk(
            &["cohomology", "--builtin", &format!("Z/{n}"), "--degree", "3", "--modulus", n],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(json(&out)["data"]["order"].to_string(), n);
    }
}

#[test]
fn extension_of_z2() {
    let dir = exported();
    let out = tetk(&["extension", "build", "--in", "fx/extension_z2.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["data"]["order"], 4);
    let lift = &v["data"]["center_lifts"][1];
    assert_eq!(lift["lift_order"], 4);
    assert_eq!(lift["divides"], true);
}

#[test]
fn tate_decompose_and_check_agree() {
    let dir = exported();
    let out = tetk(&["tate", "decompose", "--alpha", "fx/alpha_std_2_1.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let summand = &v["data"]["summands"][1];
    fs::write(dir.path().join("series.json"), summand["series"].to_string()).unwrap();
    let args = ["tate", "check", "--alpha", "fx/alpha_std_2_1.json", "--class", "1", "--series", "series.json"];
    let out = tetk(&args, dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    // move V_1 to V_2: the rotation condition must now fail
    let mut s = summand["series"].clone();
    let coeffs = s["coefficients"].as_object_mut().unwrap();
    let v1 = coeffs.remove("1").unwrap();
    coeffs.insert("2".into(), v1);
    fs::write(dir.path().join("series.json"), s.to_string()).unwrap();
    let out = tetk(&args, dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["data"]["violation"].is_object());
}

#[test]
fn reports_are_byte_identical_for_a_seed() {
    let dir = exported();
    for args in [
        vec!["tate", "decompose", "--alpha", "fx/alpha_random_s3_32380.json"],
        vec!["transgress", "--alpha", "fx/alpha_sign_s3.json"],
    ] {
        let a = tetk(&args, dir.path());
        let b = tetk(&args, dir.path());
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn markdown_report() {
    let dir = TempDir::new().unwrap();
    let out = tetk(&["group", "show", "--builtin", "S3", "--output", "markdown"], dir.path());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# tetk group show"));
    assert!(text.contains("**PASS**"));
}
