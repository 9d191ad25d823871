use std::process::{Command, Output};

use serde_json::Value;

fn obdim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obdim"))
        .args(args)
        .env_remove("OBDIM_OUTPUT_DIR")
        .output()
        .expect("run obdim")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = obdim(&full);
    (
        serde_json::from_slice(&o.stdout).expect("json output"),
        o.status.code().unwrap(),
    )
}

#[test]
fn dims_sl3_row() {
    let o = obdim(&["dims", "--group", "sl", "--n", "3", "--ring", "Z"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("(5, [0,1], 3, true) PASS"));
}

#[test]
fn dims_standard_table_passes() {
    let (v, code) = json(&["dims"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "dims");
    assert_eq!(v["result"].as_array().unwrap().len(), 11 + 7 + 9);
}

#[test]
fn dims_sp_o_display_fails() {
    let o = obdim(&[
        "dims", "--group", "sp", "--n", "2", "--ring", "O", "--r", "1", "--s", "0",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn dims_so_needs_dim_xm() {
    let o = obdim(&["dims", "--group", "so", "--n", "7", "--q", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dim X_M"));
    let (v, code) = json(&["dims", "--group", "so", "--n", "7", "--q", "2", "--dim-xm", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"][0]["dim_symmetric"], 2 + 6 + 2);
}

#[test]
fn complex_cuspidal_three() {
    let o = obdim(&["complex", "--cuspidal", "3", "--betti"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("f-vector [6, 12, 6]"));
    assert!(text.contains("betti [1, 1, 0]"));
    let (v, _) = json(&["complex", "--obstructor", "4", "--emit"]);
    assert_eq!(v["result"]["shape"], "S^0_+ * S^1_+ * S^2_+");
    assert_eq!(v["result"]["m"], 7);
    assert_eq!(v["result"]["in_sc_and_isomorphic"], true);
    assert!(v["result"]["maximal"].as_array().unwrap().len() > 1);
}

#[test]
fn lemma_key_e8() {
    let o = obdim(&["lemma-key", "--type", "E8"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "E8: 255 labelings, 255 witnesses, PASS");
}

#[test]
fn rootsys_json() {
    let (v, code) = json(&["rootsys", "G2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["positives"].as_array().unwrap().len(), 6);
}

#[test]
fn diverge_small_run() {
    let (v, code) = json(&[
        "diverge",
        "--map",
        "heisenberg",
        "--n",
        "3",
        "--radii",
        "12",
        "--samples",
        "3",
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["divergence"]["pairs"], 145);
    assert_eq!(v["result"]["properness"]["failed"], 0);
}

#[test]
fn lemma25_small_run() {
    let o = obdim(&["lemma25", "--n", "3", "--decades", "3", "--samples", "20"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("strictly increasing: PASS"));
}

#[test]
fn output_dir_receives_json() {
    let dir = std::env::temp_dir().join(format!("obdim-cli-test-{}", std::process::id()));
    let o = Command::new(env!("CARGO_BIN_EXE_obdim"))
        .args(["dims", "--group", "sp", "--n", "3", "--ring", "Z"])
        .env("OBDIM_OUTPUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("dims.json")).unwrap()).unwrap();
    assert_eq!(v["result"][0]["dim_symmetric"], 12);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn usage_errors() {
    for args in [
        &["complex"][..],
        &["dims", "--group", "sl", "--n", "3", "--ring", "Q"],
        &["frobnicate"],
    ] {
        let o = obdim(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
}
