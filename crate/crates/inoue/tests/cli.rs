//! End-to-end checks of the command-line interface: exit codes, report
//! determinism, and the environment-variable bound override.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_inoue"))
}

fn write_surface(name: &str, json: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("inoue-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

const FLAGSHIP: &str = r#"{"kind":"S+","N":[[2,1],[1,1]],"p":0,"q":0,"r":1,"sign":1}"#;
const FLAGSHIP_SWAP: &str = r#"{"kind":"S+","N":[[1,1],[1,2]],"p":0,"q":0,"r":-1,"sign":1}"#;
const PLASTIC: &str = r#"{"kind":"S0","M":[[0,0,1],[1,0,1],[0,1,0]],"sign":1}"#;

#[test]
fn equiv_self_is_exit_zero_with_witness() {
    let a = write_surface("self.json", FLAGSHIP);
    let out = bin().args(["equiv"]).arg(&a).arg(&a).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "equivalent");
    assert!(v["witness"]["K"].is_array());
}

#[test]
fn equiv_r_magnitude_is_exit_one() {
    let a = write_surface("r1.json", FLAGSHIP);
    let b = write_surface(
        "r2.json",
        r#"{"kind":"S+","N":[[2,1],[1,1]],"p":0,"q":0,"r":2,"sign":1}"#,
    );
    let out = bin().args(["equiv"]).arg(&a).arg(&b).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "not-equivalent");
    assert_eq!(v["details"]["obstruction"], "r-magnitude");
}

#[test]
fn equiv_s0_bound_exhaustion_is_exit_two() {
    // matching characteristic polynomials with the conjugator search bound
    // forced to zero: the only honest answer is Unknown
    let a = write_surface("s0a.json", PLASTIC);
    let out = bin()
        .args(["equiv", "--bound", "0"])
        .arg(&a)
        .arg(&a)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", stdout(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "unknown");
}

#[test]
fn equiv_env_bounds_are_honored() {
    let a = write_surface("env.json", PLASTIC);
    let out = bin()
        .env("INOUE_DEFAULT_BOUNDS", "s0=0")
        .args(["equiv"])
        .arg(&a)
        .arg(&a)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", stdout(&out));
    // without the override the same pair resolves
    let out = bin().args(["equiv"]).arg(&a).arg(&a).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn validate_r_zero_is_exit_one_naming_the_clause() {
    let a = write_surface(
        "rzero.json",
        r#"{"kind":"S+","N":[[2,1],[1,1]],"p":0,"q":0,"r":0,"sign":1}"#,
    );
    let out = bin().args(["validate"]).arg(&a).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("r != 0"), "{}", stdout(&out));
}

#[test]
fn validate_schema_error_is_exit_one() {
    let a = write_surface("nokind.json", r#"{"N":[[2,1],[1,1]],"p":0,"q":0,"r":1,"sign":1}"#);
    let out = bin().args(["validate"]).arg(&a).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("kind"));
}

#[test]
fn usage_error_is_exit_one() {
    let out = bin().args(["equiv", "only-one-file"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn reps_counts_match_the_class_bounds() {
    let a = write_surface("reps.json", FLAGSHIP);
    let out = bin().args(["reps"]).arg(&a).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["count"], 16);

    let s0 = write_surface("reps0.json", PLASTIC);
    let out = bin().args(["reps"]).arg(&s0).output().unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["count"], 2);
}

#[test]
fn fingerprint_reports_center_class() {
    let a = write_surface("fp.json", FLAGSHIP);
    let out = bin().args(["fingerprint"]).arg(&a).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["fingerprint"]["center"], "infinite-cyclic");
    assert_eq!(v["fingerprint"]["gamma_abelian"], false);
}

#[test]
fn bihol_chain_and_candidate_pair_exit_codes() {
    let a = write_surface("ba.json", FLAGSHIP);
    let out = bin().args(["bihol"]).arg(&a).arg(&a).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "same-class");

    // homotopy equivalent with flipped r: only the representative family
    // relates them, so the verdict is a candidate pair (exit 2)
    let b = write_surface("bb.json", FLAGSHIP_SWAP);
    let out = bin().args(["bihol"]).arg(&a).arg(&b).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", stdout(&out));

    // distinct surfaces exit 1
    let c = write_surface(
        "bc.json",
        r#"{"kind":"S+","N":[[3,1],[2,1]],"p":0,"q":0,"r":1,"sign":1}"#,
    );
    let out = bin().args(["bihol"]).arg(&a).arg(&c).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn census_is_byte_deterministic_and_supports_csv() {
    let dir = std::env::temp_dir().join(format!("inoue-census-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out1 = dir.join("c1.json");
    let out2 = dir.join("c2.json");
    for out in [&out1, &out2] {
        let status = bin()
            .args(["census", "--nmax", "2", "--pmax", "0", "--rmax", "1", "--kinds", "s+"])
            .arg("--out")
            .arg(out)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
    }
    let b1 = std::fs::read(&out1).unwrap();
    let b2 = std::fs::read(&out2).unwrap();
    assert_eq!(b1, b2, "census reports must be byte-identical");

    // parallel run partitions identically
    let out3 = dir.join("c3.json");
    let status = bin()
        .args([
            "census", "--nmax", "2", "--pmax", "0", "--rmax", "1", "--kinds", "s+", "--jobs", "4",
        ])
        .arg("--out")
        .arg(&out3)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let v1: serde_json::Value = serde_json::from_slice(&b1).unwrap();
    let v3: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&out3).unwrap()).unwrap();
    assert_eq!(v1["kinds"], v3["kinds"]);

    // csv output with the self-check enabled
    let csv = dir.join("c.csv");
    let out = bin()
        .args([
            "census",
            "--nmax",
            "2",
            "--pmax",
            "0",
            "--rmax",
            "1",
            "--kinds",
            "s+",
            "--format",
            "csv",
            "--self-check",
            "5",
            "--seed",
            "42",
        ])
        .arg("--out")
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("kind,class,representative"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("self-check"));
}
