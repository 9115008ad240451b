use std::path::Path;
use std::process::{Command, Output};

fn sasakian(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sasakian")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.toml");
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn default_algebra_suite_fails_only_on_known_conflicts() {
    let o = sasakian(&["verify-algebra", "--json"]);
    assert_eq!(code(&o), 1);
    let r = json(&o);
    let mut failing: Vec<&str> =
        r["checks"].as_array().unwrap().iter().filter(|c| c["passed"] == false).map(|c| c["id"].as_str().unwrap()).collect();
    failing.sort();
    let mut known = sasakian::reports::KNOWN_CONFLICTS.to_vec();
    known.sort();
    assert_eq!(failing, known);
}

#[test]
fn conflict_free_suites_pass() {
    let o = sasakian(&["verify-algebra", "--suites", "exterior,lsigma,basis,lambda3,instantons"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn flipped_star_is_detected() {
    let o = sasakian(&["verify-algebra", "--suites", "lsigma", "--flip-star"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("lsigma-table-e12"));
}

#[test]
fn empty_selection_warns_and_passes() {
    let o = sasakian(&["verify-algebra", "--suites", ""]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&sasakian(&["verify-symbols", "--n", "0"])), 2);
    assert_eq!(code(&sasakian(&["verify-algebra", "--suites", "bogus"])), 2);
    assert_eq!(code(&sasakian(&["flow", "--config", "/nonexistent/run.toml"])), 2);
    assert_eq!(code(&sasakian(&["flow", "--mode", "upwind"])), 2);
    assert_eq!(code(&sasakian(&["frobnicate"])), 2);
    assert_eq!(code(&sasakian(&["cohomology", "--n", "8", "--method", "dense"])), 2);
}

#[test]
fn fixed_covectors() {
    assert_eq!(code(&sasakian(&["verify-symbols", "--covector", "0,1,0,0,0,0,3"])), 0);
    // Horizontal covectors break exactness.
    assert_eq!(code(&sasakian(&["verify-symbols", "--covector", "1,0,0,0,0,0,0"])), 1);
}

#[test]
fn flow_cap_fails_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = write_config(dir.path(), "max_iter = 1\nseed = 3\n");
    let o = sasakian(&["flow", "--config", &cfg, "--out", out.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 1);
    let r = json(&o);
    assert_eq!(r["record"]["status"], "max_iterations");
    for f in ["flow.json", "energy.csv", "connection.json", "config.toml"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let csv = std::fs::read_to_string(out.join("energy.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    let back = sasakian::reports::RunConfig::load(&out.join("config.toml")).unwrap();
    assert_eq!((back.max_iter, back.seed), (1, 3));
}

#[test]
fn flow_converges_from_a_small_perturbation() {
    let o = sasakian(&["flow", "--seed", "8", "--json"]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["record"]["residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn abelian_cohomology() {
    let o = sasakian(&["cohomology", "--algebra", "u1", "--json"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!((r["report"]["h0_b"].as_u64(), r["report"]["h1_b"].as_u64()), (Some(1), Some(6)));
}

#[test]
fn reruns_are_byte_identical() {
    let a = sasakian(&["verify-symbols", "--n", "20", "--seed", "5", "--json"]);
    let b = sasakian(&["verify-symbols", "--n", "20", "--seed", "5", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}
