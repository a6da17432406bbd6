use std::process::{Command, Output};

fn lefcorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lefcorr"))
        .args(args)
        .env_remove("LEFCORR_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn torus_degree_two_circle_map() {
    let o = lefcorr(&["torus", "--A", "2", "--B", "1", "--c", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with(r#"{"model":"torus","global":"-1","local":"-1","match":true,"fixed_point_count":1,"#));
}

#[test]
fn gaussian_torus_report_uses_exact_strings() {
    let o = lefcorr(&["ctorus", "--mode", "gaussian", "--a", "1+1i", "--b", "1", "--c", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["global"], "0+1*i");
    assert_eq!(v["local"], "0+1*i");
    assert_eq!(v["match"], true);
    assert_eq!(v["parameters"]["a"], "1+1i");
}

#[test]
fn generic_lattice_needs_tau() {
    let o = lefcorr(&["ctorus", "--mode", "generic", "--a", "2", "--b", "-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--tau"));
    let o = lefcorr(&["ctorus", "--mode", "generic", "--tau", "1/2+1*i", "--a", "2", "--b", "-1", "--c", "1/3,1/2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = lefcorr(&["ctorus", "--mode", "generic", "--tau", "1/2+1*i", "--a", "1+1i", "--b", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("endomorphism ring"), "{}", stderr(&o));
}

#[test]
fn validation_failures_exit_one_with_the_reason() {
    let o = lefcorr(&["torus", "--A", "1", "--B", "1", "--c", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not transversal"), "{}", stderr(&o));

    let o = lefcorr(&["torus", "--A", "0", "--B", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not a covering"), "{}", stderr(&o));

    let o = lefcorr(&["cp1", "--g", "1,0;0,2", "--d", "-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("nonnegative"), "{}", stderr(&o));

    let o = lefcorr(&["cp1", "--g", "3,0;0,3", "--d", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("repeated eigenvalue"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(lefcorr(&["torus", "--A", "2"]).status.code(), Some(1));
    assert_eq!(lefcorr(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(lefcorr(&["sweep", "torus", "--trials", "0"]).status.code(), Some(1));
    assert_eq!(lefcorr(&["sweep", "torus", "--dim-max", "5"]).status.code(), Some(1));
    assert_eq!(lefcorr(&["--help"]).status.code(), Some(0));
}

#[test]
fn cp1_formats() {
    let o = lefcorr(&["cp1", "--g", "1,0;0,2", "--d", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("model,global,local,match,fixed_point_count,parameters,skipped_degenerate,seed,trial,tolerance")
    );
    assert!(lines.next().unwrap().starts_with("cp1,3,3,true,2,"));

    let o = lefcorr(&["cp1", "--g", "1,1;1,0", "--d", "3", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("local: ~"), "{out}");
    assert!(out.contains("tolerance: 1e-9"), "{out}");

    let o = lefcorr(&["cp1", "--g", "1,0;0,2", "--branch", "1,0;0,3", "--d", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["global"], "7");
    assert_eq!(v["parameters"]["branches"], "1,0;0,2 | 1,0;0,3");
}

#[test]
fn sweep_seed_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let o = lefcorr(&["sweep", "torus", "--trials", "40", "--dim-max", "2", "--seed", "5", "--output", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(summary["trials"], 40);
    assert_eq!(summary["mismatches"], 0);

    let o = Command::new(env!("CARGO_BIN_EXE_lefcorr"))
        .args(["sweep", "torus", "--trials", "40", "--dim-max", "2", "--output", b.to_str().unwrap()])
        .env("LEFCORR_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    for line in String::from_utf8(a).unwrap().lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["seed"], 5);
        assert!(v["parameters"]["A"].is_string() && v["parameters"]["c"].is_string());
    }
}

#[test]
fn sweep_lines_on_stdout_summary_on_stderr() {
    let o = lefcorr(&["sweep", "cp1", "--trials", "20", "--seed", "3", "--family", "complex", "--d-max", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert!(!lines.is_empty());
    let mut last = None;
    for line in &lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["local"].as_str().unwrap().starts_with('~'));
        assert_eq!(v["tolerance"], 1e-9);
        let t = v["trial"].as_u64().unwrap();
        assert!(last.is_none_or(|l| l < t));
        last = Some(t);
    }
    let summary: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!(summary["trials"], 20);
}

#[test]
fn integral_audit_counts_equalities() {
    let o = lefcorr(&["audit-integral", "--trials", "30", "--dim-max", "3", "--seed", "1", "--output", "/dev/null"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(s["mismatches"], 0);
    assert_eq!(
        s["equalities"].as_u64().unwrap() + s["skipped"].as_u64().unwrap(),
        30
    );
}

#[test]
fn small_exhaustive_ctorus() {
    let o = lefcorr(&[
        "sweep", "ctorus", "--exhaustive", "--norm-bound", "2", "--int-bound", "2", "--offsets-per-pair", "3",
        "--output", "/dev/null",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    // 8 nonzero Gaussian integers of norm ≤ 2, 4 nonzero integers in [−2, 2]
    assert_eq!(s["trials"], 8 * 7 * 3 + 4 * 3 * 3);
    assert_eq!(s["mismatches"], 0);
}
