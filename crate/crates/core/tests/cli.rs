use std::fs;

use lints_lab::cli::{dispatch, RunSummary};

fn args(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

#[test]
fn example1_writes_rows_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display();
    let code = dispatch(args(&format!("example1 --dims 2,4,8 --reps 5 --seed 42 --out {out}")));
    assert_eq!(code, 0);
    let csv = fs::read_to_string(dir.path().join("example1.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 15);
    assert!(!csv.contains('\r'));
    let boxes = fs::read_to_string(dir.path().join("example1_boxplot.csv")).unwrap();
    assert_eq!(boxes.lines().next().unwrap(), "dim,n,min,q1,median,q3,max,mean");
    let summary: RunSummary =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary.command, "example1");
    assert_eq!(summary.seed, 42);
    assert_eq!(summary.flags["example1"]["reps"], 5);
    assert_eq!(summary.flags["example1"]["dims"], serde_json::json!([2, 4, 8]));
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let cmd = format!("example1 --dims 2,4 --reps 3 --seed 9 --out {}", d.path().display());
        assert_eq!(dispatch(args(&cmd)), 0);
    }
    for f in ["example1.csv", "example1_boxplot.csv"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap());
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for (d, t) in [(&a, 1), (&b, 3)] {
        let cmd = format!(
            "compare --d 4 --arms 5 --horizon 20 --reps 4 --seed 1 --threads {t} --out {}",
            d.path().display()
        );
        assert_eq!(dispatch(args(&cmd)), 0);
    }
    assert_eq!(
        fs::read(a.path().join("compare.csv")).unwrap(),
        fs::read(b.path().join("compare.csv")).unwrap()
    );
}

#[test]
fn compare_table_shape() {
    let dir = tempfile::tempdir().unwrap();
    let cmd = format!(
        "compare --d 5 --arms 6 --horizon 30 --reps 2 --seed 7 --out {}",
        dir.path().display()
    );
    assert_eq!(dispatch(args(&cmd)), 0);
    let csv = fs::read_to_string(dir.path().join("compare.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,policy,thinness_mean,inst_regret_mean,cum_regret_mean,inst_regret_se,psi_exceed_frac"
    );
    assert_eq!(lines.count(), 3 * 30);
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"dims": [2, 4], "reps": 2, "base_seed": 5}"#).unwrap();
    let cmd = format!(
        "example1 --config {} --reps 3 --out {}",
        cfg.display(),
        dir.path().display()
    );
    assert_eq!(dispatch(args(&cmd)), 0);
    let summary: RunSummary =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary.flags["example1"]["reps"], 3);
    assert_eq!(summary.flags["example1"]["dims"], serde_json::json!([2, 4]));
    assert_eq!(summary.seed, 5);
}

#[test]
fn example2_writes_both_sweeps() {
    let dir = tempfile::tempdir().unwrap();
    let cmd = format!(
        "example2 --dims 4,8 --mus 0,0.5 --d 10 --reps 3 --seed 2 --out {}",
        dir.path().display()
    );
    assert_eq!(dispatch(args(&cmd)), 0);
    let d = fs::read_to_string(dir.path().join("example2_vary_d.csv")).unwrap();
    let m = fs::read_to_string(dir.path().join("example2_vary_mu.csv")).unwrap();
    assert_eq!(d.lines().count(), 3);
    assert!(m.starts_with("mu,n,min"));
    let reps = fs::read_to_string(dir.path().join("example2_reps.csv")).unwrap();
    assert_eq!(reps.lines().count(), 1 + 12);
}

#[test]
fn verify_reports_results() {
    let dir = tempfile::tempdir().unwrap();
    let cmd = format!(
        "verify --suite tails --scale 0.01 --seed 3 --out {}",
        dir.path().display()
    );
    assert_eq!(dispatch(args(&cmd)), 0);
    let summary: RunSummary =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert!(!summary.results.is_empty());
    assert!(summary.results.iter().all(|r| r.pass));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display();
    assert_eq!(dispatch(args("example1 --nope")), 2);
    assert_eq!(dispatch(args(&format!("example1 --dims 1 --out {out}"))), 2);
    assert_eq!(dispatch(args(&format!("compare --reps 0 --out {out}"))), 2);
    assert_eq!(dispatch(args(&format!("compare --policies bayes,ucb --out {out}"))), 2);
    assert_eq!(dispatch(args(&format!("verify --suite nope --out {out}"))), 2);
    assert_eq!(dispatch(args("frobnicate")), 2);
}
