use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ostrowski"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn encode_and_decode() {
    let o = run(&["encode", "100", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let digits = stdout(&o).trim().to_string();
    let o = run(&["decode", &digits, "--m", "3"]);
    assert_eq!(stdout(&o).trim(), "100");

    let o = run(&["encode", "3", "--m", "2"]);
    assert_eq!(stdout(&o).trim(), "0,0,1");
}

#[test]
fn invalid_digits_are_a_usage_error() {
    // b₂ = m requires b₁ = 0
    let o = run(&["decode", "0,1,2", "--m", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn digitsum_reports_both_sums() {
    let o = run(&["digitsum", "999", "--q", "10", "--m", "2"]);
    let text = stdout(&o);
    assert!(text.contains("S_q = 27"));
    assert!(text.contains("S_alpha = "));
}

#[test]
fn joint_count_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("counts.csv");
    let o = run(&[
        "joint-count",
        "--n",
        "3",
        "--m1",
        "3",
        "--m2",
        "3",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("a1,a2,count,expected_num,expected_den,deviation\n"));
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = [
        "joint-count",
        "--n",
        "200000",
        "--q",
        "3",
        "--m",
        "2",
        "--m1",
        "2",
        "--m2",
        "5",
    ];
    let a = run(&args);
    let b = run(&[&args[..], &["--threads", "1"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn partition_json_shape() {
    let o = run(&["verify-partition", "--k-min", "5", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["m"], 3);
    assert_eq!(v["k"], 5);
    assert_eq!(v["ok"], true);
    assert!(v["witness"].is_null());
}

#[test]
fn hypothesis_violation_exits_with_two() {
    let o = run(&["mu-decay", "--gamma", "1/2", "--k", "10", "--m", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn mu_decay_passes() {
    let o = run(&[
        "mu-decay", "--gamma", "1/3", "--k", "30", "--m", "2", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("k,q,mu_re,mu_im,m_tilde,psi_k\n"));
}

#[test]
fn scaling_negative_control_fails_the_verdict() {
    let o = run(&[
        "scaling",
        "--target",
        "exp-sum-mag",
        "--grid",
        "1e2,1e3,1e4",
        "--theta",
        "0",
        "--gamma",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], false);
    assert!((v["slope"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn exp_sum_example() {
    let o = run(&["exp-sum", "--n", "3", "--theta", "1/2", "--gamma", "1/2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn check_lemmas_passes() {
    let o = run(&[
        "check-lemmas",
        "--sequences",
        "20",
        "--n",
        "2000",
        "--seed",
        "11",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let kv = dir.path().join("run.conf");
    fs::write(&kv, "# defaults\nm = 3\nformat = csv\n").unwrap();
    let o = run(&["encode", "100", "--config", kv.to_str().unwrap()]);
    assert_eq!(stdout(&o), stdout(&run(&["encode", "100", "--m", "3"])));
    let o = run(&[
        "encode",
        "100",
        "--config",
        kv.to_str().unwrap(),
        "--m",
        "2",
    ]);
    assert_eq!(stdout(&o), stdout(&run(&["encode", "100", "--m", "2"])));

    let js = dir.path().join("run.json");
    fs::write(&js, r#"{"m": 3, "q": 10}"#).unwrap();
    let o = run(&["digitsum", "999", "--config", js.to_str().unwrap()]);
    assert!(stdout(&o).contains("S_q = 27"));

    fs::write(&kv, "colour = blue\n").unwrap();
    let o = run(&["encode", "1", "--config", kv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let missing = dir.path().join("missing.conf");
    let o = run(&["encode", "1", "--config", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.conf"));
}

#[test]
fn bad_usage_exits_with_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["joint-count", "--n", "ten"]).status.code(), Some(2));
    assert_eq!(run(&["encode", "5", "--m", "1"]).status.code(), Some(2));
}
