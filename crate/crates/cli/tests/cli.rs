use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_causal-probe"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn passed_checks(o: &Output) -> Vec<String> {
    stdout(o)
        .lines()
        .filter(|l| l.trim_end().ends_with("PASS"))
        .map(|l| l.split_whitespace().next().unwrap().to_string())
        .collect()
}

#[test]
fn curve_lists_closed_form_values() {
    let o = run(&["curve", "--d", "2", "--n", "1", "--n-max", "4", "--strategy", "classical", "--strategy", "reference"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,d,strategy,p_err,log2_p_err"));
    assert!(out.contains("3,2,classical,0.125,-3.0\n"));
    assert!(out.contains("2,2,reference,0.125,-3.0\n"));
    assert!(out.contains("4,2,reference,0.008373412263472584,"));
    assert!(!out.contains("3,2,reference"));
    assert!(stderr(&o).contains("n = 3"));
}

#[test]
fn curve_rejects_unknown_strategy() {
    let o = run(&["curve", "--strategy", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn curve_writes_to_a_file() {
    let path = std::env::temp_dir().join(format!("causal-probe-curve-{}.csv", std::process::id()));
    let o = run(&["curve", "--d", "3", "--n", "3", "--strategy", "coherent", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    let row = text.lines().nth(1).unwrap();
    let p: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
    assert_eq!(p, 1.0 / 54.0);
}

#[test]
fn verify_passes_and_detects_injected_fault() {
    let clean = run(&["verify"]);
    assert_eq!(clean.status.code(), Some(0), "{}", stdout(&clean));
    let faulty = run(&["verify", "--fault-inject"]);
    assert_eq!(faulty.status.code(), Some(1));
    let failed: Vec<_> = stdout(&faulty).lines().filter(|l| l.trim_end().ends_with("FAIL")).map(str::to_owned).collect();
    assert!(!failed.is_empty() && failed.iter().all(|l| l.contains("reference")), "{failed:?}");
    let loose = run(&["verify", "--tolerance", "1e-3"]);
    assert_eq!(loose.status.code(), Some(0));
    assert_eq!(passed_checks(&clean), passed_checks(&loose));
}

#[test]
fn simulate_is_deterministic_and_consistent() {
    let args = ["simulate", "--d", "2", "--n", "2", "--inputs", "0,0", "--trials", "1000000", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    let fields: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&fields[..4], &["2", "2", "0_0", "1000000"]);
    assert_eq!(fields[6], "0.25");
    let z: f64 = fields[7].parse().unwrap();
    assert!(z.abs() <= 3.0, "z = {z}");
}

#[test]
fn simulate_single_use_is_uninformative() {
    let o = run(&["simulate", "--d", "2", "--n", "1", "--inputs", "0", "--trials", "10000", "--seed", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let p: f64 = out.lines().nth(1).unwrap().split(',').nth(4).unwrap().parse().unwrap();
    assert!((p - 0.5).abs() < 0.03, "p_hat {p}");
}

#[test]
fn simulate_rejects_bad_configs() {
    assert_eq!(run(&["simulate", "--trials", "50"]).status.code(), Some(2));
    let out_of_range = run(&["simulate", "--d", "2", "--inputs", "0,5", "--trials", "1000"]);
    assert_eq!(out_of_range.status.code(), Some(2));
    assert!(out_of_range.stdout.is_empty());
    assert_eq!(run(&["simulate", "--d", "9", "--n", "9", "--trials", "1000"]).status.code(), Some(2));
}

#[test]
fn claim_reports_headline_and_small_thresholds() {
    let o = run(&["claim", "--d", "2", "--threshold", "1e-6"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("quantum_n=12 "));
    assert!(out.contains("classical_n=20 "));
    let o = stdout(&run(&["claim", "--d", "2", "--threshold", "0.3"]));
    assert!(o.contains("quantum_n=2 ") && o.contains("classical_n=2 "));
    let o = stdout(&run(&["claim", "--d", "3", "--threshold", "0.5"]));
    assert!(o.contains("quantum_n=1 ") && o.contains("classical_n=1 "));
}
