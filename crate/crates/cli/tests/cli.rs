use std::process::{Command, Output};

fn holodyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holodyn")).args(args).env_remove("HOLODYN_THREADS").output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = holodyn(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn help_exits_zero_everywhere() {
    assert_eq!(holodyn(&["--help"]).status.code(), Some(0));
    for sub in ["basin", "radius-scan", "baire", "cr-ball", "kobayashi", "hopf", "entropy", "link"] {
        assert_eq!(holodyn(&[sub, "--help"]).status.code(), Some(0), "{sub}");
    }
}

#[test]
fn argument_errors_exit_two() {
    let out = holodyn(&["basin", "--alpha", "x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert_eq!(holodyn(&["kobayashi", "--a", "0"]).status.code(), Some(2));
    assert_eq!(holodyn(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_one_and_name_the_module() {
    let out = holodyn(&["link", "--domain", "ellipsoid:2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fibration-entropy"));
    let out = holodyn(&["entropy", "--zeros", "0.3,0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn basin_writes_a_binary_ppm_with_parameter_echo() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.ppm");
    let out = holodyn(&["basin", "--alpha", "0", "--w", "0,0", "--grid", "64", "--seed", "7", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let bytes = std::fs::read(&path).unwrap();
    let text = String::from_utf8_lossy(&bytes[..200]);
    assert!(bytes.starts_with(b"P6\n"));
    assert!(text.contains("# alpha=0") && text.contains("# seed=7") && text.contains("# grid=64"));
    let header_end = text.find("64 64\n255\n").unwrap() + "64 64\n255\n".len();
    assert_eq!(bytes.len() - header_end, 3 * 64 * 64);
}

#[test]
fn config_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# hopf probe\narc-angle = 0.5\nt=0.2\n\nseed=3\n").unwrap();
    let text = stdout(&["hopf", "--config", cfg.to_str().unwrap(), "--t", "0.3"]);
    assert!(text.contains("# arc-angle=0.5"));
    assert!(text.contains("# t=0.3"));
    assert!(text.contains("# seed=3"));
    std::fs::write(&cfg, "not a pair\n").unwrap();
    assert_eq!(holodyn(&["hopf", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn csv_outputs_have_headers() {
    let k = stdout(&["kobayashi", "--domain", "disk", "--a", "0", "--b", "0.5"]);
    let rows: Vec<&str> = k.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "method,lower,upper");
    assert!(rows[1].starts_with("exact_disk,0.549306"));
    let h = stdout(&["hopf", "--arc-angle", "3.141592653589793", "--t", "0.5"]);
    assert!(h.lines().any(|l| l == "u_val,bound,ok"));
    assert!(h.trim_end().ends_with("true"));
    let l = stdout(&["link"]);
    let v: f64 = l.lines().last().unwrap().parse().unwrap();
    assert!((v - 1.0).abs() < 0.05);
}

#[test]
fn outputs_do_not_depend_on_worker_count() {
    let args = ["cr-ball", "--direction", "complex", "--segments", "16"];
    let one = Command::new(env!("CARGO_BIN_EXE_holodyn")).args(args).arg("--threads").arg("1").output().unwrap();
    let three = Command::new(env!("CARGO_BIN_EXE_holodyn")).args(args).env("HOLODYN_THREADS", "3").output().unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, three.stdout);
}
