use std::process::{Command, Output};

fn windbraid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_windbraid")).args(args).env_remove("WINDBRAID_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = windbraid(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn normal_form_of_figure_braid() {
    let o = windbraid(&["nf", "s1 s2^-1 s1 s2^-1", "--strands", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("inf -2  sup 2  length 4"));
    let v = json(&["nf", "s1 s2^-1 s1 s2^-1"]);
    assert_eq!((v["inf"].as_i64(), v["sup"].as_i64(), v["length"].as_i64()), (Some(-2), Some(2), Some(4)));
}

#[test]
fn labels_and_lengths() {
    let v = json(&["labels", "s1 s2^-1 s1 s2^-1", "--strands", "3"]);
    assert_eq!((v["ll"].as_i64(), v["sl"].as_i64()), (Some(2), Some(-2)));
    let full = json(&["labels", "s1", "--strands", "3", "--scope", "full"]);
    assert!(full["labels"].as_array().unwrap().len() >= 2);
    let v = json(&["len", "s1 s2 s1 s1", "--strands", "3"]);
    assert_eq!(v["agree"], true);
    assert_eq!(v["garside"].as_i64(), Some(2));
}

#[test]
fn relax_and_sigmadef() {
    let v = json(&["relax", "s1 s2^-1 s1 s2^-1"]);
    assert_eq!(v["count"].as_u64(), Some(4));
    let v = json(&["sigmadef", "s1 s2^-1 s1 s2^-1"]);
    assert!(v["sigma1_count"].as_u64().unwrap() <= 2);
    assert!(v["output"].is_string());
}

#[test]
fn render_is_deterministic() {
    let dir = std::env::temp_dir();
    let a = dir.join(format!("windbraid-cli-{}-a.svg", std::process::id()));
    let b = dir.join(format!("windbraid-cli-{}-b.svg", std::process::id()));
    for p in [&a, &b] {
        assert!(windbraid(&["render", "s1 s2^-1 s1 s2^-1", "--out", p.to_str().unwrap()]).status.success());
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    assert!(String::from_utf8(x).unwrap().starts_with("<?xml"));
    let _ = (std::fs::remove_file(a), std::fs::remove_file(b));
}

#[test]
fn check_exit_code_and_seed() {
    let o = windbraid(&["check", "--strands", "4", "--count", "30", "--max-len", "10", "--seed", "3"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let v = json(&["check", "--strands", "3", "--count", "10", "--max-len", "4", "--seed", "3"]);
    assert_eq!(v["seed"].as_u64(), Some(3));
    assert_eq!(v["cases"].as_u64(), Some(341 + 10));

    let env = |s: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_windbraid"))
            .args(["conjecture", "--count", "10", "--format", "json"])
            .env("WINDBRAID_SEED", s)
            .output()
            .unwrap();
        serde_json::from_str::<serde_json::Value>(&stdout(&o)).unwrap()
    };
    assert_eq!(env("17")["seed"].as_u64(), Some(17));
    assert_eq!(env("17"), env("17"));
}

#[test]
fn conjecture_is_labelled_experimental() {
    let o = windbraid(&["conjecture", "--count", "5", "--seed", "1"]);
    assert!(stdout(&o).starts_with("EXPERIMENTAL"));
    assert_eq!(json(&["conjecture", "--count", "5", "--seed", "1"])["experimental"], true);
}

#[test]
fn bad_input_is_an_error() {
    let o = windbraid(&["nf", "s1 x2", "--strands", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let o = windbraid(&["nf", "s5", "--strands", "3"]);
    assert_eq!(o.status.code(), Some(2));
}
