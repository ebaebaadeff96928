use std::process::{Command, Output};

const SEXTIC: &str = "x^6+3*x^5*y-3*x^4*y^2-11*x^3*y^3+9*x^2*y^4+21*x*y^5-y^6";

fn waring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_waring")).args(args).env_remove("WARING_SEED").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn generic_rank_text_and_json() {
    let o = waring(&["rank", "generic", "--n", "2", "--k", "3", "--d", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "3 (proven)");

    let o = waring(&["--json", "rank", "generic", "--n", "2", "--k", "3", "--d", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], 3);
    assert_eq!(v["status"], "proven");
}

#[test]
fn sextic_cubes_are_exact() {
    let o = waring(&["decompose", "sextic-cubes", "--poly", SEXTIC]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("3 cubes (exact)"), "{s}");
    assert!(s.contains("residual: 0e0"), "{s}");
}

#[test]
fn certificate_round_trips_through_verify() {
    let o = waring(&["--json", "decompose", "sextic-cubes", "--poly", SEXTIC]);
    assert_eq!(o.status.code(), Some(0));
    let path = std::env::temp_dir().join(format!("waring-cert-{}.json", std::process::id()));
    std::fs::write(&path, &o.stdout).unwrap();
    let v = waring(&["verify", "cert", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).starts_with("valid"));
}

#[test]
fn tampered_certificate_is_rejected() {
    let o = waring(&["--json", "decompose", "sylvester", "--poly", "x^3 + 3*x*y^2"]);
    let mut cert: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    cert["input"][0] = "2".into();
    let path = std::env::temp_dir().join(format!("waring-bad-{}.json", std::process::id()));
    std::fs::write(&path, cert.to_string()).unwrap();
    let v = waring(&["verify", "cert", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(v.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    assert_eq!(waring(&["decompose", "sylvester", "--poly", "x^3 +"]).status.code(), Some(2));
    assert_eq!(waring(&["rank", "generic", "--n", "two"]).status.code(), Some(2));
    assert_eq!(waring(&["decompose", "sextic-cubes", "--poly", "x^5*y"]).status.code(), Some(0));
    assert_eq!(waring(&["decompose", "sextic-cubes", "--poly", "x^4"]).status.code(), Some(3));
    assert_eq!(waring(&["decompose", "canonical", "--poly", "x^6+x*y^5+y^6", "--k", "3", "--d", "2"]).status.code(), Some(3));
}

#[test]
fn seeds_are_deterministic() {
    let args = ["--json", "krank", "bound", "--poly", "x^8 + 2*x^3*y^5 - y^8", "--k", "4", "--budget", "40", "--samples", "40"];
    let a = waring(&[&args[..], &["--seed", "11"]].concat());
    let b = Command::new(env!("CARGO_BIN_EXE_waring")).args(args).env("WARING_SEED", "11").output().unwrap();
    assert_eq!(a.status.code(), b.status.code());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 11);
    assert!(v["lower"].as_u64().unwrap() <= v["upper"].as_u64().unwrap());
}

#[test]
fn monomial_factorization() {
    let o = waring(&["--json", "monomial", "factor", "--exponents", "3,10,11", "--k", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let m1: Vec<u64> = serde_json::from_value(v["m1"].clone()).unwrap();
    let m2: Vec<u64> = serde_json::from_value(v["m2"].clone()).unwrap();
    for (i, a) in [3, 10, 11].into_iter().enumerate() {
        assert_eq!(m1[i] + 3 * m2[i], a);
    }
}

#[test]
fn worked_examples_all_pass() {
    let o = waring(&["verify", "paper-examples"]);
    let s = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{s}");
    let lines: Vec<&str> = s.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert!(!lines.is_empty());
    assert!(lines.iter().all(|l| l.starts_with("PASS")));
    let mut sorted = lines.clone();
    sorted.sort();
    assert_eq!(lines, sorted);
}
