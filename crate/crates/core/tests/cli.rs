use std::process::{Command, Output};

fn fdes(cache: &std::path::Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fdes")).env("FDES_CACHE_DIR", cache).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn dimension_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = fdes(dir.path(), &["dimension", "--weights", "1..=6", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let dims: Vec<u64> = v.as_array().unwrap().iter().map(|r| r["dimension"].as_u64().unwrap()).collect();
    assert_eq!(dims, [1, 2, 5, 8, 15, 22]);
    let zeta = fdes(dir.path(), &["dimension", "--space", "Z", "--weights", "3,4", "--format", "csv"]);
    assert!(stdout(&zeta).starts_with("space,weight,generators,rank,dimension\n"), "{}", stdout(&zeta));
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["relations", "--weight", "5", "--format", "json"];
    let first = fdes(dir.path(), &args);
    let cached = fdes(dir.path(), &args);
    let fresh = fdes(tempfile::tempdir().unwrap().path(), &args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, cached.stdout);
    assert_eq!(first.stdout, fresh.stdout);
}

#[test]
fn reduce_and_map() {
    let dir = tempfile::tempdir().unwrap();
    let ok = fdes(dir.path(), &["reduce", "5/2*G(4;0) - P(2,2;0,0) - G(3;1)", "--expect-zero"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok).trim(), "0");
    let not_zero = fdes(dir.path(), &["reduce", "G(2;0)", "--expect-zero"]);
    assert_eq!(not_zero.status.code(), Some(1));
    let sigma = fdes(dir.path(), &["map", "sigma", "Z(3)"]);
    assert_eq!(stdout(&sigma).trim(), "G(3;0)");
    let wrong = fdes(dir.path(), &["map", "partial", "Z(3)"]);
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn realize_methods() {
    let dir = tempfile::tempdir().unwrap();
    let o = fdes(dir.path(), &["--q-order", "4", "--format", "json", "realize", "--gen", "G(2;0)"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], "-1/24 + q + 3*q^2 + 4*q^3 + 7*q^4 + O(q^5)");
    let b = fdes(dir.path(), &["realize", "bernoulli", "--gen", "G(4;0)"]);
    assert!(stdout(&b).contains("1/1440"));
}

#[test]
fn checks_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(fdes(dir.path(), &["fay-check"]).status.code(), Some(0));
    let bad = fdes(dir.path(), &["fay-check", "--function", "polar-plus-x"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("polar-plus-x"));
    assert_eq!(fdes(dir.path(), &["--q-order", "20", "verify", "--identity", "ramanujan"]).status.code(), Some(0));
    assert_eq!(fdes(dir.path(), &["verify", "--identity", "nonsense"]).status.code(), Some(2));
    assert_eq!(fdes(dir.path(), &["reduce", "G(2;"]).status.code(), Some(2));
}

#[test]
fn cache_status_and_clear() {
    let dir = tempfile::tempdir().unwrap();
    fdes(dir.path(), &["dimension", "--weights", "1..3"]);
    let status = stdout(&fdes(dir.path(), &["cache", "status"]));
    assert!(status.contains("weight 3"), "{status}");
    assert_eq!(fdes(dir.path(), &["cache", "clear"]).status.code(), Some(0));
    assert!(!stdout(&fdes(dir.path(), &["cache", "status"])).contains("weight 3"));
}
