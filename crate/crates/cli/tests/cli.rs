use serde_json::Value;
use std::fs;
use std::path::Path;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_multitype"))
        .args(args)
        .env_remove("MULTITYPE_CACHE_DIR")
        .output()
        .expect("binary runs");
    let text = String::from_utf8(out.stdout).unwrap();
    let v = if args.contains(&"text") { Value::Null } else { serde_json::from_str(&text).expect("stdout is JSON") };
    (out.status.code().unwrap(), text, v)
}

fn cache_files(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut v: Vec<_> = walk(dir).into_iter().filter(|p| p.extension().is_some_and(|e| e == "json")).collect();
    v.sort();
    v
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = vec![];
    for e in fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}

#[test]
fn weights_p7_f1() {
    let (code, _, v) = run(&["weights", "--p", "7", "--f", "1", "--mu", "4,1"]);
    assert_eq!(code, 0);
    let r = &v["result"];
    assert_eq!(r["generic"], true);
    let dims: Vec<Vec<u64>> = r["types"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            let mut d: Vec<u64> = serde_json::from_value(t["jh_dims"].clone()).unwrap();
            d.sort();
            d
        })
        .collect();
    assert_eq!(dims[0], vec![3, 5]);
    assert_eq!(dims[1].len(), 2);
    assert!(r["types"].as_array().unwrap().iter().all(|t| t["oracle_agrees"] == true));
    assert_eq!(v["schema"], 1);
}

#[test]
fn defring_single_type_presentation() {
    let (code, _, v) = run(&["defring", "--p", "7", "--f", "1", "--irhomu", "w0"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["presentation"], "O[[X_0,Y_0]]/(-7*Y_0 + X_0*Y_0^2)");
}

#[test]
fn parameter_errors_exit_2() {
    for args in [
        vec!["weights", "--p", "6", "--mu", "4,1"],
        vec!["weights", "--p", "7", "--mu", "4,1,5"],
        vec!["weights", "--p", "7", "--f", "2", "--mu", "4,1"],
        vec!["weights", "--p", "7", "--mu", "1,1"],
        vec!["tangent", "--p", "7", "--mu", "4,1", "--t", "Z_9"],
        vec!["oracle", "--p", "7"],
    ] {
        let (code, _, v) = run(&args);
        assert_eq!(code, 2, "{args:?}");
        assert_eq!(v["pass"], false);
        assert!(v["error"]["message"].as_str().is_some_and(|m| !m.is_empty()));
    }
    let out = Command::new(env!("CARGO_BIN_EXE_multitype")).args(["weights", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_all_p7_f1() {
    let (code, _, v) = run(&["check-all", "--p", "7", "--f", "1"]);
    let cs = v["result"]["criteria"].as_array().unwrap();
    assert_eq!(cs.len(), 8);
    for c in cs {
        if c["id"] == 5 {
            assert_eq!(c["details"]["solvable_implies_free_Y_vanish"], true);
        } else {
            assert_eq!(c["pass"], true, "{c}");
        }
    }
    let all = cs.iter().all(|c| c["pass"] == true);
    assert_eq!(v["pass"], all);
    assert_eq!(code, if all { 0 } else { 1 });
}

#[test]
fn reports_are_byte_stable() {
    for args in [
        vec!["weights", "--p", "7", "--mu", "4,1,5,1"],
        vec!["skeleton", "--p", "7", "--mu", "4,1,5,1", "--I", "+0"],
        vec!["defring", "--p", "7", "--mu", "4,1,5,1", "--irhomu", "+0"],
        vec!["phi", "--p", "7", "--mu", "4,1,5,1", "--irhomu", "+0"],
        vec!["tangent", "--p", "7", "--mu", "4,1"],
    ] {
        let (_, a, _) = run(&args);
        let (_, b, _) = run(&args);
        let mut one = args.clone();
        one.extend(["--jobs", "1"]);
        let mut four = args.clone();
        four.extend(["--jobs", "4"]);
        let (_, c, _) = run(&one);
        let (_, d, _) = run(&four);
        assert_eq!(a, b, "{args:?}");
        assert_eq!(c, d, "{args:?}");
        assert_eq!(a, c, "{args:?}");
    }
}

#[test]
fn text_format_renders_the_same_envelope() {
    let (code, text, _) = run(&["weights", "--p", "7", "--mu", "4,1", "--format", "text"]);
    assert_eq!(code, 0);
    assert!(text.lines().any(|l| l == "result.generic = true"));
    assert!(text.lines().any(|l| l == "schema = 1"));
}

#[test]
fn params_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("params.json");
    fs::write(&path, r#"{"p": 7, "mu": "4,1,5,1", "I": "+0"}"#).unwrap();
    let (code, a, _) = run(&["skeleton", "--params", path.to_str().unwrap()]);
    let (_, b, _) = run(&["skeleton", "--p", "7", "--mu", "4,1,5,1", "--I", "+0"]);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    // flags take precedence over the file
    let (_, c, _) = run(&["skeleton", "--params", path.to_str().unwrap(), "--I", "-1"]);
    let (_, d, _) = run(&["skeleton", "--p", "7", "--mu", "4,1,5,1", "--I", "-1"]);
    assert_eq!(c, d);
    fs::write(&path, r#"{"p": 7, "colour": 3}"#).unwrap();
    let (code, _, _) = run(&["weights", "--params", path.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn cache_lifecycle() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, _, v) = run(&["oracle", "--p", "7", "--f", "1,2", "--cache-dir", d]);
    assert_eq!(code, 0);
    let n = cache_files(dir.path()).len();
    assert!(n > 0);
    assert_eq!(v["result"]["tables"].as_array().unwrap().len(), 2);

    let (code, _, v) = run(&["cache", "verify", "--cache-dir", d]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["checked"], n);
    assert_eq!(v["result"]["recomputed"].as_array().unwrap().len(), 1);

    let (_, _, v) = run(&["cache", "list", "--cache-dir", d]);
    assert_eq!(v["result"]["columns"].as_array().unwrap().len(), n);

    // tamper with one column: drop a factor
    let victim = &cache_files(dir.path())[0];
    let mut col: Value = serde_json::from_str(&fs::read_to_string(victim).unwrap()).unwrap();
    col["weights"].as_array_mut().unwrap().pop();
    fs::write(victim, serde_json::to_string(&col).unwrap()).unwrap();
    let (code, _, v) = run(&["cache", "verify", "--all", "--cache-dir", d]);
    assert_eq!(code, 1);
    let bad = v["result"]["bad"].as_array().unwrap();
    assert_eq!(bad.len(), 1);
    let stem = victim.file_stem().unwrap().to_str().unwrap();
    assert!(bad[0].as_str().unwrap().contains(stem), "{bad:?} vs {stem}");

    let (code, _, v) = run(&["cache", "purge", "--cache-dir", d]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["removed"], n);
    assert!(cache_files(dir.path()).is_empty());
    let (code, _, _) = run(&["oracle", "--p", "7", "--f", "1,2", "--cache-dir", d]);
    assert_eq!(code, 0);
    assert_eq!(cache_files(dir.path()).len(), n);
}

#[test]
fn cache_dir_from_environment() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_multitype"))
        .args(["oracle", "--p", "7", "--f", "1"])
        .env("MULTITYPE_CACHE_DIR", env_dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(!cache_files(env_dir.path()).is_empty());
    let out = Command::new(env!("CARGO_BIN_EXE_multitype"))
        .args(["oracle", "--p", "7", "--f", "1", "--cache-dir", flag_dir.path().to_str().unwrap()])
        .env("MULTITYPE_CACHE_DIR", env_dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(cache_files(flag_dir.path()).len(), cache_files(env_dir.path()).len());
}
