use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const K4: &str = "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";

fn ndt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ndt")).args(args).output().expect("binary runs")
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = path(dir, name);
    fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gamma_of_k4() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k4.txt", K4);
    let o = ndt(&["gamma", "--input", &g]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2/1\n0 1 2 3\n");
}

#[test]
fn dense_input_exits_two_with_certificate() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k4.txt", K4);
    let out = path(&dir, "out.json");
    let o = ndt(&["decompose", "--k", "1", "--d", "1", "--input", &g, "--output", &out]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(fs::read_to_string(&out).unwrap().trim(), r#"{"certificate":{"vertices":[0,1,2,3]}}"#);
    let v = ndt(&["verify", "--input", &g, "--result", &out, "--k", "1", "--d", "1"]);
    assert_eq!(v.status.code(), Some(0));
    let v = ndt(&["verify", "--input", &g, "--result", &out]);
    assert_eq!(v.status.code(), Some(1));
}

#[test]
fn forest_input_decomposes() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "tree.txt", "5 4\n0 1\n1 2\n1 3\n3 4\n");
    let o = ndt(&["decompose", "--k", "2", "--d", "3", "--input", &g]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["forests"].as_array().unwrap().len(), 3);
    assert_eq!(json["special_forest_index"], 2);
    assert_eq!(json["d_prime"], 3);
}

#[test]
fn blob_bridge_round_trip_and_tamper() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "blob.txt");
    let o = ndt(&["gen", "--family", "blob-bridge", "--k", "2", "--output", &g]);
    assert_eq!(o.status.code(), Some(0));
    let out = path(&dir, "out.json");
    let trace = path(&dir, "trace.tsv");
    let o = ndt(&["decompose", "--k", "2", "--d", "2", "--input", &g, "--output", &out, "--trace", &trace]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(Path::new(&trace).exists());
    let v = ndt(&["verify", "--input", &g, "--result", &out]);
    assert_eq!(v.status.code(), Some(0));

    let mut json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    // one tree class spans all 8 vertices; any extra edge closes a cycle there
    let forests = json["forests"].as_array_mut().unwrap();
    let full = (0..2).find(|&i| forests[i].as_array().unwrap().len() == 7).unwrap();
    let e = forests[1 - full].as_array_mut().unwrap().pop().unwrap();
    forests[full].as_array_mut().unwrap().push(e);
    let bad = write(&dir, "bad.json", &json.to_string());
    let v = ndt(&["verify", "--input", &g, "--result", &bad]);
    assert_ne!(v.status.code(), Some(0));
    assert!(stdout(&v).contains("cycle") || stdout(&v).contains("oversize"), "{}", stdout(&v));
}

#[test]
fn parse_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "loop.txt", "2 1\n0 0\n");
    let o = ndt(&["decompose", "--k", "1", "--d", "1", "--input", &g]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let o = ndt(&["decompose", "--k", "1", "--input", &g]);
    assert_eq!(o.status.code(), Some(1));
    let o = ndt(&["gamma", "--input", &path(&dir, "missing.txt")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn gen_is_reproducible() {
    let args = ["gen", "--family", "random-multigraph", "--n", "6", "--m", "9", "--seed", "7"];
    let a = ndt(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&ndt(&args)));
    assert!(stdout(&a).starts_with("6 9\n"));
}

#[test]
fn fast_mode_and_stdin() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_ndt"))
        .args(["decompose", "--k", "2", "--d", "1", "--fast"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(K4.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"forests\""));
}

#[test]
fn selftest_passes() {
    let o = ndt(&["selftest", "--count", "60"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().count(), 4);
}
