use std::fs;
use std::process::{Command, Output};

fn symdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symdyn")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const DECLS: &str = "\
substitution tm on {0, 1} { 0 -> \"01\"; 1 -> \"10\" }
observable w0 = walsh {0}
experiment sarnak-tm { system: tm; observable: w0; weight: moebius; N: 4096 }
experiment kbsz-tm { system: tm; observable: w0; N: 2048; kbsz: (3, 5); checkpoints: [1, 100, 2048] }
";

#[test]
fn gen_thue_morse() {
    let o = symdyn(&["gen", "--system", "thue-morse", "--n", "16"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0110100110010110");
}

#[test]
fn cover_of_herning() {
    let o = symdyn(&["cover", "--system", "herning"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("|G| = 6"));
}

#[test]
fn cover_of_non_bijective_is_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("pd.sym");
    fs::write(&f, "substitution pd on {a, b} { a -> \"ab\"; b -> \"aa\" }\n").unwrap();
    let o = symdyn(&["cover", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hat_of_thue_morse_is_period_doubling() {
    let o = symdyn(&["hat", "--system", "thue-morse", "--n", "32"]);
    let pd = symdyn(&["gen", "--system", "period-doubling", "--n", "32"]);
    assert_eq!(stdout(&o), stdout(&pd));
    let m = symdyn(&["gen", "--system", "thue-morse-z2", "--n", "16"]);
    assert_eq!(stdout(&m).trim(), "0110100110010110");
}

#[test]
fn syntax_error_exits_1_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.sym");
    fs::write(&f, "substitution tm on {0, 1} { 0 -> \"01\" 1 -> \"10\" }\n").unwrap();
    let o = symdyn(&["run", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.sym:1:"), "{err}");
}

#[test]
fn run_is_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("exp.sym");
    fs::write(&f, DECLS).unwrap();
    let one = dir.path().join("one");
    let four = dir.path().join("four");
    for (out, t) in [(&one, "1"), (&four, "4")] {
        let o = symdyn(&["run", f.to_str().unwrap(), "--out", out.to_str().unwrap(), "--threads", t]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for name in ["sarnak-tm.csv", "kbsz-tm.csv"] {
        let a = fs::read(one.join(name)).unwrap();
        assert_eq!(a, fs::read(four.join(name)).unwrap());
        assert!(a.starts_with(b"N,real,imag\n"));
    }
    let kbsz = fs::read_to_string(one.join("kbsz-tm.csv")).unwrap();
    assert_eq!(kbsz.lines().count(), 4);
}

#[test]
fn sarnak_json_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = symdyn(&["sarnak", "--n", "256", "--format", "json", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["metadata"]["weight"], "moebius");
    assert_eq!(v["rows"].as_array().unwrap().len(), 9);
}

#[test]
fn bad_observable_expression_exits_1() {
    let o = symdyn(&["corr", "--observable", "walsh {", "--n", "64", "--max-lag", "4"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn spectrum_has_grid_rows() {
    let o = symdyn(&["spectrum", "--n", "4096", "--max-lag", "32", "--grid", "16"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 17);
}
