use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn lubkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lubkit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lubkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn closure_of_d_c_reaches_a() {
    let o = lubkit(&["cl", &fixture("p7.lub"), "--set", "{d,c}"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "{a,b,c,d,e}");
}

#[test]
fn check_exit_codes() {
    let o = lubkit(&["check", &fixture("d4.lub")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("S9: holds"));
    let o = lubkit(&["check", &fixture("c3-bare.lub"), "--axiom", "S9"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("S9: fails"));
    let o = lubkit(&["check", &fixture("p7.lub"), "--axiom", "S9"]);
    assert_eq!(o.status.code(), Some(1));
    let o = lubkit(&["check", &fixture("p7.lub"), "--axiom", "S11"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn completion_output_parses_back() {
    let o = lubkit(&["complete", &fixture("p7.lub"), "--class", "canonical"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("natural {c,d} -> a"));
    let path = scratch("p7-canonical.lub");
    std::fs::write(&path, &text).unwrap();
    let again = lubkit(&["complete", path.to_str().unwrap(), "--class", "canonical"]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn rule_validity() {
    let p7 = fixture("p7.lub");
    let o = lubkit(&["valid", &p7, "--pattern", "{b,c};{d,e}", "--result", "{d,c}"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "valid");
    let o = lubkit(&["valid", &p7, "--result", "{b,c}", "--search", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("small counterexample"));
    let o = lubkit(&["valid", &p7, "--result", "{b,d}"]);
    assert_eq!(o.status.code(), Some(0));
    let o = lubkit(&["valid", &p7, "--result", "{c,d}", "--pattern", "{d,e}"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn derivation_certificate_is_written() {
    let out = scratch("proof.json");
    let o = lubkit(&[
        "derive",
        &fixture("p7.lub"),
        "--class",
        "sazonov",
        "--target",
        "{d,c}->a",
        "--emit-proof",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let nodes: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let nodes = nodes.as_array().unwrap();
    assert_eq!(nodes[0]["label"], "{c,d}->a");
    assert!(nodes.iter().all(|n| n.get("rule").is_some() && n.get("premises").is_some()));
    let o = lubkit(&["derive", &fixture("p7.lub"), "--class", "sazonov", "--target", "{b,c}->b"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn underivable_target_exits_one() {
    let f = scratch("split.lub");
    std::fs::write(&f, "elements x y t\norder x<t y<t\n").unwrap();
    for class in ["sazonov", "canonical"] {
        let o = lubkit(&["derive", f.to_str().unwrap(), "--class", class, "--target", "{x,y}->t"]);
        assert_eq!(o.status.code(), Some(1), "{class}");
    }
}

#[test]
fn lattice_lists_closed_sets() {
    let o = lubkit(&["lattice", &fixture("p7.lub")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("6 closed sets"));
    assert!(text.contains("in(b) = {b,d,e}"));
}

#[test]
fn constructions_round_trip_through_files() {
    for op in ["product", "pexp", "gexp"] {
        let out = scratch(&format!("{op}.lub"));
        let o = lubkit(&["construct", "--op", op, &fixture("c2.lub"), "@c2", "-o", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{op}");
        let o = lubkit(&["check", out.to_str().unwrap(), "--axiom", "S3"]);
        assert_eq!(o.status.code(), Some(0), "{op}");
    }
    let o = lubkit(&["construct", "--op", "gexp", &fixture("p7.lub"), &fixture("p7.lub")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn realization_and_algebraicity() {
    let o = lubkit(&["realize", &fixture("d4.lub")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("proper "));
    let o = lubkit(&["realize", &fixture("c3-bare.lub")]);
    assert_eq!(o.status.code(), Some(1));
    let o = lubkit(&["algebraic", &fixture("d4.lub")]);
    assert_eq!(o.status.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rep["algebraic"], true);
}

#[test]
fn galleries() {
    for (id, bound) in [("g1", None), ("g2", Some("8")), ("g3", Some("8")), ("g4", Some("4"))] {
        let mut args = vec!["gallery", id];
        if let Some(b) = bound {
            args.extend(["--bound", b]);
        }
        let o = lubkit(&args);
        assert_eq!(o.status.code(), Some(0), "{id}");
        serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap();
    }
    let o = lubkit(&["gallery", "g2", "--bound", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = lubkit(&["gallery", "g9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn harness_runs() {
    let o = lubkit(&["harness", "--kind", "equivalences", "--max-size", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rep["failures"].as_array().unwrap().len(), 0);
    let o = lubkit(&["harness", "--kind", "realization", "--max-size", "3", "--samples", "50", "--seed", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let o = lubkit(&["harness", "--kind", "validity-agreement", "--max-size", "9"]);
    assert_eq!(o.status.code(), Some(2));
    let o = lubkit(&["harness", "--kind", "nonsense", "--max-size", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_input_exits_two() {
    let bad = scratch("bad.lub");
    std::fs::write(&bad, "elements a b\norder a<q\n").unwrap();
    let o = lubkit(&["check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column 9"));
    let o = lubkit(&["cl", "/nonexistent.lub", "--set", "{}"]);
    assert_eq!(o.status.code(), Some(2));
    let o = lubkit(&["cl", "@nope", "--set", "{}"]);
    assert_eq!(o.status.code(), Some(2));
    let o = lubkit(&[]);
    assert_eq!(o.status.code(), Some(2));
}
