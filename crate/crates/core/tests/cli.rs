use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use modchar::kripke::{read_model, write_model};
use modchar::{PointedModel, PropSet, PropSignature};

fn modchar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modchar")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn tower_rows() {
    let o = modchar(&["tower", "--max-n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n examples tower\n1 2 2\n2 4 4\n3 16 16\n");
    assert_eq!(modchar(&["tower", "--max-n", "4"]).status.code(), Some(2));
}

#[test]
fn characterize_writes_one_example_each_way() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p");
    let o = modchar(&["characterize", "p", "--props", "p", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_dir(out.join("pos")).unwrap().count(), 1);
    assert_eq!(fs::read_dir(out.join("neg")).unwrap().count(), 1);
    assert_eq!(fs::read_to_string(out.join("formula.txt")).unwrap(), "p\n");
    read_model(&fs::read_to_string(out.join("pos/000.json")).unwrap()).unwrap();

    assert_eq!(modchar(&["fits", "p", "--dir", path(&out)]).status.code(), Some(0));
    assert_eq!(modchar(&["fits", "<>p", "--dir", path(&out)]).status.code(), Some(1));
}

#[test]
fn empty_loop_is_weakly_simulated_into_anything() {
    let dir = tempfile::tempdir().unwrap();
    let sig = PropSignature::new(["p", "q"]).unwrap();
    let any =
        PointedModel::from_labels(sig.clone(), vec![PropSet(1), PropSet(2), PropSet(3)], [(0, 1), (1, 2)], 0).unwrap();
    let (a, b) = (dir.path().join("loop.json"), dir.path().join("any.json"));
    fs::write(&a, write_model(&PointedModel::empty_loop(&sig))).unwrap();
    fs::write(&b, write_model(&any)).unwrap();
    let o = modchar(&["wsim", path(&a), path(&b)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("true\n"));
    assert!(stdout(&o).contains("\"pairs\""));
    assert_eq!(stdout(&modchar(&["wsim", path(&b), path(&a)])), "false\n");
}

#[test]
fn exit_codes() {
    assert_eq!(modchar(&["parse", "p &", "--props", "p"]).status.code(), Some(65));
    assert_eq!(modchar(&["parse", "r", "--props", "p"]).status.code(), Some(65));
    assert_eq!(modchar(&["no-such-command"]).status.code(), Some(64));
    assert_eq!(modchar(&["--help"]).status.code(), Some(0));
    assert_eq!(
        modchar(&["nf", "<>(p | q) & <>(p | q)", "--props", "p,q", "--max-disjuncts", "2"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_reports_are_reproducible() {
    let args = ["verify", "duality", "[]p | q", "--props", "p,q", "--samples", "50", "--seed", "7", "--json"];
    let (a, b) = (modchar(&args), modchar(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["verdict"], "pass");
    assert_eq!(report["stats"]["seed"], 7);
}

#[test]
fn fixtures_pass() {
    let dir = tempfile::tempdir().unwrap();
    let o = modchar(&["fixtures", "coproduct", "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 10);
    assert!(dir.path().join("C_prime.json").exists());
}

#[test]
fn spoiler_writes_a_separating_witness() {
    let dir = tempfile::tempdir().unwrap();
    let ex = dir.path().join("ex");
    modchar(&["characterize", "<>p", "--props", "p", "--out", path(&ex)]);
    let w = dir.path().join("w.json");
    let o = modchar(&["spoiler", "<>p", "--props", "p", "--dir", path(&ex), "--witness-out", path(&w)]);
    assert_eq!(o.status.code(), Some(0));
    let spoiled = stdout(&o).lines().next().unwrap().to_string();
    let holds = |f: &str| stdout(&modchar(&["modelcheck", f, path(&w)]));
    assert_ne!(holds("<>p"), holds(&spoiled));
}
