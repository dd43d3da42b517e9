use std::path::PathBuf;
use std::process::{Command, Output};

use proofforge_core::dl::{parse_axiom, parse_ontology, Signature};
use proofforge_core::proof::{check_proof, measure_proof, read_json, Measure};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn proofforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_proofforge")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn case_split() -> String {
    fixture("case_split.dl").to_str().unwrap().to_string()
}

#[test]
fn explain_case_split_writes_a_size_seven_proof() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.json");
    let dot = dir.path().join("p.dot");
    let o = proofforge(&["explain", &case_split(), "--goal", "sub(A,B)", "--method", "elim-heur", "--out", out.to_str().unwrap(), "--dot", dot.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let p = read_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(measure_proof(&p, &Measure::Size), 7);
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));
    let c = proofforge(&["check", out.to_str().unwrap(), "--ontology", &case_split(), "--goal", "A ⊑ B"]);
    assert_eq!(c.status.code(), Some(0));
    assert_eq!(stdout(&c), "valid\n");
}

#[test]
fn justify_prints_the_four_axioms() {
    let o = proofforge(&["justify", &case_split(), "--goal", "sub(A,B)"]);
    assert_eq!(o.status.code(), Some(0));
    let printed = parse_ontology(&stdout(&o)).unwrap();
    assert_eq!(printed, parse_ontology(&std::fs::read_to_string(fixture("case_split.dl")).unwrap()).unwrap());
    let all = proofforge(&["justify", &case_split(), "--goal", "sub(C1,C3)", "--all", "5"]);
    assert_eq!(stdout(&all).matches("# justification").count(), 1);
}

#[test]
fn not_entailed_exits_2() {
    let o = proofforge(&["explain", &case_split(), "--goal", "sub(A,Z)", "--method", "detailed"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not entailed"));
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        vec!["explain", case_split().as_str(), "--goal", "sub(A,B)", "--method", "bogus"],
        vec!["explain", case_split().as_str(), "--goal", "sub(A", "--method", "detailed"],
        vec!["explain", case_split().as_str(), "--goal", "sub(A,B)", "--method", "elk-size"],
        vec!["classify", "/nonexistent.dl"],
        vec!["frobnicate"],
    ] {
        let o = proofforge(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let hint = proofforge(&["explain", &case_split(), "--goal", "sub(A,B)", "--method", "elk-depth"]);
    assert!(String::from_utf8_lossy(&hint.stderr).contains("elim-"));
}

#[test]
fn classify_and_forget() {
    let c = proofforge(&["classify", &case_split()]);
    assert_eq!(stdout(&c), "A ⊑ B\nC1 ⊑ C3\nC2 ⊑ C3\n");
    let f = proofforge(&["forget", &case_split(), "--keep", "A,B"]);
    assert_eq!(f.status.code(), Some(0));
    assert_eq!(parse_ontology(&stdout(&f)).unwrap(), parse_ontology("sub(A, B)").unwrap());
}

#[test]
fn known_signature_file_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let sig = dir.path().join("known.txt");
    std::fs::write(&sig, "C1\nC2\nC3\n").unwrap();
    let out = dir.path().join("p.json");
    let o = proofforge(&["explain", &case_split(), "--goal", "sub(A,B)", "--method", "elim-heur", "--known", sig.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let p = read_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let o = parse_ontology(&std::fs::read_to_string(fixture("case_split.dl")).unwrap()).unwrap();
    let known = Signature::with_concepts(["C1", "C2", "C3"]);
    assert!(check_proof(&p, &o, &parse_axiom("sub(A,B)").unwrap(), &known).is_valid());
    assert!(measure_proof(&p, &Measure::Size) < 7);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for method in ["elim-heur", "elim-name-opt", "elim-size-opt", "detailed"] {
        let mut runs = Vec::new();
        for i in 0..2 {
            let out = dir.path().join(format!("{method}-{i}.json"));
            let o = proofforge(&["explain", &case_split(), "--goal", "sub(A,B)", "--method", method, "--out", out.to_str().unwrap()]);
            runs.push((o.stdout, std::fs::read(&out).unwrap()));
        }
        assert_eq!(runs[0], runs[1], "{method}");
    }
    assert_eq!(proofforge(&["classify", &case_split()]).stdout, proofforge(&["classify", &case_split()]).stdout);
}

#[test]
fn timeout_during_slow_search_exits_3_with_partial_proof() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.json");
    let o = Command::new(env!("CARGO_BIN_EXE_proofforge"))
        .env("PROOFFORGE_EXPANSION_DELAY_MS", "400")
        .args(["explain", &case_split(), "--goal", "sub(A,B)", "--method", "elim-size-opt", "--timeout", "0.2", "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sub-optimal"));
    let p = read_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(p.suboptimal);
    let onto = parse_ontology(&std::fs::read_to_string(fixture("case_split.dl")).unwrap()).unwrap();
    assert!(check_proof(&p, &onto, &parse_axiom("sub(A,B)").unwrap(), &Signature::new()).is_valid());
}

#[test]
fn elk_methods_on_an_el_ontology() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("el.dl");
    std::fs::write(&file, "sub(A, some(r, B))\nsub(B, C)\nsub(some(r, C), D)\nsub(D, E)\n").unwrap();
    for method in ["elk-size", "elk-depth"] {
        let o = proofforge(&["explain", file.to_str().unwrap(), "--goal", "sub(A,E)", "--method", method]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(read_json(&stdout(&o)).is_ok());
    }
}
