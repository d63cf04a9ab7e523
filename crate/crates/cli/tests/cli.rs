use closed_tables::construct::{threshold_table, BoolFn, ThresholdSystem};
use closed_tables::fixtures::{fig1, fig2};
use closed_tables::format::{parse_measure, parse_table, render_table};
use closed_tables::{psi_d, psi_s, DecisionTree};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn dt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dt"))
        .args(args)
        .output()
        .expect("run dt")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fig1_file(dir: &Path) -> PathBuf {
    let p = dir.join("t.dt");
    fs::write(&p, render_table(&fig1())).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn params_text_golden() {
    let dir = tempfile::tempdir().unwrap();
    let t = fig1_file(dir.path());
    let o = dt(&["params", s(&t)]);
    assert_eq!(o.status.code(), Some(0));
    let want = "\
measure  depth
N        6
W        3
W_psi    3
V_psi    1
Theta    2
S        2
S_hat    2
M        2
psi_d    2
psi_s    1
test     {f3,f4}
worst    (0,1,1)
det      (root (f2 (0 (f4 (0 (leaf 1)) (1 (leaf 0)))) (1 (f3 (0 (leaf 1)) (1 (leaf 0))))))
snd      (root (f3 (0 (leaf 1))) (f4 (0 (leaf 1))))
row 0    S=2 {f2,f3}
row 1    S=2 {f2,f4}
row 2    S=2 {f3,f4}
row 3    S=2 {f3,f4}
row 4    S=2 {f2,f4}
row 5    S=2 {f2,f3}
consistent
";
    assert_eq!(stdout(&o), want);
}

#[test]
fn params_with_measure_file() {
    let dir = tempfile::tempdir().unwrap();
    let t = fig1_file(dir.path());
    let m = dir.path().join("w.cm");
    fs::write(&m, "kind additive\nweight f2 1\nweight f4 3\nweight f3 2\n").unwrap();
    let o = dt(&["params", s(&t), "-m", s(&m), "--format", "kv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("W_psi=6\n"), "{out}");
    assert!(out.contains("Theta=5\n"), "{out}");
    let sum = format!("sum:{},depth", s(&m));
    let o = dt(&["params", s(&t), "-m", &sum, "--format", "kv"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("W_psi=9\n"));
}

#[test]
fn trees_parse_back_and_match_solvers() {
    let dir = tempfile::tempdir().unwrap();
    let t = fig1_file(dir.path());
    let h = closed_tables::ComplexityMeasure::Depth;
    let table = fig1();
    for (kind, (cost, want)) in [
        ("det", psi_d(&h, &table).unwrap()),
        ("snd", psi_s(&h, &table).unwrap()),
    ] {
        let out = dir.path().join(format!("{kind}.tree"));
        let o = dt(&["tree", kind, s(&t), "-o", s(&out)]);
        assert_eq!(o.status.code(), Some(0));
        let tree = DecisionTree::parse(&fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(tree.cost(&h), cost);
        assert_eq!(tree.to_string(), want.unwrap().to_string());
    }
}

#[test]
fn closure_writes_members_and_index() {
    let dir = tempfile::tempdir().unwrap();
    let t = fig1_file(dir.path());
    let out = dir.path().join("cl");
    let o = dt(&["closure", s(&t), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let index = fs::read_to_string(out.join("index.tsv")).unwrap();
    let rows: Vec<&str> = index.lines().filter(|l| !l.starts_with('#')).collect();
    let files = fs::read_dir(&out).unwrap().count() - 1;
    assert_eq!(rows.len(), files);
    assert!(index.ends_with(&format!("# members {} exhausted true\n", rows.len())));
    let key = fig2().canonical_key().to_string();
    assert!(rows.iter().any(|r| r.split('\t').nth(1) == Some(&key)));
    for r in &rows {
        let name = r.split('\t').next().unwrap();
        parse_table(&fs::read_to_string(out.join(name)).unwrap()).unwrap();
    }
}

#[test]
fn closure_limit_truncates() {
    let dir = tempfile::tempdir().unwrap();
    let t = fig1_file(dir.path());
    let out = dir.path().join("cl");
    let o = dt(&["closure", s(&t), "--out", s(&out), "--limit", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "5 members, exhausted: false\n");
}

#[test]
fn threshold_construction_golden() {
    let o = dt(&["construct", "thresholds", "--at", "1,2", "--nu", "xor"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "k 2\nattrs f1 f2\nrow 0 0 0\nrow 1 0 1\nrow 1 1 0\n"
    );
    let sys = ThresholdSystem::new(vec![1, 2]).unwrap();
    let lib = threshold_table(&sys, |v| BoolFn::Xor.eval(v));
    assert_eq!(parse_table(&stdout(&o)).unwrap(), lib);
}

#[test]
fn fig5_writes_table_and_measure() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.cm");
    let o = dt(&["construct", "fig5", "--phi", "1,4,9", "--n", "3", "--measure-out", s(&m)]);
    assert_eq!(o.status.code(), Some(0));
    let t = parse_table(&stdout(&o)).unwrap();
    let psi = parse_measure(&fs::read_to_string(&m).unwrap()).unwrap();
    assert_eq!(psi.table_weights(&t).0, 9);
    assert_eq!(psi_s(&psi, &t).unwrap().0, 3);
    assert_eq!(psi_d(&psi, &t).unwrap().0, 9);
    let bad = dt(&["construct", "fig5", "--phi", "1,4,9", "--n", "7"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn lemma_constructions_produce_tables() {
    let dir = tempfile::tempdir().unwrap();
    let t = fig1_file(dir.path());
    for which in ["lemma12", "lemma13", "lemma14"] {
        let o = dt(&["construct", which, s(&t)]);
        assert_eq!(o.status.code(), Some(0), "{which}");
        parse_table(&stdout(&o)).unwrap();
    }
    let o = dt(&["construct", "isolate", s(&t), "--row", "1,1,1"]);
    let iso = parse_table(&stdout(&o)).unwrap();
    assert_eq!(iso.rows().iter().filter(|r| r.decision == 1).count(), 1);
    let missing = dt(&["construct", "isolate", s(&t), "--row", "2,2,2"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn generators_directory_feeds_explore() {
    let dir = tempfile::tempdir().unwrap();
    let gens = dir.path().join("gens");
    let o = dt(&["construct", "gens", "--d", "2,5", "--out", s(&gens)]);
    assert_eq!(o.status.code(), Some(0));
    let csv = dir.path().join("fw.csv");
    let o = dt(&[
        "explore", "--fn", "FW", "--gen", s(&gens), "--max-n", "6", "--csv", s(&csv),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        fs::read_to_string(&csv).unwrap(),
        "n,value,exhausted\n0,0,true\n1,0,true\n2,2,true\n3,2,true\n4,2,true\n5,5,true\n6,5,true\n"
    );
}

#[test]
fn explore_refuses_unbounded_measure() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.cm");
    fs::write(&m, "kind maxw\ndefault 2\n").unwrap();
    let o = dt(&["explore", "--fn", "FW", "--gen", "builtin:id2", "-m", s(&m)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_suites_pass() {
    for suite in ["lemmas", "dp-oracle", "constructions", "growth"] {
        let o = dt(&["verify", "--suite", suite, "--samples", "20", "--seed", "5"]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
        assert!(stdout(&o).ends_with("verdict  pass\n"));
    }
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.dt");
    fs::write(&bad, "k 2\nattrs f0\nrow 1 0\nrow 1 1\n").unwrap();
    for args in [
        vec!["params", "missing.dt"],
        vec!["params", s(&bad)],
        vec!["params", s(&bad), "-m", "nothing.cm"],
        vec!["verify", "--suite", "nonsense"],
        vec!["explore", "--fn", "Q", "--gen", "builtin:id2"],
        vec!["construct", "thresholds", "--at", "2,1"],
    ] {
        assert_eq!(dt(&args).status.code(), Some(2), "{args:?}");
    }
    let lambda = dir.path().join("l.dt");
    fs::write(&lambda, "k 2\nattrs\n").unwrap();
    assert_eq!(dt(&["tree", "det", s(&lambda)]).status.code(), Some(2));
    assert_eq!(dt(&["params", s(&lambda)]).status.code(), Some(0));
}
