use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gcas::document::ArraySetDocument;

fn gcas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcas")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const TABLE_I_ROWS: [&str; 6] = ["00030003", "03003033", "41445255", "25221411", "00034441", "41441411"];

#[test]
fn example1_prints_table_and_verdict() {
    let a = gcas(&["example1"]);
    let b = gcas(&["example1"]);
    assert_eq!(a.status.code(), Some(0));
    let text = stdout(&a);
    for row in TABLE_I_ROWS {
        assert!(text.lines().any(|l| l == row), "missing {row}");
    }
    assert!(text.lines().any(|l| l == "GCAS: yes (9,2,8)"));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn gen_then_verify_round_trip_for_corpus() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["example1.json", "t1_ternary.json", "t2_mixed.json"] {
        let out = dir.path().join(format!("{name}.set.json"));
        let g = gcas(&["gen", p(&data(name)), "--output", p(&out)]);
        assert_eq!(g.status.code(), Some(0), "{name}: {}", stderr(&g));
        let v = gcas(&["verify", p(&out)]);
        assert_eq!(v.status.code(), Some(0), "{name}: {}", stdout(&v));
        assert!(stdout(&v).contains("GCAS: yes"));
    }
}

#[test]
fn gen_example1_json_shape_and_determinism() {
    let a = gcas(&["gen", p(&data("example1.json"))]);
    let b = gcas(&["gen", p(&data("example1.json"))]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let doc = ArraySetDocument::from_json(&stdout(&a)).unwrap();
    assert_eq!((doc.q, doc.rows, doc.cols, doc.members.len()), (6, 2, 8, 9));
    assert_eq!(doc.labels.len(), 9);
}

#[test]
fn gen_csv_format() {
    let o = gcas(&["gen", p(&data("example1.json")), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(&lines[..2], &["q,rows,cols", "6,2,8"]);
    assert_eq!(lines.len(), 11);
    assert!(lines.contains(&"0,0,0,3,0,0,0,3,0,3,0,0,3,0,3,3"));
}

#[test]
fn gen_strategy_flag_applies_to_two_alphabet_params() {
    for strategy in ["as-printed", "as-printed-scaled", "mirror-t1"] {
        let o = gcas(&["gen", p(&data("t2_mixed.json")), "--strategy", strategy]);
        // k1 + 1 = 2 fits both m and n, so the as-printed terms exist.
        assert_eq!(o.status.code(), Some(0), "{strategy}: {}", stderr(&o));
    }
    assert_eq!(gcas(&["gen", p(&data("t2_mixed.json")), "--strategy", "bogus"]).status.code(), Some(1));
}

#[test]
fn gen_validation_and_io_errors() {
    let o = gcas(&["gen", p(&data("bad_n.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).lines().any(|l| l.contains("divide")), "{}", stderr(&o));
    assert_eq!(gcas(&["gen", "/nonexistent/params.json"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.json");
    fs::write(&junk, "{not json").unwrap();
    assert_eq!(gcas(&["gen", p(&junk)]).status.code(), Some(1));
}

#[test]
fn verify_detects_perturbation() {
    let dir = tempfile::tempdir().unwrap();
    let g = gcas(&["gen", p(&data("example1.json"))]);
    let mut doc = ArraySetDocument::from_json(&stdout(&g)).unwrap();
    let path = dir.path().join("ok.json");
    fs::write(&path, doc.to_json()).unwrap();
    let ok = gcas(&["verify", p(&path)]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("peak=144"));

    doc.members[4][1][5] = (doc.members[4][1][5] + 1) % 6;
    fs::write(&path, doc.to_json()).unwrap();
    let bad = gcas(&["verify", p(&path)]);
    assert_eq!(bad.status.code(), Some(3));
    assert!(stdout(&bad).contains("nonzero at"));
    assert!(stdout(&bad).contains("GCAS: no"));
}

#[test]
fn verify_singleton_and_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let single = dir.path().join("single.json");
    fs::write(&single, r#"{"q":4,"rows":1,"cols":1,"members":[[[3]]]}"#).unwrap();
    assert_eq!(gcas(&["verify", p(&single)]).status.code(), Some(0));
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"q":4,"rows":1,"cols":1,"members":[[[4]]]}"#).unwrap();
    assert_eq!(gcas(&["verify", p(&bad)]).status.code(), Some(1));
}

#[test]
fn aacf_dump_rows() {
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("set.json");
    let csv = dir.path().join("aacf.csv");
    assert_eq!(gcas(&["gen", p(&data("example1.json")), "-o", p(&set)]).status.code(), Some(0));
    assert_eq!(gcas(&["aacf-dump", p(&set), "--output", p(&csv)]).status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("u1,u2,re,im,exact_zero"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3 * 15);
    for r in &rows {
        let (re, im): (f64, f64) = (r[2].parse().unwrap(), r[3].parse().unwrap());
        if r[..2] == ["0", "0"] {
            assert_eq!(r.join(","), "0,0,144.0,0.0,0");
        } else {
            assert_eq!(r[4], "1");
            assert!(re.abs() < 1e-6 && im.abs() < 1e-6);
        }
    }

    let single = dir.path().join("single.json");
    fs::write(&single, r#"{"q":2,"rows":1,"cols":1,"members":[[[1]]]}"#).unwrap();
    let o = gcas(&["aacf-dump", p(&single)]);
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn compare_default_and_zero_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let catalog = dir.path().join("catalog.csv");
    let o = gcas(&["compare", "--output", p(&catalog)]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("2   8   6   N=3 b=2 m=1 n=3 k=1") && l.contains("Th1  9") && l.contains("Ref18a  3")), "{text}");
    let csv = fs::read_to_string(&catalog).unwrap();
    assert!(csv.starts_with("source,set_size,L1,L2,q,witness\n"));
    assert!(csv.lines().any(|l| l == "Th1,9,2,8,6,N=3 b=2 m=1 n=3 k=1"));

    let zero = dir.path().join("zero.json");
    fs::write(&zero, r#"{"max_l1":0,"max_l2":0,"max_set_size":0,"max_q":0}"#).unwrap();
    let z = gcas(&["compare", "--bounds", p(&zero)]);
    assert_eq!(z.status.code(), Some(0));
    assert!(!stdout(&z).contains("Th1  "));
    assert!(stdout(&z).contains("0 of 0 shapes"));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "[]").unwrap();
    assert_eq!(gcas(&["compare", "--bounds", p(&bad)]).status.code(), Some(1));
}

#[test]
fn sweep_small_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let bounds = dir.path().join("bounds.json");
    fs::write(
        &bounds,
        r#"{"seed": 11,
            "t1": {"moduli": [6], "max_vars": 3, "max_entries": 8, "max_set_size": 27, "draws": 2},
            "t2": {"moduli": [4], "max_m": 2, "max_n": 2, "max_set_size": 16, "draws": 1}}"#,
    )
    .unwrap();
    let report = dir.path().join("report.csv");
    let o = gcas(&["sweep", "--bounds", p(&bounds), "--output", p(&report)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("100.0%"));
    let csv = fs::read_to_string(&report).unwrap();
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("theorem,q,b1,b2,N1,N2,m,n,k1,k2,draw,strategy,set_size,verdict,elapsed_ms"));
    let strategies: std::collections::BTreeSet<&str> =
        csv.lines().skip(1).filter(|l| l.starts_with("t2,")).map(|l| l.split(',').nth(11).unwrap()).collect();
    assert_eq!(strategies.into_iter().collect::<Vec<_>>(), ["as-printed", "as-printed-scaled", "mirror-t1"]);
    assert!(csv.lines().skip(1).all(|l| !l.contains(",fail,")));
}

#[test]
fn sweep_empty_bounds_warns() {
    let dir = tempfile::tempdir().unwrap();
    let bounds = dir.path().join("bounds.json");
    fs::write(&bounds, r#"{"t1": {"moduli": []}, "t2": {"moduli": []}}"#).unwrap();
    let o = gcas(&["sweep", "--bounds", p(&bounds)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);
    assert!(stderr(&o).contains("warning"));
    fs::write(&bounds, "{").unwrap();
    assert_eq!(gcas(&["sweep", "--bounds", p(&bounds)]).status.code(), Some(1));
}
