use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_perfreq");

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn perfreq(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn extract_mini_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.tsv");
    let o = perfreq(&["extract", "--labeled", s(&data("mini_corpus.csv")), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let line = stdout(&o);
    let extracted: usize = line.split_whitespace().nth(1).unwrap().trim_end_matches(',').parse().unwrap();
    assert!(extracted >= 25, "{line}");
    assert!(fs::read_to_string(&out).unwrap().contains("be capable of supporting <N>\tG\tE"));
}

#[test]
fn extract_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write(dir.path(), "empty.csv", "id,text,left,right,v_beta,direction\n");
    let out = dir.path().join("p.tsv");
    let o = perfreq(&["extract", "--labeled", &csv, "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&out).unwrap(), "");
}

#[test]
fn extract_failures_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.tsv");
    let missing = dir.path().join("absent.csv");
    let o = perfreq(&["extract", "--labeled", s(&missing), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("absent.csv"));
    assert!(!out.exists());

    let csv = write(dir.path(), "bad.csv", "id,text,left,right,v_beta,direction\na,x,E,S,,\nb,y,X,S,,\n");
    let o = perfreq(&["extract", "--labeled", &csv, "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("bad.csv") && err.contains("row 2"), "{err}");
    assert!(!out.exists());
}

#[test]
fn classify_with_negation() {
    let dir = tempfile::tempdir().unwrap();
    let kb = write(dir.path(), "kb.tsv", "more than <N>\tG\tE\n");
    let input = write(
        dir.path(),
        "in.txt",
        "the throughput shall be more than 200 users\nthe response time shall be no more than 100 milliseconds\nzzz\n",
    );
    let o = perfreq(&["classify", "--patterns", &kb, "--vectors", s(&data("mini_vectors.txt")), "--input", &input]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows[0], ["line_no", "left", "right", "v_beta", "fused", "pattern"]);
    assert_eq!(&rows[1][..4], ["1", "G", "E", "200"]);
    assert_eq!(&rows[2][..4], ["2", "S", "E", "100"]);
    assert_eq!(rows[3], ["3", "NA", "NA", "NA", "0.0", "-"]);
}

#[test]
fn classify_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.txt", "");
    let o = perfreq(&["classify", "--input", &empty]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "line_no\tleft\tright\tv_beta\tfused\tpattern\n");

    let o = perfreq(&["classify", "--input", &empty, "--patterns", s(&dir.path().join("gone.tsv"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("gone.tsv"));

    let o = perfreq(&["classify", "--input", &empty, "--w", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
}

fn sample_pairs(out: &str) -> Vec<(f64, f64)> {
    out.lines()
        .skip_while(|l| *l != "line_no,v,g")
        .skip(1)
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (f[1], f[2])
        })
        .collect()
}

#[test]
fn quantify_single_expectation_samples() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.txt", "The system should response in 2 seconds\n");
    let o = perfreq(&["quantify", "--input", &input, "--bounds", "0,10", "--direction", "min", "--samples", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let first = out.lines().next().unwrap();
    assert!(first.starts_with("{\"direction\":\"min\",\"segments\":[{\"v_lo\":"), "{first}");
    let pairs = sample_pairs(&out);
    assert_eq!(pairs.len(), 11);
    assert!(pairs.contains(&(2.0, 1.0)));
    assert!(pairs.contains(&(10.0, 0.0)));

    let o = perfreq(&["quantify", "--input", &input, "--bounds", "0,10", "--samples", "0"]);
    assert_eq!(stdout(&o).lines().count(), 1);
    assert!(!stdout(&o).contains("line_no"));
}

#[test]
fn quantify_two_expectations() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.txt", "The system should response in 5 seconds and ideally less than 2 seconds.\n");
    let o = perfreq(&["quantify", "--input", &input, "--bounds", "0,10", "--direction", "min", "--samples", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let pairs = sample_pairs(&stdout(&o));
    let g75 = pairs.iter().find(|p| p.0 == 7.5).unwrap().1;
    assert!((g75 - 0.25).abs() < 1e-9);
}

#[test]
fn quantify_no_match_is_null() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.txt", "zzz qqq\nThe system should response in 2 seconds\n");
    let o = perfreq(&["quantify", "--input", &input]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("null"));
    assert_eq!(out.lines().count(), 2);
    assert!(stderr(&o).contains("line 1"));
    let o = perfreq(&["quantify", "--input", &input, "--bounds", "5,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eval_smoke_and_determinism() {
    let corpus = data("mini_corpus.csv");
    let args = ["eval", "--dataset", s(&corpus), "--runs", "5", "--seed", "1"];
    let a = perfreq(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    let out = stdout(&a);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 7);
    assert!(lines[6].starts_with("mean±sd"));
    assert_eq!(perfreq(&args).stdout, a.stdout);
}

#[test]
fn eval_files_and_modes() {
    let dir = tempfile::tempdir().unwrap();
    let tsv = dir.path().join("r.tsv");
    let json = dir.path().join("r.json");
    let o = perfreq(&[
        "eval",
        "--dataset",
        s(&data("mini_corpus.csv")),
        "--test-dataset",
        s(&data("holdout.csv")),
        "--base-patterns",
        s(&data("patterns.tsv")),
        "--train-size",
        "3",
        "--out",
        s(&tsv),
        "--json",
        s(&json),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = fs::read_to_string(&tsv).unwrap();
    assert_eq!(report.lines().count(), 3);
    assert!(report.lines().nth(1).unwrap().starts_with("1\t"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["runs"].as_array().unwrap().len(), 1);

    let o = perfreq(&["eval", "--dataset", s(&data("holdout.csv")), "--train-size", "10"]);
    assert_eq!(o.status.code(), Some(2));
    let o = perfreq(&["eval", "--dataset", s(&data("holdout.csv")), "--train-size", "3", "--train-fraction", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(perfreq(&[]).status.code(), Some(2));
    assert_eq!(perfreq(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(perfreq(&["--help"]).status.code(), Some(0));
}
