//! End-to-end runs of the `gpcr` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gpcr_svm::features::{write_feature_table, FeatureVector, FEATURE_DIM};
use gpcr_svm::synthetic::generate_corpus;
use gpcr_svm::Label;
use tempfile::TempDir;

fn gpcr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpcr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: TempDir::new().unwrap(),
        }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, contents).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    /// FASTA + topology for a synthetic corpus.
    fn corpus(&self, n: usize, seed: u64) -> (PathBuf, PathBuf) {
        let c = generate_corpus(n, n, seed);
        (self.file("seqs.fasta", &c.fasta()), self.file("seqs.tmhmm", &c.tmhmm()))
    }
}

/// A row whose first feature encodes the class signal.
fn row(id: &str, signal: f64, label: Label) -> FeatureVector {
    let mut values = vec![0.5; FEATURE_DIM];
    values[0] = signal;
    values[1] = 0.1 * (id.len() % 3) as f64;
    FeatureVector {
        source_id: id.into(),
        values,
        label,
    }
}

fn separable_table(n: usize) -> String {
    let mut rows = Vec::new();
    for i in 0..n {
        rows.push(row(&format!("H{i}_HUMAN"), 0.9 + 0.001 * i as f64, Label::Human));
        rows.push(row(&format!("O{i}_MOUSE"), 0.1 + 0.001 * i as f64, Label::Other));
    }
    write_feature_table(&rows).unwrap()
}

#[test]
fn extract_then_train_then_predict() {
    let ws = Workspace::new();
    let (fasta, tm) = ws.corpus(20, 1);
    let table = ws.path("features.csv");
    let arff = ws.path("features.arff");
    let out = gpcr(&[
        "extract-features",
        "--fasta",
        path_str(&fasta),
        "--topology",
        path_str(&tm),
        "--out",
        path_str(&table),
        "--arff",
        path_str(&arff),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(&table).unwrap();
    assert_eq!(csv.lines().count(), 41);
    assert!(csv.starts_with("id,A,C,D,E,F,G,H,I,K,L,M,N,P,Q,R,S,T,V,W,Y,ntl,ecl1,ecl2,ecl3,label"));
    assert!(fs::read_to_string(&arff)
        .unwrap()
        .contains("@attribute class {human,other}"));

    let model = ws.path("model.json");
    let out = gpcr(&["train", "--table", path_str(&table), "--out", path_str(&model)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&model).unwrap()).unwrap();
    assert_eq!(json["schema"], "gpcr-svm/1");
    assert_eq!(json["gamma"], 10.0);

    let out = gpcr(&["predict", "--table", path_str(&table), "--model", path_str(&model)]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("id\tpredicted\tdecision\n"));
    assert_eq!(text.lines().count(), 41);

    // the same pipeline straight from FASTA + topology
    let out = gpcr(&[
        "predict",
        "--fasta",
        path_str(&fasta),
        "--topology",
        path_str(&tm),
        "--model",
        path_str(&model),
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let preds: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(preds.as_array().unwrap().len(), 40);
}

#[test]
fn evaluate_reproduces_reported_statistics() {
    let ws = Workspace::new();
    let train = ws.file("train.csv", &separable_table(20));
    let model = ws.path("model.json");
    assert_eq!(
        code(&gpcr(&[
            "train",
            "--table",
            path_str(&train),
            "--out",
            path_str(&model)
        ])),
        0
    );

    // 14 human, 20 other, 2 other that look human -> (14, 2, 0, 20)
    let mut rows = Vec::new();
    for i in 0..14 {
        rows.push(row(&format!("T{i}_HUMAN"), 0.9, Label::Human));
    }
    for i in 0..22 {
        let signal = if i < 2 { 0.9 } else { 0.1 };
        rows.push(row(&format!("T{i}_RAT"), signal, Label::Other));
    }
    let test = ws.file("test.csv", &write_feature_table(&rows).unwrap());
    let out = gpcr(&["evaluate", "--table", path_str(&test), "--model", path_str(&model)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let collapsed = text.split_whitespace().collect::<Vec<_>>().join(" ");
    assert!(
        collapsed.contains("Correctly Classified Instances 34 94.4444 %"),
        "{text}"
    );
    assert!(collapsed.contains("Kappa statistic 0.8861"), "{text}");
    assert!(collapsed.contains("Mean absolute error 0.0556"), "{text}");
    assert!(collapsed.contains("Root mean squared error 0.2357"), "{text}");
    assert!(collapsed.contains("Sensitivity 100.0000 %"), "{text}");
    assert!(collapsed.contains("Specificity 90.9091 %"), "{text}");

    let out = gpcr(&[
        "evaluate",
        "--table",
        path_str(&test),
        "--model",
        path_str(&model),
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        v["svm"]["matrix"],
        serde_json::json!({"tp": 14, "fp": 2, "fn": 0, "tn": 20})
    );
}

#[test]
fn defaults_match_explicit_flags_and_cv_is_reproducible() {
    let ws = Workspace::new();
    let (fasta, tm) = ws.corpus(15, 3);
    let base = ["--fasta", path_str(&fasta), "--topology", path_str(&tm)];
    let run = |extra: &[&str]| {
        let mut args = vec!["cross-validate"];
        args.extend_from_slice(&base);
        args.extend_from_slice(extra);
        let out = gpcr(&args);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        stdout(&out)
    };
    let defaults = run(&[]);
    let explicit = run(&[
        "--gamma",
        "10",
        "--c",
        "1.0",
        "--kkt-tol",
        "0.001",
        "--normalize",
        "minmax",
        "--cv",
        "10",
        "--seed",
        "42",
    ]);
    assert_eq!(defaults, explicit);
    assert_eq!(defaults, run(&[]));
    assert!(defaults.contains("Stratified 10-fold cross-validation"));

    let json_a = run(&["--format", "json", "--baseline", "nb"]);
    let json_b = run(&["--format", "json", "--baseline", "nb"]);
    assert_eq!(json_a, json_b);
    let v: serde_json::Value = serde_json::from_str(&json_a).unwrap();
    assert_eq!(v["folds"].as_array().unwrap().len(), 10);
    assert!(v["naive_bayes"]["accuracy"].is_number());

    // evaluate --cv is the same experiment
    let mut args = vec!["evaluate"];
    args.extend_from_slice(&base);
    args.extend_from_slice(&["--cv", "10"]);
    assert_eq!(stdout(&gpcr(&args)), defaults);

    let mut args = vec!["evaluate"];
    args.extend_from_slice(&base);
    args.extend_from_slice(&["--holdout", "20", "--baseline", "nb"]);
    let out = gpcr(&args);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("Naive Bayes"));
}

#[test]
fn grid_search_ranks_and_breaks_ties() {
    let ws = Workspace::new();
    let table = ws.file("t.csv", &separable_table(10));
    let out = gpcr(&[
        "grid-search",
        "--table",
        path_str(&table),
        "--gammas",
        "10,1",
        "--cs",
        "10,1",
        "--cv",
        "5",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let ranked: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let ranked = ranked.as_array().unwrap();
    assert_eq!(ranked.len(), 4);
    // perfectly separable: every pair is tied at 100 %, smaller C then smaller gamma wins
    assert_eq!(ranked[0]["accuracy"], 1.0);
    assert_eq!(
        (ranked[0]["c"].as_f64(), ranked[0]["gamma"].as_f64()),
        (Some(1.0), Some(1.0))
    );
    assert_eq!(
        (ranked[1]["c"].as_f64(), ranked[1]["gamma"].as_f64()),
        (Some(1.0), Some(10.0))
    );

    let out = gpcr(&[
        "grid-search",
        "--table",
        path_str(&table),
        "--gammas",
        "1,-2",
        "--cs",
        "1",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn exit_codes() {
    let ws = Workspace::new();
    let table = ws.file("t.csv", &separable_table(6));
    let t = path_str(&table);
    let model = ws.path("m.json");
    let m = path_str(&model);

    // 0: help
    assert_eq!(code(&gpcr(&["--help"])), 0);

    // 1: argument validation
    assert_eq!(code(&gpcr(&["bogus"])), 1);
    assert_eq!(code(&gpcr(&["train", "--table", t, "--out", m, "--gamma", "0"])), 1);
    assert_eq!(code(&gpcr(&["train", "--table", t, "--out", m, "--c", "-1"])), 1);
    assert_eq!(code(&gpcr(&["cross-validate", "--table", t, "--cv", "1"])), 1);
    assert_eq!(code(&gpcr(&["train", "--out", m])), 1);
    assert_eq!(code(&gpcr(&["evaluate", "--table", t])), 1);
    assert_eq!(
        code(&gpcr(&["train", "--table", t, "--out", m, "--normalize", "zscore"])),
        1
    );

    // 2: missing or malformed input
    assert_eq!(code(&gpcr(&["train", "--table", "/nonexistent/t.csv", "--out", m])), 2);
    let bad_fasta = ws.file("bad.fasta", "MKVL\n>X_HUMAN\nMK\n");
    let tm = ws.file("empty.tmhmm", "");
    let out = gpcr(&[
        "extract-features",
        "--fasta",
        path_str(&bad_fasta),
        "--topology",
        path_str(&tm),
        "--out",
        m,
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    let bad_table = ws.file("bad.csv", "id,x\nA,1\n");
    assert_eq!(code(&gpcr(&["train", "--table", path_str(&bad_table), "--out", m])), 2);

    // 3: nothing survives filtering (no topology for any sequence)
    let fasta = ws.file("one.fasta", ">P1_HUMAN\nMKVLAAGG\n");
    let out = gpcr(&[
        "extract-features",
        "--fasta",
        path_str(&fasta),
        "--topology",
        path_str(&tm),
        "--out",
        m,
    ]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("NO_TOPOLOGY"));

    // 4: degenerate data (a single class)
    let rows: Vec<_> = (0..4)
        .map(|i| row(&format!("H{i}_HUMAN"), 0.5 + 0.1 * i as f64, Label::Human))
        .collect();
    let one_class = ws.file("one.csv", &write_feature_table(&rows).unwrap());
    assert_eq!(code(&gpcr(&["train", "--table", path_str(&one_class), "--out", m])), 4);

    // 5: unreadable or foreign model files
    assert_eq!(code(&gpcr(&["train", "--table", t, "--out", m])), 0);
    let text = fs::read_to_string(&model).unwrap();
    let foreign = ws.file("foreign.json", &text.replace("gpcr-svm/1", "gpcr-svm/9"));
    assert_eq!(
        code(&gpcr(&["predict", "--table", t, "--model", path_str(&foreign)])),
        5
    );
    let garbage = ws.file("garbage.json", "{\"schema\": \"gpcr-svm/1\"}");
    assert_eq!(
        code(&gpcr(&["predict", "--table", t, "--model", path_str(&garbage)])),
        5
    );
}

#[test]
fn label_overrides_and_nb_training() {
    let ws = Workspace::new();
    let (fasta, tm) = ws.corpus(8, 5);
    let labels = ws.file("labels.tsv", "# id\tlabel\nSYN0001_HUMAN\tother\n");
    let table = ws.path("t.csv");
    let out = gpcr(&[
        "extract-features",
        "--fasta",
        path_str(&fasta),
        "--topology",
        path_str(&tm),
        "--labels",
        path_str(&labels),
        "--out",
        path_str(&table),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(&table).unwrap();
    let first = csv.lines().find(|l| l.starts_with("SYN0001_HUMAN")).unwrap();
    assert!(first.ends_with(",other"));

    let nb = ws.path("nb.json");
    let out = gpcr(&[
        "train",
        "--table",
        path_str(&table),
        "--baseline",
        "nb",
        "--out",
        path_str(&nb),
    ]);
    assert_eq!(code(&out), 0);
    assert!(fs::read_to_string(&nb).unwrap().contains("gpcr-nb/1"));
}
