use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fwdlda::{CostMatrix, UldaModel};
use ndarray::array;

const BIN: &str = env!("CARGO_BIN_EXE_fwdlda");

const IRIS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../experiments/data/iris.csv");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn train_iris(dir: &Path, extra: &[&str]) -> (PathBuf, Output) {
    let model = dir.join("model.json");
    let mut args = vec!["train", "--data", IRIS, "--label", "species", "--out", p(&model)];
    args.extend_from_slice(extra);
    let out = run(&args);
    (model, out)
}

#[test]
fn train_with_pillai_writes_model_recipe_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let (model, out) = train_iris(dir.path(), &["--select", "pillai"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("forward selection (pillai"));
    assert!(text.contains("training accuracy"));
    assert!(dir.path().join("model.recipe.json").exists());
    assert!(dir.path().join("model.selection.json").exists());
    let m = UldaModel::load(&model).unwrap();
    assert!(!m.column_names().is_empty() && m.column_names().len() <= 4);
}

#[test]
fn zero_alpha_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let (model, out) = train_iris(dir.path(), &["--alpha", "0"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--alpha"));
    assert!(!model.exists());
}

#[test]
fn select_none_fits_all_columns() {
    let dir = tempfile::tempdir().unwrap();
    let (model, out) = train_iris(dir.path(), &["--select", "none"]);
    assert!(out.status.success());
    assert_eq!(UldaModel::load(&model).unwrap().column_names().len(), 4);
    assert!(!dir.path().join("model.selection.json").exists());
}

#[test]
fn unknown_label_column_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["train", "--data", IRIS, "--label", "nope", "--out", p(&dir.path().join("m.json"))]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope"));
}

#[test]
fn predict_matches_training_report_and_posteriors_sum_to_one() {
    let dir = tempfile::tempdir().unwrap();
    let (model, out) = train_iris(dir.path(), &[]);
    let train_line = stdout(&out).lines().find(|l| l.starts_with("training accuracy")).unwrap().to_string();
    let train_acc = train_line.split_whitespace().nth(2).unwrap().to_string();

    let pred = dir.path().join("pred.csv");
    let out = run(&[
        "predict", "--model", p(&model), "--data", IRIS, "--label", "species", "--posterior", "--out", p(&pred),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let acc = stdout(&out).split_whitespace().nth(1).unwrap().to_string();
    assert_eq!(acc, train_acc);

    let (header, rows) = read_csv(&pred);
    assert_eq!(header, ["predicted", "p_setosa", "p_versicolor", "p_virginica"]);
    assert_eq!(rows.len(), 150);
    for row in rows {
        let s: f64 = row[1..].iter().map(|v| v.parse::<f64>().unwrap()).sum();
        assert!((s - 1.0).abs() < 1e-12);
    }
}

#[test]
fn cost_matrix_decisions_match_library() {
    let dir = tempfile::tempdir().unwrap();
    let (model, _) = train_iris(dir.path(), &["--select", "none"]);
    // Rows: predicted label; columns: true label. Missing a virginica is expensive.
    let costs = dir.path().join("costs.csv");
    std::fs::write(
        &costs,
        "predicted,virginica,setosa,versicolor\nsetosa,50,0,1\nversicolor,50,1,0\nvirginica,0,1,1\n",
    )
    .unwrap();
    let pred = dir.path().join("pred.csv");
    let out = run(&["predict", "--model", p(&model), "--data", IRIS, "--costs", p(&costs), "--out", p(&pred)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (_, rows) = read_csv(&pred);

    let m = UldaModel::load(&model).unwrap();
    assert_eq!(m.class_labels(), ["setosa", "versicolor", "virginica"]);
    let c = CostMatrix::new(array![[0.0, 1.0, 50.0], [1.0, 0.0, 50.0], [1.0, 1.0, 0.0]]).unwrap();
    let (x, labels) = fwdlda_experiments::data::iris();
    let expected = m.predict(x.view(), Some(&c)).unwrap();
    let got: Vec<String> = rows.into_iter().map(|r| r[0].clone()).collect();
    assert_eq!(got, expected);
    let plain = m.predict(x.view(), None).unwrap();
    let virginica_plain = plain.iter().filter(|l| *l == "virginica").count();
    let virginica_costly = got.iter().filter(|l| *l == "virginica").count();
    assert!(virginica_costly >= virginica_plain);
    assert_eq!(labels.len(), got.len());
}

#[test]
fn predict_rejects_missing_columns() {
    let dir = tempfile::tempdir().unwrap();
    let (model, _) = train_iris(dir.path(), &["--select", "none"]);
    let data = dir.path().join("partial.csv");
    std::fs::write(&data, "sepal_length,sepal_width\n5.1,3.5\n").unwrap();
    let out = run(&["predict", "--model", p(&model), "--data", p(&data), "--out", p(&dir.path().join("o.csv"))]);
    assert!(!out.status.success());
}

fn small_fixture(dir: &Path) -> PathBuf {
    let path = dir.join("small.csv");
    let mut text = String::from("id,angle,colour,x,label\n");
    for i in 0..20 {
        let class = if i % 2 == 0 { "a" } else { "b" };
        let angle = if i % 2 == 0 { 350 + i } else { 170 + i } % 360;
        let colour = ["red", "green", "NA"][i % 3];
        let x = if i == 7 { String::new() } else { format!("{}", (i * 7 % 11) as f64 / 3.0) };
        text.push_str(&format!("{i},{angle},{colour},{x},{class}\n"));
    }
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn leave_one_out_emits_one_row_per_observation() {
    let dir = tempfile::tempdir().unwrap();
    let data = small_fixture(dir.path());
    let out_csv = dir.path().join("cv.csv");
    let out = run(&[
        "crossval", "--data", p(&data), "--label", "label", "--drop", "id", "--cyclic", "angle:360", "--folds", "20",
        "--out", p(&out_csv),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&out_csv);
    assert_eq!(header, ["fold", "n_train", "n_test", "n_selected", "accuracy"]);
    assert_eq!(rows.len(), 21);
    assert!(rows[..20].iter().all(|r| r[1] == "19" && r[2] == "1"));
    assert_eq!(rows[20][0], "mean");
    // The cos/sin encoding separates the two angle clusters.
    assert_eq!(rows[20][4].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn crossval_is_deterministic_and_rejects_too_many_folds() {
    let args = ["crossval", "--data", IRIS, "--label", "species", "--folds", "10", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let lines: Vec<String> = stdout(&a).lines().map(String::from).collect();
    assert_eq!(lines.len(), 12);
    let out = run(&["crossval", "--data", IRIS, "--label", "species", "--folds", "151"]);
    assert!(!out.status.success());
}

#[test]
fn one_hot_design_cross_validates_perfectly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("onehot.csv");
    let d = fwdlda_experiments::data::one_hot(500, 10);
    let mut w = csv::Writer::from_path(&path).unwrap();
    let mut header: Vec<String> = d.column_names().to_vec();
    header.push("class".into());
    w.write_record(&header).unwrap();
    let labels = d.labels();
    for (row, label) in d.x().outer_iter().zip(&labels) {
        let mut rec: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        rec.push(label.to_string());
        w.write_record(&rec).unwrap();
    }
    w.flush().unwrap();
    let out = run(&["crossval", "--data", p(&path), "--label", "class", "--select", "pillai"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mean = text.lines().last().unwrap();
    assert!(mean.starts_with("mean,") && mean.ends_with(",1.0"), "{mean}");
    assert!(text.lines().skip(1).take(10).all(|l| l.split(',').nth(3) == Some("9")));
}

#[test]
fn simulate_type1_writes_one_row_per_variant_and_m() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["simulate", "--scenario", "type1", "--reps", "200", "--out-dir", p(dir.path())]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("type1_seed42.csv"));
    assert_eq!(&header[..3], ["scenario", "variant", "m"]);
    assert_eq!(rows.len(), 2 * 3 * 8);
    let mut keys: Vec<(String, String, String)> = rows.iter().map(|r| (r[0].clone(), r[1].clone(), r[2].clone())).collect();
    keys.sort();
    keys.dedup();
    assert_eq!(keys.len(), rows.len());
}

#[test]
fn simulate_requires_out_dir() {
    let out = run(&["simulate", "--scenario", "type1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--out-dir"));
}

#[test]
fn simulate_rejects_unknown_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["simulate", "--scenario", "nope", "--out-dir", p(dir.path())]);
    assert!(!out.status.success());
}

#[test]
fn simulate_bench_agrees_across_paths() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "simulate", "--scenario", "bench", "--reps", "3", "--n", "400", "--m-list", "4,32", "--out-dir", p(dir.path()),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("bench_seed42.csv"));
    let agree = header.iter().position(|h| h == "agree").unwrap();
    assert_eq!(rows.len(), 2 * 3 * 2);
    assert!(rows.iter().all(|r| r[agree] == "true"));
}

#[test]
fn simulate_lambda_zero_and_partial_f_write_csv() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(&["simulate", "--scenario", "lambda-zero", "--out-dir", p(dir.path())]).status.success());
    let (_, rows) = read_csv(&dir.path().join("lambda_zero_seed42.csv"));
    assert_eq!(rows.len(), 6);
    assert!(run(&["simulate", "--scenario", "partial-f", "--reps", "100", "--seed", "3", "--out-dir", p(dir.path())])
        .status
        .success());
    let (_, rows) = read_csv(&dir.path().join("partial_f_seed3.csv"));
    assert_eq!(rows.len(), 300);
    assert!(dir.path().join("null_pillai_seed3.csv").exists());
}

#[test]
fn explicit_priors_shift_decisions() {
    let dir = tempfile::tempdir().unwrap();
    let (model, out) = train_iris(dir.path(), &["--priors", "setosa=0.1,versicolor=0.1,virginica=0.8"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let m = UldaModel::load(&model).unwrap();
    assert!((m.priors()[2] - 0.8).abs() < 1e-15);
    let bad = train_iris(dir.path(), &["--priors", "0.5,0.5"]).1;
    assert!(!bad.status.success());
}
