use std::path::Path;

use anyhow::{bail, Context, Result};
use fwdlda::crossval::{cross_validate_with, mean_accuracy, FoldResult};
use fwdlda::preprocess::{apply_recipe, fit_recipe, RawTable, Recipe, RecipeOptions, DEFAULT_PERIOD};
use fwdlda::{fit_ulda, forward_select, CostMatrix, Dataset, SelectionConfig, SelectionResult, UldaModel};
use fwdlda_experiments::{bench, lambda_zero, output, partial_f, type1};
use ndarray::Axis;
use serde::Serialize;

use crate::table::{parse_priors, read_costs, read_table, sidecar, split_list};
use crate::{InputArgs, ScenarioArg};

const RECIPE_SUFFIX: &str = "recipe.json";
const SELECTION_SUFFIX: &str = "selection.json";
const COSTS_SUFFIX: &str = "costs.csv";

fn recipe_options(input: &InputArgs) -> Result<RecipeOptions> {
    let mut opts = RecipeOptions::default();
    for item in split_list(&input.cyclic) {
        let (name, period) = match item.split_once(':') {
            Some((n, p)) => (n.trim().to_string(), p.trim().parse().with_context(|| format!("bad period in '{item}'"))?),
            None => (item, DEFAULT_PERIOD),
        };
        opts = opts.with_cyclic(name, period);
    }
    for name in split_list(&input.categorical) {
        opts = opts.with_categorical(name);
    }
    Ok(opts)
}

fn selection_config(input: &InputArgs) -> Result<Option<SelectionConfig>> {
    if !(input.alpha > 0.0 && input.alpha < 1.0) {
        bail!("--alpha must lie in (0, 1), got {}", input.alpha);
    }
    let cfg = input.select.criterion().map(|c| SelectionConfig::new(c).with_alpha(input.alpha));
    if let Some(cfg) = &cfg {
        cfg.validate()?;
    }
    Ok(cfg)
}

/// Reads the table and splits off the label column and dropped columns.
fn load_input(input: &InputArgs) -> Result<(RawTable, Vec<String>)> {
    let mut table = read_table(&input.data)?;
    let labels = table.take_column(&input.label)?;
    table.drop_columns(&split_list(&input.drop))?;
    if table.names().is_empty() {
        bail!("no feature columns left after removing the label and dropped columns");
    }
    Ok((table, labels))
}

fn encode<S: AsRef<str>>(recipe: &Recipe, table: &RawTable, labels: &[S]) -> Result<Dataset> {
    let (x, names) = apply_recipe(recipe, table)?;
    Ok(Dataset::new(x, labels, names)?)
}

/// Selected columns (all of them without a criterion) and the selection report.
fn choose(data: &Dataset, cfg: Option<&SelectionConfig>) -> Result<(Vec<usize>, Option<SelectionResult>)> {
    match cfg {
        Some(cfg) => {
            let r = forward_select(data, cfg)?;
            Ok((r.selected.clone(), Some(r)))
        }
        None => Ok(((0..data.n_features()).collect(), None)),
    }
}

pub fn train(input: &InputArgs, priors: &str, costs: Option<&Path>, out: &Path) -> Result<()> {
    let cfg = selection_config(input)?;
    let (table, labels) = load_input(input)?;
    let recipe = fit_recipe(&table, &recipe_options(input)?)?;
    let data = encode(&recipe, &table, &labels)?;
    let priors = parse_priors(priors, data.class_labels())?;
    let costs = costs.map(|p| read_costs(p, data.class_labels()).map(|c| (p, c))).transpose()?;

    let (cols, report) = choose(&data, cfg.as_ref())?;
    let sub = data.select_columns(&cols)?;
    let model = fit_ulda(&sub, priors.as_deref())?;

    model.save(out).with_context(|| format!("writing {}", out.display()))?;
    std::fs::write(sidecar(out, RECIPE_SUFFIX), recipe.to_json()?)?;
    if let Some(r) = &report {
        std::fs::write(sidecar(out, SELECTION_SUFFIX), r.to_json()?)?;
        println!("{r}");
    } else {
        println!("no selection; fitted all {} columns", cols.len());
    }
    let predicted = model.predict_codes(sub.x(), costs.as_ref().map(|(_, c)| c))?;
    if let Some((path, _)) = &costs {
        std::fs::copy(path, sidecar(out, COSTS_SUFFIX))?;
    }
    let hits = predicted.iter().zip(sub.codes()).filter(|(p, t)| p == t).count();
    println!(
        "training accuracy: {:.6} ({} of {} rows, {} directions)",
        hits as f64 / sub.n_obs() as f64,
        hits,
        sub.n_obs(),
        model.n_directions()
    );
    Ok(())
}

pub fn predict(
    model_path: &Path,
    data: &Path,
    posterior: bool,
    costs: Option<&Path>,
    label: Option<&str>,
    out: &Path,
) -> Result<()> {
    let model = UldaModel::load(model_path).with_context(|| format!("loading {}", model_path.display()))?;
    let recipe_path = sidecar(model_path, RECIPE_SUFFIX);
    let recipe = Recipe::from_json(
        &std::fs::read_to_string(&recipe_path).with_context(|| format!("reading {}", recipe_path.display()))?,
    )?;
    let table = read_table(data)?;
    let (x, names) = apply_recipe(&recipe, &table)?;
    let cols = model
        .column_names()
        .iter()
        .map(|c| names.iter().position(|n| n == c).with_context(|| format!("model column '{c}' not produced by the recipe")))
        .collect::<Result<Vec<_>>>()?;
    let x = x.select(Axis(1), &cols);

    let stored = sidecar(model_path, COSTS_SUFFIX);
    let cost_path = costs.map(Path::to_path_buf).or_else(|| stored.exists().then_some(stored));
    let costs: Option<CostMatrix> = cost_path.map(|p| read_costs(&p, model.class_labels())).transpose()?;
    let codes = model.predict_codes(x.view(), costs.as_ref())?;
    let post = if posterior { Some(model.posterior_matrix(x.view())?) } else { None };

    let mut w = csv::Writer::from_path(out).with_context(|| format!("writing {}", out.display()))?;
    let mut header = vec!["predicted".to_string()];
    if post.is_some() {
        header.extend(model.class_labels().iter().map(|l| format!("p_{l}")));
    }
    w.write_record(&header)?;
    for (r, &code) in codes.iter().enumerate() {
        let mut rec = vec![model.class_labels()[code].clone()];
        if let Some(p) = &post {
            rec.extend(p.row(r).iter().map(|v| format!("{v:?}")));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;

    if let Some(label) = label {
        let idx = table.column_index(label)?;
        let truth: Vec<&str> = table.column(idx).collect();
        let hits = codes.iter().zip(&truth).filter(|(&c, t)| model.class_labels()[c] == **t).count();
        println!("accuracy: {:.6} ({} of {} rows)", hits as f64 / truth.len() as f64, hits, truth.len());
    }
    Ok(())
}

#[derive(Serialize)]
struct FoldRow {
    fold: String,
    n_train: usize,
    n_test: usize,
    n_selected: usize,
    accuracy: f64,
}

pub fn crossval(input: &InputArgs, folds: usize, seed: u64, out: Option<&Path>) -> Result<()> {
    let cfg = selection_config(input)?;
    let (table, labels) = load_input(input)?;
    if folds > table.n_rows() {
        bail!("--folds {folds} exceeds the {} rows", table.n_rows());
    }
    let options = recipe_options(input)?;
    let results = cross_validate_with(table.n_rows(), folds, seed, |fold, train, test| {
        let train_table = table.select_rows(train);
        let recipe = fit_recipe(&train_table, &options)?;
        let train_labels: Vec<&str> = train.iter().map(|&r| labels[r].as_str()).collect();
        let data = encode(&recipe, &train_table, &train_labels)
            .map_err(|e| fwdlda::Error::InvalidDataset(format!("fold {fold}: {e:#}")))?;
        let (cols, _) = choose(&data, cfg.as_ref()).map_err(|e| fwdlda::Error::Numerical(format!("{e:#}")))?;
        let model = fit_ulda(&data.select_columns(&cols)?, None)?;
        let (x_test, _) = apply_recipe(&recipe, &table.select_rows(test))?;
        let pred = model.predict(x_test.select(Axis(1), &cols).view(), None)?;
        let hits = pred.iter().zip(test).filter(|(p, &r)| **p == labels[r]).count();
        Ok(FoldResult {
            fold,
            n_train: train.len(),
            n_test: test.len(),
            n_selected: cols.len(),
            accuracy: hits as f64 / test.len() as f64,
        })
    })?;

    let mut rows: Vec<FoldRow> = results
        .iter()
        .map(|f| FoldRow {
            fold: f.fold.to_string(),
            n_train: f.n_train,
            n_test: f.n_test,
            n_selected: f.n_selected,
            accuracy: f.accuracy,
        })
        .collect();
    let mean = mean_accuracy(&results);
    rows.push(FoldRow {
        fold: "mean".into(),
        n_train: 0,
        n_test: table.n_rows(),
        n_selected: 0,
        accuracy: mean,
    });
    match out {
        Some(path) => {
            let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
            println!("mean accuracy over {folds} folds: {mean:.6}");
        }
        None => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn parse_m_list(s: Option<&str>, default: &[usize]) -> Result<Vec<usize>> {
    match s {
        None => Ok(default.to_vec()),
        Some(s) => split_list(s)
            .iter()
            .map(|v| v.parse::<usize>().with_context(|| format!("bad M value '{v}'")))
            .collect(),
    }
}

pub fn simulate(
    scenario: ScenarioArg,
    seed: u64,
    reps: Option<usize>,
    out_dir: &Path,
    alpha: f64,
    m_list: Option<&str>,
    n: usize,
) -> Result<()> {
    let written = match scenario {
        ScenarioArg::PartialF => {
            let reps = reps.unwrap_or(10_000);
            let draws = partial_f::sim_partial_f(reps, seed)?;
            let summary = partial_f::summarize_partial_f(&draws);
            let pillai = partial_f::sim_null_pillai(reps, seed)?;
            let ks = partial_f::null_pillai_ks(&pillai);
            #[derive(Serialize)]
            struct PillaiRow {
                seed: u64,
                rep: usize,
                pillai: f64,
            }
            let pillai_rows: Vec<PillaiRow> =
                pillai.iter().enumerate().map(|(rep, &pillai)| PillaiRow { seed, rep, pillai }).collect();
            for s in &summary {
                println!(
                    "{} step {}: F({}, {}) mean {:.4} (ref {:.4}), KS p = {:.4}, p_above = {:.3e}, p_below = {:.3e}",
                    s.scenario, s.step, s.df1, s.df2, s.mean, s.reference_mean, s.ks_p, s.ks_p_above, s.ks_p_below
                );
            }
            println!("null Pillai vs Beta: D = {:.5}, KS p = {:.4}", ks.d, ks.p_value);
            vec![
                output::write_rows(out_dir, "partial_f", seed, &draws)?,
                output::write_rows(out_dir, "partial_f_summary", seed, &summary)?,
                output::write_rows(out_dir, "null_pillai", seed, &pillai_rows)?,
                output::write_rows(out_dir, "null_pillai_ks", seed, &[ks])?,
            ]
        }
        ScenarioArg::Type1 => {
            if !(alpha > 0.0 && alpha < 1.0) {
                bail!("--alpha must lie in (0, 1), got {alpha}");
            }
            let reps = reps.unwrap_or(type1::DEFAULT_REPS);
            let ms = parse_m_list(m_list, &type1::DEFAULT_M_LIST)?;
            let variants = [fwdlda::Criterion::Pillai, fwdlda::Criterion::Wilks, fwdlda::Criterion::WilksBonferroni];
            let mut rows = Vec::new();
            for sc in [type1::Scenario::IrisPlusNoise, type1::Scenario::PureNoise] {
                rows.extend(type1::sim_type1(sc, &ms, reps, &variants, alpha, seed)?);
            }
            for r in &rows {
                println!("{:<16} {:<16} M={:<4} rate {:.4} (bound {:.4})", r.scenario, r.variant, r.m, r.rate, r.nominal_bound);
            }
            vec![output::write_rows(out_dir, "type1", seed, &rows)?]
        }
        ScenarioArg::LambdaZero => {
            let rows = lambda_zero::sim_lambda_zero(seed)?;
            for r in &rows {
                println!(
                    "{:<17} {:<7} selected {:<3} stop {:<16} train {:.4} cv {:.4}",
                    r.scenario, r.criterion, r.n_selected, r.stop_reason, r.train_accuracy, r.cv_accuracy
                );
            }
            vec![output::write_rows(out_dir, "lambda_zero", seed, &rows)?]
        }
        ScenarioArg::Bench => {
            let reps = reps.unwrap_or(5);
            let ms = parse_m_list(m_list, &bench::DEFAULT_M_LIST)?;
            let rows = bench::bench_ulda(n, bench::DEFAULT_CLASSES, &ms, reps, seed)?;
            let summary = bench::summarize_bench(&rows);
            for s in &summary {
                println!(
                    "N={} M={:<5} plain {:.4}s  qr {:.4}s  speedup {:.2}  agree {}",
                    s.n, s.m, s.median_plain, s.median_qr, s.speedup, s.all_agree
                );
            }
            vec![
                output::write_rows(out_dir, "bench", seed, &rows)?,
                output::write_rows(out_dir, "bench_summary", seed, &summary)?,
            ]
        }
    };
    for p in written {
        log::info!("wrote {}", p.display());
    }
    Ok(())
}
