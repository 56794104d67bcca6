use std::fs;
use std::path::Path;

use log::{info, warn};
use serde::de::DeserializeOwned;

use fuzzsel_core::dataset::{feature_stats, impute_zero_median, load_costs, load_csv, load_unlabeled_csv, project, stratified_split};
use fuzzsel_core::eval::{build_report, emit_plot_data, score};
use fuzzsel_core::rules::{format_rules, parse_rules, parse_rules_restricted};
use fuzzsel_core::selector::{predict, reporting_split, run_baseline, run_selection, Selection};
use fuzzsel_core::{BaselineRun, CostTable, Dataset, GaError, Schema, SelectionResult, SelectorError};

use crate::config::{Impute, RunConfig};
use crate::model::TrainedModel;
use crate::{files, ClassifyArgs, Failure, ReportArgs};

struct Inputs {
    data: Dataset,
    costs: CostTable,
}

fn load_inputs(rc: &RunConfig) -> Result<Inputs, Failure> {
    let schema = Schema::load(&rc.schema).map_err(Failure::usage)?;
    let costs = match &rc.costs {
        Some(p) => load_costs(p, &schema).map_err(Failure::usage)?,
        None => CostTable::from_schema(&schema),
    };
    let schema = schema.with_costs(&costs);
    let data = load_csv(&rc.data, &schema).map_err(Failure::usage)?;
    Ok(Inputs { data, costs })
}

fn selector_failure(e: SelectorError) -> Failure {
    match e {
        SelectorError::Ga(GaError::InvalidParams(_)) => Failure::usage(e),
        SelectorError::Ga(_) | SelectorError::Eval(_) => Failure::internal(e),
        _ => Failure::usage(e),
    }
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::internal(format!("{}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

pub fn validate(rc: &RunConfig) -> Result<(), Failure> {
    let Inputs { data, costs } = load_inputs(rc)?;
    let schema = data.schema();
    println!(
        "{} records, {} features ({} {}, {} {})",
        data.n_records(),
        data.n_features(),
        data.class_count(0),
        schema.negative_label(),
        data.class_count(1),
        schema.positive_label()
    );
    println!(
        "{:<26} {:>10} {:>10} {:>10} {:>6} {:>6}",
        "feature", "min", "max", "mean", "zeros", "cost"
    );
    let mut anomalies = Vec::new();
    for ((j, f), s) in schema.features().iter().enumerate().zip(feature_stats(&data)) {
        let zeros = data.column(j).filter(|&v| v == 0.0).count();
        println!(
            "{:<26} {:>10.3} {:>10.3} {:>10.3} {:>6} {:>6}",
            f.name, s.min, s.max, s.mean, zeros, costs.costs()[j]
        );
        if f.impute_zero && zeros > 0 {
            anomalies.push(format!("{}: {zeros} zero values (missing measurements)", f.name));
        }
        if let Some((lo, hi)) = f.value_range() {
            let outside = data.column(j).filter(|&v| v < lo || v > hi).count();
            if outside > 0 {
                anomalies.push(format!("{}: {outside} values outside [{lo}, {hi}]", f.name));
            }
        }
    }
    println!("total cost: {}", costs.total_cost());
    if anomalies.is_empty() {
        println!("no anomalies");
    } else {
        println!("anomalies:");
        for a in anomalies {
            println!("  {a}");
        }
    }
    Ok(())
}

/// Merges hand-written rules into the final model. Rules that need a feature
/// the GA dropped are skipped.
fn merge_expert_rules(rc: &RunConfig, data: &Dataset, sel: &mut Selection) -> Result<(), Failure> {
    let Some(path) = &rc.rules else {
        return Ok(());
    };
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let mask = &sel.result.best_mask;
    let absent: Vec<&str> = data
        .schema()
        .features()
        .iter()
        .enumerate()
        .filter(|&(i, _)| !mask.get(i))
        .map(|(_, f)| f.name.as_str())
        .collect();
    let (expert, dropped) = parse_rules_restricted(&text, sel.model.inputs(), sel.model.output(), &absent)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    if !dropped.is_empty() {
        warn!("{}: skipped rules on lines {dropped:?} (unselected features)", path.display());
    }
    info!("merging {} expert rules", expert.len());
    let mut rules = sel.model.rules().to_vec();
    rules.extend(expert);
    sel.model = sel.model.with_rules(rules).map_err(Failure::usage)?;

    let (_, test) = reporting_split(data, &rc.fitness).map_err(selector_failure)?;
    let test = project(&test, mask).map_err(Failure::internal)?;
    let preds = predict(&sel.model, &test).map_err(selector_failure)?;
    let (accuracy, confusion) = score(&preds, test.labels()).map_err(Failure::internal)?;
    sel.result.accuracy = accuracy;
    sel.result.confusion = confusion;
    Ok(())
}

fn impute(rc: &RunConfig, data: Dataset) -> Result<Dataset, Failure> {
    match rc.impute {
        Impute::None => Ok(data),
        Impute::Median => {
            let split = stratified_split(&data, &rc.fitness.report_split).map_err(Failure::usage)?;
            Ok(impute_zero_median(&data, &split[0].train))
        }
    }
}

pub fn select(rc: &RunConfig) -> Result<(), Failure> {
    let Inputs { data, costs } = load_inputs(rc)?;
    let data = impute(rc, data)?;
    for w in rc.ga.range_warnings() {
        warn!("{w}");
    }

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = rc.workers {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(Failure::internal)?;
    let (baseline, mut sel) = pool.install(|| -> Result<_, Failure> {
        let baseline = run_baseline(&data, &costs, &rc.fitness, &rc.induction).map_err(selector_failure)?;
        let sel = run_selection(&data, &costs, &rc.ga, &rc.fitness, &rc.induction).map_err(selector_failure)?;
        Ok((baseline, sel))
    })?;
    sel.result.provenance.master_seed = Some(rc.seed);
    merge_expert_rules(rc, &data, &mut sel)?;

    let model = TrainedModel::new(data.schema(), &sel.result.best_mask, sel.model.clone());
    fs::create_dir_all(&rc.out).map_err(|e| Failure::internal(format!("{}: {e}", rc.out.display())))?;
    write(&rc.out.join(files::RESULT), &to_json(&sel.result))?;
    write(&rc.out.join(files::BASELINE), &to_json(&baseline))?;
    write(&rc.out.join(files::MODEL), &model.to_json())?;
    write(&rc.out.join(files::TRACE), &sel.result.trace.to_csv())?;
    write(&rc.out.join(files::RULES), &format_rules(&sel.model))?;

    let r = &sel.result;
    println!("selected {} of {}: {}", r.best_mask.count_ones(), r.best_mask.len(), r.selected_names.join(", "));
    println!("mask {}  fitness {:.4}", r.best_mask, r.fitness);
    println!(
        "holdout accuracy {:.1}% (all features {:.1}%)",
        r.accuracy * 100.0,
        baseline.accuracy * 100.0
    );
    println!("cost {} of {}", r.cost, r.total_cost);
    println!("wrote {}", rc.out.display());
    Ok(())
}

pub fn classify(args: &ClassifyArgs) -> Result<(), Failure> {
    let mut model = TrainedModel::load(&args.model).map_err(Failure::usage)?;
    if let Some(path) = &args.rules {
        let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        let rules = parse_rules(&text, model.fis.inputs(), model.fis.output())
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        model.fis = model.fis.with_rules(rules).map_err(Failure::usage)?;
    }
    let records = load_unlabeled_csv(&args.data).map_err(Failure::usage)?;
    println!("record,crisp,class,top_rule");
    for (i, rec) in records.iter().enumerate() {
        let x = model.inputs_for(rec).map_err(|_| {
            Failure::usage(format!(
                "record {}: arity mismatch, expected {} (selected features) or {} (full schema) values, found {}",
                i + 1,
                model.feature_indices.len(),
                model.schema_width,
                rec.len()
            ))
        })?;
        let inf = model
            .fis
            .infer(&x)
            .map_err(|e| Failure::usage(format!("record {}: {e}", i + 1)))?;
        let top = inf
            .top_rule()
            .map(|r| model.fis.describe_rule(&model.fis.rules()[r]))
            .unwrap_or_else(|| "none".into());
        println!("{},{:.6},{},{}", i + 1, inf.crisp, model.label_for(inf.class), top);
    }
    Ok(())
}

pub fn report(args: &ReportArgs) -> Result<(), Failure> {
    let result_path = args.result.clone().unwrap_or_else(|| args.run.join(files::RESULT));
    let baseline_path = args.baseline.clone().unwrap_or_else(|| args.run.join(files::BASELINE));
    let result: SelectionResult = read_json(&result_path)?;
    let baseline: BaselineRun = read_json(&baseline_path)?;
    let report = build_report(&baseline, &result).map_err(Failure::usage)?;

    let out = args.out.clone().unwrap_or_else(|| args.run.clone());
    emit_plot_data(&report, &result.trace, &out).map_err(Failure::internal)?;
    write(&out.join(files::REPORT), &(report.to_json() + "\n"))?;
    println!("{report}");
    Ok(())
}
