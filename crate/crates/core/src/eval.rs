//! Scoring, the with/without-selection comparison, and plot data files.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::SplitPlan;
use crate::ga::EvolutionTrace;
use crate::selector::SelectionResult;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{predictions} predictions for {labels} labels")]
    LengthMismatch { predictions: usize, labels: usize },
    #[error("nothing to score")]
    Empty,
    #[error("runs are not comparable: {0}")]
    FingerprintMismatch(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Binary confusion counts; class 1 is positive.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn accuracy(&self) -> f64 {
        (self.tp + self.tn) as f64 / self.total() as f64
    }
}

/// Accuracy and confusion counts of `predictions` against `labels`.
pub fn score(predictions: &[u8], labels: &[u8]) -> Result<(f64, ConfusionMatrix), EvalError> {
    if predictions.len() != labels.len() {
        return Err(EvalError::LengthMismatch {
            predictions: predictions.len(),
            labels: labels.len(),
        });
    }
    if labels.is_empty() {
        return Err(EvalError::Empty);
    }
    let mut cm = ConfusionMatrix::default();
    for (&p, &y) in predictions.iter().zip(labels) {
        match (p == 1, y == 1) {
            (true, true) => cm.tp += 1,
            (true, false) => cm.fp += 1,
            (false, false) => cm.tn += 1,
            (false, true) => cm.fn_ += 1,
        }
    }
    Ok((cm.accuracy(), cm))
}

/// All-features classifier scored on the reporting holdout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineRun {
    pub feature_count: usize,
    pub accuracy: f64,
    pub confusion: ConfusionMatrix,
    pub cost: f64,
    pub dataset_fingerprint: String,
    pub report_split: SplitPlan,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub label: String,
    pub feature_count: usize,
    pub accuracy: f64,
    pub cost: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub rows: Vec<ReportRow>,
    pub selected_names: Vec<String>,
    pub total_cost: f64,
    pub dataset_fingerprint: String,
}

impl ComparisonReport {
    pub fn baseline(&self) -> &ReportRow {
        &self.rows[0]
    }

    pub fn selected(&self) -> &ReportRow {
        &self.rows[1]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Pairs a baseline with a selection run made on the same data and holdout.
pub fn build_report(baseline: &BaselineRun, selected: &SelectionResult) -> Result<ComparisonReport, EvalError> {
    let prov = &selected.provenance;
    if baseline.dataset_fingerprint != prov.dataset_fingerprint {
        return Err(EvalError::FingerprintMismatch(format!(
            "dataset {} vs {}",
            baseline.dataset_fingerprint, prov.dataset_fingerprint
        )));
    }
    if baseline.report_split != prov.fitness.report_split {
        return Err(EvalError::FingerprintMismatch("different reporting splits".into()));
    }
    Ok(ComparisonReport {
        rows: vec![
            ReportRow {
                label: "without GA".into(),
                feature_count: baseline.feature_count,
                accuracy: baseline.accuracy,
                cost: baseline.cost,
            },
            ReportRow {
                label: "with GA".into(),
                feature_count: selected.best_mask.count_ones(),
                accuracy: selected.accuracy,
                cost: selected.cost,
            },
        ],
        selected_names: selected.selected_names.clone(),
        total_cost: selected.total_cost,
        dataset_fingerprint: baseline.dataset_fingerprint.clone(),
    })
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<12} {:>9} {:>10} {:>8}", "run", "features", "accuracy", "cost")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<12} {:>9} {:>9.1}% {:>8}",
                r.label,
                r.feature_count,
                r.accuracy * 100.0,
                r.cost
            )?;
        }
        write!(f, "selected: {}", self.selected_names.join(", "))
    }
}

pub const COST_PLOT_FILE: &str = "cost_comparison.csv";
pub const TRACE_PLOT_FILE: &str = "fitness_trace.csv";

/// Writes the cost/accuracy bar data and the fitness curve into `dir`.
pub fn emit_plot_data(report: &ComparisonReport, trace: &EvolutionTrace, dir: &Path) -> Result<(), EvalError> {
    let io = |path: &Path| {
        let path = path.display().to_string();
        move |source| EvalError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;

    let mut bars = String::from("series,label,value\n");
    for r in &report.rows {
        bars.push_str(&format!("cost,{},{}\n", r.label, r.cost));
    }
    for r in &report.rows {
        bars.push_str(&format!("accuracy,{},{}\n", r.label, r.accuracy));
    }
    let p = dir.join(COST_PLOT_FILE);
    fs::write(&p, bars).map_err(io(&p))?;

    let mut curve = String::from("generation,best_fitness,mean_fitness\n");
    for r in &trace.records {
        curve.push_str(&format!("{},{},{}\n", r.generation, r.best_fitness, r.mean_fitness));
    }
    let p = dir.join(TRACE_PLOT_FILE);
    fs::write(&p, curve).map_err(io(&p))?;
    Ok(())
}
