//! Wrapper feature selection: GA over masks, fitness from a cross-validated
//! fuzzy classifier minus a normalized test-cost penalty.

use std::collections::HashMap;
use std::sync::Mutex;

use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{project, stratified_split, CostTable, Dataset, DatasetError, Split, SplitPlan};
use crate::eval::{score, BaselineRun, ConfusionMatrix, EvalError};
use crate::fuzzy::partition::{default_inputs, default_output};
use crate::fuzzy::{FisConfig, FuzzyError, DEFAULT_RESOLUTION, DEFAULT_THRESHOLD};
use crate::ga::{evolve, EvolutionTrace, FeatureMask, GaError, GaParams};
use crate::rules::{induce_rules, InductionConfig, RuleError};
use crate::seed::{derive, Stream};

/// Largest feature count accepted by [`brute_force_selection`].
pub const MAX_BRUTE_FORCE_FEATURES: usize = 16;

#[derive(Debug, Error)]
pub enum SelectorError {
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error(transparent)]
    Rules(#[from] RuleError),
    #[error(transparent)]
    Ga(#[from] GaError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("invalid fitness config: {0}")]
    InvalidConfig(String),
    #[error("exhaustive search over {0} features is refused (limit {MAX_BRUTE_FORCE_FEATURES})")]
    TooManyFeatures(usize),
}

/// Defuzzification settings for the classifiers built during selection.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifierOptions {
    pub resolution: usize,
    pub decision_threshold: f64,
}

impl Default for ClassifierOptions {
    fn default() -> Self {
        Self {
            resolution: DEFAULT_RESOLUTION,
            decision_threshold: DEFAULT_THRESHOLD,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitnessConfig {
    /// Weight of the cost ratio subtracted from accuracy.
    pub lambda: f64,
    /// Cross-validation plan used inside the fitness.
    pub evaluation: SplitPlan,
    /// Holdout used for the final reported accuracy.
    pub report_split: SplitPlan,
    pub cache: bool,
    pub classifier: ClassifierOptions,
}

impl FitnessConfig {
    /// Defaults: lambda 0.3, stratified 5-fold CV, 80/20 reporting holdout,
    /// seeds derived from `master_seed`.
    pub fn from_seed(master_seed: u64) -> Self {
        Self {
            lambda: 0.3,
            evaluation: SplitPlan::k_fold(5, derive(master_seed, Stream::CrossValidation)),
            report_split: SplitPlan::holdout(0.8, derive(master_seed, Stream::Holdout)),
            cache: true,
            classifier: ClassifierOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<(), SelectorError> {
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(SelectorError::InvalidConfig(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        if self.evaluation.seed == self.report_split.seed {
            return Err(SelectorError::InvalidConfig(
                "cross-validation and reporting splits must use different seeds".into(),
            ));
        }
        Ok(())
    }
}

/// `accuracy - lambda * cost / total_cost`. A zero total cost adds no penalty.
pub fn penalized_fitness(accuracy: f64, cost: f64, total_cost: f64, lambda: f64) -> f64 {
    let ratio = if total_cost > 0.0 { cost / total_cost } else { 0.0 };
    accuracy - lambda * ratio
}

/// Default partitions from `train`'s ranges plus rules induced from `train`.
pub fn train_classifier(
    train: &Dataset,
    icfg: &InductionConfig,
    opts: &ClassifierOptions,
) -> Result<FisConfig, SelectorError> {
    let inputs = default_inputs(train, icfg.partitions_per_input)?;
    let output = default_output();
    let rules = induce_rules(train, &inputs, &output, icfg)?;
    Ok(FisConfig::new(inputs, output, rules, opts.resolution, opts.decision_threshold)?)
}

pub fn predict(fis: &FisConfig, data: &Dataset) -> Result<Vec<u8>, SelectorError> {
    data.rows()
        .map(|r| fis.infer(r).map(|i| i.class).map_err(SelectorError::from))
        .collect()
}

/// Trains on `train`, scores on `test`.
pub fn train_and_score(
    train: &Dataset,
    test: &Dataset,
    icfg: &InductionConfig,
    opts: &ClassifierOptions,
) -> Result<(f64, ConfusionMatrix), SelectorError> {
    let fis = train_classifier(train, icfg, opts)?;
    Ok(score(&predict(&fis, test)?, test.labels())?)
}

/// Mean fold accuracy of the fuzzy classifier on an already projected dataset.
pub fn cv_accuracy(
    data: &Dataset,
    folds: &[Split],
    icfg: &InductionConfig,
    opts: &ClassifierOptions,
) -> Result<f64, SelectorError> {
    let mut total = 0.0;
    for fold in folds {
        let (acc, _) = train_and_score(&data.subset(&fold.train), &data.subset(&fold.test), icfg, opts)?;
        total += acc;
    }
    Ok(total / folds.len() as f64)
}

/// Accuracy estimate for a feature subset.
pub trait SubsetScorer: Sync {
    fn accuracy(&self, mask: &FeatureMask) -> Result<f64, SelectorError>;
}

/// Cross-validated fuzzy classifier accuracy, rules re-induced on every fold.
pub struct FuzzyCvScorer<'a> {
    data: &'a Dataset,
    folds: Vec<Split>,
    icfg: InductionConfig,
    opts: ClassifierOptions,
}

impl<'a> FuzzyCvScorer<'a> {
    pub fn new(data: &'a Dataset, plan: &SplitPlan, icfg: &InductionConfig, opts: &ClassifierOptions) -> Result<Self, SelectorError> {
        icfg.validate()?;
        // Projection keeps labels, so the folds are the same for every mask.
        let folds = stratified_split(data, plan)?;
        Ok(Self {
            data,
            folds,
            icfg: *icfg,
            opts: *opts,
        })
    }
}

impl SubsetScorer for FuzzyCvScorer<'_> {
    fn accuracy(&self, mask: &FeatureMask) -> Result<f64, SelectorError> {
        let projected = project(self.data, mask)?;
        cv_accuracy(&projected, &self.folds, &self.icfg, &self.opts)
    }
}

/// Scorer plus cost penalty, optionally memoized by mask.
pub struct FitnessEvaluator<'a, S> {
    scorer: S,
    costs: &'a CostTable,
    lambda: f64,
    cache: Option<Mutex<HashMap<FeatureMask, f64>>>,
}

impl<'a, S: SubsetScorer> FitnessEvaluator<'a, S> {
    pub fn new(scorer: S, costs: &'a CostTable, lambda: f64, cache: bool) -> Self {
        Self {
            scorer,
            costs,
            lambda,
            cache: cache.then(|| Mutex::new(HashMap::new())),
        }
    }

    pub fn evaluate_uncached(&self, mask: &FeatureMask) -> Result<f64, SelectorError> {
        if mask.is_all_zero() {
            return Err(DatasetError::EmptyMask.into());
        }
        let cost = self.costs.mask_cost(mask)?;
        let acc = self.scorer.accuracy(mask)?;
        Ok(penalized_fitness(acc, cost, self.costs.total_cost(), self.lambda))
    }

    pub fn evaluate(&self, mask: &FeatureMask) -> Result<f64, SelectorError> {
        let Some(cache) = &self.cache else {
            return self.evaluate_uncached(mask);
        };
        if let Some(&v) = cache.lock().expect("cache lock").get(mask) {
            return Ok(v);
        }
        // Computed outside the lock; racing threads produce the same value.
        let v = self.evaluate_uncached(mask)?;
        Ok(*cache.lock().expect("cache lock").entry(mask.clone()).or_insert(v))
    }

    /// Snapshot of the memo table.
    pub fn cached(&self) -> Vec<(FeatureMask, f64)> {
        let mut out: Vec<_> = self
            .cache
            .as_ref()
            .map(|c| c.lock().expect("cache lock").iter().map(|(m, v)| (m.clone(), *v)).collect())
            .unwrap_or_default();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    pub fn scorer(&self) -> &S {
        &self.scorer
    }
}

/// Fitness of one mask; see [`penalized_fitness`] and [`FuzzyCvScorer`].
pub fn fitness(
    mask: &FeatureMask,
    data: &Dataset,
    costs: &CostTable,
    fcfg: &FitnessConfig,
    icfg: &InductionConfig,
) -> Result<f64, SelectorError> {
    fcfg.validate()?;
    let scorer = FuzzyCvScorer::new(data, &fcfg.evaluation, icfg, &fcfg.classifier)?;
    FitnessEvaluator::new(scorer, costs, fcfg.lambda, false).evaluate_uncached(mask)
}

/// Exhaustive argmax over all non-empty masks. Ties go to the cheaper mask,
/// then to the lexicographically smaller bitstring.
pub fn brute_force_with<S: SubsetScorer>(
    evaluator: &FitnessEvaluator<'_, S>,
    n_features: usize,
) -> Result<(FeatureMask, f64), SelectorError> {
    if n_features > MAX_BRUTE_FORCE_FEATURES {
        return Err(SelectorError::TooManyFeatures(n_features));
    }
    if n_features == 0 {
        return Err(DatasetError::EmptyMask.into());
    }
    let scored: Vec<(FeatureMask, f64, f64)> = (1u64..(1 << n_features))
        .into_par_iter()
        .map(|v| {
            let m = FeatureMask::from_integer(v, n_features);
            let f = evaluator.evaluate(&m)?;
            let c = evaluator.costs.mask_cost(&m)?;
            Ok((m, f, c))
        })
        .collect::<Result<_, SelectorError>>()?;
    let best = scored
        .into_iter()
        .reduce(|a, b| {
            let better = b.1 > a.1 || (b.1 == a.1 && (b.2 < a.2 || (b.2 == a.2 && b.0 < a.0)));
            if better {
                b
            } else {
                a
            }
        })
        .expect("at least one mask");
    Ok((best.0, best.1))
}

pub fn brute_force_selection(
    data: &Dataset,
    costs: &CostTable,
    fcfg: &FitnessConfig,
    icfg: &InductionConfig,
) -> Result<(FeatureMask, f64), SelectorError> {
    if data.n_features() > MAX_BRUTE_FORCE_FEATURES {
        return Err(SelectorError::TooManyFeatures(data.n_features()));
    }
    fcfg.validate()?;
    let scorer = FuzzyCvScorer::new(data, &fcfg.evaluation, icfg, &fcfg.classifier)?;
    brute_force_with(&FitnessEvaluator::new(scorer, costs, fcfg.lambda, fcfg.cache), data.n_features())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// Seed the component seeds were derived from, when known.
    pub master_seed: Option<u64>,
    pub ga: GaParams,
    pub fitness: FitnessConfig,
    pub induction: InductionConfig,
    pub dataset_fingerprint: String,
    pub n_records: usize,
    pub feature_names: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    pub best_mask: FeatureMask,
    pub selected_names: Vec<String>,
    /// Holdout accuracy of the classifier retrained on the selected features.
    pub accuracy: f64,
    pub confusion: ConfusionMatrix,
    pub cost: f64,
    pub total_cost: f64,
    /// GA fitness of `best_mask` (cross-validated, on the training side).
    pub fitness: f64,
    pub trace: EvolutionTrace,
    pub provenance: Provenance,
}

impl SelectionResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Selection outcome plus the final classifier, trained on the selected features.
#[derive(Clone, Debug)]
pub struct Selection {
    pub result: SelectionResult,
    pub model: FisConfig,
}

/// Train and test sides of the reporting holdout.
pub fn reporting_split(data: &Dataset, fcfg: &FitnessConfig) -> Result<(Dataset, Dataset), SelectorError> {
    let split = stratified_split(data, &fcfg.report_split)?.remove(0);
    Ok((data.subset(&split.train), data.subset(&split.test)))
}

/// Runs the GA with the CV fitness on the training side of the reporting
/// holdout, then retrains on that side and scores the held-out records.
pub fn run_selection(
    data: &Dataset,
    costs: &CostTable,
    params: &GaParams,
    fcfg: &FitnessConfig,
    icfg: &InductionConfig,
) -> Result<Selection, SelectorError> {
    fcfg.validate()?;
    params.validate()?;
    let (train, test) = reporting_split(data, fcfg)?;
    let scorer = FuzzyCvScorer::new(&train, &fcfg.evaluation, icfg, &fcfg.classifier)?;
    let evaluator = FitnessEvaluator::new(scorer, costs, fcfg.lambda, fcfg.cache);
    let evo = evolve(params, data.n_features(), |m: &FeatureMask| evaluator.evaluate(m))?;
    info!(
        "GA finished after {} generations: {} fitness {:.4}",
        evo.trace.len(),
        evo.best_mask,
        evo.best_fitness
    );

    let train_p = project(&train, &evo.best_mask)?;
    let test_p = project(&test, &evo.best_mask)?;
    let model = train_classifier(&train_p, icfg, &fcfg.classifier)?;
    let (accuracy, confusion) = score(&predict(&model, &test_p)?, test_p.labels())?;

    let result = SelectionResult {
        selected_names: train_p.schema().names().into_iter().map(String::from).collect(),
        cost: costs.mask_cost(&evo.best_mask)?,
        total_cost: costs.total_cost(),
        best_mask: evo.best_mask,
        accuracy,
        confusion,
        fitness: evo.best_fitness,
        trace: evo.trace,
        provenance: Provenance {
            master_seed: None,
            ga: params.clone(),
            fitness: *fcfg,
            induction: *icfg,
            dataset_fingerprint: data.fingerprint(),
            n_records: data.n_records(),
            feature_names: data.schema().names().into_iter().map(String::from).collect(),
        },
    };
    Ok(Selection { result, model })
}

/// All-features classifier on the same reporting holdout.
pub fn run_baseline(
    data: &Dataset,
    costs: &CostTable,
    fcfg: &FitnessConfig,
    icfg: &InductionConfig,
) -> Result<BaselineRun, SelectorError> {
    fcfg.validate()?;
    let (train, test) = reporting_split(data, fcfg)?;
    let (accuracy, confusion) = train_and_score(&train, &test, icfg, &fcfg.classifier)?;
    Ok(BaselineRun {
        feature_count: data.n_features(),
        accuracy,
        confusion,
        cost: costs.total_cost(),
        dataset_fingerprint: data.fingerprint(),
        report_split: fcfg.report_split,
    })
}
