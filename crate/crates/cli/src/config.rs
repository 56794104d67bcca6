//! Run configuration: TOML file layered under command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use fuzzsel_core::dataset::SplitPlan;
use fuzzsel_core::seed::{derive, Stream};
use fuzzsel_core::{FitnessConfig, GaParams, InductionConfig};

use crate::Failure;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_OUT: &str = "out";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Impute {
    /// Leave values as read.
    None,
    /// Replace zeros in `impute_zero` columns by the training-side median.
    Median,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    impute: Option<Impute>,
    #[serde(default)]
    paths: PathsSection,
    #[serde(default)]
    ga: GaSection,
    #[serde(default)]
    fitness: FitnessSection,
    induction: Option<InductionConfig>,
    #[serde(default)]
    fis: FisSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PathsSection {
    data: Option<PathBuf>,
    schema: Option<PathBuf>,
    costs: Option<PathBuf>,
    rules: Option<PathBuf>,
    out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GaSection {
    population_size: Option<usize>,
    crossover_prob: Option<f64>,
    mutation_prob: Option<f64>,
    max_generations: Option<usize>,
    stagnation_window: Option<usize>,
    elite_count: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FitnessSection {
    lambda: Option<f64>,
    folds: Option<usize>,
    holdout_fraction: Option<f64>,
    cache: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FisSection {
    resolution: Option<usize>,
    threshold: Option<f64>,
}

/// Flags shared by `validate` and `select`.
#[derive(Args, Debug, Default, Clone)]
pub struct RunArgs {
    /// TOML run configuration; relative paths inside it resolve against its directory.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Labeled CSV (header optional).
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// TOML schema naming features, label and value ranges.
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// `name = cost` lines; defaults to the costs in the schema.
    #[arg(long)]
    pub costs: Option<PathBuf>,
    /// Expert rules merged into the final model.
    #[arg(long)]
    pub rules: Option<PathBuf>,
    /// Output directory (default: out).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Master seed; GA, CV and holdout seeds are derived from it.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Zero handling in columns marked `impute_zero`.
    #[arg(long, value_enum)]
    pub impute: Option<Impute>,
    /// Cost penalty weight, >= 0 (default 0.3).
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Population size (default 50).
    #[arg(long)]
    pub pop: Option<usize>,
    /// Crossover probability (default 0.6).
    #[arg(long)]
    pub pc: Option<f64>,
    /// Per-bit mutation probability (default 0.05).
    #[arg(long)]
    pub pm: Option<f64>,
    /// Generation limit (default 100).
    #[arg(long)]
    pub generations: Option<usize>,
    /// Cross-validation folds inside the fitness (default 5).
    #[arg(long)]
    pub folds: Option<usize>,
    /// Decision threshold on the crisp output (default 0.5).
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Threads for fitness evaluation (default: all cores).
    #[arg(long)]
    pub workers: Option<usize>,
}

/// Fully resolved settings for one run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub data: PathBuf,
    pub schema: PathBuf,
    pub costs: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    pub out: PathBuf,
    pub seed: u64,
    pub impute: Impute,
    pub ga: GaParams,
    pub fitness: FitnessConfig,
    pub induction: InductionConfig,
    #[serde(skip)]
    pub workers: Option<usize>,
}

fn load_file(path: &Path) -> Result<FileConfig, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

impl RunConfig {
    /// Precedence: flag, then config file, then built-in default.
    pub fn resolve(args: &RunArgs) -> Result<Self, Failure> {
        let (file, base) = match &args.config {
            Some(p) => (load_file(p)?, p.parent().map(Path::to_path_buf).unwrap_or_default()),
            None => (FileConfig::default(), PathBuf::new()),
        };
        let from_file = |p: &Option<PathBuf>| p.as_ref().map(|p| base.join(p));
        let pick = |flag: &Option<PathBuf>, cfg: &Option<PathBuf>| flag.clone().or_else(|| from_file(cfg));

        let data = pick(&args.data, &file.paths.data).ok_or_else(|| Failure::usage("--data is required"))?;
        let schema = pick(&args.schema, &file.paths.schema).ok_or_else(|| Failure::usage("--schema is required"))?;
        let seed = args.seed.or(file.seed).unwrap_or(DEFAULT_SEED);

        let defaults = GaParams::default();
        let g = &file.ga;
        let ga = GaParams {
            population_size: args.pop.or(g.population_size).unwrap_or(defaults.population_size),
            crossover_prob: args.pc.or(g.crossover_prob).unwrap_or(defaults.crossover_prob),
            mutation_prob: args.pm.or(g.mutation_prob).unwrap_or(defaults.mutation_prob),
            max_generations: args.generations.or(g.max_generations).unwrap_or(defaults.max_generations),
            stagnation_window: g.stagnation_window.unwrap_or(defaults.stagnation_window),
            elite_count: g.elite_count.unwrap_or(defaults.elite_count),
            seed: derive(seed, Stream::Ga),
        };
        ga.validate().map_err(Failure::usage)?;

        let mut fitness = FitnessConfig::from_seed(seed);
        let f = &file.fitness;
        fitness.lambda = args.lambda.or(f.lambda).unwrap_or(fitness.lambda);
        let folds = args.folds.or(f.folds).unwrap_or(5);
        if folds < 2 {
            return Err(Failure::usage(format!("--folds must be >= 2, got {folds}")));
        }
        fitness.evaluation = SplitPlan::k_fold(folds, fitness.evaluation.seed);
        let fraction = f.holdout_fraction.unwrap_or(0.8);
        if !(fraction > 0.0 && fraction < 1.0) {
            return Err(Failure::usage(format!("holdout_fraction must be in (0, 1), got {fraction}")));
        }
        fitness.report_split = SplitPlan::holdout(fraction, fitness.report_split.seed);
        fitness.cache = f.cache.unwrap_or(true);
        if let Some(r) = file.fis.resolution {
            fitness.classifier.resolution = r;
        }
        fitness.classifier.decision_threshold = args
            .threshold
            .or(file.fis.threshold)
            .unwrap_or(fitness.classifier.decision_threshold);
        fitness.validate().map_err(Failure::usage)?;
        if fitness.classifier.resolution < 3 {
            return Err(Failure::usage("fis resolution must be >= 3"));
        }
        let t = fitness.classifier.decision_threshold;
        if !(t > 0.0 && t < 1.0) {
            return Err(Failure::usage(format!("--threshold must be in (0, 1), got {t}")));
        }

        let induction = file.induction.unwrap_or_default();
        induction.validate().map_err(Failure::usage)?;
        if args.workers == Some(0) {
            return Err(Failure::usage("--workers must be >= 1"));
        }

        Ok(Self {
            data,
            schema,
            costs: pick(&args.costs, &file.paths.costs),
            rules: pick(&args.rules, &file.paths.rules),
            out: pick(&args.out, &file.paths.out).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
            seed,
            impute: args.impute.or(file.impute).unwrap_or(Impute::None),
            ga,
            fitness,
            induction,
            workers: args.workers,
        })
    }
}
