//! Cost-aware feature selection for tabular diagnosis data.
//!
//! A binary genetic algorithm searches over feature subsets. Each subset is
//! scored by cross-validating a Mamdani fuzzy classifier whose rules are
//! induced from the training folds, minus a penalty proportional to the
//! monetary cost of the tests the subset requires.
//!
//! Module map:
//!
//! - [`dataset`]: CSV/schema/cost loading, stratified splits, projections.
//! - [`fuzzy`]: membership functions, linguistic variables, Mamdani inference.
//! - [`rules`]: grid-partition rule induction and the expert-rule text format.
//! - [`ga`]: binary-chromosome evolutionary engine.
//! - [`selector`]: the wrapper fitness and full selection runs.
//! - [`eval`]: scoring, comparison reports, plot data.

pub mod dataset;
pub mod eval;
pub mod fuzzy;
pub mod ga;
pub mod rules;
pub mod seed;
pub mod selector;

pub use dataset::{CostTable, Dataset, DatasetError, FeatureSpec, Schema, SplitKind, SplitPlan};
pub use eval::{BaselineRun, ComparisonReport, ConfusionMatrix, EvalError};
pub use fuzzy::{FisConfig, FuzzyError, LinguisticVariable, MembershipFunction, Rule};
pub use ga::{EvolutionTrace, FeatureMask, GaError, GaParams, Population};
pub use rules::{InductionConfig, RuleError};
pub use selector::{FitnessConfig, SelectionResult, SelectorError};
