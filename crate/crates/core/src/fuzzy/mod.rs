//! Mamdani fuzzy inference.
//!
//! The four stages are fuzzification ([`FisConfig::fuzzify`]), rule firing
//! with the min t-norm ([`FisConfig::rule_strength`]), clip implication with
//! max aggregation ([`FisConfig::aggregate`]) and centroid defuzzification
//! ([`centroid`]). [`FisConfig::infer`] chains them.

mod inference;
mod membership;
pub mod partition;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use inference::{centroid, DegreeTable, Inference, SampledMembership};
pub use membership::MembershipFunction;

/// Sample count used to check that a variable's terms cover its universe.
const COVERAGE_SAMPLES: usize = 1001;

#[derive(Debug, Error)]
pub enum FuzzyError {
    #[error("invalid membership function {0}")]
    InvalidMembership(String),
    #[error("invalid variable {name:?}: {reason}")]
    InvalidVariable { name: String, reason: String },
    #[error("invalid rule {index}: {reason}")]
    InvalidRule { index: usize, reason: String },
    #[error("invalid inference settings: {0}")]
    InvalidSettings(String),
    #[error("record has {found} values, system has {expected} inputs")]
    ArityMismatch { expected: usize, found: usize },
    #[error("rule references unknown term {0}")]
    UnknownTerm(String),
    #[error("{expected} rules but {found} strengths")]
    StrengthCount { expected: usize, found: usize },
    #[error("rule base is empty")]
    NoRules,
    #[error("model file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub name: String,
    #[serde(flatten)]
    pub mf: MembershipFunction,
}

impl Term {
    pub fn new(name: impl Into<String>, mf: MembershipFunction) -> Self {
        Self { name: name.into(), mf }
    }
}

/// Named variable with an ordered set of fuzzy terms over `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VariableRepr", into = "VariableRepr")]
pub struct LinguisticVariable {
    name: String,
    lo: f64,
    hi: f64,
    terms: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
struct VariableRepr {
    name: String,
    universe: [f64; 2],
    terms: Vec<Term>,
}

impl TryFrom<VariableRepr> for LinguisticVariable {
    type Error = FuzzyError;

    fn try_from(r: VariableRepr) -> Result<Self, FuzzyError> {
        LinguisticVariable::new(r.name, r.universe[0], r.universe[1], r.terms)
    }
}

impl From<LinguisticVariable> for VariableRepr {
    fn from(v: LinguisticVariable) -> Self {
        VariableRepr {
            name: v.name,
            universe: [v.lo, v.hi],
            terms: v.terms,
        }
    }
}

impl LinguisticVariable {
    pub fn new(name: impl Into<String>, lo: f64, hi: f64, terms: Vec<Term>) -> Result<Self, FuzzyError> {
        let name = name.into();
        let bad = |reason: String| FuzzyError::InvalidVariable {
            name: name.clone(),
            reason,
        };
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(bad(format!("universe [{lo}, {hi}] is empty")));
        }
        if terms.len() < 2 {
            return Err(bad("needs at least two terms".into()));
        }
        for (i, t) in terms.iter().enumerate() {
            t.mf.validate()?;
            if terms[..i].iter().any(|u| u.name.eq_ignore_ascii_case(&t.name)) {
                return Err(bad(format!("duplicate term {:?}", t.name)));
            }
        }
        for i in 0..COVERAGE_SAMPLES {
            let x = grid_point(lo, hi, COVERAGE_SAMPLES, i);
            if terms.iter().all(|t| t.mf.degree(x) <= 0.0) {
                return Err(bad(format!("no term covers x = {x}")));
            }
        }
        Ok(Self { name, lo, hi, terms })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Case-insensitive term lookup.
    pub fn term_index(&self, name: &str) -> Option<usize> {
        self.terms.iter().position(|t| t.name.eq_ignore_ascii_case(name))
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    /// Degree of each term at `x`, after clamping `x` into the universe.
    pub fn degrees(&self, x: f64) -> Vec<f64> {
        let x = self.clamp(x);
        self.terms.iter().map(|t| t.mf.degree(x)).collect()
    }
}

/// `lo + (hi - lo) * i / (n - 1)`; exact at both ends.
pub(crate) fn grid_point(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

/// Conjunctive if-then rule; indices refer to a [`FisConfig`]'s variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    /// `(input variable, term)` pairs, at most one per variable.
    pub antecedent: Vec<(usize, usize)>,
    /// Output term.
    pub consequent: usize,
    pub weight: f64,
}

impl Rule {
    pub fn new(antecedent: Vec<(usize, usize)>, consequent: usize, weight: f64) -> Self {
        Self {
            antecedent,
            consequent,
            weight,
        }
    }

    fn validate(&self, index: usize, inputs: &[LinguisticVariable], output: &LinguisticVariable) -> Result<(), FuzzyError> {
        let bad = |reason: String| FuzzyError::InvalidRule { index, reason };
        if self.antecedent.is_empty() {
            return Err(bad("empty antecedent".into()));
        }
        for (k, &(v, t)) in self.antecedent.iter().enumerate() {
            let var = inputs.get(v).ok_or_else(|| bad(format!("no input variable {v}")))?;
            if t >= var.terms.len() {
                return Err(bad(format!("variable {} has no term {t}", var.name)));
            }
            if self.antecedent[..k].iter().any(|&(u, _)| u == v) {
                return Err(bad(format!("variable {} appears twice", var.name)));
            }
        }
        if self.consequent >= output.terms.len() {
            return Err(bad(format!("output has no term {}", self.consequent)));
        }
        if !(0.0..=1.0).contains(&self.weight) {
            return Err(bad(format!("weight {} outside [0, 1]", self.weight)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct RuleRepr {
    #[serde(rename = "if")]
    antecedent: Vec<[String; 2]>,
    #[serde(rename = "then")]
    consequent: String,
    weight: f64,
}

pub const DEFAULT_RESOLUTION: usize = 1001;
pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// A complete Mamdani system: inputs, a two-class output, rules, and
/// defuzzification settings. Immutable once built.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FisRepr", into = "FisRepr")]
pub struct FisConfig {
    inputs: Vec<LinguisticVariable>,
    output: LinguisticVariable,
    rules: Vec<Rule>,
    resolution: usize,
    decision_threshold: f64,
    /// Output term degrees on the defuzzification grid, one row per term.
    output_samples: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FisRepr {
    inputs: Vec<LinguisticVariable>,
    output: LinguisticVariable,
    rules: Vec<RuleRepr>,
    resolution: usize,
    decision_threshold: f64,
}

impl TryFrom<FisRepr> for FisConfig {
    type Error = FuzzyError;

    fn try_from(r: FisRepr) -> Result<Self, FuzzyError> {
        let mut rules = Vec::with_capacity(r.rules.len());
        for rr in r.rules {
            let mut antecedent = Vec::with_capacity(rr.antecedent.len());
            for [var, term] in &rr.antecedent {
                let v = r
                    .inputs
                    .iter()
                    .position(|x| x.name.eq_ignore_ascii_case(var))
                    .ok_or_else(|| FuzzyError::UnknownTerm(format!("{var} (no such input)")))?;
                let t = r.inputs[v]
                    .term_index(term)
                    .ok_or_else(|| FuzzyError::UnknownTerm(format!("{var} IS {term}")))?;
                antecedent.push((v, t));
            }
            let c = r
                .output
                .term_index(&rr.consequent)
                .ok_or_else(|| FuzzyError::UnknownTerm(format!("{} IS {}", r.output.name, rr.consequent)))?;
            rules.push(Rule::new(antecedent, c, rr.weight));
        }
        FisConfig::new(r.inputs, r.output, rules, r.resolution, r.decision_threshold)
    }
}

impl From<FisConfig> for FisRepr {
    fn from(f: FisConfig) -> Self {
        let rules = f
            .rules
            .iter()
            .map(|r| RuleRepr {
                antecedent: r
                    .antecedent
                    .iter()
                    .map(|&(v, t)| [f.inputs[v].name.clone(), f.inputs[v].terms[t].name.clone()])
                    .collect(),
                consequent: f.output.terms[r.consequent].name.clone(),
                weight: r.weight,
            })
            .collect();
        FisRepr {
            inputs: f.inputs,
            output: f.output,
            rules,
            resolution: f.resolution,
            decision_threshold: f.decision_threshold,
        }
    }
}

impl FisConfig {
    pub fn new(
        inputs: Vec<LinguisticVariable>,
        output: LinguisticVariable,
        rules: Vec<Rule>,
        resolution: usize,
        decision_threshold: f64,
    ) -> Result<Self, FuzzyError> {
        if inputs.is_empty() {
            return Err(FuzzyError::InvalidSettings("no input variables".into()));
        }
        for (i, v) in inputs.iter().enumerate() {
            if inputs[..i].iter().any(|u| u.name.eq_ignore_ascii_case(&v.name)) {
                return Err(FuzzyError::InvalidSettings(format!("duplicate input {:?}", v.name)));
            }
        }
        if resolution < 3 {
            return Err(FuzzyError::InvalidSettings(format!("resolution must be >= 3, got {resolution}")));
        }
        if !(decision_threshold > 0.0 && decision_threshold < 1.0) {
            return Err(FuzzyError::InvalidSettings(format!(
                "decision threshold must be in (0, 1), got {decision_threshold}"
            )));
        }
        if output.universe() != (0.0, 1.0) {
            return Err(FuzzyError::InvalidSettings("output universe must be [0, 1]".into()));
        }
        for (i, r) in rules.iter().enumerate() {
            r.validate(i, &inputs, &output)?;
        }
        let output_samples = output
            .terms
            .iter()
            .map(|t| {
                (0..resolution)
                    .map(|i| t.mf.degree(grid_point(output.lo, output.hi, resolution, i)))
                    .collect()
            })
            .collect();
        Ok(Self {
            inputs,
            output,
            rules,
            resolution,
            decision_threshold,
            output_samples,
        })
    }

    /// Same system with a different rule base.
    pub fn with_rules(&self, rules: Vec<Rule>) -> Result<Self, FuzzyError> {
        for (i, r) in rules.iter().enumerate() {
            r.validate(i, &self.inputs, &self.output)?;
        }
        Ok(Self {
            rules,
            ..self.clone()
        })
    }

    pub fn inputs(&self) -> &[LinguisticVariable] {
        &self.inputs
    }

    pub fn output(&self) -> &LinguisticVariable {
        &self.output
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn decision_threshold(&self) -> f64 {
        self.decision_threshold
    }

    pub fn input_index(&self, name: &str) -> Option<usize> {
        self.inputs.iter().position(|v| v.name.eq_ignore_ascii_case(name))
    }

    /// Human-readable form, e.g. `IF glucose IS high THEN outcome IS positive WEIGHT 0.5`.
    pub fn describe_rule(&self, rule: &Rule) -> String {
        let clauses: Vec<String> = rule
            .antecedent
            .iter()
            .map(|&(v, t)| format!("{} IS {}", self.inputs[v].name, self.inputs[v].terms[t].name))
            .collect();
        format!(
            "IF {} THEN {} IS {} WEIGHT {}",
            clauses.join(" AND "),
            self.output.name,
            self.output.terms[rule.consequent].name,
            rule.weight
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, FuzzyError> {
        serde_json::from_str(text).map_err(|e| FuzzyError::Format(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<(), FuzzyError> {
        fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, FuzzyError> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}
