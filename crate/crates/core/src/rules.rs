//! Rule bases: grid-partition induction from data, and the text format for
//! hand-written rules.
//!
//! Rule file grammar, one rule per line (keywords case-insensitive, `#`
//! starts a comment):
//!
//! ```text
//! IF <var> IS <term> [AND <var> IS <term>]... THEN <outvar> IS <term> [WEIGHT <w>]
//! ```

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::Dataset;
use crate::fuzzy::{FisConfig, LinguisticVariable, Rule};

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("{0}")]
    SchemaMismatch(String),
    #[error("invalid induction config: {0}")]
    InvalidConfig(String),
    #[error("line {line}: {reason}")]
    ParseError { line: usize, reason: String },
    #[error("line {line}: unknown {what}")]
    UnknownTerm { line: usize, what: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InductionConfig {
    pub partitions_per_input: usize,
    /// Induced rules lighter than this are dropped.
    pub min_rule_weight: f64,
}

impl Default for InductionConfig {
    fn default() -> Self {
        Self {
            partitions_per_input: 3,
            min_rule_weight: 0.0,
        }
    }
}

impl InductionConfig {
    pub fn validate(&self) -> Result<(), RuleError> {
        if self.partitions_per_input < 2 {
            return Err(RuleError::InvalidConfig(format!(
                "partitions_per_input must be >= 2, got {}",
                self.partitions_per_input
            )));
        }
        if !(0.0..=1.0).contains(&self.min_rule_weight) {
            return Err(RuleError::InvalidConfig(format!(
                "min_rule_weight must be in [0, 1], got {}",
                self.min_rule_weight
            )));
        }
        Ok(())
    }
}

/// Index of the first maximum.
fn best_term(degrees: &[f64]) -> (usize, f64) {
    let mut best = 0;
    for (k, &d) in degrees.iter().enumerate().skip(1) {
        if d > degrees[best] {
            best = k;
        }
    }
    (best, degrees[best])
}

/// One candidate rule per training record: each input's strongest term as
/// antecedent, the record's class as consequent (class `c` maps to output
/// term `c`), weight = product of those degrees. Per antecedent only the
/// heaviest candidate survives; equal weights keep the earlier record.
/// Output is sorted by antecedent.
pub fn induce_rules(
    train: &Dataset,
    inputs: &[LinguisticVariable],
    output: &LinguisticVariable,
    cfg: &InductionConfig,
) -> Result<Vec<Rule>, RuleError> {
    cfg.validate()?;
    if train.n_records() == 0 {
        return Err(RuleError::EmptyTrainingSet);
    }
    if inputs.len() != train.n_features() {
        return Err(RuleError::SchemaMismatch(format!(
            "{} input variables for {} features",
            inputs.len(),
            train.n_features()
        )));
    }
    if output.terms().len() != 2 {
        return Err(RuleError::SchemaMismatch(format!(
            "output needs one term per class (2), has {}",
            output.terms().len()
        )));
    }

    let mut best: HashMap<Vec<usize>, (f64, u8)> = HashMap::new();
    for (row, &label) in train.rows().zip(train.labels()) {
        let mut antecedent = Vec::with_capacity(inputs.len());
        let mut weight = 1.0;
        for (var, &x) in inputs.iter().zip(row) {
            let (term, degree) = best_term(&var.degrees(x));
            antecedent.push(term);
            weight *= degree;
        }
        match best.get_mut(&antecedent) {
            Some(slot) if weight > slot.0 => *slot = (weight, label),
            Some(_) => {}
            None => {
                best.insert(antecedent, (weight, label));
            }
        }
    }

    let mut rules: Vec<(Vec<usize>, f64, u8)> = best
        .into_iter()
        .filter(|(_, (w, _))| *w >= cfg.min_rule_weight)
        .map(|(a, (w, c))| (a, w, c))
        .collect();
    rules.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(rules
        .into_iter()
        .map(|(a, w, c)| Rule::new(a.into_iter().enumerate().collect(), c as usize, w))
        .collect())
}

fn find_variable(vars: &[LinguisticVariable], name: &str) -> Option<usize> {
    vars.iter().position(|v| v.name().eq_ignore_ascii_case(name))
}

fn parse_line(
    line: &str,
    lineno: usize,
    inputs: &[LinguisticVariable],
    output: &LinguisticVariable,
) -> Result<Rule, RuleError> {
    let parse_err = |reason: String| RuleError::ParseError { line: lineno, reason };
    let unknown = |what: String| RuleError::UnknownTerm { line: lineno, what };
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let kw = |i: usize, k: &str| tokens.get(i).is_some_and(|t| t.eq_ignore_ascii_case(k));

    if !kw(0, "IF") {
        return Err(parse_err("rule must start with IF".into()));
    }
    let mut pos = 1;
    let mut antecedent = Vec::new();
    loop {
        let (Some(var), true, Some(term)) = (tokens.get(pos), kw(pos + 1, "IS"), tokens.get(pos + 2)) else {
            return Err(parse_err(format!("expected `<var> IS <term>` at token {}", pos + 1)));
        };
        let v = find_variable(inputs, var).ok_or_else(|| unknown(format!("input variable {var:?}")))?;
        let t = inputs[v]
            .term_index(term)
            .ok_or_else(|| unknown(format!("term {term:?} of {var}")))?;
        if antecedent.iter().any(|&(u, _)| u == v) {
            return Err(parse_err(format!("variable {var} appears twice")));
        }
        antecedent.push((v, t));
        pos += 3;
        if kw(pos, "AND") {
            pos += 1;
        } else if kw(pos, "THEN") {
            pos += 1;
            break;
        } else {
            return Err(parse_err(format!("expected AND or THEN at token {}", pos + 1)));
        }
    }
    let (Some(var), true, Some(term)) = (tokens.get(pos), kw(pos + 1, "IS"), tokens.get(pos + 2)) else {
        return Err(parse_err("expected `<outvar> IS <term>` after THEN".into()));
    };
    if !var.eq_ignore_ascii_case(output.name()) {
        return Err(unknown(format!("output variable {var:?}")));
    }
    let consequent = output
        .term_index(term)
        .ok_or_else(|| unknown(format!("term {term:?} of {var}")))?;
    pos += 3;
    let mut weight = 1.0;
    if kw(pos, "WEIGHT") {
        let w = tokens.get(pos + 1).ok_or_else(|| parse_err("WEIGHT needs a value".into()))?;
        weight = w
            .parse::<f64>()
            .ok()
            .filter(|w| (0.0..=1.0).contains(w))
            .ok_or_else(|| parse_err(format!("weight {w:?} is not a number in [0, 1]")))?;
        pos += 2;
    }
    if pos != tokens.len() {
        return Err(parse_err(format!("unexpected trailing input {:?}", tokens[pos..].join(" "))));
    }
    Ok(Rule::new(antecedent, consequent, weight))
}

/// Parses rule text against the given variables. Rules keep file order.
pub fn parse_rules(text: &str, inputs: &[LinguisticVariable], output: &LinguisticVariable) -> Result<Vec<Rule>, RuleError> {
    let mut rules = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if !line.is_empty() {
            rules.push(parse_line(line, i + 1, inputs, output)?);
        }
    }
    Ok(rules)
}

/// Like [`parse_rules`], but silently drops rules that mention a variable
/// listed in `absent` (known to the schema but not among `inputs`). Returns
/// the kept rules and the line numbers of the dropped ones.
pub fn parse_rules_restricted(
    text: &str,
    inputs: &[LinguisticVariable],
    output: &LinguisticVariable,
    absent: &[&str],
) -> Result<(Vec<Rule>, Vec<usize>), RuleError> {
    let mut rules = Vec::new();
    let mut dropped = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mentions_absent = antecedent_variables(line)
            .iter()
            .any(|v| find_variable(inputs, v).is_none() && absent.iter().any(|a| a.eq_ignore_ascii_case(v)));
        if mentions_absent {
            dropped.push(i + 1);
        } else {
            rules.push(parse_line(line, i + 1, inputs, output)?);
        }
    }
    Ok((rules, dropped))
}

/// Tokens that sit in a `<var> IS` position before THEN.
fn antecedent_variables(line: &str) -> Vec<&str> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let end = tokens
        .iter()
        .position(|t| t.eq_ignore_ascii_case("THEN"))
        .unwrap_or(tokens.len());
    (0..end.saturating_sub(1))
        .filter(|&i| tokens[i + 1].eq_ignore_ascii_case("IS"))
        .map(|i| tokens[i])
        .collect()
}

pub fn load_expert_rules(path: &Path, config: &FisConfig) -> Result<Vec<Rule>, RuleError> {
    parse_rules(&fs::read_to_string(path)?, config.inputs(), config.output())
}

/// The config's rule base in the text format, one rule per line.
pub fn format_rules(config: &FisConfig) -> String {
    config
        .rules()
        .iter()
        .map(|r| config.describe_rule(r) + "\n")
        .collect()
}
