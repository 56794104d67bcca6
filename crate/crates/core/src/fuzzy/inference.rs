use super::{grid_point, FisConfig, FuzzyError, Rule};

/// Membership degree of every term of every input, for one record.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeTable {
    pub degrees: Vec<Vec<f64>>,
}

impl DegreeTable {
    pub fn get(&self, variable: usize, term: usize) -> Option<f64> {
        self.degrees.get(variable)?.get(term).copied()
    }
}

/// Output membership sampled on a uniform grid over `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledMembership {
    pub lo: f64,
    pub hi: f64,
    pub values: Vec<f64>,
}

impl SampledMembership {
    pub fn x(&self, i: usize) -> f64 {
        grid_point(self.lo, self.hi, self.values.len(), i)
    }

    pub fn area_is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }
}

/// Center of mass `Σ x_i μ_i / Σ μ_i`; the universe midpoint when `Σ μ_i = 0`.
pub fn centroid(s: &SampledMembership) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (i, &mu) in s.values.iter().enumerate() {
        num += s.x(i) * mu;
        den += mu;
    }
    if den == 0.0 {
        0.5 * (s.lo + s.hi)
    } else {
        (num / den).clamp(s.lo, s.hi)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Inference {
    pub crisp: f64,
    pub class: u8,
    pub strengths: Vec<f64>,
    /// No rule fired; `crisp` is the universe midpoint.
    pub zero_area: bool,
}

impl Inference {
    /// Index of the strongest rule (first on ties), if any fired.
    pub fn top_rule(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, &s) in self.strengths.iter().enumerate() {
            if s > 0.0 && best.is_none_or(|b| s > self.strengths[b]) {
                best = Some(i);
            }
        }
        best
    }
}

impl FisConfig {
    pub fn fuzzify(&self, record: &[f64]) -> Result<DegreeTable, FuzzyError> {
        if record.len() != self.inputs.len() {
            return Err(FuzzyError::ArityMismatch {
                expected: self.inputs.len(),
                found: record.len(),
            });
        }
        Ok(DegreeTable {
            degrees: self.inputs.iter().zip(record).map(|(v, &x)| v.degrees(x)).collect(),
        })
    }

    /// `weight * min` over the antecedent clauses.
    pub fn rule_strength(&self, rule: &Rule, degrees: &DegreeTable) -> Result<f64, FuzzyError> {
        rule_strength(rule, degrees)
    }

    /// Clip each consequent at its rule's strength and take the pointwise max.
    ///
    /// Computed as `min(max strength of rules sharing a consequent, term)`,
    /// which is the same value since min distributes over max.
    pub fn aggregate(&self, strengths: &[f64]) -> Result<SampledMembership, FuzzyError> {
        if strengths.len() != self.rules.len() {
            return Err(FuzzyError::StrengthCount {
                expected: self.rules.len(),
                found: strengths.len(),
            });
        }
        let mut per_term = vec![0.0f64; self.output.terms.len()];
        for (r, &s) in self.rules.iter().zip(strengths) {
            per_term[r.consequent] = per_term[r.consequent].max(s);
        }
        let mut values = vec![0.0f64; self.resolution];
        for (samples, &level) in self.output_samples.iter().zip(&per_term) {
            if level <= 0.0 {
                continue;
            }
            for (v, &mu) in values.iter_mut().zip(samples) {
                *v = v.max(mu.min(level));
            }
        }
        let (lo, hi) = self.output.universe();
        Ok(SampledMembership { lo, hi, values })
    }

    pub fn infer(&self, record: &[f64]) -> Result<Inference, FuzzyError> {
        if self.rules.is_empty() {
            return Err(FuzzyError::NoRules);
        }
        let degrees = self.fuzzify(record)?;
        let strengths = self
            .rules
            .iter()
            .map(|r| rule_strength(r, &degrees))
            .collect::<Result<Vec<_>, _>>()?;
        let sampled = self.aggregate(&strengths)?;
        let crisp = centroid(&sampled);
        Ok(Inference {
            crisp,
            class: u8::from(crisp >= self.decision_threshold),
            strengths,
            zero_area: sampled.area_is_zero(),
        })
    }
}

pub(super) fn rule_strength(rule: &Rule, degrees: &DegreeTable) -> Result<f64, FuzzyError> {
    let mut m = 1.0f64;
    for &(v, t) in &rule.antecedent {
        let d = degrees
            .get(v, t)
            .ok_or_else(|| FuzzyError::UnknownTerm(format!("variable {v} term {t}")))?;
        m = m.min(d);
    }
    Ok(rule.weight * m)
}
