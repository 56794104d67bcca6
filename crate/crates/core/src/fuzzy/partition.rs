//! Default term sets: evenly spaced triangles whose neighbours cross at 0.5.

use super::{FuzzyError, LinguisticVariable, MembershipFunction, Term};
use crate::dataset::{feature_stats, Dataset};

pub const OUTPUT_NAME: &str = "outcome";
pub const NEGATIVE_TERM: &str = "negative";
pub const POSITIVE_TERM: &str = "positive";

/// Half-width used to widen the universe of a constant column.
const CONSTANT_COLUMN_PAD: f64 = 0.5;

pub fn term_names(partitions: usize) -> Vec<String> {
    let fixed: &[&str] = match partitions {
        2 => &["low", "high"],
        3 => &["low", "medium", "high"],
        5 => &["very_low", "low", "medium", "high", "very_high"],
        _ => &[],
    };
    if fixed.is_empty() {
        (0..partitions).map(|i| format!("t{i}")).collect()
    } else {
        fixed.iter().map(|s| s.to_string()).collect()
    }
}

/// `partitions` triangles with peaks at `lo`, ..., `hi`; the outer two are shoulders.
pub fn uniform_partition(name: &str, lo: f64, hi: f64, partitions: usize) -> Result<LinguisticVariable, FuzzyError> {
    if partitions < 2 {
        return Err(FuzzyError::InvalidSettings(format!("need >= 2 partitions, got {partitions}")));
    }
    let last = partitions - 1;
    let peak = |k: usize| {
        if k == last {
            hi
        } else {
            lo + (hi - lo) * k as f64 / last as f64
        }
    };
    let terms = term_names(partitions)
        .into_iter()
        .enumerate()
        .map(|(k, t)| {
            let a = peak(k.saturating_sub(1));
            let c = peak((k + 1).min(last));
            Term::new(t, MembershipFunction::triangular(a, peak(k), c))
        })
        .collect();
    LinguisticVariable::new(name, lo, hi, terms)
}

/// One uniform partition per feature, spanning that feature's `[min, max]` in `data`.
pub fn default_inputs(data: &Dataset, partitions: usize) -> Result<Vec<LinguisticVariable>, FuzzyError> {
    feature_stats(data)
        .iter()
        .zip(data.schema().features())
        .map(|(s, f)| {
            let (lo, hi) = if s.max > s.min {
                (s.min, s.max)
            } else {
                (s.min - CONSTANT_COLUMN_PAD, s.max + CONSTANT_COLUMN_PAD)
            };
            uniform_partition(&f.name, lo, hi, partitions)
        })
        .collect()
}

/// Two-class output over `[0, 1]`: `negative` falls from 0, `positive` rises to 1.
pub fn default_output() -> LinguisticVariable {
    LinguisticVariable::new(
        OUTPUT_NAME,
        0.0,
        1.0,
        vec![
            Term::new(NEGATIVE_TERM, MembershipFunction::triangular(0.0, 0.0, 1.0)),
            Term::new(POSITIVE_TERM, MembershipFunction::triangular(0.0, 1.0, 1.0)),
        ],
    )
    .expect("default output is valid")
}
