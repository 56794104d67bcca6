//! Saved classifier: the fuzzy system plus the column mapping back to the schema.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use fuzzsel_core::{FeatureMask, FisConfig, FuzzyError, Schema};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub feature_names: Vec<String>,
    /// Column of each input in the original schema.
    pub feature_indices: Vec<usize>,
    pub schema_width: usize,
    pub positive_label: String,
    pub negative_label: String,
    pub fis: FisConfig,
}

impl TrainedModel {
    pub fn new(schema: &Schema, mask: &FeatureMask, fis: FisConfig) -> Self {
        let feature_indices: Vec<usize> = mask.ones().collect();
        Self {
            feature_names: feature_indices.iter().map(|&i| schema.features()[i].name.clone()).collect(),
            feature_indices,
            schema_width: schema.len(),
            positive_label: schema.positive_label().to_string(),
            negative_label: schema.negative_label().to_string(),
            fis,
        }
    }

    /// Accepts a record already reduced to the model's inputs, or a full-width
    /// record from which the model's columns are picked.
    pub fn inputs_for(&self, record: &[f64]) -> Result<Vec<f64>, FuzzyError> {
        let n = self.feature_indices.len();
        if record.len() == n {
            Ok(record.to_vec())
        } else if record.len() == self.schema_width {
            Ok(self.feature_indices.iter().map(|&i| record[i]).collect())
        } else {
            Err(FuzzyError::ArityMismatch {
                expected: n,
                found: record.len(),
            })
        }
    }

    pub fn label_for(&self, class: u8) -> &str {
        if class == 1 {
            &self.positive_label
        } else {
            &self.negative_label
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes") + "\n"
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let model: Self = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        if model.feature_indices.len() != model.fis.inputs().len()
            || model.feature_indices.iter().any(|&i| i >= model.schema_width)
        {
            return Err(format!("{}: column mapping does not match the fuzzy system", path.display()));
        }
        Ok(model)
    }
}
