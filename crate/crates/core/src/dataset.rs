//! Tabular data, feature schema, test costs, and stratified partitioning.
//!
//! Data files are plain CSV: one record per line, the `L` feature columns in
//! schema order followed by the label column. A first line containing any
//! non-numeric cell is treated as a header.
//!
//! The schema is a TOML file:
//!
//! ```toml
//! label = "Outcome"
//! positive_label = "1"
//! negative_label = "0"
//!
//! [[features]]
//! name = "Glucose"
//! index = 0
//! min = 0.0          # optional expected range, used by `validate`
//! max = 250.0
//! impute_zero = true # optional, zero means "missing" for median imputation
//! ```
//!
//! The cost file has one `Name = cost` pair per line; `#` starts a comment.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::ga::{rng_from_seed, FeatureMask};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("row {row}: {reason}")]
    MalformedRow { row: usize, reason: String },
    #[error("row {row}: expected {expected} columns, found {found}")]
    WrongColumnCount { row: usize, expected: usize, found: usize },
    #[error("row {row}: unknown label {value:?}")]
    UnknownLabel { row: usize, value: String },
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("cost file is missing feature {0:?}")]
    MissingFeature(String),
    #[error("cost file lists feature {0:?} more than once")]
    DuplicateFeature(String),
    #[error("feature {0:?} has a negative cost")]
    NegativeCost(String),
    #[error("cost file names unknown feature {0:?}")]
    UnknownFeature(String),
    #[error("cost file line {line}: {reason}")]
    CostSyntax { line: usize, reason: String },
    #[error("mask has {found} bits, schema has {expected} features")]
    LengthMismatch { expected: usize, found: usize },
    #[error("mask selects no features")]
    EmptyMask,
    #[error("class {class} has {count} records, need at least {needed}")]
    ClassTooSmall { class: u8, count: usize, needed: usize },
    #[error("invalid split plan: {0}")]
    InvalidPlan(String),
}

fn read_file(path: &Path) -> Result<String, DatasetError> {
    fs::read_to_string(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            DatasetError::FileNotFound(path.to_path_buf())
        } else {
            DatasetError::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub name: String,
    /// Column position, 0-based.
    pub index: usize,
    #[serde(default)]
    pub cost: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub impute_zero: bool,
}

impl FeatureSpec {
    pub fn new(name: impl Into<String>, index: usize) -> Self {
        Self {
            name: name.into(),
            index,
            cost: 0.0,
            min: None,
            max: None,
            impute_zero: false,
        }
    }

    pub fn value_range(&self) -> Option<(f64, f64)> {
        self.min.zip(self.max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SchemaFile", into = "SchemaFile")]
pub struct Schema {
    features: Vec<FeatureSpec>,
    label_name: String,
    positive_label: String,
    negative_label: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemaFile {
    label: String,
    #[serde(default = "default_positive")]
    positive_label: String,
    #[serde(default = "default_negative")]
    negative_label: String,
    features: Vec<FeatureSpec>,
}

fn default_positive() -> String {
    "1".into()
}

fn default_negative() -> String {
    "0".into()
}

impl TryFrom<SchemaFile> for Schema {
    type Error = DatasetError;

    fn try_from(f: SchemaFile) -> Result<Self, Self::Error> {
        Schema::new(f.features, f.label, f.positive_label, f.negative_label)
    }
}

impl From<Schema> for SchemaFile {
    fn from(s: Schema) -> Self {
        SchemaFile {
            label: s.label_name,
            positive_label: s.positive_label,
            negative_label: s.negative_label,
            features: s.features,
        }
    }
}

impl Schema {
    /// Features are sorted by index; indices must be exactly `0..L`.
    pub fn new(
        mut features: Vec<FeatureSpec>,
        label_name: impl Into<String>,
        positive_label: impl Into<String>,
        negative_label: impl Into<String>,
    ) -> Result<Self, DatasetError> {
        let label_name = label_name.into();
        let positive_label = positive_label.into();
        let negative_label = negative_label.into();
        let bad = |m: String| Err(DatasetError::InvalidSchema(m));
        if features.is_empty() {
            return bad("at least one feature is required".into());
        }
        features.sort_by_key(|f| f.index);
        for (i, f) in features.iter().enumerate() {
            if f.index != i {
                return bad(format!("feature indices must be unique and contiguous from 0; found {:?} at position {i}", f.name));
            }
            if f.name.is_empty() || f.name.contains([',', '=', ' ']) {
                return bad(format!("bad feature name {:?}", f.name));
            }
            if !(f.cost >= 0.0 && f.cost.is_finite()) {
                return Err(DatasetError::NegativeCost(f.name.clone()));
            }
            if let Some((lo, hi)) = f.value_range() {
                if lo.is_nan() || hi.is_nan() || lo >= hi {
                    return bad(format!("feature {:?}: min must be < max", f.name));
                }
            }
        }
        let mut seen = HashMap::new();
        for f in &features {
            if seen.insert(f.name.as_str(), ()).is_some() {
                return bad(format!("duplicate feature name {:?}", f.name));
            }
        }
        if seen.contains_key(label_name.as_str()) {
            return bad(format!("label column {label_name:?} is also a feature"));
        }
        if positive_label == negative_label {
            return bad("positive and negative labels must differ".into());
        }
        Ok(Self {
            features,
            label_name,
            positive_label,
            negative_label,
        })
    }

    /// Anonymous schema with features `f0..f{n-1}` and labels `1`/`0`.
    pub fn numbered(n: usize) -> Self {
        let features = (0..n).map(|i| FeatureSpec::new(format!("f{i}"), i)).collect();
        Self::new(features, "label", "1", "0").expect("numbered schema is valid")
    }

    pub fn from_toml_str(text: &str) -> Result<Self, DatasetError> {
        toml::from_str(text).map_err(|e| DatasetError::InvalidSchema(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, DatasetError> {
        Self::from_toml_str(&read_file(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("schema serializes")
    }

    pub fn features(&self) -> &[FeatureSpec] {
        &self.features
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn label_name(&self) -> &str {
        &self.label_name
    }

    pub fn positive_label(&self) -> &str {
        &self.positive_label
    }

    pub fn negative_label(&self) -> &str {
        &self.negative_label
    }

    pub fn names(&self) -> Vec<&str> {
        self.features.iter().map(|f| f.name.as_str()).collect()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f.name == name)
    }

    /// Copies costs from the table into the feature specs.
    pub fn with_costs(mut self, costs: &CostTable) -> Self {
        for (f, c) in self.features.iter_mut().zip(costs.costs()) {
            f.cost = *c;
        }
        self
    }

    fn parse_label(&self, cell: &str) -> Option<u8> {
        let matches = |declared: &str| {
            cell == declared
                || matches!((cell.parse::<f64>(), declared.parse::<f64>()), (Ok(a), Ok(b)) if a == b)
        };
        if matches(&self.positive_label) {
            Some(1)
        } else if matches(&self.negative_label) {
            Some(0)
        } else {
            None
        }
    }
}

/// Per-feature test cost, aligned with the schema's feature order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostTable {
    names: Vec<String>,
    costs: Vec<f64>,
}

impl CostTable {
    pub fn new(names: Vec<String>, costs: Vec<f64>) -> Result<Self, DatasetError> {
        assert_eq!(names.len(), costs.len());
        for (n, &c) in names.iter().zip(&costs) {
            if !(c >= 0.0 && c.is_finite()) {
                return Err(DatasetError::NegativeCost(n.clone()));
            }
        }
        Ok(Self { names, costs })
    }

    /// Every feature at the same cost.
    pub fn uniform(schema: &Schema, cost: f64) -> Self {
        Self::new(
            schema.names().into_iter().map(String::from).collect(),
            vec![cost; schema.len()],
        )
        .expect("uniform cost must be non-negative")
    }

    /// Costs as declared in the schema's feature specs.
    pub fn from_schema(schema: &Schema) -> Self {
        Self {
            names: schema.features().iter().map(|f| f.name.clone()).collect(),
            costs: schema.features().iter().map(|f| f.cost).collect(),
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn cost_of(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| n == name).map(|i| self.costs[i])
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    pub fn total_cost(&self) -> f64 {
        self.costs.iter().sum()
    }

    /// Sum of costs over the set bits of `mask`.
    pub fn mask_cost(&self, mask: &FeatureMask) -> Result<f64, DatasetError> {
        if mask.len() != self.costs.len() {
            return Err(DatasetError::LengthMismatch {
                expected: self.costs.len(),
                found: mask.len(),
            });
        }
        Ok(mask.ones().map(|i| self.costs[i]).sum())
    }

    /// Parses the `Name = cost` line format against a schema.
    pub fn parse(text: &str, schema: &Schema) -> Result<Self, DatasetError> {
        let mut found: Vec<Option<f64>> = vec![None; schema.len()];
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |reason: &str| DatasetError::CostSyntax {
                line: lineno + 1,
                reason: reason.to_string(),
            };
            let (name, value) = line.split_once('=').ok_or_else(|| syntax("expected `name = cost`"))?;
            let name = name.trim().trim_matches('"');
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| syntax("cost is not a number"))?;
            let pos = schema
                .position(name)
                .ok_or_else(|| DatasetError::UnknownFeature(name.to_string()))?;
            if found[pos].is_some() {
                return Err(DatasetError::DuplicateFeature(name.to_string()));
            }
            if !(value >= 0.0 && value.is_finite()) {
                return Err(DatasetError::NegativeCost(name.to_string()));
            }
            found[pos] = Some(value);
        }
        let mut costs = Vec::with_capacity(schema.len());
        for (f, c) in schema.features().iter().zip(found) {
            costs.push(c.ok_or_else(|| DatasetError::MissingFeature(f.name.clone()))?);
        }
        Self::new(schema.names().into_iter().map(String::from).collect(), costs)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (n, c) in self.names.iter().zip(&self.costs) {
            let _ = writeln!(out, "{n} = {c}");
        }
        out
    }
}

/// Reads and validates a cost file.
pub fn load_costs(path: &Path, schema: &Schema) -> Result<CostTable, DatasetError> {
    CostTable::parse(&read_file(path)?, schema)
}

pub fn mask_cost(mask: &FeatureMask, costs: &CostTable) -> Result<f64, DatasetError> {
    costs.mask_cost(mask)
}

/// Immutable N x L table of finite values with binary labels.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    schema: Schema,
    values: Vec<f64>,
    labels: Vec<u8>,
}

impl Dataset {
    /// Requires at least one record, rows of schema width, finite values,
    /// and labels in {0, 1}. Class balance is checked by [`Dataset::check_splittable`].
    pub fn new(schema: Schema, rows: Vec<Vec<f64>>, labels: Vec<u8>) -> Result<Self, DatasetError> {
        let width = schema.len();
        if rows.len() != labels.len() {
            return Err(DatasetError::InvalidDataset(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        if rows.is_empty() {
            return Err(DatasetError::InvalidDataset("no records".into()));
        }
        let mut values = Vec::with_capacity(rows.len() * width);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != width {
                return Err(DatasetError::WrongColumnCount {
                    row: i + 1,
                    expected: width,
                    found: row.len(),
                });
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite()) {
                return Err(DatasetError::MalformedRow {
                    row: i + 1,
                    reason: format!("non-finite value {v}"),
                });
            }
            values.extend(row);
        }
        if let Some(l) = labels.iter().find(|&&l| l > 1) {
            return Err(DatasetError::InvalidDataset(format!("label {l} is not 0 or 1")));
        }
        Ok(Self { schema, values, labels })
    }

    /// At least two records and both classes present.
    pub fn check_splittable(&self) -> Result<(), DatasetError> {
        for class in [0u8, 1] {
            let count = self.class_count(class);
            if count == 0 {
                return Err(DatasetError::ClassTooSmall { class, count, needed: 1 });
            }
        }
        Ok(())
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn n_records(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.schema.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let w = self.n_features();
        &self.values[i * w..(i + 1) * w]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.n_features())
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows().map(move |r| r[j])
    }

    pub fn label(&self, i: usize) -> u8 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn class_count(&self, class: u8) -> usize {
        self.labels.iter().filter(|&&l| l == class).count()
    }

    /// Records at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let w = self.n_features();
        let mut values = Vec::with_capacity(indices.len() * w);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        Dataset {
            schema: self.schema.clone(),
            values,
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// SHA-256 over feature names, values, and labels, as lowercase hex.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for name in self.schema.names() {
            h.update(name.as_bytes());
            h.update([0u8]);
        }
        for v in &self.values {
            h.update(v.to_le_bytes());
        }
        h.update(&self.labels);
        h.finalize().iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    /// Header line then one line per record; floats use shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut out = self.schema.names().join(",");
        let _ = writeln!(out, ",{}", self.schema.label_name());
        for (row, &l) in self.rows().zip(&self.labels) {
            for v in row {
                let _ = write!(out, "{v},");
            }
            let label = if l == 1 {
                self.schema.positive_label()
            } else {
                self.schema.negative_label()
            };
            let _ = writeln!(out, "{label}");
        }
        out
    }

    /// Parses CSV text; see the module docs for the layout.
    pub fn from_csv_str(text: &str, schema: Schema) -> Result<Self, DatasetError> {
        let width = schema.len() + 1;
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        let mut first = true;
        for (lineno, raw) in text.lines().enumerate() {
            let row = lineno + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let cells: Vec<&str> = line.split(',').map(str::trim).collect();
            if first {
                first = false;
                // Labels may be non-numeric, so only the feature cells decide.
                if cells.iter().take(width - 1).any(|c| c.parse::<f64>().is_err()) {
                    continue;
                }
            }
            if cells.len() != width {
                return Err(DatasetError::WrongColumnCount {
                    row,
                    expected: width,
                    found: cells.len(),
                });
            }
            let mut values = Vec::with_capacity(width - 1);
            for (j, c) in cells[..width - 1].iter().enumerate() {
                let v: f64 = c.parse().map_err(|_| DatasetError::MalformedRow {
                    row,
                    reason: format!("column {} ({}) is not numeric: {c:?}", j, schema.features()[j].name),
                })?;
                if !v.is_finite() {
                    return Err(DatasetError::MalformedRow {
                        row,
                        reason: format!("column {j} is not finite"),
                    });
                }
                values.push(v);
            }
            let label_cell = cells[width - 1];
            let label = schema.parse_label(label_cell).ok_or_else(|| DatasetError::UnknownLabel {
                row,
                value: label_cell.to_string(),
            })?;
            rows.push(values);
            labels.push(label);
        }
        Dataset::new(schema, rows, labels)
    }
}

/// Loads and validates a labelled CSV file.
pub fn load_csv(path: &Path, schema: &Schema) -> Result<Dataset, DatasetError> {
    let data = Dataset::from_csv_str(&read_file(path)?, schema.clone())?;
    if data.n_records() < 2 {
        return Err(DatasetError::InvalidDataset("need at least two records".into()));
    }
    data.check_splittable()?;
    Ok(data)
}

/// Unlabelled records for classification. Header auto-detected as in [`load_csv`].
pub fn load_unlabeled_csv(path: &Path) -> Result<Vec<Vec<f64>>, DatasetError> {
    let text = read_file(path)?;
    let mut out = Vec::new();
    let mut first = true;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let parsed: Result<Vec<f64>, _> = line.split(',').map(|c| c.trim().parse::<f64>()).collect();
        match parsed {
            Ok(v) if v.iter().all(|x| x.is_finite()) => out.push(v),
            _ if first => {}
            _ => {
                return Err(DatasetError::MalformedRow {
                    row: lineno + 1,
                    reason: "non-numeric or non-finite cell".into(),
                })
            }
        }
        first = false;
    }
    Ok(out)
}

/// Keeps the masked columns in original order; indices are renumbered from 0.
pub fn project(data: &Dataset, mask: &FeatureMask) -> Result<Dataset, DatasetError> {
    if mask.len() != data.n_features() {
        return Err(DatasetError::LengthMismatch {
            expected: data.n_features(),
            found: mask.len(),
        });
    }
    if mask.is_all_zero() {
        return Err(DatasetError::EmptyMask);
    }
    let cols: Vec<usize> = mask.ones().collect();
    let features = cols
        .iter()
        .enumerate()
        .map(|(new, &old)| FeatureSpec {
            index: new,
            ..data.schema.features[old].clone()
        })
        .collect();
    let schema = Schema {
        features,
        ..data.schema.clone()
    };
    let mut values = Vec::with_capacity(data.n_records() * cols.len());
    for row in data.rows() {
        values.extend(cols.iter().map(|&j| row[j]));
    }
    Ok(Dataset {
        schema,
        values,
        labels: data.labels.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

pub fn feature_stats(data: &Dataset) -> Vec<FeatureStats> {
    (0..data.n_features())
        .map(|j| {
            let (mut min, mut max, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
            for v in data.column(j) {
                min = min.min(v);
                max = max.max(v);
                sum += v;
            }
            FeatureStats {
                min,
                max,
                mean: sum / data.n_records() as f64,
            }
        })
        .collect()
}

/// Replaces zeros in `impute_zero` columns with the median of the non-zero
/// values found in the `train` rows. Columns with no non-zero training value
/// are left alone.
pub fn impute_zero_median(data: &Dataset, train: &[usize]) -> Dataset {
    let mut out = data.clone();
    let w = data.n_features();
    for (j, f) in data.schema.features().iter().enumerate() {
        if !f.impute_zero {
            continue;
        }
        let mut vals: Vec<f64> = train.iter().map(|&i| data.row(i)[j]).filter(|&v| v != 0.0).collect();
        if vals.is_empty() {
            continue;
        }
        vals.sort_by(f64::total_cmp);
        let n = vals.len();
        let median = if n % 2 == 1 {
            vals[n / 2]
        } else {
            (vals[n / 2 - 1] + vals[n / 2]) / 2.0
        };
        for i in 0..data.n_records() {
            if out.values[i * w + j] == 0.0 {
                out.values[i * w + j] = median;
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SplitKind {
    Holdout { train_fraction: f64 },
    KFold { k: usize },
}

/// Stratified partitioning plan. Splits are always stratified by class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitPlan {
    #[serde(flatten)]
    pub kind: SplitKind,
    pub seed: u64,
}

impl SplitPlan {
    pub fn holdout(train_fraction: f64, seed: u64) -> Self {
        Self {
            kind: SplitKind::Holdout { train_fraction },
            seed,
        }
    }

    pub fn k_fold(k: usize, seed: u64) -> Self {
        Self {
            kind: SplitKind::KFold { k },
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Stratified holdout (one split) or k-fold (k splits). Index lists are sorted.
pub fn stratified_split(data: &Dataset, plan: &SplitPlan) -> Result<Vec<Split>, DatasetError> {
    let n = data.n_records();
    let mut rng = rng_from_seed(plan.seed);
    let mut by_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (i, &l) in data.labels().iter().enumerate() {
        by_class[l as usize].push(i);
    }
    for members in &mut by_class {
        members.shuffle(&mut rng);
    }
    match plan.kind {
        SplitKind::Holdout { train_fraction } => {
            if !(train_fraction > 0.0 && train_fraction < 1.0) {
                return Err(DatasetError::InvalidPlan(format!(
                    "train_fraction must be in (0, 1), got {train_fraction}"
                )));
            }
            let mut train = Vec::new();
            let mut test = Vec::new();
            for (class, members) in by_class.iter().enumerate() {
                let count = members.len();
                if count < 2 {
                    return Err(DatasetError::ClassTooSmall {
                        class: class as u8,
                        count,
                        needed: 2,
                    });
                }
                let n_train = ((train_fraction * count as f64).round() as usize).clamp(1, count - 1);
                train.extend_from_slice(&members[..n_train]);
                test.extend_from_slice(&members[n_train..]);
            }
            train.sort_unstable();
            test.sort_unstable();
            Ok(vec![Split { train, test }])
        }
        SplitKind::KFold { k } => {
            if k < 2 || k > n {
                return Err(DatasetError::InvalidPlan(format!("k must be in [2, {n}], got {k}")));
            }
            for (class, members) in by_class.iter().enumerate() {
                if members.len() < k {
                    return Err(DatasetError::ClassTooSmall {
                        class: class as u8,
                        count: members.len(),
                        needed: k,
                    });
                }
            }
            let mut fold_of = vec![0usize; n];
            // Class 1 continues the round-robin where class 0 stopped so fold
            // sizes also stay within one of each other.
            let offset = by_class[0].len() % k;
            for (t, &i) in by_class[0].iter().enumerate() {
                fold_of[i] = t % k;
            }
            for (t, &i) in by_class[1].iter().enumerate() {
                fold_of[i] = (t + offset) % k;
            }
            Ok((0..k)
                .map(|f| {
                    let (test, train): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| fold_of[i] == f);
                    Split { train, test }
                })
                .collect())
        }
    }
}
