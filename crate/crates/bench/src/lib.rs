//! Shared fixtures for the pipeline benchmarks.

use std::path::PathBuf;

use fuzzsel_core::dataset::{load_costs, load_csv};
use fuzzsel_core::{CostTable, Dataset, Schema};

/// The shipped Pima dataset and its default cost table.
pub fn pima() -> (Dataset, CostTable) {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let schema = Schema::load(&dir.join("pima.schema")).expect("pima schema");
    let costs = load_costs(&dir.join("pima.costs"), &schema).expect("pima costs");
    let data = load_csv(&dir.join("pima.csv"), &schema.with_costs(&costs)).expect("pima data");
    (data, costs)
}
