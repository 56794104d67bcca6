#[path = "support/oracles.rs"]
mod oracles;

use std::collections::BTreeSet;
use std::path::PathBuf;

use proptest::prelude::*;

use fuzzsel_core::dataset::{load_csv, project};
use fuzzsel_core::fuzzy::partition::{default_inputs, default_output};
use fuzzsel_core::rules::induce_rules;
use fuzzsel_core::selector::reporting_split;
use fuzzsel_core::{Dataset, FeatureMask, FitnessConfig, InductionConfig, Rule, Schema};
use oracles::{column_ranges, reference_rules};

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn induce(data: &Dataset, cfg: &InductionConfig) -> Vec<Rule> {
    let inputs = default_inputs(data, cfg.partitions_per_input).unwrap();
    induce_rules(data, &inputs, &default_output(), cfg).unwrap()
}

fn rows_of(data: &Dataset) -> Vec<Vec<f64>> {
    data.rows().map(<[f64]>::to_vec).collect()
}

/// Library rules must equal the reference set: same antecedents, same
/// consequents, same weights, in antecedent order.
fn assert_matches_reference(data: &Dataset, cfg: &InductionConfig) {
    let rows = rows_of(data);
    let got = induce(data, cfg);
    let want = reference_rules(
        &rows,
        data.labels(),
        &column_ranges(&rows),
        cfg.partitions_per_input,
        cfg.min_rule_weight,
    );
    assert_eq!(got.len(), want.len());
    for (r, (ant, &(class, w))) in got.iter().zip(&want) {
        let terms: Vec<usize> = r.antecedent.iter().map(|&(_, t)| t).collect();
        let vars: Vec<usize> = r.antecedent.iter().map(|&(v, _)| v).collect();
        assert_eq!(vars, (0..ant.len()).collect::<Vec<_>>());
        assert_eq!(&terms, ant);
        assert_eq!(r.consequent, class as usize);
        assert_eq!(r.weight, w);
    }
}

#[test]
fn pima_three_feature_split_matches_reference() {
    let schema = Schema::load(&data_dir().join("pima.schema")).unwrap();
    let data = load_csv(&data_dir().join("pima.csv"), &schema).unwrap();
    let mask = FeatureMask::from_indices(8, &[1, 5, 7]);
    for seed in [1, 42, 2024] {
        let (train, _) = reporting_split(&data, &FitnessConfig::from_seed(seed)).unwrap();
        let train = project(&train, &mask).unwrap();
        let cfg = InductionConfig::default();
        let rules = induce(&train, &cfg);
        assert!(rules.len() <= train.n_records().min(27));
        assert_matches_reference(&train, &cfg);
        assert_matches_reference(&train, &InductionConfig { min_rule_weight: 0.3, ..cfg });
    }
}

#[test]
fn pima_full_width_matches_reference() {
    let schema = Schema::load(&data_dir().join("pima.schema")).unwrap();
    let data = load_csv(&data_dir().join("pima.csv"), &schema).unwrap();
    assert_matches_reference(&data, &InductionConfig::default());
    assert_matches_reference(&data, &InductionConfig { partitions_per_input: 5, min_rule_weight: 0.0 });
}

fn toy_set() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<u8>)> {
    (1usize..4, 1usize..40).prop_flat_map(|(width, n)| {
        (
            prop::collection::vec(prop::collection::vec(-5.0f64..5.0, width), n),
            prop::collection::vec(0u8..2, n),
        )
    })
}

proptest! {
    #[test]
    fn toy_sets_unique_bounded_and_match_reference(
        (rows, labels) in toy_set(),
        p in 2usize..5,
        floor in prop_oneof![Just(0.0), 0.0f64..0.6],
    ) {
        let data = Dataset::new(Schema::numbered(rows[0].len()), rows.clone(), labels).unwrap();
        let cfg = InductionConfig { partitions_per_input: p, min_rule_weight: floor };
        let rules = induce(&data, &cfg);
        let antecedents: BTreeSet<_> = rules.iter().map(|r| r.antecedent.clone()).collect();
        prop_assert_eq!(antecedents.len(), rules.len());
        prop_assert!(rules.len() <= rows.len().min(p.pow(rows[0].len() as u32)));
        prop_assert!(rules.iter().all(|r| r.weight >= floor && r.weight <= 1.0));
        assert_matches_reference(&data, &cfg);
    }

    #[test]
    fn permuting_records_only_matters_through_ties(
        (rows, labels) in toy_set(),
        rotate in 0usize..40,
    ) {
        let n = rows.len();
        let data = Dataset::new(Schema::numbered(rows[0].len()), rows.clone(), labels.clone()).unwrap();
        let k = rotate % n;
        let mut r2 = rows.clone();
        let mut l2 = labels.clone();
        r2.rotate_left(k);
        l2.rotate_left(k);
        let rotated = Dataset::new(Schema::numbered(rows[0].len()), r2, l2).unwrap();
        let cfg = InductionConfig::default();
        let (a, b) = (induce(&data, &cfg), induce(&rotated, &cfg));
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert_eq!(&x.antecedent, &y.antecedent);
            prop_assert_eq!(x.weight, y.weight);
        }
    }
}

#[test]
fn twin_records_keep_the_earlier_label() {
    let rows = vec![vec![1.0, 2.0], vec![1.0, 2.0], vec![0.0, 0.0], vec![3.0, 3.0]];
    for first in [0u8, 1] {
        let labels = vec![first, 1 - first, 0, 1];
        let data = Dataset::new(Schema::numbered(2), rows.clone(), labels).unwrap();
        let rules = induce(&data, &InductionConfig::default());
        let twin = rules.iter().find(|r| r.antecedent == vec![(0, 1), (1, 1)]).unwrap();
        assert_eq!(twin.consequent, first as usize);
    }
}
