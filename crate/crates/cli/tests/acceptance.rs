//! Acceptance gate. Runs every criterion at its fixed tolerance and prints one
//! PASS/FAIL line each; exits non-zero if any criterion fails.

#[path = "../../core/tests/support/oracles.rs"]
mod oracles;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use fuzzsel::{RunArgs, RunConfig};
use fuzzsel_core::dataset::{load_costs, load_csv, project};
use fuzzsel_core::fuzzy::partition::{default_inputs, default_output, uniform_partition};
use fuzzsel_core::fuzzy::centroid;
use fuzzsel_core::ga::{bit_mutation, evolve, evolve_observed, rng_from_seed, roulette_indices};
use fuzzsel_core::rules::induce_rules;
use fuzzsel_core::selector::{brute_force_selection, reporting_split, run_baseline, run_selection};
use fuzzsel_core::{Dataset, FeatureMask, FisConfig, GaError, GaParams, InductionConfig, Rule, Schema};
use oracles::{
    binomial_99, chi_square, chi_square_critical_01, clipped_centroid, column_ranges, reference_rules, TestRng,
};

const SEEDS: std::ops::RangeInclusive<u64> = 1..=20;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn default_config(seed: u64) -> RunConfig {
    RunConfig::resolve(&RunArgs {
        config: Some(data_dir().join("pima.toml")),
        seed: Some(seed),
        ..Default::default()
    })
    .expect("shipped config resolves")
}

/// One default Pima run per seed, with the exhaustive optimum on the same training side.
struct PimaRun {
    seed: u64,
    ga_fitness: f64,
    optimum: f64,
    selected_accuracy: f64,
    baseline_accuracy: f64,
    cost: f64,
    total_cost: f64,
    size: usize,
    run_time: Duration,
    oracle_time: Duration,
}

fn pima_runs() -> Vec<PimaRun> {
    SEEDS
        .map(|seed| {
            let rc = default_config(seed);
            let schema = Schema::load(&rc.schema).unwrap();
            let costs = load_costs(rc.costs.as_ref().unwrap(), &schema).unwrap();
            let data = load_csv(&rc.data, &schema.with_costs(&costs)).unwrap();

            let t = Instant::now();
            let baseline = run_baseline(&data, &costs, &rc.fitness, &rc.induction).unwrap();
            let sel = run_selection(&data, &costs, &rc.ga, &rc.fitness, &rc.induction).unwrap();
            let run_time = t.elapsed();

            let t = Instant::now();
            let (train, _) = reporting_split(&data, &rc.fitness).unwrap();
            let (_, optimum) = brute_force_selection(&train, &costs, &rc.fitness, &rc.induction).unwrap();
            let oracle_time = t.elapsed();

            let r = sel.result;
            PimaRun {
                seed,
                ga_fitness: r.fitness,
                optimum,
                selected_accuracy: r.accuracy,
                baseline_accuracy: baseline.accuracy,
                cost: r.cost,
                total_cost: r.total_cost,
                size: r.best_mask.count_ones(),
                run_time,
                oracle_time,
            }
        })
        .collect()
}

fn selection_oracle(runs: &[PimaRun]) -> Verdict {
    let hits = runs.iter().filter(|r| r.ga_fitness >= r.optimum - 0.02).count();
    let total: Duration = runs.iter().map(|r| r.run_time + r.oracle_time).sum();
    let misses: Vec<String> = runs
        .iter()
        .filter(|r| r.ga_fitness < r.optimum - 0.02)
        .map(|r| format!("seed {}: {:.4} vs {:.4}", r.seed, r.ga_fitness, r.optimum))
        .collect();
    verdict(
        hits >= 18 && total < Duration::from_secs(600),
        format!(
            "GA within 0.02 of the 255-mask optimum in {hits}/20 seeds (need 18); total {:.1}s (limit 600s){}",
            total.as_secs_f64(),
            if misses.is_empty() { String::new() } else { format!("; misses: {}", misses.join(", ")) }
        ),
    )
}

fn cost_reduction(runs: &[PimaRun]) -> Verdict {
    let ok = runs
        .iter()
        .filter(|r| r.cost <= 0.55 * r.total_cost && (1..=5).contains(&r.size))
        .count();
    let costs: Vec<String> = runs.iter().map(|r| format!("{}", r.cost)).collect();
    verdict(
        ok >= 16,
        format!(
            "cost <= 0.55 x total and 1-5 features in {ok}/20 seeds (need 16); costs [{}] of {}",
            costs.join(" "),
            runs[0].total_cost
        ),
    )
}

fn accuracy_band(runs: &[PimaRun]) -> Verdict {
    let base_ok = runs.iter().filter(|r| r.baseline_accuracy >= 0.62).count();
    let keep_ok = runs
        .iter()
        .filter(|r| r.selected_accuracy >= r.baseline_accuracy - 0.03)
        .count();
    let high = runs.iter().filter(|r| r.selected_accuracy >= 0.70).count();
    let slowest = runs.iter().map(|r| r.run_time).max().unwrap();
    let pairs: Vec<String> = runs
        .iter()
        .map(|r| format!("{:.3}/{:.3}", r.baseline_accuracy, r.selected_accuracy))
        .collect();
    verdict(
        base_ok == 20 && keep_ok == 20 && high >= 10 && slowest < Duration::from_secs(60),
        format!(
            "baseline >= 0.62 in {base_ok}/20, selected >= baseline - 0.03 in {keep_ok}/20, \
             selected >= 0.70 in {high}/20 (need 10), slowest run {:.2}s; baseline/selected [{}]",
            slowest.as_secs_f64(),
            pairs.join(" ")
        ),
    )
}

/// Exact discrete centroid 3880667/7307000 of max(min(0.3, 1 - y), min(0.4, y)) on 1001 points.
const GOLDEN_CRISP: f64 = 0.531_088_955_795_812_3;

fn fuzzy_engine() -> Verdict {
    let inputs = vec![
        uniform_partition("x1", 0.0, 10.0, 2).unwrap(),
        uniform_partition("x2", 0.0, 10.0, 2).unwrap(),
    ];
    let rules = vec![
        Rule::new(vec![(0, 0), (1, 0)], 0, 1.0),
        Rule::new(vec![(0, 1), (1, 1)], 1, 1.0),
    ];
    let fis = FisConfig::new(inputs, default_output(), rules, 1001, 0.5).unwrap();
    let golden = fis.infer(&[4.0, 7.0]).unwrap().crisp;
    let golden_ok = (golden - GOLDEN_CRISP).abs() < 1e-9;

    let shapes = [(0.0, 0.0, 1.0), (0.0, 1.0, 1.0)];
    let mut rng = TestRng(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let strengths = [rng.unit(), rng.unit()];
        let got = centroid(&fis.aggregate(&strengths).unwrap());
        let fine = clipped_centroid(&shapes, &strengths, 0.0, 1.0, 100_001);
        worst = worst.max((got - fine).abs());
    }
    verdict(
        golden_ok && worst <= 1e-3,
        format!("golden crisp {golden:.12} (want {GOLDEN_CRISP:.12}, tol 1e-9); worst fine-grid gap {worst:.2e} over 100 activations (tol 1e-3)"),
    )
}

fn rugged(m: &FeatureMask) -> Result<f64, GaError> {
    let v: u64 = m.bits().iter().fold(0, |acc, &b| acc * 2 + b as u64);
    Ok(((v * 37) % 101) as f64 / 100.0 - 0.03 * m.count_ones() as f64)
}

fn ga_properties() -> Verdict {
    let mut notes = Vec::new();

    let mut structural = true;
    for seed in 0..20 {
        let params = GaParams { seed, population_size: 20, mutation_prob: 0.2, max_generations: 40, ..GaParams::default() };
        let mut best_seen = f64::NEG_INFINITY;
        let evo = evolve_observed(&params, 10, rugged, |pop| {
            let best = pop.fitnesses.as_ref().unwrap().iter().copied().fold(f64::NEG_INFINITY, f64::max);
            structural &= best >= best_seen
                && pop.len() == 20
                && pop.individuals.iter().all(|m| m.len() == 10 && !m.is_all_zero());
            best_seen = best_seen.max(best);
        })
        .unwrap();
        structural &= evo.trace.best_so_far().windows(2).all(|w| w[1] >= w[0]);
    }
    notes.push(format!("elitism/sizes/repair {}", if structural { "ok" } else { "VIOLATED" }));

    let p = GaParams { seed: 7, ..GaParams::default() };
    let deterministic = evolve(&p, 12, rugged).unwrap().trace.to_csv() == evolve(&p, 12, rugged).unwrap().trace.to_csv();
    notes.push(format!("determinism {}", if deterministic { "ok" } else { "VIOLATED" }));

    let n = 100_000;
    let tally = |idx: Vec<usize>, k: usize| {
        let mut c = vec![0u64; k];
        for i in idx {
            c[i] += 1;
        }
        c
    };
    let uniform = tally(roulette_indices(&[0.5; 10], n, &mut rng_from_seed(1)), 10);
    let chi_u = chi_square(&uniform, &[n as f64 / 10.0; 10]);
    let skewed = tally(roulette_indices(&[1.0, 2.0, 3.0], n, &mut rng_from_seed(2)), 3);
    let w = [1.0 + 1e-9, 2.0 + 1e-9];
    let total = 1e-9 + w[0] + w[1];
    let chi_s = chi_square(&skewed[1..], &[n as f64 * w[0] / total, n as f64 * w[1] / total]);
    let roulette_ok = chi_u < chi_square_critical_01(9) && skewed[0] == 0 && chi_s < chi_square_critical_01(1);
    notes.push(format!("roulette chi2 {chi_u:.2} (df 9), {chi_s:.2} (df 1)"));

    let mut rng = rng_from_seed(3);
    let full = FeatureMask::full(8);
    let flips: u64 = (0..n).map(|_| (8 - bit_mutation(&full, &mut rng, 0.05).count_ones()) as u64).sum();
    let (lo, hi) = binomial_99(8 * n as u64, 0.05);
    let mean = flips as f64 / n as f64;
    let mutation_ok = (lo..=hi).contains(&(flips as f64)) && (0.36..=0.44).contains(&mean);
    notes.push(format!("mean flips {mean:.4}"));

    let onemax = |m: &FeatureMask| -> Result<f64, GaError> { Ok(m.count_ones() as f64) };
    let converged = (0..100)
        .filter(|&seed| evolve(&GaParams { seed, ..GaParams::default() }, 8, onemax).unwrap().best_mask == full)
        .count();
    notes.push(format!("OneMax {converged}/100"));

    verdict(
        structural && deterministic && roulette_ok && mutation_ok && converged >= 99,
        notes.join("; "),
    )
}

fn induction_matches(data: &Dataset, p: usize) -> bool {
    let cfg = InductionConfig { partitions_per_input: p, min_rule_weight: 0.0 };
    let inputs = default_inputs(data, p).unwrap();
    let rules = induce_rules(data, &inputs, &default_output(), &cfg).unwrap();
    let rows: Vec<Vec<f64>> = data.rows().map(<[f64]>::to_vec).collect();
    let want = reference_rules(&rows, data.labels(), &column_ranges(&rows), p, 0.0);
    let unique: BTreeSet<_> = rules.iter().map(|r| r.antecedent.clone()).collect();
    let bound = data.n_records().min(p.pow(data.n_features() as u32));
    unique.len() == rules.len()
        && rules.len() <= bound
        && rules.len() == want.len()
        && rules.iter().zip(&want).all(|(r, (ant, &(class, w)))| {
            r.antecedent.iter().map(|&(_, t)| t).eq(ant.iter().copied())
                && r.consequent == class as usize
                && r.weight == w
        })
}

fn rule_induction() -> Verdict {
    let mut rng = TestRng(99);
    let mut toy_ok = 0;
    for _ in 0..200 {
        let width = 1 + (rng.next_u64() % 3) as usize;
        let n = 1 + (rng.next_u64() % 40) as usize;
        let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..width).map(|_| (rng.unit() * 10.0).round() / 2.0).collect()).collect();
        let labels: Vec<u8> = (0..n).map(|_| (rng.next_u64() % 2) as u8).collect();
        let data = Dataset::new(Schema::numbered(width), rows, labels).unwrap();
        let p = 2 + (rng.next_u64() % 3) as usize;
        toy_ok += usize::from(induction_matches(&data, p));
    }
    let schema = Schema::load(&data_dir().join("pima.schema")).unwrap();
    let data = load_csv(&data_dir().join("pima.csv"), &schema).unwrap();
    let (train, _) = reporting_split(&data, &default_config(42).fitness).unwrap();
    let pima_ok = induction_matches(&project(&train, &FeatureMask::from_indices(8, &[1, 5, 7])).unwrap(), 3);
    verdict(
        toy_ok == 200 && pima_ok,
        format!("toy sets matching reference, unique and bounded: {toy_ok}/200; Pima 3-feature split: {pima_ok}"),
    )
}

fn select_into(out: &Path, workers: &str) -> bool {
    let d = data_dir();
    Command::new(env!("CARGO_BIN_EXE_fuzzsel"))
        .args(["select", "--config"])
        .arg(d.join("pima.toml"))
        .args(["--seed", "42", "--workers", workers, "--out"])
        .arg(out)
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn end_to_end_determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let runs = [("a", "1"), ("b", "1"), ("c", "4"), ("d", "2")];
    if !runs.iter().all(|(name, w)| select_into(&dir.path().join(name), w)) {
        return verdict(false, "select failed".into());
    }
    let names = ["result.json", "baseline.json", "model.json", "trace.csv", "rules.txt"];
    let read = |run: &str, f: &str| fs::read(dir.path().join(run).join(f)).unwrap();
    let identical = names
        .iter()
        .all(|f| runs.iter().all(|(run, _)| read(run, f) == read("a", f)));
    verdict(
        identical,
        format!("{} output files compared across 2 invocations x workers 1, 2, 4", names.len()),
    )
}

fn main() {
    let t = Instant::now();
    let runs = pima_runs();
    let criteria: Vec<(&str, Verdict)> = vec![
        ("selection matches exhaustive oracle", selection_oracle(&runs)),
        ("cost reduction", cost_reduction(&runs)),
        ("accuracy band", accuracy_band(&runs)),
        ("fuzzy engine golden and fine-grid", fuzzy_engine()),
        ("GA property suite", ga_properties()),
        ("rule induction", rule_induction()),
        ("end-to-end determinism", end_to_end_determinism()),
    ];
    println!();
    for (i, (name, v)) in criteria.iter().enumerate() {
        println!("{} criterion {}: {name}: {}", if v.pass { "PASS" } else { "FAIL" }, i + 1, v.detail);
    }
    let passed = criteria.iter().filter(|(_, v)| v.pass).count();
    println!("acceptance: {passed}/{} criteria passed in {:.1}s", criteria.len(), t.elapsed().as_secs_f64());
    if passed != criteria.len() {
        std::process::exit(1);
    }
}
