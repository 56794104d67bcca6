//! Binary-chromosome genetic algorithm.
//!
//! The loop is the classic evaluate / select / reproduce / replace cycle:
//! roulette-wheel selection on windowed fitness, two-point crossover,
//! per-bit mutation, and generational replacement with elitism. All random
//! draws come from one seeded generator on the calling thread; fitness
//! evaluation may run in parallel and is written back by index.

mod engine;
mod mask;
mod operators;

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use engine::{evolve, evolve_observed, Evolution};
pub use mask::FeatureMask;
pub use operators::{
    bit_mutation, crossover_at, init_population, repair, roulette_indices, roulette_select,
    roulette_weights, two_point_crossover, ROULETTE_EPSILON,
};

/// Generator used for every stochastic GA step.
pub type GaRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> GaRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaError {
    #[error("invalid GA parameter: {0}")]
    InvalidParams(String),
    #[error("mask lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("population has not been evaluated")]
    UnevaluatedPopulation,
    #[error("fitness of mask {mask} is not finite ({value})")]
    NonFiniteFitness { mask: String, value: f64 },
    #[error("invalid bitstring {0:?}")]
    InvalidBitstring(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaParams {
    pub population_size: usize,
    /// Probability that a parent pair undergoes crossover.
    pub crossover_prob: f64,
    /// Per-bit flip probability.
    pub mutation_prob: f64,
    pub max_generations: usize,
    /// Stop after this many generations without improvement of the best fitness.
    pub stagnation_window: usize,
    pub elite_count: usize,
    pub seed: u64,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            population_size: 50,
            crossover_prob: 0.6,
            mutation_prob: 0.05,
            max_generations: 100,
            stagnation_window: 25,
            elite_count: 1,
            seed: 0,
        }
    }
}

impl GaParams {
    /// Hard invariants. Violations make a run meaningless.
    pub fn validate(&self) -> Result<(), GaError> {
        let bad = |msg: String| Err(GaError::InvalidParams(msg));
        if self.population_size < 2 {
            return bad(format!("population_size must be >= 2, got {}", self.population_size));
        }
        if !(0.0..=1.0).contains(&self.crossover_prob) {
            return bad(format!("crossover_prob must be in [0, 1], got {}", self.crossover_prob));
        }
        if !(0.0..=1.0).contains(&self.mutation_prob) {
            return bad(format!("mutation_prob must be in [0, 1], got {}", self.mutation_prob));
        }
        if self.elite_count < 1 || self.elite_count >= self.population_size {
            return bad(format!(
                "elite_count must be in [1, population_size), got {}",
                self.elite_count
            ));
        }
        if self.stagnation_window < 1 {
            return bad("stagnation_window must be >= 1".into());
        }
        Ok(())
    }

    /// Settings outside the customary operating ranges (population 40-60,
    /// crossover 0.3-0.9, mutation 0.01-0.2). Not errors; callers log them.
    pub fn range_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(40..=60).contains(&self.population_size) {
            out.push(format!("population_size {} outside 40-60", self.population_size));
        }
        if !(0.3..=0.9).contains(&self.crossover_prob) {
            out.push(format!("crossover_prob {} outside 0.3-0.9", self.crossover_prob));
        }
        if !(0.01..=0.2).contains(&self.mutation_prob) {
            out.push(format!("mutation_prob {} outside 0.01-0.2", self.mutation_prob));
        }
        out
    }
}

/// `individuals` is the Nind x Lind chromosome matrix, one row per mask.
#[derive(Clone, Debug, PartialEq)]
pub struct Population {
    pub individuals: Vec<FeatureMask>,
    /// Aligned with `individuals` once evaluated.
    pub fitnesses: Option<Vec<f64>>,
    pub generation: usize,
}

impl Population {
    pub fn new(individuals: Vec<FeatureMask>) -> Self {
        Self {
            individuals,
            fitnesses: None,
            generation: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.individuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.individuals.is_empty()
    }

    pub fn chromosome_length(&self) -> usize {
        self.individuals.first().map_or(0, FeatureMask::len)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    pub best_mask: FeatureMask,
}

/// One record per completed generation; record 0 is the initial population.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EvolutionTrace {
    pub records: Vec<GenerationRecord>,
}

impl EvolutionTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Best fitness seen up to and including each generation.
    pub fn best_so_far(&self) -> Vec<f64> {
        let mut best = f64::NEG_INFINITY;
        self.records
            .iter()
            .map(|r| {
                best = best.max(r.best_fitness);
                best
            })
            .collect()
    }

    /// `generation,best_fitness,mean_fitness,best_mask`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("generation,best_fitness,mean_fitness,best_mask\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r.generation, r.best_fitness, r.mean_fitness, r.best_mask
            );
        }
        out
    }
}
