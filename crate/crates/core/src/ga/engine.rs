use std::cmp::Ordering;

use log::debug;
use rayon::prelude::*;

use super::operators::{bit_mutation, init_population, roulette_indices, two_point_crossover};
use super::{rng_from_seed, EvolutionTrace, FeatureMask, GaError, GaParams, GenerationRecord, Population};

/// Outcome of [`evolve`].
#[derive(Clone, Debug, PartialEq)]
pub struct Evolution {
    pub best_mask: FeatureMask,
    pub best_fitness: f64,
    pub trace: EvolutionTrace,
}

fn evaluate<F, E>(individuals: &[FeatureMask], fitness: &F) -> Result<Vec<f64>, E>
where
    F: Fn(&FeatureMask) -> Result<f64, E> + Sync,
    E: From<GaError> + Send,
{
    // Indexed collect keeps results aligned regardless of completion order.
    let values: Vec<f64> = individuals.par_iter().map(fitness).collect::<Result<_, E>>()?;
    for (m, &v) in individuals.iter().zip(&values) {
        if !v.is_finite() {
            return Err(GaError::NonFiniteFitness {
                mask: m.to_bitstring(),
                value: v,
            }
            .into());
        }
    }
    Ok(values)
}

/// Index of the first maximum.
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

fn record(generation: usize, pop: &[FeatureMask], fitnesses: &[f64]) -> GenerationRecord {
    let best = argmax(fitnesses);
    GenerationRecord {
        generation,
        best_fitness: fitnesses[best],
        mean_fitness: fitnesses.iter().sum::<f64>() / fitnesses.len() as f64,
        best_mask: pop[best].clone(),
    }
}

/// Runs the GA to termination and returns the best individual ever seen.
pub fn evolve<F, E>(params: &GaParams, length: usize, fitness: F) -> Result<Evolution, E>
where
    F: Fn(&FeatureMask) -> Result<f64, E> + Sync,
    E: From<GaError> + Send,
{
    evolve_observed(params, length, fitness, |_| {})
}

/// [`evolve`] with a hook that sees every evaluated population.
pub fn evolve_observed<F, E, O>(
    params: &GaParams,
    length: usize,
    fitness: F,
    mut observe: O,
) -> Result<Evolution, E>
where
    F: Fn(&FeatureMask) -> Result<f64, E> + Sync,
    E: From<GaError> + Send,
    O: FnMut(&Population),
{
    params.validate()?;
    if length == 0 {
        return Err(GaError::InvalidParams("chromosome length must be >= 1".into()).into());
    }
    let n = params.population_size;
    let mut rng = rng_from_seed(params.seed);

    let mut pop = init_population(params, length, &mut rng);
    let mut fit = evaluate(&pop.individuals, &fitness)?;
    pop.fitnesses = Some(fit.clone());
    observe(&pop);

    let mut trace = EvolutionTrace::default();
    trace.records.push(record(0, &pop.individuals, &fit));
    let first = argmax(&fit);
    let mut best_mask = pop.individuals[first].clone();
    let mut best_fitness = fit[first];
    let mut stagnant = 0;

    for generation in 1..=params.max_generations {
        if stagnant >= params.stagnation_window {
            debug!("stagnation stop after generation {}", generation - 1);
            break;
        }

        let parents = roulette_indices(&fit, n, &mut rng);
        let mut children = Vec::with_capacity(n);
        for pair in parents.chunks(2) {
            let a = &pop.individuals[pair[0]];
            if pair.len() == 2 && length >= 2 {
                let b = &pop.individuals[pair[1]];
                let (c, d) = two_point_crossover(a, b, &mut rng, params.crossover_prob)?;
                children.push(bit_mutation(&c, &mut rng, params.mutation_prob));
                children.push(bit_mutation(&d, &mut rng, params.mutation_prob));
            } else {
                for &i in pair {
                    children.push(bit_mutation(&pop.individuals[i], &mut rng, params.mutation_prob));
                }
            }
        }
        let mut child_fit = evaluate(&children, &fitness)?;

        // Elites of the old generation overwrite the worst children.
        let mut old_order: Vec<usize> = (0..n).collect();
        old_order.sort_by(|&i, &j| fit[j].total_cmp(&fit[i]).then(i.cmp(&j)));
        let mut child_order: Vec<usize> = (0..n).collect();
        child_order.sort_by(|&i, &j| match child_fit[i].total_cmp(&child_fit[j]) {
            Ordering::Equal => i.cmp(&j),
            o => o,
        });
        for (&elite, &slot) in old_order.iter().zip(&child_order).take(params.elite_count) {
            children[slot] = pop.individuals[elite].clone();
            child_fit[slot] = fit[elite];
        }

        pop = Population {
            individuals: children,
            fitnesses: Some(child_fit.clone()),
            generation,
        };
        fit = child_fit;
        observe(&pop);

        let rec = record(generation, &pop.individuals, &fit);
        debug!(
            "generation {generation}: best {:.6} mean {:.6} mask {}",
            rec.best_fitness, rec.mean_fitness, rec.best_mask
        );
        if rec.best_fitness > best_fitness {
            best_fitness = rec.best_fitness;
            best_mask = rec.best_mask.clone();
            stagnant = 0;
        } else {
            stagnant += 1;
        }
        trace.records.push(rec);
    }

    Ok(Evolution {
        best_mask,
        best_fitness,
        trace,
    })
}
