use rand::Rng;

use super::{FeatureMask, GaError, GaParams, Population};

/// Offset added to windowed fitness so every individual keeps a non-zero slot.
pub const ROULETTE_EPSILON: f64 = 1e-9;

/// Sets one uniformly chosen bit if the mask is all zero.
pub fn repair<R: Rng + ?Sized>(mask: &mut FeatureMask, rng: &mut R) {
    if !mask.is_empty() && mask.is_all_zero() {
        let i = rng.random_range(0..mask.len());
        mask.set(i, true);
    }
}

/// Random initial population; each bit is a fair coin, all-zero masks repaired.
pub fn init_population<R: Rng + ?Sized>(params: &GaParams, length: usize, rng: &mut R) -> Population {
    assert!(length >= 1, "chromosome length must be >= 1");
    let individuals = (0..params.population_size)
        .map(|_| {
            let mut m = FeatureMask::from_bits((0..length).map(|_| rng.random_bool(0.5)).collect());
            repair(&mut m, rng);
            m
        })
        .collect();
    Population::new(individuals)
}

/// Windowed wheel weights: `f - min(f) + ε`.
pub fn roulette_weights(fitnesses: &[f64]) -> Vec<f64> {
    let min = fitnesses.iter().copied().fold(f64::INFINITY, f64::min);
    fitnesses.iter().map(|f| f - min + ROULETTE_EPSILON).collect()
}

/// `count` independent spins of the wheel, returned as indices.
pub fn roulette_indices<R: Rng + ?Sized>(fitnesses: &[f64], count: usize, rng: &mut R) -> Vec<usize> {
    let mut cumulative = roulette_weights(fitnesses);
    for i in 1..cumulative.len() {
        cumulative[i] += cumulative[i - 1];
    }
    let total = *cumulative.last().expect("non-empty population");
    let last = cumulative.len() - 1;
    (0..count)
        .map(|_| {
            let u = rng.random::<f64>() * total;
            cumulative.partition_point(|&c| c <= u).min(last)
        })
        .collect()
}

pub fn roulette_select<R: Rng + ?Sized>(
    pop: &Population,
    count: usize,
    rng: &mut R,
) -> Result<Vec<FeatureMask>, GaError> {
    let fitnesses = pop.fitnesses.as_ref().ok_or(GaError::UnevaluatedPopulation)?;
    if fitnesses.len() != pop.len() || pop.is_empty() {
        return Err(GaError::UnevaluatedPopulation);
    }
    Ok(roulette_indices(fitnesses, count, rng)
        .into_iter()
        .map(|i| pop.individuals[i].clone())
        .collect())
}

/// Swaps the segment `[p, q)` between two parents.
pub fn crossover_at(
    a: &FeatureMask,
    b: &FeatureMask,
    p: usize,
    q: usize,
) -> Result<(FeatureMask, FeatureMask), GaError> {
    if a.len() != b.len() {
        return Err(GaError::LengthMismatch(a.len(), b.len()));
    }
    assert!(p <= q && q <= a.len(), "cut points out of range");
    let (mut c, mut d) = (a.clone(), b.clone());
    for i in p..q {
        c.set(i, b.get(i));
        d.set(i, a.get(i));
    }
    Ok((c, d))
}

/// Two-point crossover applied with probability `pc`.
///
/// Cut points satisfy `1 <= p < q <= L-1`, drawn uniformly over such pairs.
/// For `L = 2` that range is empty and the only cut is `(1, 2)`.
pub fn two_point_crossover<R: Rng + ?Sized>(
    a: &FeatureMask,
    b: &FeatureMask,
    rng: &mut R,
    pc: f64,
) -> Result<(FeatureMask, FeatureMask), GaError> {
    if a.len() != b.len() {
        return Err(GaError::LengthMismatch(a.len(), b.len()));
    }
    let len = a.len();
    if len < 2 {
        return Err(GaError::InvalidParams(format!(
            "crossover needs chromosome length >= 2, got {len}"
        )));
    }
    if !rng.random_bool(pc) {
        return Ok((a.clone(), b.clone()));
    }
    let (p, q) = if len == 2 {
        (1, 2)
    } else {
        let x = rng.random_range(1..len);
        let mut y = rng.random_range(1..len - 1);
        if y >= x {
            y += 1;
        }
        (x.min(y), x.max(y))
    };
    crossover_at(a, b, p, q)
}

/// Flips each bit with probability `pm`, then repairs an all-zero result.
pub fn bit_mutation<R: Rng + ?Sized>(mask: &FeatureMask, rng: &mut R, pm: f64) -> FeatureMask {
    let mut out = mask.clone();
    for i in 0..out.len() {
        if rng.random_bool(pm) {
            out.flip(i);
        }
    }
    repair(&mut out, rng);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ga::rng_from_seed;

    fn m(s: &str) -> FeatureMask {
        s.parse().unwrap()
    }

    #[test]
    fn crossover_example() {
        let (c, d) = crossover_at(&m("11111111"), &m("00000000"), 2, 5).unwrap();
        assert_eq!(c.to_bitstring(), "11000111");
        assert_eq!(d.to_bitstring(), "00111000");
    }

    #[test]
    fn crossover_with_zero_probability_is_identity() {
        let mut rng = rng_from_seed(3);
        for _ in 0..100 {
            let (c, d) = two_point_crossover(&m("11110000"), &m("01010101"), &mut rng, 0.0).unwrap();
            assert_eq!(c, m("11110000"));
            assert_eq!(d, m("01010101"));
        }
    }

    #[test]
    fn crossover_length_mismatch() {
        let mut rng = rng_from_seed(3);
        assert_eq!(
            two_point_crossover(&m("11"), &m("000"), &mut rng, 1.0),
            Err(GaError::LengthMismatch(2, 3))
        );
    }

    #[test]
    fn crossover_length_two_swaps_tail() {
        let mut rng = rng_from_seed(9);
        let (c, d) = two_point_crossover(&m("10"), &m("01"), &mut rng, 1.0).unwrap();
        assert_eq!((c.to_bitstring(), d.to_bitstring()), ("11".into(), "00".into()));
    }

    #[test]
    fn crossover_cuts_stay_interior() {
        // With L = 8, position 0 and position 7 are never exchanged.
        let mut rng = rng_from_seed(11);
        for _ in 0..2000 {
            let (c, _) = two_point_crossover(&m("11111111"), &m("00000000"), &mut rng, 1.0).unwrap();
            assert!(c.get(0) && c.get(7));
            assert!(c.count_ones() < 8);
        }
    }

    #[test]
    fn mutation_extremes() {
        let mut rng = rng_from_seed(1);
        assert_eq!(bit_mutation(&m("1010"), &mut rng, 0.0), m("1010"));
        assert_eq!(bit_mutation(&m("1010"), &mut rng, 1.0), m("0101"));
        // Full flip of 1111 is all-zero and gets repaired to one set bit.
        assert_eq!(bit_mutation(&m("1111"), &mut rng, 1.0).count_ones(), 1);
    }

    #[test]
    fn length_one_population_is_all_ones() {
        let mut rng = rng_from_seed(5);
        let pop = init_population(&GaParams::default(), 1, &mut rng);
        assert!(pop.individuals.iter().all(|i| i.to_bitstring() == "1"));
    }

    #[test]
    fn degenerate_wheel_picks_the_only_positive() {
        let mut rng = rng_from_seed(2);
        let picks = roulette_indices(&[1.0, 0.0, 0.0], 10_000, &mut rng);
        let others = picks.iter().filter(|&&i| i != 0).count();
        // Each zero-fitness slot has weight 1e-9 out of ~1.
        assert!(others <= 1, "{others}");
    }

    #[test]
    fn unevaluated_population_is_rejected() {
        let mut rng = rng_from_seed(2);
        let pop = init_population(&GaParams::default(), 4, &mut rng);
        assert_eq!(roulette_select(&pop, 2, &mut rng), Err(GaError::UnevaluatedPopulation));
    }

    #[test]
    fn windowed_weights_are_positive() {
        let w = roulette_weights(&[-3.0, -1.0, 2.0]);
        assert!(w.iter().all(|&x| x > 0.0));
        assert_eq!(w[0], ROULETTE_EPSILON);
    }
}
