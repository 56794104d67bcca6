//! Independent reference computations shared by the integration and acceptance tests.
//! Nothing here calls into the library's inference or induction code.
#![allow(dead_code)]

use std::collections::BTreeMap;

/// Triangular membership, written out directly.
pub fn tri(x: f64, a: f64, b: f64, c: f64) -> f64 {
    if x == b {
        1.0
    } else if x > a && x < b {
        (x - a) / (b - a)
    } else if x > b && x < c {
        (c - x) / (c - b)
    } else {
        0.0
    }
}

/// Centroid of `max_k min(level_k, term_k(y))` on `n` uniform points over `[lo, hi]`.
pub fn clipped_centroid(terms: &[(f64, f64, f64)], levels: &[f64], lo: f64, hi: f64, n: usize) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..n {
        let y = if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
        let mu = terms
            .iter()
            .zip(levels)
            .map(|(&(a, b, c), &l)| tri(y, a, b, c).min(l))
            .fold(0.0, f64::max);
        num += y * mu;
        den += mu;
    }
    if den == 0.0 {
        0.5 * (lo + hi)
    } else {
        num / den
    }
}

/// Degrees of `p` evenly spaced shoulder/triangle terms on `[lo, hi]`.
pub fn grid_degrees(x: f64, lo: f64, hi: f64, p: usize) -> Vec<f64> {
    let x = x.clamp(lo, hi);
    let last = p - 1;
    let peak = |k: usize| if k == last { hi } else { lo + (hi - lo) * k as f64 / last as f64 };
    (0..p)
        .map(|k| tri(x, peak(k.saturating_sub(1)), peak(k), peak((k + 1).min(last))))
        .collect()
}

/// Candidate-and-filter rule induction: argmax term per variable (first on
/// ties), weight = product of those degrees, best weight per antecedent with
/// the earliest record winning ties, then the weight floor.
pub fn reference_rules(
    rows: &[Vec<f64>],
    labels: &[u8],
    ranges: &[(f64, f64)],
    p: usize,
    min_weight: f64,
) -> BTreeMap<Vec<usize>, (u8, f64)> {
    let mut best: BTreeMap<Vec<usize>, (u8, f64)> = BTreeMap::new();
    for (row, &y) in rows.iter().zip(labels) {
        let mut ant = Vec::new();
        let mut w = 1.0;
        for (&x, &(lo, hi)) in row.iter().zip(ranges) {
            let d = grid_degrees(x, lo, hi, p);
            let mut k = 0;
            for j in 1..p {
                if d[j] > d[k] {
                    k = j;
                }
            }
            ant.push(k);
            w *= d[k];
        }
        match best.get(&ant) {
            Some(&(_, old)) if old >= w => {}
            _ => {
                best.insert(ant, (y, w));
            }
        }
    }
    best.retain(|_, &mut (_, w)| w >= min_weight);
    best
}

/// Crisp output of an induced rule base on the two-term `[0, 1]` output
/// (negative = tri(0,0,1), positive = tri(0,1,1)).
pub fn reference_crisp(
    rules: &BTreeMap<Vec<usize>, (u8, f64)>,
    ranges: &[(f64, f64)],
    p: usize,
    x: &[f64],
    resolution: usize,
) -> f64 {
    let degrees: Vec<Vec<f64>> = x.iter().zip(ranges).map(|(&v, &(lo, hi))| grid_degrees(v, lo, hi, p)).collect();
    let mut levels = [0.0f64; 2];
    for (ant, &(class, w)) in rules {
        let m = ant.iter().enumerate().map(|(j, &t)| degrees[j][t]).fold(1.0, f64::min);
        levels[class as usize] = levels[class as usize].max(w * m);
    }
    clipped_centroid(&[(0.0, 0.0, 1.0), (0.0, 1.0, 1.0)], &levels, 0.0, 1.0, resolution)
}

/// Training `[min, max]` per column; constant columns widened by 0.5 each side.
pub fn column_ranges(rows: &[Vec<f64>]) -> Vec<(f64, f64)> {
    (0..rows[0].len())
        .map(|j| {
            let lo = rows.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min);
            let hi = rows.iter().map(|r| r[j]).fold(f64::NEG_INFINITY, f64::max);
            if hi > lo {
                (lo, hi)
            } else {
                (lo - 0.5, hi + 0.5)
            }
        })
        .collect()
}

/// Upper critical values of the chi-square distribution at alpha = 0.01.
pub fn chi_square_critical_01(df: usize) -> f64 {
    match df {
        1 => 6.634897,
        2 => 9.210340,
        3 => 11.344867,
        4 => 13.276704,
        9 => 21.665994,
        _ => panic!("no table entry for df = {df}"),
    }
}

pub fn chi_square(observed: &[u64], expected: &[f64]) -> f64 {
    observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum()
}

/// Two-sided 99% normal-approximation interval for a Binomial(n, p) count.
pub fn binomial_99(n: u64, p: f64) -> (f64, f64) {
    let mean = n as f64 * p;
    let half = 2.575829 * (n as f64 * p * (1.0 - p)).sqrt();
    (mean - half, mean + half)
}

/// Small deterministic generator for test data (xorshift64*).
pub struct TestRng(pub u64);

impl TestRng {
    pub fn next_u64(&mut self) -> u64 {
        self.0 ^= self.0 >> 12;
        self.0 ^= self.0 << 25;
        self.0 ^= self.0 >> 27;
        self.0.wrapping_mul(0x2545_f491_4f6c_dd1d)
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}
