#![allow(dead_code)]

use era::stats::{Column, MetricTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Ranks by counting: each value's rank is 1 + (number smaller) +
/// (number equal - 1) / 2. Quadratic, but shares nothing with the library.
pub fn oracle_ranks(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&v| {
            let below = x.iter().filter(|&&u| u < v).count() as f64;
            let equal = x.iter().filter(|&&u| u == v).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

/// Textbook Pearson with centred sums; 0 when either side is constant.
pub fn oracle_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        0.0
    } else {
        sxy / (sxx * syy).sqrt()
    }
}

pub fn oracle_spearman(x: &[f64], y: &[f64]) -> f64 {
    oracle_pearson(&oracle_ranks(x), &oracle_ranks(y))
}

pub fn make_table(cols: Vec<(String, Vec<f64>)>, fitness: Option<Vec<f64>>) -> MetricTable {
    let n = cols[0].1.len();
    MetricTable::new(
        (0..n).map(|i| format!("l{i:05}")).collect(),
        (0..n).map(|i| format!("g{}", i % 3)).collect(),
        cols.into_iter()
            .map(|(name, v)| Column::new(name, v))
            .collect(),
        fitness.map(|f| Column::new("Playability", f)),
    )
    .unwrap()
}

/// `metrics` columns of `rows` values. Even columns are small integers
/// (heavy ties), odd ones are continuous.
pub fn random_table(seed: u64, rows: usize, metrics: usize) -> MetricTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cols = (0..metrics)
        .map(|m| {
            let v = (0..rows)
                .map(|_| {
                    if m % 2 == 0 {
                        rng.random_range(0..8) as f64
                    } else {
                        rng.random_range(-3.0..3.0)
                    }
                })
                .collect();
            (format!("M{m:02}"), v)
        })
        .collect();
    let fitness = (0..rows).map(|_| rng.random_range(0.0..=1.0)).collect();
    make_table(cols, Some(fitness))
}
