//! Seeded synthetic level corpora.
//!
//! Each level is a ground line doing a bounded random walk, with gaps,
//! two-wide pipes, enemies standing on the ground and floating rewards.
//! The first and last [`SAFE_COLUMNS`] columns are always flat ground.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::kv::{self, KvError};
use crate::level::{TileClass, TileGrid};

/// Flat columns at each end of a level.
pub const SAFE_COLUMNS: usize = 3;
/// Chance per column that the ground height changes.
const HEIGHT_CHANGE_PROB: f64 = 0.2;
/// Rows kept free above the highest ground.
const HEADROOM: usize = 6;

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error(transparent)]
    Syntax(#[from] KvError),
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: invalid value {value:?} for {key}")]
    InvalidValue {
        line: usize,
        key: String,
        value: String,
    },
    #[error("{name} must be in [0, 1], got {value}")]
    Probability { name: &'static str, value: f64 },
    #[error("level must be at least {min_width} wide and {min_height} tall, got {width}x{height}")]
    TooSmall {
        width: usize,
        height: usize,
        min_width: usize,
        min_height: usize,
    },
    #[error("max_gap_width must be at least 1")]
    ZeroGapWidth,
    #[error("generator label must be a non-empty file name, got {0:?}")]
    BadLabel(String),
    #[error("generator label {0:?} is used twice")]
    DuplicateLabel(String),
    #[error("an ensemble needs at least one parameter set")]
    EmptyEnsemble,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SynthParams {
    pub seed: u64,
    pub width: usize,
    pub height: usize,
    pub level_count: usize,
    pub gap_prob: f64,
    pub max_gap_width: usize,
    pub enemy_prob: f64,
    pub pipe_prob: f64,
    pub reward_prob: f64,
    pub height_walk_step: usize,
    pub generator_label: String,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            seed: 0,
            width: 150,
            height: 16,
            level_count: 100,
            gap_prob: 0.05,
            max_gap_width: 3,
            enemy_prob: 0.05,
            pipe_prob: 0.03,
            reward_prob: 0.05,
            height_walk_step: 1,
            generator_label: "synth".into(),
        }
    }
}

impl SynthParams {
    pub fn validate(&self) -> Result<(), SynthError> {
        for (name, value) in [
            ("gap_prob", self.gap_prob),
            ("enemy_prob", self.enemy_prob),
            ("pipe_prob", self.pipe_prob),
            ("reward_prob", self.reward_prob),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(SynthError::Probability { name, value });
            }
        }
        let (min_width, min_height) = (2 * SAFE_COLUMNS, HEADROOM + 2);
        if self.width < min_width || self.height < min_height {
            return Err(SynthError::TooSmall {
                width: self.width,
                height: self.height,
                min_width,
                min_height,
            });
        }
        if self.max_gap_width == 0 {
            return Err(SynthError::ZeroGapWidth);
        }
        let label = &self.generator_label;
        if label.is_empty() || label.starts_with('.') || label.contains(['/', '\\']) {
            return Err(SynthError::BadLabel(label.clone()));
        }
        Ok(())
    }

    /// Reads `key = value` lines over the defaults.
    pub fn parse(text: &str) -> Result<Self, SynthError> {
        let mut p = Self::default();
        for e in kv::parse(text)? {
            let invalid = || SynthError::InvalidValue {
                line: e.line,
                key: e.key.clone(),
                value: e.value.clone(),
            };
            fn num<T: std::str::FromStr>(
                v: &str,
                bad: impl Fn() -> SynthError,
            ) -> Result<T, SynthError> {
                v.parse().map_err(|_| bad())
            }
            match e.key.as_str() {
                "seed" => p.seed = num(&e.value, invalid)?,
                "width" => p.width = num(&e.value, invalid)?,
                "height" => p.height = num(&e.value, invalid)?,
                "level_count" => p.level_count = num(&e.value, invalid)?,
                "gap_prob" => p.gap_prob = num(&e.value, invalid)?,
                "max_gap_width" => p.max_gap_width = num(&e.value, invalid)?,
                "enemy_prob" => p.enemy_prob = num(&e.value, invalid)?,
                "pipe_prob" => p.pipe_prob = num(&e.value, invalid)?,
                "reward_prob" => p.reward_prob = num(&e.value, invalid)?,
                "height_walk_step" => p.height_walk_step = num(&e.value, invalid)?,
                "generator_label" => p.generator_label = e.value.clone(),
                _ => {
                    return Err(SynthError::UnknownKey {
                        line: e.line,
                        key: e.key,
                    })
                }
            }
        }
        p.validate()?;
        Ok(p)
    }
}

/// Generates `level_count` levels. Level `i` draws from its own stream of
/// the seeded generator, so the output does not depend on thread count.
pub fn generate_corpus(params: &SynthParams) -> Result<Vec<TileGrid>, SynthError> {
    params.validate()?;
    Ok((0..params.level_count)
        .into_par_iter()
        .map(|i| generate_level(params, i))
        .collect())
}

fn generate_level(p: &SynthParams, index: usize) -> TileGrid {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    rng.set_stream(index as u64);
    let (w, h) = (p.width, p.height);
    let max_ground = h - HEADROOM;

    // Ground height per column; 0 is a gap.
    let mut ground = vec![0usize; w];
    let mut level = 2.min(max_ground);
    let mut x = 0;
    while x < w {
        let safe = x < SAFE_COLUMNS || x >= w - SAFE_COLUMNS;
        if !safe {
            if rng.random_bool(p.gap_prob) {
                let gap = rng
                    .random_range(1..=p.max_gap_width)
                    .min(w - SAFE_COLUMNS - x);
                x += gap;
                continue;
            }
            if p.height_walk_step > 0 && rng.random_bool(HEIGHT_CHANGE_PROB) {
                let step = rng.random_range(1..=p.height_walk_step);
                level = if rng.random_bool(0.5) {
                    (level + step).min(max_ground)
                } else {
                    level.saturating_sub(step).max(1)
                };
            }
        }
        ground[x] = level;
        x += 1;
    }

    let mut cells = vec![TileClass::Empty; w * h];
    let top = |x: usize| h - ground[x];
    for x in 0..w {
        for y in top(x)..h {
            cells[y * w + x] = TileClass::Solid;
        }
    }

    let interior = SAFE_COLUMNS..w - SAFE_COLUMNS;
    let mut x = interior.start;
    while x + 1 < interior.end {
        let flat = (x - 1..=x + 2).all(|c| ground[c] > 0 && ground[c] == ground[x]);
        if flat && rng.random_bool(p.pipe_prob) {
            let pipe_h = rng.random_range(2..=3);
            for px in x..x + 2 {
                for y in top(px) - pipe_h..top(px) {
                    cells[y * w + px] = TileClass::Pipe;
                }
            }
            x += 3;
        } else {
            x += 1;
        }
    }

    for x in interior {
        if ground[x] == 0 {
            continue;
        }
        let surface = (0..h)
            .find(|&y| cells[y * w + x] != TileClass::Empty)
            .unwrap_or(h);
        if surface == 0 {
            continue;
        }
        if rng.random_bool(p.enemy_prob) {
            cells[(surface - 1) * w + x] = TileClass::Enemy;
        }
        let lift = rng.random_range(3..=4);
        if rng.random_bool(p.reward_prob) && surface > lift {
            cells[(surface - lift) * w + x] = TileClass::Reward;
        }
    }

    TileGrid::from_classes(w, cells, format!("{:05}", index), p.generator_label.clone())
}

/// Concatenates the corpora of several generators, in the given order.
pub fn generate_ensemble(param_sets: &[SynthParams]) -> Result<Vec<TileGrid>, SynthError> {
    if param_sets.is_empty() {
        return Err(SynthError::EmptyEnsemble);
    }
    let mut seen = BTreeSet::new();
    for p in param_sets {
        if !seen.insert(p.generator_label.as_str()) {
            return Err(SynthError::DuplicateLabel(p.generator_label.clone()));
        }
    }
    let mut out = Vec::new();
    for p in param_sets {
        out.extend(generate_corpus(p)?);
    }
    Ok(out)
}

/// Nine generators with distinct styles, 1000 levels each, plus 14 extra
/// levels for the first: 9014 levels in all.
pub fn benchmark_ensemble(seed: u64) -> Vec<SynthParams> {
    let styles: [(f64, usize, f64, f64, f64, usize); 9] = [
        // gap_prob, max_gap_width, enemy_prob, pipe_prob, reward_prob, height_walk_step
        (0.00, 1, 0.02, 0.02, 0.02, 0),
        (0.02, 2, 0.05, 0.03, 0.05, 1),
        (0.05, 3, 0.08, 0.05, 0.03, 1),
        (0.08, 4, 0.03, 0.01, 0.10, 2),
        (0.03, 5, 0.12, 0.06, 0.01, 1),
        (0.10, 2, 0.01, 0.00, 0.08, 3),
        (0.01, 3, 0.15, 0.08, 0.04, 2),
        (0.06, 6, 0.06, 0.02, 0.06, 4),
        (0.12, 7, 0.10, 0.04, 0.12, 5),
    ];
    styles
        .iter()
        .enumerate()
        .map(
            |(i, &(gap, gap_w, enemy, pipe, reward, step))| SynthParams {
                seed: seed.wrapping_add(i as u64),
                level_count: if i == 0 { 1014 } else { 1000 },
                gap_prob: gap,
                max_gap_width: gap_w,
                enemy_prob: enemy,
                pipe_prob: pipe,
                reward_prob: reward,
                height_walk_step: step,
                generator_label: format!("gen{}", i + 1),
                ..SynthParams::default()
            },
        )
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agent::{extract_agent_metrics, run_agent, AgentConfig};
    use crate::metrics::extract_table;
    use crate::stats::bin_pair;
    use crate::structural;

    fn params(count: usize) -> SynthParams {
        SynthParams {
            level_count: count,
            ..SynthParams::default()
        }
    }

    #[test]
    fn same_seed_same_corpus() {
        let a = generate_corpus(&params(20)).unwrap();
        let b = generate_corpus(&params(20)).unwrap();
        assert_eq!(a, b);
        let texts = |c: &[TileGrid]| c.iter().map(|g| g.raw_text()).collect::<Vec<_>>();
        assert_eq!(texts(&a), texts(&b));
        let other = generate_corpus(&SynthParams {
            seed: 1,
            ..params(20)
        })
        .unwrap();
        assert_ne!(texts(&a), texts(&other));
        // Levels within one corpus differ too.
        assert_ne!(a[0].raw_text(), a[1].raw_text());
    }

    #[test]
    fn shape_and_safe_ends() {
        let c = generate_corpus(&params(10)).unwrap();
        for g in &c {
            assert_eq!((g.width(), g.height()), (150, 16));
            for x in (0..SAFE_COLUMNS).chain(150 - SAFE_COLUMNS..150) {
                assert_eq!(g.get(x, 15), TileClass::Solid);
            }
        }
        assert_eq!(c[3].level_id, "00003");
        assert_eq!(c[3].generator_label, "synth");
    }

    #[test]
    fn no_gaps_or_enemies_is_always_completable() {
        let p = SynthParams {
            gap_prob: 0.0,
            enemy_prob: 0.0,
            pipe_prob: 0.1,
            reward_prob: 0.2,
            level_count: 50,
            ..SynthParams::default()
        };
        let cfg = AgentConfig::default();
        for g in generate_corpus(&p).unwrap() {
            let m = extract_agent_metrics(&run_agent(&g, &cfg), &g, &cfg);
            assert_eq!(m.playability, 1.0, "level {}", g.level_id);
        }
    }

    #[test]
    fn zero_levels() {
        assert!(generate_corpus(&params(0)).unwrap().is_empty());
    }

    #[test]
    fn enemy_count_grows_with_enemy_prob() {
        let mean_enemies = |prob: f64| {
            let c = generate_corpus(&SynthParams {
                enemy_prob: prob,
                level_count: 1000,
                ..SynthParams::default()
            })
            .unwrap();
            c.iter().map(structural::enemy_count).sum::<f64>() / c.len() as f64
        };
        let means: Vec<f64> = [0.0, 0.05, 0.1, 0.2]
            .into_iter()
            .map(mean_enemies)
            .collect();
        assert_eq!(means[0], 0.0);
        assert!(means.windows(2).all(|w| w[0] < w[1]), "{means:?}");
    }

    #[test]
    fn ensemble_labels_and_size() {
        let sets: Vec<SynthParams> = ["a", "b", "c"]
            .iter()
            .map(|l| SynthParams {
                generator_label: l.to_string(),
                ..params(100)
            })
            .collect();
        let e = generate_ensemble(&sets).unwrap();
        assert_eq!(e.len(), 300);
        let labels: BTreeSet<&str> = e.iter().map(|g| g.generator_label.as_str()).collect();
        assert_eq!(labels.len(), 3);
        let dup = vec![params(1), params(1)];
        assert_eq!(
            generate_ensemble(&dup),
            Err(SynthError::DuplicateLabel("synth".into()))
        );
        assert_eq!(generate_ensemble(&[]), Err(SynthError::EmptyEnsemble));
    }

    #[test]
    fn benchmark_ensemble_has_9014_levels() {
        let sets = benchmark_ensemble(0);
        assert_eq!(sets.len(), 9);
        assert_eq!(sets.iter().map(|p| p.level_count).sum::<usize>(), 9014);
        assert!(sets.iter().all(|p| p.validate().is_ok()));
    }

    #[test]
    fn gap_regimes_separate_in_density() {
        let sets = vec![
            SynthParams {
                gap_prob: 0.0,
                generator_label: "solid".into(),
                level_count: 40,
                ..SynthParams::default()
            },
            SynthParams {
                gap_prob: 0.25,
                max_gap_width: 4,
                generator_label: "holey".into(),
                level_count: 40,
                ..SynthParams::default()
            },
        ];
        let levels = generate_ensemble(&sets).unwrap();
        let table = extract_table(&levels, &AgentConfig::default());
        let hist = bin_pair(&table, "Density", "EmptyCount", 20).unwrap();
        let density = table.column("Density").unwrap();
        let centroid = |label: &str| {
            let bins: Vec<usize> = (0..levels.len())
                .filter(|&i| levels[i].generator_label == label)
                .map(|i| crate::stats::bin_index(density[i], hist.x_min, hist.x_max, 20))
                .collect();
            bins.iter().sum::<usize>() as f64 / bins.len() as f64
        };
        let (solid, holey) = (centroid("solid"), centroid("holey"));
        assert!(solid - holey > 5.0, "solid {solid}, holey {holey}");
    }

    #[test]
    fn params_from_text() {
        let p = SynthParams::parse(
            "seed = 7\nlevel_count = 3\ngap_prob = 0.5\ngenerator_label = \"g x\"\n",
        )
        .unwrap();
        assert_eq!((p.seed, p.level_count, p.gap_prob), (7, 3, 0.5));
        assert_eq!(p.generator_label, "g x");
        assert_eq!(p.width, 150);
        assert!(matches!(
            SynthParams::parse("gap_prob = 1.5"),
            Err(SynthError::Probability { .. })
        ));
        assert!(matches!(
            SynthParams::parse("colour = red"),
            Err(SynthError::UnknownKey { line: 1, .. })
        ));
        assert!(matches!(
            SynthParams::parse("width = wide"),
            Err(SynthError::InvalidValue { .. })
        ));
        assert!(matches!(
            SynthParams::parse("width = 3"),
            Err(SynthError::TooSmall { .. })
        ));
        assert!(matches!(
            SynthParams::parse("generator_label = a/b"),
            Err(SynthError::BadLabel(_))
        ));
    }
}
