//! The eighteen candidate metrics and corpus-wide extraction.

use rayon::prelude::*;

use crate::agent::{extract_agent_metrics, run_agent, AgentConfig, AgentMetrics};
use crate::level::TileGrid;
use crate::stats::{Column, MetricTable};
use crate::structural;

pub const STRUCTURAL_METRICS: [&str; 9] = [
    "Contiguity",
    "Linearity",
    "BlockCount",
    "EnemyCount",
    "RewardCount",
    "EmptyCount",
    "PipeCount",
    "Density",
    "ClearColumns",
];

pub const AGENT_METRICS: [&str; 9] = [
    "JumpCount",
    "JumpEntropy",
    "Speed",
    "TimeTaken",
    "TotalEnemyDeaths",
    "KillsByStomp",
    "MaxJumpAirTime",
    "OnGroundRatio",
    "AverageY",
];

/// Held out of candidate pairs; used as fitness.
pub const FITNESS_METRIC: &str = "Playability";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetricCategory {
    Structural,
    Agent,
}

impl MetricCategory {
    pub fn name(self) -> &'static str {
        match self {
            MetricCategory::Structural => "Structural",
            MetricCategory::Agent => "Agent",
        }
    }
}

/// Category of a built-in metric name.
pub fn category_of(name: &str) -> Option<MetricCategory> {
    if STRUCTURAL_METRICS.contains(&name) {
        Some(MetricCategory::Structural)
    } else if AGENT_METRICS.contains(&name) {
        Some(MetricCategory::Agent)
    } else {
        None
    }
}

/// All candidate metric names in column order.
pub fn candidate_names() -> impl Iterator<Item = &'static str> {
    STRUCTURAL_METRICS.into_iter().chain(AGENT_METRICS)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelMetrics {
    pub structural: [f64; 9],
    pub agent: AgentMetrics,
}

impl LevelMetrics {
    pub fn of(g: &TileGrid, cfg: &AgentConfig) -> Self {
        let trace = run_agent(g, cfg);
        Self {
            structural: structural::all(g),
            agent: extract_agent_metrics(&trace, g, cfg),
        }
    }

    pub fn candidates(&self) -> impl Iterator<Item = f64> + '_ {
        self.structural
            .iter()
            .copied()
            .chain(self.agent.candidates())
    }
}

/// Runs every level and assembles the metric table in corpus order.
pub fn extract_table(levels: &[TileGrid], cfg: &AgentConfig) -> MetricTable {
    let per_level: Vec<LevelMetrics> = levels
        .par_iter()
        .map(|g| LevelMetrics::of(g, cfg))
        .collect();
    let mut columns: Vec<Column> = candidate_names()
        .map(|n| Column::new(n, Vec::with_capacity(levels.len())))
        .collect();
    let mut fitness = Vec::with_capacity(levels.len());
    for m in &per_level {
        for (col, v) in columns.iter_mut().zip(m.candidates()) {
            col.values.push(v);
        }
        fitness.push(m.agent.playability);
    }
    MetricTable::new(
        levels.iter().map(|g| g.level_id.clone()).collect(),
        levels.iter().map(|g| g.generator_label.clone()).collect(),
        columns,
        Some(Column::new(FITNESS_METRIC, fitness)),
    )
    .expect("extracted metrics are finite and playability is in [0, 1]")
}
