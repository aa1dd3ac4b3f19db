//! A deterministic tile-level platformer agent.
//!
//! The agent runs A* over a [`MoveGraph`] of standing places, minimising
//! ticks toward the rightmost column. The resulting [`PlayTrace`] feeds the
//! agent-extracted metrics in [`AgentMetrics`].
//!
//! Enemies stay on their spawn tile. They cannot be walked into and die when
//! landed on from above.

mod graph;
mod metrics;
mod search;

pub use graph::{Edge, JumpArc, MoveGraph, MoveKind};
pub use metrics::{extract_agent_metrics, AgentMetrics};
pub use search::run_agent;

use thiserror::Error;

use crate::kv::{self, KvError};

#[derive(Debug, Error)]
pub enum ConfigError {
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
    #[error("{0} must be at least 1")]
    NotPositive(&'static str),
}

/// Movement constants for the agent.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct AgentConfig {
    /// Highest landing above the takeoff tile, in tiles.
    pub max_jump_height: u32,
    /// Farthest horizontal jump, in tiles.
    pub max_jump_span: u32,
    pub ticks_per_tile_walk: u32,
    pub ticks_per_second: u32,
    /// Search node budget; exhausting it ends the run at the farthest node.
    pub max_expansions: u64,
}

impl Default for AgentConfig {
    fn default() -> Self {
        Self {
            max_jump_height: 4,
            max_jump_span: 6,
            ticks_per_tile_walk: 1,
            ticks_per_second: 24,
            max_expansions: 200_000,
        }
    }
}

impl AgentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let checks = [
            (self.max_jump_height as u64, "max_jump_height"),
            (self.max_jump_span as u64, "max_jump_span"),
            (self.ticks_per_tile_walk as u64, "ticks_per_tile_walk"),
            (self.ticks_per_second as u64, "ticks_per_second"),
            (self.max_expansions, "max_expansions"),
        ];
        match checks.iter().find(|(v, _)| *v == 0) {
            Some(&(_, name)) => Err(ConfigError::NotPositive(name)),
            None => Ok(()),
        }
    }

    /// Reads `key = value` lines over the defaults. Missing keys keep their
    /// default value.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for entry in kv::parse(text)? {
            let invalid = || ConfigError::InvalidValue {
                line: entry.line,
                key: entry.key.clone(),
                value: entry.value.clone(),
            };
            match entry.key.as_str() {
                "max_jump_height" => {
                    cfg.max_jump_height = entry.value.parse().map_err(|_| invalid())?
                }
                "max_jump_span" => {
                    cfg.max_jump_span = entry.value.parse().map_err(|_| invalid())?
                }
                "ticks_per_tile_walk" => {
                    cfg.ticks_per_tile_walk = entry.value.parse().map_err(|_| invalid())?
                }
                "ticks_per_second" => {
                    cfg.ticks_per_second = entry.value.parse().map_err(|_| invalid())?
                }
                "max_expansions" => {
                    cfg.max_expansions = entry.value.parse().map_err(|_| invalid())?
                }
                _ => {
                    return Err(ConfigError::UnknownKey {
                        line: entry.line,
                        key: entry.key,
                    })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// One tick of the run. The position is where the agent is at the end of
/// the tick.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceStep {
    pub x: usize,
    /// Negative while above the top row mid-jump.
    pub y: i64,
    pub airborne: bool,
    pub tick: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PlayTrace {
    /// Starting tile, or `None` when the level has nowhere to stand.
    pub start: Option<(usize, usize)>,
    pub steps: Vec<TraceStep>,
    /// Air ticks of each jump, in order.
    pub jumps: Vec<u32>,
    pub stomp_kills: u32,
    pub total_enemy_deaths: u32,
    pub reached_x: usize,
    pub completed: bool,
    pub total_ticks: u32,
    pub budget_exhausted: bool,
    pub expansions: u64,
}

impl PlayTrace {
    pub fn ground_ticks(&self) -> u32 {
        self.steps.iter().filter(|s| !s.airborne).count() as u32
    }

    pub fn air_ticks(&self) -> u32 {
        self.jumps.iter().sum()
    }
}
