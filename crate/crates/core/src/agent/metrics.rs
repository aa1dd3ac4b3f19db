use crate::level::TileGrid;

use super::{AgentConfig, PlayTrace};

/// Agent-extracted metrics for one level. `average_y` is in the y-down
/// frame (row 0 at the top).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentMetrics {
    pub playability: f64,
    pub jump_count: f64,
    pub jump_entropy: f64,
    pub speed: f64,
    /// Seconds.
    pub time_taken: f64,
    pub total_enemy_deaths: f64,
    pub kills_by_stomp: f64,
    /// Ticks.
    pub max_jump_air_time: f64,
    pub on_ground_ratio: f64,
    pub average_y: f64,
    /// The run took zero ticks; time was floored to one tick.
    pub degenerate: bool,
}

impl AgentMetrics {
    /// The nine candidate metrics in table order (Playability excluded).
    pub fn candidates(&self) -> [f64; 9] {
        [
            self.jump_count,
            self.jump_entropy,
            self.speed,
            self.time_taken,
            self.total_enemy_deaths,
            self.kills_by_stomp,
            self.max_jump_air_time,
            self.on_ground_ratio,
            self.average_y,
        ]
    }
}

pub fn extract_agent_metrics(t: &PlayTrace, g: &TileGrid, cfg: &AgentConfig) -> AgentMetrics {
    // Playability as the fraction reached / span, kept exact so Speed can
    // be formed with a single rounding: equal ratios then give equal floats.
    let (reached, span) = if t.start.is_none() {
        (0, 1)
    } else if g.width() == 1 {
        (1, 1)
    } else {
        (
            t.reached_x.min(g.width() - 1) as u64,
            (g.width() - 1) as u64,
        )
    };
    let playability = reached as f64 / span as f64;
    let degenerate = t.total_ticks == 0;
    let ticks = t.total_ticks.max(1) as f64;
    let speed = (reached * cfg.ticks_per_second as u64) as f64
        / (span * t.total_ticks.max(1) as u64) as f64;
    let time_taken = ticks / cfg.ticks_per_second as f64;
    let jump_count = t.jumps.len() as f64;
    let average_y = if t.steps.is_empty() {
        match t.start {
            Some((_, y)) => y as f64,
            // Nowhere to stand: report the bottom row.
            None => (g.height() - 1) as f64,
        }
    } else {
        t.steps.iter().map(|s| s.y as f64).sum::<f64>() / t.steps.len() as f64
    };
    AgentMetrics {
        playability,
        jump_count,
        jump_entropy: jump_count / ticks,
        speed,
        time_taken,
        total_enemy_deaths: t.total_enemy_deaths as f64,
        kills_by_stomp: t.stomp_kills as f64,
        max_jump_air_time: t.jumps.iter().copied().max().unwrap_or(0) as f64,
        on_ground_ratio: if degenerate {
            1.0
        } else {
            t.ground_ticks() as f64 / ticks
        },
        average_y,
        degenerate,
    }
}
