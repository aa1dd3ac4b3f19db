//! Metric-pair selection for expressive range analysis of tile-based
//! platformer levels.
//!
//! Levels are loaded from a directory tree ([`level`]), measured with nine
//! structural metrics ([`structural`]) and nine metrics taken from a
//! deterministic A* playthrough ([`agent`]), and collected into a
//! [`stats::MetricTable`]. Every pair of metrics is then scored for fitness
//! independence, mutual correlation and alternative metric correlation
//! ([`criteria`]) and ranked. [`report`] writes the tables, summaries and
//! SVG plots; [`synth`] generates seeded synthetic corpora.
//!
//! The runnable examples under `examples/` walk through each step:
//!
//! | example | shows |
//! |---|---|
//! | `load_levels` | tile classification and corpus loading |
//! | `structural_metrics` | the grid-only metrics |
//! | `agent_playthrough` | an A* run and its trace metrics |
//! | `spearman` | rank correlation with ties |
//! | `rank_metric_pairs` | FI, MC, AMC and average rank |
//! | `render_era_plots` | heatmaps and generator overlays |
//! | `synthetic_ensemble` | seeded synthetic generators |
//! | `full_pipeline` | synth, extract, rank and report end to end |
//!
//! ```
//! use era::level::{TileClassification, TileGrid};
//! use era::metrics::LevelMetrics;
//! use era::agent::AgentConfig;
//!
//! let level = "------\n------\nXXXXXX";
//! let g = TileGrid::parse(level, &TileClassification::default(), "flat", "demo").unwrap();
//! let m = LevelMetrics::of(&g, &AgentConfig::default());
//! assert_eq!(m.agent.playability, 1.0);
//! ```

pub mod agent;
pub mod criteria;
pub mod kv;
pub mod level;
pub mod metrics;
pub mod pipeline;
pub mod report;
pub mod stats;
pub mod structural;
pub mod synth;
