//! CSV tables, Markdown summaries and SVG plots.
//!
//! Everything written here is a pure function of its inputs: no timestamps,
//! fixed palettes and a fixed jitter seed, so repeated runs are
//! byte-identical.

mod composition;
mod plot;
mod tables;

pub use composition::{summarize_composition, CategoryCounts, CompositionSummary};
pub use plot::{render_plot, write_plot, Palette, PlotMode, PlotSpec};
pub use tables::{
    ranking_summary, read_metric_table, read_metric_table_from, write_metric_table,
    write_metric_table_to, write_ranking, write_ranking_to, write_summary,
};

use std::path::PathBuf;

use thiserror::Error;

use crate::stats::StatsError;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("row {row}: {message}")]
    Parse { row: usize, message: String },
    #[error("the table has no levels")]
    NoLevels,
    #[error("invalid plot spec: {0}")]
    InvalidSpec(String),
    #[error("metric {0:?} has no category")]
    Uncategorized(String),
}

impl ReportError {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| ReportError::Io { path, source }
    }
}

/// Formats `v` rounded to `sig` significant digits, in the shortest form
/// that parses back to the rounded value.
pub fn fmt_sig(v: f64, sig: usize) -> String {
    assert!(sig > 0);
    if v == 0.0 {
        return "0".to_string();
    }
    let rounded: f64 = format!("{:.*e}", sig - 1, v)
        .parse()
        .expect("formatted float parses");
    if (1e-5..1e15).contains(&rounded.abs()) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// `fmt_sig` followed by a parse: the value as stored at `sig` digits.
pub fn round_sig(v: f64, sig: usize) -> f64 {
    fmt_sig(v, sig).parse().expect("formatted float parses")
}
