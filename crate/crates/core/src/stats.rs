//! Rank correlation and 2-D binning over a [`MetricTable`].

use std::cmp::Ordering;
use std::collections::HashSet;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least 2 observations, got {0}")]
    TooShort(usize),
    #[error("unknown metric {name:?}; available: {available}")]
    UnknownColumn { name: String, available: String },
    #[error("duplicate metric {0:?}")]
    DuplicateColumn(String),
    #[error("non-finite value in {column} at row {row}")]
    NonFinite { column: String, row: usize },
    #[error("fitness {value} at row {row} is outside [0, 1]")]
    FitnessOutOfRange { row: usize, value: f64 },
    #[error("resolution must be at least 1")]
    ZeroResolution,
}

/// A named vector of per-level values.
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

impl Column {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            values,
        }
    }
}

/// Per-level metric values: candidate columns plus an optional fitness
/// column that never takes part in pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTable {
    level_ids: Vec<String>,
    generator_labels: Vec<String>,
    columns: Vec<Column>,
    fitness: Option<Column>,
}

impl MetricTable {
    pub fn new(
        level_ids: Vec<String>,
        generator_labels: Vec<String>,
        columns: Vec<Column>,
        fitness: Option<Column>,
    ) -> Result<Self, StatsError> {
        let n = level_ids.len();
        if generator_labels.len() != n {
            return Err(StatsError::LengthMismatch(n, generator_labels.len()));
        }
        let mut seen = HashSet::new();
        for col in columns.iter().chain(fitness.iter()) {
            if !seen.insert(col.name.as_str()) {
                return Err(StatsError::DuplicateColumn(col.name.clone()));
            }
            if col.values.len() != n {
                return Err(StatsError::LengthMismatch(n, col.values.len()));
            }
            if let Some(row) = col.values.iter().position(|v| !v.is_finite()) {
                return Err(StatsError::NonFinite {
                    column: col.name.clone(),
                    row,
                });
            }
        }
        if let Some(f) = &fitness {
            if let Some(row) = f.values.iter().position(|v| !(0.0..=1.0).contains(v)) {
                return Err(StatsError::FitnessOutOfRange {
                    row,
                    value: f.values[row],
                });
            }
        }
        Ok(Self {
            level_ids,
            generator_labels,
            columns,
            fitness,
        })
    }

    pub fn len(&self) -> usize {
        self.level_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.level_ids.is_empty()
    }

    pub fn level_ids(&self) -> &[String] {
        &self.level_ids
    }

    pub fn generator_labels(&self) -> &[String] {
        &self.generator_labels
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn candidate_names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn fitness(&self) -> Option<&Column> {
        self.fitness.as_ref()
    }

    pub fn column_index(&self, name: &str) -> Result<usize, StatsError> {
        self.columns
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| StatsError::UnknownColumn {
                name: name.to_string(),
                available: self.candidate_names().join(", "),
            })
    }

    pub fn column(&self, name: &str) -> Result<&[f64], StatsError> {
        Ok(&self.columns[self.column_index(name)?].values)
    }

    /// Applies `f` to every value of a candidate column.
    pub fn map_column(&mut self, name: &str, f: impl Fn(f64) -> f64) -> Result<(), StatsError> {
        let idx = self.column_index(name)?;
        let col = &mut self.columns[idx];
        for v in &mut col.values {
            *v = f(*v);
        }
        if let Some(row) = col.values.iter().position(|v| !v.is_finite()) {
            return Err(StatsError::NonFinite {
                column: name.to_string(),
                row,
            });
        }
        Ok(())
    }

    /// Adds a candidate column.
    pub fn push_column(&mut self, column: Column) -> Result<(), StatsError> {
        let mut columns = self.columns.clone();
        columns.push(column);
        *self = Self::new(
            self.level_ids.clone(),
            self.generator_labels.clone(),
            columns,
            self.fitness.clone(),
        )?;
        Ok(())
    }

    /// Reorders rows so that new row `i` is old row `order[i]`.
    pub fn reorder_rows(&self, order: &[usize]) -> Self {
        let pick_s = |v: &[String]| order.iter().map(|&i| v[i].clone()).collect();
        let pick_c =
            |c: &Column| Column::new(c.name.clone(), order.iter().map(|&i| c.values[i]).collect());
        Self {
            level_ids: pick_s(&self.level_ids),
            generator_labels: pick_s(&self.generator_labels),
            columns: self.columns.iter().map(pick_c).collect(),
            fitness: self.fitness.as_ref().map(pick_c),
        }
    }

    /// Drops the fitness column.
    pub fn without_fitness(&self) -> Self {
        Self {
            fitness: None,
            ..self.clone()
        }
    }
}

/// 1-based ranks; tied values share the mean of the positions they span.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).unwrap_or(Ordering::Equal));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && x[order[j]] == x[order[i]] {
            j += 1;
        }
        // Positions i+1 ..= j share their mean.
        let rank = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = rank;
        }
        i = j;
    }
    ranks
}

/// Spearman's rho. `degenerate` is set (and `rho` is 0) when either input
/// is constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub rho: f64,
    pub degenerate: bool,
}

/// Pearson correlation of the average ranks, which stays correct under ties.
pub fn spearman_rho(x: &[f64], y: &[f64]) -> Result<Correlation, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(StatsError::TooShort(x.len()));
    }
    Ok(pearson(&average_ranks(x), &average_ranks(y)))
}

/// Pearson correlation; callers pass precomputed ranks to get Spearman.
pub fn pearson(x: &[f64], y: &[f64]) -> Correlation {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Correlation {
            rho: 0.0,
            degenerate: true,
        };
    }
    Correlation {
        rho: (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0),
        degenerate: false,
    }
}

/// Bin index under min-max binning. The top edge is closed so `max` lands
/// in the last bin; a zero-width range puts everything in bin 0.
pub fn bin_index(v: f64, min: f64, max: f64, resolution: usize) -> usize {
    if max <= min {
        return 0;
    }
    let pos = resolution as f64 * ((v - min) / (max - min));
    // Values that are on a bin edge up to rounding go to the bin above it,
    // whichever side of the edge the arithmetic happened to land on.
    let edge = pos.round();
    let cell = if (pos - edge).abs() <= EDGE_TOLERANCE * resolution as f64 {
        edge
    } else {
        pos.floor()
    };
    (cell.max(0.0) as usize).min(resolution - 1)
}

/// Relative distance to a bin edge treated as lying on it.
pub const EDGE_TOLERANCE: f64 = 1e-9;

/// Counts and fitness sums of a metric pair on a `resolution`² grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridHistogram {
    pub resolution: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    /// Row-major by y bin: `counts[iy * resolution + ix]`.
    pub counts: Vec<u64>,
    pub fitness_sums: Vec<f64>,
    /// A metric was constant, so every level sits in bin 0 on that axis.
    pub x_constant: bool,
    pub y_constant: bool,
}

impl GridHistogram {
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.resolution + ix
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Mean fitness per cell; `None` for empty cells.
    pub fn mean_fitness(&self) -> Vec<Option<f64>> {
        self.counts
            .iter()
            .zip(&self.fitness_sums)
            .map(|(&c, &s)| (c > 0).then(|| s / c as f64))
            .collect()
    }

    pub fn occupied(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        })
}

/// Bins every level by the metrics `m1` (x axis) and `m2` (y axis).
pub fn bin_pair(
    table: &MetricTable,
    m1: &str,
    m2: &str,
    resolution: usize,
) -> Result<GridHistogram, StatsError> {
    if resolution == 0 {
        return Err(StatsError::ZeroResolution);
    }
    let xs = table.column(m1)?;
    let ys = table.column(m2)?;
    let (x_min, x_max) = min_max(xs);
    let (y_min, y_max) = min_max(ys);
    let fitness = table.fitness().map(|f| f.values.as_slice());
    let mut placed: Vec<(usize, f64)> = xs
        .iter()
        .zip(ys)
        .enumerate()
        .map(|(row, (&x, &y))| {
            let cell = bin_index(y, y_min, y_max, resolution) * resolution
                + bin_index(x, x_min, x_max, resolution);
            (cell, fitness.map_or(0.0, |f| f[row]))
        })
        .collect();
    // Summing each cell in value order makes the sums independent of row order.
    placed.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut counts = vec![0u64; resolution * resolution];
    let mut fitness_sums = vec![0.0; resolution * resolution];
    for (cell, f) in placed {
        counts[cell] += 1;
        fitness_sums[cell] += f;
    }
    Ok(GridHistogram {
        resolution,
        x_min,
        x_max,
        y_min,
        y_max,
        counts,
        fitness_sums,
        x_constant: !table.is_empty() && x_max <= x_min,
        y_constant: !table.is_empty() && y_max <= y_min,
    })
}
