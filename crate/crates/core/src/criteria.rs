//! Fitness Independence, Mutual Correlation and Alternative Metric
//! Correlation for every candidate metric pair, plus per-criterion ranks.
//!
//! - **FI**: bin the corpus on the pair's axes, take the mean fitness of
//!   each cell (0 for empty cells) and average over all cells. Higher is
//!   better.
//! - **MC**: `|rho|` between the two metrics. Lower is better.
//! - **AMC**: for each other metric, the larger of its `|rho|` with either
//!   pair member, averaged over those metrics. Higher is better.
//!
//! Each criterion is ranked with average ranks for ties, and the three
//! ranks are averaged with equal weight.

use rayon::prelude::*;
use thiserror::Error;

use crate::stats::{average_ranks, bin_pair, pearson, MetricTable, StatsError};

#[derive(Debug, Error, PartialEq)]
pub enum CriteriaError {
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("need at least 3 candidate metrics, got {0}")]
    TooFewMetrics(usize),
    #[error("the table has no fitness column")]
    MissingFitness,
}

/// Spearman's rho between every pair of candidate columns, computed once.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    n: usize,
    rho: Vec<f64>,
    constant: Vec<bool>,
}

impl CorrelationMatrix {
    pub fn compute(table: &MetricTable) -> Result<Self, StatsError> {
        if table.len() < 2 {
            return Err(StatsError::TooShort(table.len()));
        }
        let ranks: Vec<Vec<f64>> = table
            .columns()
            .par_iter()
            .map(|c| average_ranks(&c.values))
            .collect();
        let n = ranks.len();
        let constant = ranks.iter().map(|r| r.iter().all(|&v| v == r[0])).collect();
        let upper: Vec<(usize, usize, f64)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(i, j)| (i, j, pearson(&ranks[i], &ranks[j]).rho))
            .collect();
        let mut rho = vec![0.0; n * n];
        for i in 0..n {
            rho[i * n + i] = 1.0;
        }
        for (i, j, r) in upper {
            rho[i * n + j] = r;
            rho[j * n + i] = r;
        }
        Ok(Self { n, rho, constant })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn rho(&self, i: usize, j: usize) -> f64 {
        self.rho[i * self.n + j]
    }

    /// Column `i` has a single value; its correlations are reported as 0.
    pub fn is_constant(&self, i: usize) -> bool {
        self.constant[i]
    }

    /// AMC for columns `i` and `j`.
    pub fn amc(&self, i: usize, j: usize) -> f64 {
        let alternatives = (0..self.n).filter(|&a| a != i && a != j);
        let total: f64 = alternatives
            .clone()
            .map(|a| self.rho(a, i).abs().max(self.rho(a, j).abs()))
            .sum();
        total / alternatives.count() as f64
    }
}

pub fn compute_fi(
    table: &MetricTable,
    m1: &str,
    m2: &str,
    resolution: usize,
) -> Result<f64, CriteriaError> {
    if table.fitness().is_none() {
        return Err(CriteriaError::MissingFitness);
    }
    let hist = bin_pair(table, m1, m2, resolution)?;
    let total: f64 = hist
        .mean_fitness()
        .into_iter()
        .map(|m| m.unwrap_or(0.0))
        .sum();
    Ok(total / (resolution * resolution) as f64)
}

/// Signed and absolute rho of the pair.
pub fn compute_mc(table: &MetricTable, m1: &str, m2: &str) -> Result<(f64, f64), CriteriaError> {
    let rho = crate::stats::spearman_rho(table.column(m1)?, table.column(m2)?)?.rho;
    Ok((rho, rho.abs()))
}

pub fn compute_amc(table: &MetricTable, m1: &str, m2: &str) -> Result<f64, CriteriaError> {
    let n = table.columns().len();
    if n < 3 {
        return Err(CriteriaError::TooFewMetrics(n));
    }
    let (i, j) = (table.column_index(m1)?, table.column_index(m2)?);
    Ok(CorrelationMatrix::compute(table)?.amc(i, j))
}

/// Scores and ranks of one metric pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCriteria {
    pub m1: String,
    pub m2: String,
    /// `None` when the table has no fitness column.
    pub fi: Option<f64>,
    pub mc: f64,
    pub mc_signed: f64,
    pub amc: f64,
    pub fi_rank: Option<f64>,
    pub mc_rank: f64,
    pub amc_rank: f64,
    pub avg_rank: f64,
    /// One of the two metrics is constant over the corpus.
    pub degenerate: bool,
}

impl PairCriteria {
    pub fn label(&self) -> String {
        format!("{}-{}", self.m1, self.m2)
    }
}

/// Every unordered pair of candidate metrics, sorted by average rank.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingTable {
    pub pairs: Vec<PairCriteria>,
    pub n_metrics: usize,
    pub resolution: usize,
    /// FI was not computed because there is no fitness column. The average
    /// rank then uses MC and AMC only.
    pub fi_skipped: bool,
}

impl RankingTable {
    /// Pairs ordered best first by one criterion, ties by average rank and then name.
    pub fn top_by(&self, criterion: Criterion, n: usize) -> Vec<&PairCriteria> {
        let mut pairs: Vec<&PairCriteria> = self.pairs.iter().collect();
        pairs.sort_by(|a, b| {
            criterion
                .rank(a)
                .total_cmp(&criterion.rank(b))
                .then(a.avg_rank.total_cmp(&b.avg_rank))
                .then_with(|| (&a.m1, &a.m2).cmp(&(&b.m1, &b.m2)))
        });
        pairs.truncate(n);
        pairs
    }

    pub fn find(&self, m1: &str, m2: &str) -> Option<&PairCriteria> {
        self.pairs
            .iter()
            .find(|p| (p.m1 == m1 && p.m2 == m2) || (p.m1 == m2 && p.m2 == m1))
    }
}

/// The ranking blocks of the summary report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Criterion {
    AverageRank,
    Fi,
    Mc,
    Amc,
}

impl Criterion {
    pub const ALL: [Criterion; 4] = [
        Criterion::AverageRank,
        Criterion::Fi,
        Criterion::Mc,
        Criterion::Amc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::AverageRank => "Average Rank",
            Criterion::Fi => "FI",
            Criterion::Mc => "MC",
            Criterion::Amc => "AMC",
        }
    }

    pub fn rank(self, p: &PairCriteria) -> f64 {
        match self {
            Criterion::AverageRank => p.avg_rank,
            Criterion::Fi => p.fi_rank.unwrap_or(f64::INFINITY),
            Criterion::Mc => p.mc_rank,
            Criterion::Amc => p.amc_rank,
        }
    }
}

/// Scores and ranks all `n(n-1)/2` candidate pairs.
pub fn rank_pairs(table: &MetricTable, resolution: usize) -> Result<RankingTable, CriteriaError> {
    let n = table.columns().len();
    if n < 3 {
        return Err(CriteriaError::TooFewMetrics(n));
    }
    if resolution == 0 {
        return Err(StatsError::ZeroResolution.into());
    }
    let matrix = CorrelationMatrix::compute(table)?;
    let names = table.candidate_names();
    let index_pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let fi_skipped = table.fitness().is_none();

    let fis: Vec<Option<f64>> = index_pairs
        .par_iter()
        .map(|&(i, j)| {
            if fi_skipped {
                Ok(None)
            } else {
                compute_fi(table, names[i], names[j], resolution).map(Some)
            }
        })
        .collect::<Result<_, CriteriaError>>()?;

    let mut pairs: Vec<PairCriteria> = index_pairs
        .iter()
        .zip(fis)
        .map(|(&(i, j), fi)| {
            let rho = matrix.rho(i, j);
            PairCriteria {
                m1: names[i].to_string(),
                m2: names[j].to_string(),
                fi,
                mc: rho.abs(),
                mc_signed: rho,
                amc: matrix.amc(i, j),
                fi_rank: None,
                mc_rank: 0.0,
                amc_rank: 0.0,
                avg_rank: 0.0,
                degenerate: matrix.is_constant(i) || matrix.is_constant(j),
            }
        })
        .collect();

    // Rank 1 is best: highest FI, lowest MC, highest AMC.
    let mc_ranks = average_ranks(&pairs.iter().map(|p| p.mc).collect::<Vec<_>>());
    let amc_ranks = average_ranks(&pairs.iter().map(|p| -p.amc).collect::<Vec<_>>());
    let fi_ranks = (!fi_skipped).then(|| {
        average_ranks(
            &pairs
                .iter()
                .map(|p| -p.fi.unwrap_or(0.0))
                .collect::<Vec<_>>(),
        )
    });
    for (k, p) in pairs.iter_mut().enumerate() {
        p.mc_rank = mc_ranks[k];
        p.amc_rank = amc_ranks[k];
        p.fi_rank = fi_ranks.as_ref().map(|r| r[k]);
        p.avg_rank = match p.fi_rank {
            Some(fr) => (fr + p.mc_rank + p.amc_rank) / 3.0,
            None => (p.mc_rank + p.amc_rank) / 2.0,
        };
    }
    pairs.sort_by(|a, b| {
        a.avg_rank
            .total_cmp(&b.avg_rank)
            .then_with(|| (&a.m1, &a.m2).cmp(&(&b.m1, &b.m2)))
    });

    Ok(RankingTable {
        pairs,
        n_metrics: n,
        resolution,
        fi_skipped,
    })
}
