use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::criteria::{Criterion, PairCriteria, RankingTable};
use crate::metrics::MetricCategory;

use super::tables::SUMMARY_BLOCKS;
use super::ReportError;

/// Pair counts by the categories of their two metrics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CategoryCounts {
    pub structural_structural: usize,
    pub structural_agent: usize,
    pub agent_agent: usize,
}

impl CategoryCounts {
    pub fn total(&self) -> usize {
        self.structural_structural + self.structural_agent + self.agent_agent
    }

    fn add(&mut self, a: MetricCategory, b: MetricCategory) {
        use MetricCategory::*;
        match (a, b) {
            (Structural, Structural) => self.structural_structural += 1,
            (Agent, Agent) => self.agent_agent += 1,
            _ => self.structural_agent += 1,
        }
    }

    fn plus(self, o: Self) -> Self {
        Self {
            structural_structural: self.structural_structural + o.structural_structural,
            structural_agent: self.structural_agent + o.structural_agent,
            agent_agent: self.agent_agent + o.agent_agent,
        }
    }
}

/// Which kinds of metric make up the best pairs.
///
/// The pool is the union of the Top-N lists for FI, MC, AMC and average
/// rank; a pair in several lists is counted once there. `per_block` counts
/// each list separately, so its total counts such a pair once per list.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionSummary {
    pub top_n: usize,
    pub per_block: Vec<(Criterion, CategoryCounts)>,
    pub block_total: CategoryCounts,
    pub pool: Vec<(String, String)>,
    pub pool_counts: CategoryCounts,
    /// Every candidate metric with its category and how often it appears in
    /// the pool, most frequent first.
    pub metric_frequency: Vec<(String, MetricCategory, usize)>,
    /// Counts over all ranked pairs.
    pub population: CategoryCounts,
}

pub fn summarize_composition(
    r: &RankingTable,
    category_of: impl Fn(&str) -> Option<MetricCategory>,
    top_n: usize,
) -> Result<CompositionSummary, ReportError> {
    let cat =
        |name: &str| category_of(name).ok_or_else(|| ReportError::Uncategorized(name.to_string()));
    let count = |pairs: &[&PairCriteria]| -> Result<CategoryCounts, ReportError> {
        let mut c = CategoryCounts::default();
        for p in pairs {
            c.add(cat(&p.m1)?, cat(&p.m2)?);
        }
        Ok(c)
    };

    let all: Vec<&PairCriteria> = r.pairs.iter().collect();
    let population = count(&all)?;

    let mut per_block = Vec::new();
    let mut block_total = CategoryCounts::default();
    let mut pool: Vec<&PairCriteria> = Vec::new();
    for block in SUMMARY_BLOCKS {
        if block == Criterion::Fi && r.fi_skipped {
            continue;
        }
        let top = r.top_by(block, top_n);
        let counts = count(&top)?;
        block_total = block_total.plus(counts);
        per_block.push((block, counts));
        for p in top {
            if !pool.iter().any(|q| std::ptr::eq(*q, p)) {
                pool.push(p);
            }
        }
    }
    let pool_counts = count(&pool)?;

    let mut freq: BTreeMap<&str, usize> = BTreeMap::new();
    for p in &r.pairs {
        freq.entry(&p.m1).or_default();
        freq.entry(&p.m2).or_default();
    }
    for p in &pool {
        *freq.entry(&p.m1).or_default() += 1;
        *freq.entry(&p.m2).or_default() += 1;
    }
    let mut metric_frequency = freq
        .into_iter()
        .map(|(name, n)| Ok((name.to_string(), cat(name)?, n)))
        .collect::<Result<Vec<_>, ReportError>>()?;
    metric_frequency.sort_by(|a, b| b.2.cmp(&a.2).then_with(|| a.0.cmp(&b.0)));

    Ok(CompositionSummary {
        top_n,
        per_block,
        block_total,
        pool: pool.iter().map(|p| (p.m1.clone(), p.m2.clone())).collect(),
        pool_counts,
        metric_frequency,
        population,
    })
}

impl CompositionSummary {
    /// Pair-category table plus the pool and population counts, as Markdown.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# Pair composition of the top {} pairs\n", self.top_n);
        let mut head = String::from("| Pair Category |");
        let mut rule = String::from("|---|");
        for (block, _) in &self.per_block {
            let _ = write!(head, " {} |", block.name());
            rule.push_str("---|");
        }
        head.push_str(" Total | Pool | All Pairs |");
        rule.push_str("---|---|---|");
        let _ = writeln!(out, "{head}\n{rule}");
        type Getter = fn(&CategoryCounts) -> usize;
        let rows: [(&str, Getter); 3] = [
            ("Structural-Structural", |c| c.structural_structural),
            ("Structural-Agent", |c| c.structural_agent),
            ("Agent-Agent", |c| c.agent_agent),
        ];
        for (name, get) in rows {
            let mut line = format!("| {name} |");
            for (_, c) in &self.per_block {
                let _ = write!(line, " {} |", get(c));
            }
            let _ = write!(
                line,
                " {} | {} | {} |",
                get(&self.block_total),
                get(&self.pool_counts),
                get(&self.population)
            );
            let _ = writeln!(out, "{line}");
        }
        let _ = writeln!(
            out,
            "\nThe pool holds {} distinct pairs; Total counts a pair once per list it appears in.",
            self.pool.len()
        );
        out
    }

    /// `metric,category,count,relative_frequency` rows for the pool.
    pub fn frequency_csv(&self) -> String {
        let appearances = 2 * self.pool.len();
        let mut out = String::from("metric,category,count,relative_frequency\n");
        for (name, cat, n) in &self.metric_frequency {
            let rel = if appearances == 0 {
                0.0
            } else {
                *n as f64 / appearances as f64
            };
            let _ = writeln!(out, "{name},{},{n},{}", cat.name(), super::fmt_sig(rel, 6));
        }
        out
    }
}
