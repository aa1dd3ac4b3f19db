use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{Read, Write};
use std::path::Path;

use crate::criteria::{Criterion, PairCriteria, RankingTable};
use crate::metrics::FITNESS_METRIC;
use crate::stats::{Column, MetricTable};

use super::{fmt_sig, ReportError};

/// Digits kept for every value written to CSV.
pub const CSV_DIGITS: usize = 6;
/// Digits shown in the Markdown summary.
pub const SUMMARY_DIGITS: usize = 3;

pub fn write_metric_table(table: &MetricTable, path: &Path) -> Result<(), ReportError> {
    let file = File::create(path).map_err(ReportError::io(path))?;
    write_metric_table_to(table, file)
}

/// Header `level_id,generator,<metrics...>,Playability`, one row per level.
pub fn write_metric_table_to(table: &MetricTable, out: impl Write) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["level_id", "generator"];
    header.extend(table.candidate_names());
    if let Some(f) = table.fitness() {
        header.push(&f.name);
    }
    w.write_record(&header)?;
    for row in 0..table.len() {
        let mut record = vec![
            table.level_ids()[row].clone(),
            table.generator_labels()[row].clone(),
        ];
        record.extend(
            table
                .columns()
                .iter()
                .map(|c| fmt_sig(c.values[row], CSV_DIGITS)),
        );
        if let Some(f) = table.fitness() {
            record.push(fmt_sig(f.values[row], CSV_DIGITS));
        }
        w.write_record(&record)?;
    }
    w.flush().map_err(ReportError::io("<csv>"))?;
    Ok(())
}

pub fn read_metric_table(path: &Path) -> Result<MetricTable, ReportError> {
    let file = File::open(path).map_err(ReportError::io(path))?;
    read_metric_table_from(file)
}

/// Reads a table written by [`write_metric_table`]. The fitness column is
/// found by name and may be absent.
pub fn read_metric_table_from(input: impl Read) -> Result<MetricTable, ReportError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header.len() < 2 || header[0] != "level_id" || header[1] != "generator" {
        return Err(ReportError::Parse {
            row: 0,
            message: "header must start with level_id,generator".into(),
        });
    }
    let fitness_at = header.iter().position(|h| h == FITNESS_METRIC);
    let mut ids = Vec::new();
    let mut labels = Vec::new();
    let mut values: Vec<Vec<f64>> = vec![Vec::new(); header.len()];
    for (i, record) in r.records().enumerate() {
        let record = record?;
        let row = i + 1;
        ids.push(record[0].to_string());
        labels.push(record[1].to_string());
        for (col, field) in record.iter().enumerate().skip(2) {
            let v: f64 = field.trim().parse().map_err(|_| ReportError::Parse {
                row,
                message: format!("{:?} in column {} is not a number", field, header[col]),
            })?;
            values[col].push(v);
        }
    }
    let mut columns = Vec::new();
    let mut fitness = None;
    for (col, (name, vals)) in header.into_iter().zip(values).enumerate().skip(2) {
        let column = Column::new(name, vals);
        if Some(col) == fitness_at {
            fitness = Some(column);
        } else {
            columns.push(column);
        }
    }
    Ok(MetricTable::new(ids, labels, columns, fitness)?)
}

pub fn write_ranking(r: &RankingTable, path: &Path) -> Result<(), ReportError> {
    let file = File::create(path).map_err(ReportError::io(path))?;
    write_ranking_to(r, file)
}

/// One row per pair in average-rank order.
pub fn write_ranking_to(r: &RankingTable, out: impl Write) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "m1",
        "m2",
        "FI",
        "MC_signed",
        "MC_abs",
        "AMC",
        "FI_rank",
        "MC_rank",
        "AMC_rank",
        "avg_rank",
        "degenerate",
    ])?;
    let num = |v: f64| fmt_sig(v, CSV_DIGITS);
    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
    for p in &r.pairs {
        w.write_record([
            p.m1.clone(),
            p.m2.clone(),
            opt(p.fi),
            num(p.mc_signed),
            num(p.mc),
            num(p.amc),
            opt(p.fi_rank),
            num(p.mc_rank),
            num(p.amc_rank),
            num(p.avg_rank),
            p.degenerate.to_string(),
        ])?;
    }
    w.flush().map_err(ReportError::io("<csv>"))?;
    Ok(())
}

/// The blocks of the Top-N summary, in display order.
pub const SUMMARY_BLOCKS: [Criterion; 4] = [
    Criterion::Fi,
    Criterion::Mc,
    Criterion::Amc,
    Criterion::AverageRank,
];

/// Markdown with one Top-N table per criterion and one by average rank.
/// Every block lists all scores and ranks of its pairs, rounded to three
/// significant figures.
pub fn ranking_summary(r: &RankingTable, top_n: usize) -> String {
    let mut out = String::new();
    let shown = top_n.min(r.pairs.len());
    let _ = writeln!(out, "# Top {shown} metric pairs\n");
    let _ = writeln!(
        out,
        "{} pairs from {} metrics on a {res}x{res} grid. Values rounded to {SUMMARY_DIGITS} significant figures.",
        r.pairs.len(),
        r.n_metrics,
        res = r.resolution
    );
    if r.fi_skipped {
        let _ = writeln!(
            out,
            "\nNo fitness column: FI was skipped and the average rank uses MC and AMC only."
        );
    }
    let s = |v: f64| fmt_sig(v, SUMMARY_DIGITS);
    let opt = |v: Option<f64>| v.map(s).unwrap_or_else(|| "-".into());
    for block in SUMMARY_BLOCKS {
        if block == Criterion::Fi && r.fi_skipped {
            continue;
        }
        let _ = writeln!(out, "\n## Top {shown} by {}\n", block.name());
        let _ = writeln!(
            out,
            "| Metric Pair | FI | FI Rank | MC | MC Rank | AMC | AMC Rank | Average Rank |"
        );
        let _ = writeln!(out, "|---|---|---|---|---|---|---|---|");
        for p in r.top_by(block, top_n) {
            let _ = writeln!(out, "{}", summary_row(p, &s, &opt));
        }
    }
    out
}

fn summary_row(
    p: &PairCriteria,
    s: &dyn Fn(f64) -> String,
    opt: &dyn Fn(Option<f64>) -> String,
) -> String {
    format!(
        "| {} | {} | {} | {} | {} | {} | {} | {} |",
        p.label(),
        opt(p.fi),
        opt(p.fi_rank),
        s(p.mc_signed),
        s(p.mc_rank),
        s(p.amc),
        s(p.amc_rank),
        s(p.avg_rank),
    )
}

pub fn write_summary(r: &RankingTable, top_n: usize, path: &Path) -> Result<(), ReportError> {
    fs::write(path, ranking_summary(r, top_n)).map_err(ReportError::io(path))
}
