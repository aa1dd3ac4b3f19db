//! The operations behind the `era` subcommands.
//!
//! Each `cmd_*` function writes its artifacts plus a JSON [`RunManifest`]
//! and returns the warnings a caller should show. Outputs depend only on
//! the inputs and options; the thread count is never recorded.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::agent::{AgentConfig, ConfigError};
use crate::criteria::{rank_pairs, CriteriaError, RankingTable};
use crate::level::{load_corpus, write_corpus, LevelError, TileClassification, TileGrid};
use crate::metrics::{category_of, extract_table};
use crate::report::{
    read_metric_table, summarize_composition, write_metric_table, write_plot, write_ranking,
    write_summary, Palette, PlotMode, PlotSpec, ReportError,
};
use crate::stats::MetricTable;
use crate::synth::{benchmark_ensemble, generate_ensemble, SynthError, SynthParams};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Level(#[from] LevelError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("no levels could be loaded from {0}")]
    EmptyCorpus(PathBuf),
    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
    #[error("manifest: {0}")]
    Json(#[from] serde_json::Error),
    #[error("synth needs at least one params file or the benchmark ensemble")]
    NoSynthParams,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Provenance written next to every run's outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub inputs: Vec<InputRecord>,
    pub config: serde_json::Value,
    /// SHA-256 over the loaded levels, or over the metrics CSV for commands
    /// that start from one.
    pub corpus_fingerprint: String,
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputRecord {
    pub path: String,
    pub sha256: Option<String>,
}

impl RunManifest {
    fn new(command: &str, config: serde_json::Value, fingerprint: String) -> Self {
        Self {
            command: command.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            inputs: Vec::new(),
            config,
            corpus_fingerprint: fingerprint,
            outputs: Vec::new(),
        }
    }

    fn input(&mut self, path: &Path, hash_file: bool) -> Result<(), PipelineError> {
        let sha256 = if hash_file {
            Some(hex(&Sha256::digest(fs::read(path).map_err(io_err(path))?)))
        } else {
            None
        };
        self.inputs.push(InputRecord {
            path: path.display().to_string(),
            sha256,
        });
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<(), PipelineError> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text).map_err(io_err(path))
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Hash of the levels in corpus order: label, id and text of each.
pub fn corpus_fingerprint(levels: &[TileGrid]) -> String {
    let mut h = Sha256::new();
    for g in levels {
        for part in [
            g.generator_label.as_str(),
            g.level_id.as_str(),
            g.raw_text().as_str(),
        ] {
            h.update((part.len() as u64).to_le_bytes());
            h.update(part.as_bytes());
        }
    }
    hex(&h.finalize())
}

fn file_fingerprint(path: &Path) -> Result<String, PipelineError> {
    Ok(hex(&Sha256::digest(fs::read(path).map_err(io_err(path))?)))
}

/// `<file>.manifest.json` next to a single output file.
pub fn manifest_path_for(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// Runs `f` on a pool of `threads` workers, or on the global pool.
fn with_threads<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> Result<T, PipelineError> + Send,
) -> Result<T, PipelineError> {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()?
            .install(f),
        None => f(),
    }
}

fn create_parent(path: &Path) -> Result<(), PipelineError> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir).map_err(io_err(dir)),
        _ => Ok(()),
    }
}

#[derive(Debug, Clone, Default)]
pub struct ExtractOptions {
    pub levels_dir: PathBuf,
    pub tilemap: Option<PathBuf>,
    pub agent_config: Option<PathBuf>,
    pub out_csv: PathBuf,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractOutcome {
    pub levels: usize,
    pub failures: usize,
    pub warnings: Vec<String>,
}

/// Loads a corpus, runs every metric and writes the metric table CSV.
pub fn cmd_extract(opts: &ExtractOptions) -> Result<ExtractOutcome, PipelineError> {
    let classification = match &opts.tilemap {
        Some(p) => TileClassification::load(p)?,
        None => TileClassification::default(),
    };
    let cfg = match &opts.agent_config {
        Some(p) => AgentConfig::parse(&fs::read_to_string(p).map_err(io_err(p))?)?,
        None => AgentConfig::default(),
    };
    let (corpus, table) = with_threads(opts.threads, || {
        let corpus = load_corpus(&opts.levels_dir, &classification)?;
        if corpus.levels.is_empty() {
            return Err(PipelineError::EmptyCorpus(opts.levels_dir.clone()));
        }
        let table = extract_table(&corpus.levels, &cfg);
        Ok((corpus, table))
    })?;
    create_parent(&opts.out_csv)?;
    write_metric_table(&table, &opts.out_csv)?;

    let mut warnings = corpus.warnings.clone();
    warnings.extend(
        corpus
            .failures
            .iter()
            .map(|f| format!("skipped {}: {}", f.path.display(), f.error)),
    );
    let config = json!({
        "agent": cfg,
        "tilemap": opts.tilemap.as_ref().map_or("built-in".to_string(), |p| p.display().to_string()),
        "skipped_levels": corpus.failures.len(),
    });
    let mut m = RunManifest::new("extract", config, corpus_fingerprint(&corpus.levels));
    m.input(&opts.levels_dir, false)?;
    for p in opts.tilemap.iter().chain(&opts.agent_config) {
        m.input(p, true)?;
    }
    m.outputs.push(file_name(&opts.out_csv));
    m.write(&manifest_path_for(&opts.out_csv))?;
    Ok(ExtractOutcome {
        levels: corpus.levels.len(),
        failures: corpus.failures.len(),
        warnings,
    })
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .unwrap_or_default()
        .to_string_lossy()
        .into_owned()
}

fn fi_warning(r: &RankingTable) -> Vec<String> {
    if r.fi_skipped {
        vec!["no Playability column: FI skipped, average rank uses MC and AMC".into()]
    } else {
        Vec::new()
    }
}

#[derive(Debug, Clone)]
pub struct RankOptions {
    pub metrics_csv: PathBuf,
    pub grid: usize,
    pub out_csv: PathBuf,
    /// Defaults to the ranking path with an `.md` extension.
    pub summary: Option<PathBuf>,
    pub top_n: usize,
    pub threads: Option<usize>,
}

impl RankOptions {
    pub fn new(metrics_csv: impl Into<PathBuf>, out_csv: impl Into<PathBuf>) -> Self {
        Self {
            metrics_csv: metrics_csv.into(),
            grid: 20,
            out_csv: out_csv.into(),
            summary: None,
            top_n: 5,
            threads: None,
        }
    }
}

/// Ranks every metric pair and writes the ranking CSV plus the Top-N summary.
pub fn cmd_rank(opts: &RankOptions) -> Result<Vec<String>, PipelineError> {
    let table = read_metric_table(&opts.metrics_csv)?;
    let ranking = with_threads(opts.threads, || Ok(rank_pairs(&table, opts.grid)?))?;
    let summary = opts
        .summary
        .clone()
        .unwrap_or_else(|| opts.out_csv.with_extension("md"));
    create_parent(&opts.out_csv)?;
    create_parent(&summary)?;
    write_ranking(&ranking, &opts.out_csv)?;
    write_summary(&ranking, opts.top_n, &summary)?;

    let config = json!({ "grid": opts.grid, "top": opts.top_n });
    let mut m = RunManifest::new("rank", config, file_fingerprint(&opts.metrics_csv)?);
    m.input(&opts.metrics_csv, true)?;
    m.outputs = vec![file_name(&opts.out_csv), file_name(&summary)];
    m.write(&manifest_path_for(&opts.out_csv))?;
    Ok(fi_warning(&ranking))
}

#[derive(Debug, Clone)]
pub struct PlotOptions {
    pub metrics_csv: PathBuf,
    pub spec: PlotSpec,
    pub out_svg: PathBuf,
}

/// Renders one ERA plot.
pub fn cmd_plot(opts: &PlotOptions) -> Result<(), PipelineError> {
    let table = read_metric_table(&opts.metrics_csv)?;
    create_parent(&opts.out_svg)?;
    write_plot(&table, &opts.spec, &opts.out_svg)?;
    let s = &opts.spec;
    let config = json!({
        "pair": [s.m1, s.m2],
        "mode": s.mode.name(),
        "grid": s.resolution,
        "width_px": s.width_px,
        "height_px": s.height_px,
        "palette": s.palette.name(),
    });
    let mut m = RunManifest::new("plot", config, file_fingerprint(&opts.metrics_csv)?);
    m.input(&opts.metrics_csv, true)?;
    m.outputs.push(file_name(&opts.out_svg));
    m.write(&manifest_path_for(&opts.out_svg))
}

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub metrics_csv: PathBuf,
    pub out_dir: PathBuf,
    pub top_n: usize,
    pub grid: usize,
    pub palette: Palette,
    pub threads: Option<usize>,
}

impl ReportOptions {
    pub fn new(metrics_csv: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            metrics_csv: metrics_csv.into(),
            out_dir: out_dir.into(),
            top_n: 5,
            grid: 20,
            palette: Palette::default(),
            threads: None,
        }
    }
}

pub const RANKING_FILE: &str = "ranking.csv";
pub const SUMMARY_FILE: &str = "summary.md";
pub const COMPOSITION_FILE: &str = "composition.md";
pub const FREQUENCY_FILE: &str = "metric_frequency.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Plots for the best and worst pairs by average rank.
pub fn report_plots(
    table: &MetricTable,
    ranking: &RankingTable,
    grid: usize,
    palette: Palette,
) -> Vec<(String, PlotSpec)> {
    let heat = if table.fitness().is_some() {
        PlotMode::FitnessHeatmap
    } else {
        PlotMode::CountHeatmap
    };
    let ends = [
        ("best", ranking.pairs.first()),
        ("worst", ranking.pairs.last()),
    ];
    let mut plots = Vec::new();
    for (tag, pair) in ends {
        let Some(p) = pair else { continue };
        for mode in [heat, PlotMode::GeneratorOverlay] {
            let mut spec = PlotSpec::new(&p.m1, &p.m2, mode);
            spec.resolution = grid;
            spec.palette = palette;
            plots.push((format!("{tag}_{}.svg", mode.name()), spec));
        }
    }
    plots
}

/// Writes the full report into `out_dir`: ranking, Top-N summary,
/// composition, metric frequencies and plots of the best and worst pairs.
pub fn cmd_report(opts: &ReportOptions) -> Result<Vec<String>, PipelineError> {
    let table = read_metric_table(&opts.metrics_csv)?;
    let dir = &opts.out_dir;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let (ranking, plots) = with_threads(opts.threads, || {
        let ranking = rank_pairs(&table, opts.grid)?;
        let plots = report_plots(&table, &ranking, opts.grid, opts.palette);
        plots
            .par_iter()
            .map(|(name, spec)| write_plot(&table, spec, &dir.join(name)))
            .collect::<Result<Vec<()>, ReportError>>()?;
        Ok((ranking, plots))
    })?;
    write_ranking(&ranking, &dir.join(RANKING_FILE))?;
    write_summary(&ranking, opts.top_n, &dir.join(SUMMARY_FILE))?;
    let composition = summarize_composition(&ranking, category_of, opts.top_n)?;
    let write = |name: &str, text: String| {
        let path = dir.join(name);
        fs::write(&path, text).map_err(io_err(&path))
    };
    write(COMPOSITION_FILE, composition.to_markdown())?;
    write(FREQUENCY_FILE, composition.frequency_csv())?;

    let config = json!({
        "grid": opts.grid,
        "top": opts.top_n,
        "palette": opts.palette.name(),
    });
    let mut m = RunManifest::new("report", config, file_fingerprint(&opts.metrics_csv)?);
    m.input(&opts.metrics_csv, true)?;
    m.outputs = [RANKING_FILE, SUMMARY_FILE, COMPOSITION_FILE, FREQUENCY_FILE]
        .iter()
        .map(|s| s.to_string())
        .chain(plots.into_iter().map(|(name, _)| name))
        .collect();
    m.write(&dir.join(MANIFEST_FILE))?;
    Ok(fi_warning(&ranking))
}

#[derive(Debug, Clone, Default)]
pub struct SynthOptions {
    /// One params file per generator.
    pub params_files: Vec<PathBuf>,
    /// Adds the nine-generator, 9014-level ensemble.
    pub benchmark: bool,
    /// Replaces the seed of every parameter set.
    pub seed: Option<u64>,
    pub out_dir: PathBuf,
    pub threads: Option<usize>,
}

/// Generates a synthetic corpus in the directory layout `extract` reads.
pub fn cmd_synth(opts: &SynthOptions) -> Result<usize, PipelineError> {
    let mut sets = Vec::new();
    for p in &opts.params_files {
        sets.push(SynthParams::parse(
            &fs::read_to_string(p).map_err(io_err(p))?,
        )?);
    }
    if opts.benchmark {
        sets.extend(benchmark_ensemble(opts.seed.unwrap_or(0)));
    }
    if sets.is_empty() {
        return Err(PipelineError::NoSynthParams);
    }
    if let Some(seed) = opts.seed {
        for (i, p) in sets.iter_mut().enumerate() {
            p.seed = seed.wrapping_add(i as u64);
        }
    }
    let levels = with_threads(opts.threads, || Ok(generate_ensemble(&sets)?))?;
    let dir = &opts.out_dir;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    write_corpus(dir, &levels).map_err(io_err(dir))?;

    let mut m = RunManifest::new(
        "synth",
        json!({ "generators": sets }),
        corpus_fingerprint(&levels),
    );
    for p in &opts.params_files {
        m.input(p, true)?;
    }
    let mut labels: Vec<String> = sets.iter().map(|p| p.generator_label.clone()).collect();
    labels.sort();
    m.outputs = labels;
    m.write(&dir.join(MANIFEST_FILE))?;
    Ok(levels.len())
}
