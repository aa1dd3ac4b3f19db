//! Synth, extract, rank and report through the same functions the `era`
//! binary calls. Pass a directory to keep the outputs there.

use std::fs;
use std::path::PathBuf;

use era::pipeline::{
    cmd_extract, cmd_report, cmd_synth, ExtractOptions, ReportOptions, SynthOptions,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tmp = tempfile::tempdir()?;
    let root = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| tmp.path().to_path_buf());
    fs::create_dir_all(&root)?;

    let params = root.join("params");
    fs::create_dir_all(&params)?;
    let mut files = Vec::new();
    for (label, gap, enemy) in [
        ("smooth", 0.0, 0.03),
        ("gappy", 0.12, 0.03),
        ("crowded", 0.03, 0.15),
    ] {
        let path = params.join(format!("{label}.txt"));
        fs::write(
            &path,
            format!("generator_label = {label}\nlevel_count = 200\ngap_prob = {gap}\nenemy_prob = {enemy}\n"),
        )?;
        files.push(path);
    }

    let levels = root.join("levels");
    let n = cmd_synth(&SynthOptions {
        params_files: files,
        out_dir: levels.clone(),
        ..Default::default()
    })?;
    println!("generated {n} levels");

    let metrics = root.join("metrics.csv");
    let extracted = cmd_extract(&ExtractOptions {
        levels_dir: levels,
        out_csv: metrics.clone(),
        ..Default::default()
    })?;
    println!("extracted {} levels", extracted.levels);

    let report = root.join("report");
    cmd_report(&ReportOptions::new(&metrics, &report))?;
    let mut names: Vec<String> = fs::read_dir(&report)?
        .map(|e| e.map(|e| e.file_name().to_string_lossy().into_owned()))
        .collect::<Result<_, _>>()?;
    names.sort();
    println!("report files: {}", names.join(", "));
    println!("\n{}", fs::read_to_string(report.join("composition.md"))?);
    Ok(())
}
