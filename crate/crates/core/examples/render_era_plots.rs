//! Renders the three plot modes for one metric pair into a temporary
//! directory and prints their sizes.

use era::agent::AgentConfig;
use era::metrics::extract_table;
use era::report::{render_plot, Palette, PlotMode, PlotSpec};
use era::synth::{generate_ensemble, SynthParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sets: Vec<SynthParams> = (0..3)
        .map(|i| SynthParams {
            seed: 10 + i,
            level_count: 120,
            gap_prob: 0.04 * i as f64,
            enemy_prob: 0.03 * (3 - i) as f64,
            generator_label: format!("gen{}", i + 1),
            ..SynthParams::default()
        })
        .collect();
    let table = extract_table(&generate_ensemble(&sets)?, &AgentConfig::default());

    let out = tempfile::tempdir()?;
    for mode in PlotMode::ALL {
        let mut spec = PlotSpec::new("Density", "AverageY", mode);
        spec.palette = Palette::Magma;
        let svg = render_plot(&table, &spec)?;
        let path = out.path().join(format!("{}.svg", mode.name()));
        std::fs::write(&path, &svg)?;
        println!(
            "{:<18} {:>7} bytes  {}",
            mode.name(),
            svg.len(),
            path.display()
        );
    }
    // Keep the files around for inspection when asked to.
    if std::env::args().any(|a| a == "--keep") {
        println!("kept {}", out.keep().display());
    }
    Ok(())
}
