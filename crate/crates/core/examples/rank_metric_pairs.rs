//! Ranks the 153 metric pairs of a synthetic corpus and prints the top
//! pairs under each criterion.

use era::agent::AgentConfig;
use era::criteria::{compute_amc, compute_fi, compute_mc, rank_pairs, Criterion};
use era::metrics::extract_table;
use era::synth::{generate_ensemble, SynthParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sets: Vec<SynthParams> = [
        (0.0, 0.02, "calm"),
        (0.08, 0.1, "busy"),
        (0.15, 0.05, "gappy"),
    ]
    .into_iter()
    .enumerate()
    .map(|(i, (gap, enemy, label))| SynthParams {
        seed: i as u64,
        level_count: 150,
        gap_prob: gap,
        enemy_prob: enemy,
        generator_label: label.into(),
        ..SynthParams::default()
    })
    .collect();
    let levels = generate_ensemble(&sets)?;
    let table = extract_table(&levels, &AgentConfig::default());

    let fi = compute_fi(&table, "Density", "AverageY", 20)?;
    let (mc_signed, mc) = compute_mc(&table, "Density", "AverageY")?;
    let amc = compute_amc(&table, "Density", "AverageY")?;
    println!("Density-AverageY: FI {fi:.3}, MC {mc:.3} (signed {mc_signed:.3}), AMC {amc:.3}\n");

    let ranking = rank_pairs(&table, 20)?;
    println!(
        "{} pairs from {} metrics",
        ranking.pairs.len(),
        ranking.n_metrics
    );
    for criterion in Criterion::ALL {
        println!("\nTop 3 by {}:", criterion.name());
        for p in ranking.top_by(criterion, 3) {
            println!(
                "  {:<30} FI {:.3}  MC {:.3}  AMC {:.3}  avg rank {:.1}",
                p.label(),
                p.fi.unwrap_or(f64::NAN),
                p.mc,
                p.amc,
                p.avg_rank
            );
        }
    }
    Ok(())
}
