//! Shows one level from each of three generator styles and the benchmark
//! ensemble layout.

use era::structural;
use era::synth::{benchmark_ensemble, generate_corpus, SynthParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (label, gap, enemy, step) in [
        ("flat", 0.0, 0.0, 0),
        ("rolling", 0.03, 0.05, 1),
        ("broken", 0.15, 0.1, 3),
    ] {
        let p = SynthParams {
            width: 60,
            level_count: 1,
            gap_prob: gap,
            enemy_prob: enemy,
            height_walk_step: step,
            generator_label: label.into(),
            ..SynthParams::default()
        };
        let g = &generate_corpus(&p)?[0];
        println!(
            "{label}: density {:.2}, enemies {}",
            structural::density(g),
            structural::enemy_count(g)
        );
        println!("{}", g.raw_text());
    }

    let sets = benchmark_ensemble(0);
    let total: usize = sets.iter().map(|p| p.level_count).sum();
    println!(
        "benchmark ensemble: {} generators, {total} levels",
        sets.len()
    );
    Ok(())
}
