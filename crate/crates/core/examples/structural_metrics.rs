//! Prints the nine grid-only metrics of a small hand-made level.

use era::level::{TileClassification, TileGrid};
use era::metrics::STRUCTURAL_METRICS;
use era::structural;

const LEVEL: &str = "\
----------------
------QQ--------
----------------
---E-----tt--E--
XXXXXX--XXXXXXXX
XXXXXX--XXXXXXXX";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = TileGrid::parse(LEVEL, &TileClassification::default(), "demo", "hand")?;
    println!("{}", g.raw_text());
    for (name, value) in STRUCTURAL_METRICS.iter().zip(structural::all(&g)) {
        println!("{name:>13}: {value}");
    }
    Ok(())
}
