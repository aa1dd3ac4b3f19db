//! Writes a two-generator corpus to a temporary directory and loads it
//! back, including a custom tile table and one broken file.

use std::fs;

use era::level::{load_corpus, TileClass, TileClassification, TileGrid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let root = dir.path();
    for (label, id, text) in [
        ("hills", "001", "--------\n---o----\n--XXX---\nXXXXXXXX\n"),
        ("hills", "002", "--------\n--------\n-E----tt\nXXXX-XXX\n"),
        ("flat", "001", "--------\n--------\n--------\nXXXXXXXX\n"),
        ("flat", "broken", "----\n--\n"),
    ] {
        fs::create_dir_all(root.join(label))?;
        fs::write(root.join(label).join(format!("{id}.txt")), text)?;
    }

    let builtin = TileClassification::default();
    let corpus = load_corpus(root, &builtin)?;
    println!(
        "loaded {} levels, {} failures",
        corpus.levels.len(),
        corpus.failures.len()
    );
    for f in &corpus.failures {
        println!(
            "  skipped {}: {}",
            f.path.file_name().unwrap().to_string_lossy(),
            f.error
        );
    }
    for g in &corpus.levels {
        println!(
            "  {}/{}: {}x{}, {} solid, {} enemies",
            g.generator_label,
            g.level_id,
            g.width(),
            g.height(),
            g.count(TileClass::Solid),
            g.count(TileClass::Enemy)
        );
    }

    // A custom table: '=' is ground, '^' a spike treated as an enemy and
    // everything else empty.
    let custom = TileClassification::parse("'=' = Solid\n'^' = Enemy\ndefault = Empty\n")?;
    let g = TileGrid::parse("......\n..^...\n======", &custom, "custom", "demo")?;
    println!(
        "custom level: {} solid, {} enemy",
        g.count(TileClass::Solid),
        g.count(TileClass::Enemy)
    );
    Ok(())
}
