//! Runs the A* agent over a level with a gap, a wall and an enemy, then
//! prints the path it took and the trace metrics.

use era::agent::{extract_agent_metrics, run_agent, AgentConfig};
use era::level::{TileClassification, TileGrid};
use era::metrics::AGENT_METRICS;

const LEVEL: &str = "\
------------------------
------------------------
------------------------
--------------X---------
--------------X---------
------E-------X---------
XXXXXXXX---XXXXXXXXXXXXX
XXXXXXXX---XXXXXXXXXXXXX";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = TileGrid::parse(LEVEL, &TileClassification::default(), "demo", "hand")?;
    let cfg = AgentConfig::default();
    let trace = run_agent(&g, &cfg);

    // Overlay the visited tiles on the level.
    let mut rows: Vec<Vec<char>> = g.raw_text().lines().map(|l| l.chars().collect()).collect();
    for s in &trace.steps {
        if s.y >= 0 {
            let c = &mut rows[s.y as usize][s.x];
            if *c == '-' {
                *c = if s.airborne { '*' } else { 'o' };
            }
        }
    }
    for r in rows {
        println!("{}", r.into_iter().collect::<String>());
    }

    println!(
        "\ncompleted: {}, reached x = {}, {} ticks, jumps {:?}, stomps {}",
        trace.completed, trace.reached_x, trace.total_ticks, trace.jumps, trace.stomp_kills
    );
    let m = extract_agent_metrics(&trace, &g, &cfg);
    println!("{:>16}: {}", "Playability", m.playability);
    for (name, value) in AGENT_METRICS.iter().zip(m.candidates()) {
        println!("{name:>16}: {value:.4}");
    }
    Ok(())
}
