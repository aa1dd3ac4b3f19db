use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use crate::level::{TileClass, TileGrid};

use super::graph::{JumpArc, MoveGraph, MoveKind};
use super::{AgentConfig, PlayTrace, TraceStep};

/// Plays the level with A* toward `x = width - 1`.
///
/// Costs are ticks. The heuristic is the remaining columns times the
/// cheapest ticks per column of any move, which keeps it consistent. All
/// arithmetic is scaled by `max_jump_span` so it stays integral.
///
/// Open nodes are ordered by `(f, x descending, y ascending, insertion)`.
/// If the goal is not reached (or the budget runs out) the trace follows the
/// path to the expanded node with the largest `x`, ties going to the lower
/// tick cost.
pub fn run_agent(g: &TileGrid, cfg: &AgentConfig) -> PlayTrace {
    let graph = MoveGraph::build(g, cfg);
    run_on_graph(g, &graph, cfg)
}

pub(crate) fn run_on_graph(g: &TileGrid, graph: &MoveGraph, cfg: &AgentConfig) -> PlayTrace {
    let Some(start) = graph.start() else {
        return PlayTrace::default();
    };
    let goal_x = g.width() - 1;
    let span = u64::from(cfg.max_jump_span);
    let per_column = (u64::from(cfg.ticks_per_tile_walk) * span).min(2 + span);
    let heuristic = |n: usize| (goal_x - graph.node(n).0) as u64 * per_column;

    let n = graph.len();
    let mut cost = vec![u64::MAX; n];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut closed = vec![false; n];
    let mut open = BinaryHeap::new();
    let mut seq = 0u64;

    cost[start] = 0;
    open.push(Reverse((
        heuristic(start),
        Reverse(graph.node(start).0),
        graph.node(start).1,
        seq,
        start,
    )));

    let mut expansions = 0u64;
    let mut best: Option<usize> = None;
    let mut goal = None;
    let mut exhausted = false;

    while let Some(Reverse((_, _, _, _, node))) = open.pop() {
        if closed[node] {
            continue;
        }
        if expansions >= cfg.max_expansions {
            exhausted = true;
            break;
        }
        closed[node] = true;
        expansions += 1;

        let (x, y) = graph.node(node);
        let better = match best {
            None => true,
            Some(b) => {
                let (bx, by) = graph.node(b);
                (x, Reverse(cost[node]), Reverse(y)) > (bx, Reverse(cost[b]), Reverse(by))
            }
        };
        if better {
            best = Some(node);
        }
        if x == goal_x {
            goal = Some(node);
            break;
        }

        for (ei, edge) in graph.edges(node).iter().enumerate() {
            if closed[edge.to] {
                continue;
            }
            let g_new = cost[node] + u64::from(edge.ticks);
            if g_new < cost[edge.to] {
                cost[edge.to] = g_new;
                parent[edge.to] = Some((node, ei));
                seq += 1;
                let (tx, ty) = graph.node(edge.to);
                let f = g_new * span + heuristic(edge.to);
                open.push(Reverse((f, Reverse(tx), ty, seq, edge.to)));
            }
        }
    }

    let end = goal.or(best).unwrap_or(start);
    let mut trace = replay(g, graph, cfg, &parent, start, end);
    trace.completed = goal.is_some();
    trace.budget_exhausted = exhausted;
    trace.expansions = expansions;
    trace
}

fn replay(
    g: &TileGrid,
    graph: &MoveGraph,
    cfg: &AgentConfig,
    parent: &[Option<(usize, usize)>],
    start: usize,
    end: usize,
) -> PlayTrace {
    let mut hops = Vec::new();
    let mut at = end;
    while at != start {
        let (from, ei) = parent[at].expect("expanded node has a parent");
        hops.push((from, ei));
        at = from;
    }
    hops.reverse();

    let (sx, sy) = graph.node(start);
    let mut trace = PlayTrace {
        start: Some((sx, sy)),
        reached_x: graph.node(end).0,
        ..PlayTrace::default()
    };
    let mut tick = 0u32;
    let mut killed = BTreeSet::new();
    for (from, ei) in hops {
        let edge = &graph.edges(from)[ei];
        let (x0, y0) = graph.node(from);
        let (x1, y1) = graph.node(edge.to);
        match edge.kind {
            MoveKind::Walk => {
                for i in 1..=edge.ticks {
                    tick += 1;
                    let (x, y) = if i == edge.ticks { (x1, y1) } else { (x0, y0) };
                    trace.steps.push(TraceStep {
                        x,
                        y: y as i64,
                        airborne: false,
                        tick,
                    });
                }
            }
            MoveKind::Jump => {
                let arc = JumpArc::new((x0, y0), (x1, y1), cfg.max_jump_height)
                    .expect("edge is a valid arc");
                let path = arc.path();
                let len = path.len() as u32;
                for i in 1..=edge.ticks {
                    tick += 1;
                    let idx = (i * len).div_ceil(edge.ticks) - 1;
                    let (x, y) = path[idx as usize];
                    trace.steps.push(TraceStep {
                        x,
                        y,
                        airborne: true,
                        tick,
                    });
                }
                trace.jumps.push(edge.ticks);
            }
        }
        if edge.stomp && g.get(x1, y1) == TileClass::Enemy && killed.insert((x1, y1)) {
            trace.stomp_kills += 1;
            trace.total_enemy_deaths += 1;
        }
    }
    trace.total_ticks = tick;
    trace
}
