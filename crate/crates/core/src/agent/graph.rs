//! Jump-reachability graph over standable tiles.

use crate::level::{TileClass, TileGrid};
use crate::structural::is_standable;

use super::AgentConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    Walk,
    Jump,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub to: usize,
    pub kind: MoveKind,
    pub ticks: u32,
    /// Landing on an enemy from above.
    pub stomp: bool,
}

/// Standable tiles and the moves between them.
///
/// Nodes are ordered by `(x, y)`. Edges from a node list walks first (left,
/// then right) followed by jumps ordered by landing `(x, y)`.
#[derive(Debug, Clone)]
pub struct MoveGraph {
    width: usize,
    nodes: Vec<(usize, usize)>,
    /// `lookup[y * width + x]` is the node index of a standable tile.
    lookup: Vec<Option<usize>>,
    edges: Vec<Vec<Edge>>,
    start: Option<usize>,
}

impl MoveGraph {
    pub fn build(g: &TileGrid, cfg: &AgentConfig) -> Self {
        let (w, h) = (g.width(), g.height());
        let mut nodes = Vec::new();
        let mut lookup = vec![None; w * h];
        let mut columns: Vec<Vec<usize>> = vec![Vec::new(); w];
        for x in 0..w {
            for y in 0..h {
                if is_standable(g, x, y) {
                    lookup[y * w + x] = Some(nodes.len());
                    columns[x].push(nodes.len());
                    nodes.push((x, y));
                }
            }
        }

        // Leftmost column with a standing place; the lowest such tile.
        let start = columns.iter().find_map(|c| c.last().copied());

        let span = cfg.max_jump_span as usize;
        let mut edges = Vec::with_capacity(nodes.len());
        for &(x0, y0) in &nodes {
            let mut out = Vec::new();
            for x1 in [x0.checked_sub(1), Some(x0 + 1)].into_iter().flatten() {
                if x1 >= w {
                    continue;
                }
                for &n in &columns[x1] {
                    let (_, y1) = nodes[n];
                    if y1.abs_diff(y0) <= 1 && walk_clear(g, (x0, y0), (x1, y1)) {
                        out.push(Edge {
                            to: n,
                            kind: MoveKind::Walk,
                            ticks: cfg.ticks_per_tile_walk,
                            stomp: false,
                        });
                    }
                }
            }
            let lo = x0.saturating_sub(span);
            let hi = (x0 + span).min(w - 1);
            for (x1, column) in columns.iter().enumerate().take(hi + 1).skip(lo) {
                if x1 == x0 {
                    continue;
                }
                for &n in column {
                    let to = nodes[n];
                    if let Some(arc) = JumpArc::new((x0, y0), to, cfg.max_jump_height) {
                        if let Some(stomp) = arc.validate(g) {
                            out.push(Edge {
                                to: n,
                                kind: MoveKind::Jump,
                                ticks: arc.air_ticks(),
                                stomp,
                            });
                        }
                    }
                }
            }
            edges.push(out);
        }

        Self {
            width: w,
            nodes,
            lookup,
            edges,
            start,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, n: usize) -> (usize, usize) {
        self.nodes[n]
    }

    pub fn node_at(&self, x: usize, y: usize) -> Option<usize> {
        self.lookup.get(y * self.width + x).copied().flatten()
    }

    pub fn edges(&self, n: usize) -> &[Edge] {
        &self.edges[n]
    }

    pub fn start(&self) -> Option<usize> {
        self.start
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

/// Open air: passable and not an enemy. Above the top row counts as open.
fn open(g: &TileGrid, x: usize, y: i64) -> bool {
    if y < 0 {
        return true;
    }
    matches!(
        g.try_get(x as i64, y),
        Some(TileClass::Empty | TileClass::Reward)
    )
}

fn walk_clear(g: &TileGrid, (x0, y0): (usize, usize), (x1, y1): (usize, usize)) -> bool {
    if g.get(x1, y1) == TileClass::Enemy {
        return false;
    }
    if y1 < y0 {
        // Stepping up needs headroom above the current tile.
        open(g, x0, y0 as i64 - 1)
    } else if y1 > y0 {
        // Stepping down passes through the tile beside us.
        open(g, x1, y0 as i64)
    } else {
        true
    }
}

/// A discretized jump: rise at the takeoff column to the apex row, cross
/// horizontally at the apex, then drop at the landing column.
///
/// The apex sits one tile above the higher endpoint, capped at
/// `max_jump_height` above takeoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JumpArc {
    from: (usize, usize),
    to: (usize, usize),
    apex_y: i64,
}

impl JumpArc {
    /// `None` when the landing is more than `max_jump_height` above takeoff
    /// or the endpoints share a column.
    pub fn new(from: (usize, usize), to: (usize, usize), max_jump_height: u32) -> Option<Self> {
        if from.0 == to.0 {
            return None;
        }
        let rise = from.1 as i64 - to.1 as i64;
        let max_h = max_jump_height as i64;
        if rise > max_h {
            return None;
        }
        let peak = (rise.max(0) + 1).min(max_h);
        Some(Self {
            from,
            to,
            apex_y: from.1 as i64 - peak,
        })
    }

    pub fn dx(&self) -> usize {
        self.from.0.abs_diff(self.to.0)
    }

    pub fn air_ticks(&self) -> u32 {
        2 + self.dx() as u32
    }

    /// True when the agent comes down onto the landing tile.
    pub fn lands_from_above(&self) -> bool {
        self.apex_y < self.to.1 as i64
    }

    /// Cells visited after takeoff, ending at the landing tile. Coordinates
    /// above the top row have negative `y`.
    pub fn path(&self) -> Vec<(usize, i64)> {
        let (x0, y0) = (self.from.0, self.from.1 as i64);
        let (x1, y1) = (self.to.0, self.to.1 as i64);
        let mut cells = Vec::new();
        cells.extend((self.apex_y..y0).rev().map(|y| (x0, y)));
        let step = |x: usize| if x1 > x0 { x + 1 } else { x - 1 };
        let mut x = x0;
        while x != x1 {
            x = step(x);
            cells.push((x, self.apex_y));
        }
        cells.extend((self.apex_y + 1..=y1).map(|y| (x1, y)));
        cells
    }

    /// Checks clearance along the arc. Returns whether the landing is a
    /// stomp, or `None` if the jump is blocked.
    pub fn validate(&self, g: &TileGrid) -> Option<bool> {
        let path = self.path();
        let (landing, flight) = path.split_last()?;
        if !flight.iter().all(|&(x, y)| open(g, x, y)) {
            return None;
        }
        match g.try_get(landing.0 as i64, landing.1) {
            Some(TileClass::Enemy) if self.lands_from_above() => Some(true),
            Some(TileClass::Enemy) => None,
            Some(c) if c.is_passable() => Some(false),
            _ => None,
        }
    }
}
