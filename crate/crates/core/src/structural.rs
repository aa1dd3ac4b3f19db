//! Metrics computed from the tile grid alone.

use crate::level::{TileClass, TileGrid};

/// Solid tiles with at least one solid tile above, below, left or right.
/// A tile counts once however many solid neighbours it has.
pub fn contiguity(g: &TileGrid) -> f64 {
    count_solid_with_neighbour(g, &[(-1, 0), (1, 0), (0, -1), (0, 1)])
}

/// Solid tiles with a solid tile directly left or right.
pub fn linearity(g: &TileGrid) -> f64 {
    count_solid_with_neighbour(g, &[(-1, 0), (1, 0)])
}

fn count_solid_with_neighbour(g: &TileGrid, offsets: &[(i64, i64)]) -> f64 {
    let mut n = 0usize;
    for y in 0..g.height() {
        for x in 0..g.width() {
            if g.get(x, y) != TileClass::Solid {
                continue;
            }
            let touching = offsets
                .iter()
                .any(|&(dx, dy)| g.try_get(x as i64 + dx, y as i64 + dy) == Some(TileClass::Solid));
            if touching {
                n += 1;
            }
        }
    }
    n as f64
}

pub fn block_count(g: &TileGrid) -> f64 {
    g.count(TileClass::Solid) as f64
}

pub fn enemy_count(g: &TileGrid) -> f64 {
    g.count(TileClass::Enemy) as f64
}

pub fn reward_count(g: &TileGrid) -> f64 {
    g.count(TileClass::Reward) as f64
}

pub fn empty_count(g: &TileGrid) -> f64 {
    g.count(TileClass::Empty) as f64
}

pub fn pipe_count(g: &TileGrid) -> f64 {
    g.count(TileClass::Pipe) as f64
}

/// A passable tile resting directly on a solid or pipe tile. The bottom row
/// has nothing beneath it and is never standable.
pub fn is_standable(g: &TileGrid, x: usize, y: usize) -> bool {
    y + 1 < g.height() && g.get(x, y).is_passable() && g.get(x, y + 1).is_support()
}

/// Standable tiles per column of level length.
pub fn density(g: &TileGrid) -> f64 {
    let mut n = 0usize;
    for y in 0..g.height() {
        for x in 0..g.width() {
            if is_standable(g, x, y) {
                n += 1;
            }
        }
    }
    n as f64 / g.width() as f64
}

/// Columns made entirely of empty tiles.
pub fn clear_columns(g: &TileGrid) -> f64 {
    (0..g.width())
        .filter(|&x| (0..g.height()).all(|y| g.get(x, y) == TileClass::Empty))
        .count() as f64
}

/// All nine structural metrics in table order.
pub fn all(g: &TileGrid) -> [f64; 9] {
    [
        contiguity(g),
        linearity(g),
        block_count(g),
        enemy_count(g),
        reward_count(g),
        empty_count(g),
        pipe_count(g),
        density(g),
        clear_columns(g),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::level::TileClassification;
    use proptest::prelude::*;
    use TileClass::*;

    fn grid(w: usize, cells: Vec<TileClass>) -> TileGrid {
        TileGrid::from_classes(w, cells, "t", "t")
    }

    fn text(s: &str) -> TileGrid {
        TileGrid::parse(s, &TileClassification::default(), "t", "t").unwrap()
    }

    #[test]
    fn contiguity_examples() {
        assert_eq!(contiguity(&grid(2, vec![Solid, Solid])), 2.0);
        assert_eq!(contiguity(&grid(2, vec![Empty; 4])), 0.0);
        assert_eq!(contiguity(&text("-X-\nXXX\n-X-")), 5.0);
        // Diagonal neighbours do not count.
        assert_eq!(contiguity(&text("X-\n-X")), 0.0);
    }

    #[test]
    fn linearity_examples() {
        assert_eq!(linearity(&grid(3, vec![Solid; 3])), 3.0);
        assert_eq!(linearity(&grid(1, vec![Solid; 3])), 0.0);
        assert_eq!(linearity(&text("X-X-\n-X-X\nX-X-\n-X-X")), 0.0);
    }

    #[test]
    fn class_counts() {
        let g = grid(2, vec![Solid, Empty, Enemy, Reward]);
        assert_eq!(
            [
                block_count(&g),
                enemy_count(&g),
                reward_count(&g),
                empty_count(&g),
                pipe_count(&g)
            ],
            [1.0, 1.0, 1.0, 1.0, 0.0]
        );
        let empty = grid(4, vec![Empty; 12]);
        assert_eq!(empty_count(&empty), 12.0);
        assert_eq!(
            block_count(&empty) + enemy_count(&empty) + pipe_count(&empty),
            0.0
        );
    }

    #[test]
    fn pipe_count_by_hand() {
        // 20 wide, 16 tall: floor, one 1x2 pipe and one single pipe tile.
        let mut rows = vec!["--------------------".to_string(); 16];
        rows[15] = "X".repeat(20);
        rows[14] = "-----t------T-------".into();
        rows[13] = "-----t--------------".into();
        let g = text(&rows.join("\n"));
        assert_eq!(pipe_count(&g), 3.0);
    }

    #[test]
    fn density_examples() {
        assert_eq!(density(&text("---\nXXX")), 1.0);
        assert_eq!(density(&grid(3, vec![Empty; 9])), 0.0);
        let two_platforms = ["----------", "XXXXXXXXXX", "----------", "XXXXXXXXXX"].join("\n");
        assert_eq!(density(&text(&two_platforms)), 2.0);
        // Pipes support, enemies and rewards can be stood in.
        assert_eq!(density(&text("EQ-\ntXX")), 1.0);
        // Solid tiles are not standing places.
        assert_eq!(density(&text("X\nX")), 0.0);
    }

    #[test]
    fn clear_column_examples() {
        assert_eq!(clear_columns(&text("X-X\nX-X\nX-X")), 1.0);
        assert_eq!(clear_columns(&grid(3, vec![Solid; 9])), 0.0);
        let mut top = "-".repeat(150);
        let mut floor = String::new();
        for x in 0..150 {
            floor.push(if x % 20 == 10 && x < 140 { '-' } else { 'X' });
        }
        top.push('\n');
        top.push_str(&floor);
        assert_eq!(clear_columns(&text(&top)), 7.0);
    }

    fn arb_grid() -> impl Strategy<Value = TileGrid> {
        (1usize..8, 1usize..8).prop_flat_map(|(w, h)| {
            proptest::collection::vec(proptest::sample::select(TileClass::ALL.to_vec()), w * h)
                .prop_map(move |cells| TileGrid::from_classes(w, cells, "p", "p"))
        })
    }

    proptest! {
        #[test]
        fn classes_partition_the_grid(g in arb_grid()) {
            let total = block_count(&g) + empty_count(&g) + enemy_count(&g)
                + reward_count(&g) + pipe_count(&g);
            prop_assert_eq!(total, (g.width() * g.height()) as f64);
        }

        #[test]
        fn metric_bounds(g in arb_grid()) {
            prop_assert!(linearity(&g) <= contiguity(&g));
            prop_assert!(contiguity(&g) <= block_count(&g));
            prop_assert!(clear_columns(&g) <= g.width() as f64);
            prop_assert!(density(&g) >= 0.0);
        }

        // An extra empty row on top only touches EmptyCount. Density is
        // included when the old top row offers no support to the new row.
        #[test]
        fn empty_row_on_top(g in arb_grid()) {
            let w = g.width();
            let mut cells = vec![Empty; w];
            cells.extend_from_slice(g.cells());
            let taller = TileGrid::from_classes(w, cells, "p", "p");
            let before = all(&g);
            let after = all(&taller);
            for i in [0, 1, 2, 3, 4, 6, 8] {
                prop_assert_eq!(before[i], after[i]);
            }
            prop_assert_eq!(after[5], before[5] + w as f64);
            let top_supports = (0..w).any(|x| g.get(x, 0).is_support());
            if !top_supports {
                prop_assert_eq!(before[7], after[7]);
            }
        }
    }
}
