//! Tile shapes and tile sets.
//!
//! A tile is a finite, hole-less, 4-connected set of unit cells (a polyomino)
//! at a fixed orientation — rotations and reflections are distinct shapes.
//! Every tile is kept in *center-normalized* form: its center is the cell in
//! the minimal row and, within that row, the minimal column, and that center
//! sits at the origin.  Cells in rows below the center may extend to negative
//! column offsets; row 0 never does.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A grid cell or cell offset, row-major ordered.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(i32, i32)", into = "(i32, i32)")]
pub struct Cell {
    pub row: i32,
    pub col: i32,
}

impl Cell {
    pub const fn new(row: i32, col: i32) -> Self {
        Cell { row, col }
    }
}

impl From<(i32, i32)> for Cell {
    fn from((row, col): (i32, i32)) -> Self {
        Cell { row, col }
    }
}

impl From<Cell> for (i32, i32) {
    fn from(c: Cell) -> Self {
        (c.row, c.col)
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TileError {
    #[error("a tile needs at least one cell")]
    EmptyTile,
    #[error("tile cells are not 4-connected")]
    Disconnected,
    #[error("tile encloses a hole")]
    HasHole,
    #[error("a tile set needs at least one tile")]
    EmptyTileSet,
}

/// A center-normalized polyomino.
///
/// Invariants (enforced by [`Tile::new`]): cells are sorted and unique, the
/// set contains the origin, all rows are `>= 0`, and every row-0 cell has a
/// non-negative column.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tile {
    cells: Vec<Cell>,
    height: i32,
    min_col: i32,
    max_col: i32,
    /// Cells per row offset, indexed 0..height.
    row_counts: Vec<u64>,
    /// Cells per column offset, indexed by `col - min_col`.
    col_counts: Vec<u64>,
}

impl Tile {
    /// Normalizes an arbitrary cell set into a tile, translating it so the
    /// upper-left cell (minimal row, then minimal column within that row)
    /// lands on the origin.  Duplicate cells collapse; empty, disconnected,
    /// or holed shapes are rejected.
    pub fn new(cells: impl IntoIterator<Item = Cell>) -> Result<Tile, TileError> {
        let raw: BTreeSet<Cell> = cells.into_iter().collect();
        let first = *raw.iter().next().ok_or(TileError::EmptyTile)?;
        // BTreeSet order is row-major, so the first element is the center.
        let cells: Vec<Cell> = raw
            .iter()
            .map(|c| Cell::new(c.row - first.row, c.col - first.col))
            .collect();

        let set: BTreeSet<Cell> = cells.iter().copied().collect();
        check_connected(&set)?;
        check_no_holes(&set)?;

        let height = cells.iter().map(|c| c.row).max().unwrap() + 1;
        let min_col = cells.iter().map(|c| c.col).min().unwrap();
        let max_col = cells.iter().map(|c| c.col).max().unwrap();
        let mut row_counts = vec![0u64; height as usize];
        let mut col_counts = vec![0u64; (max_col - min_col + 1) as usize];
        for c in &cells {
            row_counts[c.row as usize] += 1;
            col_counts[(c.col - min_col) as usize] += 1;
        }
        Ok(Tile { cells, height, min_col, max_col, row_counts, col_counts })
    }

    /// Convenience constructor from `(row, col)` pairs.
    pub fn from_coords(coords: &[(i32, i32)]) -> Result<Tile, TileError> {
        Tile::new(coords.iter().copied().map(Cell::from))
    }

    /// The `rows x cols` rectangle.
    pub fn rect(rows: i32, cols: i32) -> Tile {
        assert!(rows > 0 && cols > 0);
        let cells = (0..rows).flat_map(|r| (0..cols).map(move |c| Cell::new(r, c)));
        Tile::new(cells).expect("rectangles are valid tiles")
    }

    /// The unit cell.
    pub fn cell() -> Tile {
        Tile::rect(1, 1)
    }

    /// Cells in sorted order; the first is always the origin.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a tile always has at least one cell
    }

    /// Bounding-box height.
    pub fn height(&self) -> i32 {
        self.height
    }

    /// Bounding-box width.
    pub fn width(&self) -> i32 {
        self.max_col - self.min_col + 1
    }

    /// Minimal column offset over all cells (can be negative).
    pub fn min_col(&self) -> i32 {
        self.min_col
    }

    /// Maximal column offset over all cells.
    pub fn max_col(&self) -> i32 {
        self.max_col
    }

    /// Number of cells in row offset `r`, zero outside the tile.
    pub fn row_count(&self, r: i32) -> u64 {
        if (0..self.height).contains(&r) {
            self.row_counts[r as usize]
        } else {
            0
        }
    }

    /// Number of cells in column offset `c`, zero outside the tile.
    pub fn col_count(&self, c: i32) -> u64 {
        if (self.min_col..=self.max_col).contains(&c) {
            self.col_counts[(c - self.min_col) as usize]
        } else {
            0
        }
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.cells.binary_search(&cell).is_ok()
    }

    /// Cell positions of this tile translated so its center is at `(row, col)`.
    pub fn cells_at(&self, row: i32, col: i32) -> impl Iterator<Item = Cell> + '_ {
        self.cells.iter().map(move |c| Cell::new(c.row + row, c.col + col))
    }

    /// Whether two disjoint translates of this tile fit in a box strictly
    /// smaller than twice the bounding box in both directions.  Returns the
    /// first offset found in row-major scan order, or `None`.
    ///
    /// The union of the tile and its `(di, dj)` translate has bounding box
    /// `(h + |di|) x (w + |dj|)`, so the box condition is exactly
    /// `|di| < h, |dj| < w` and the search over that range is exhaustive.
    pub fn interlocking_witness(&self) -> Option<(i32, i32)> {
        let h = self.height();
        let w = self.width();
        let set: BTreeSet<Cell> = self.cells.iter().copied().collect();
        for di in -(h - 1)..h {
            for dj in -(w - 1)..w {
                if (di, dj) == (0, 0) {
                    continue;
                }
                let disjoint = self.cells.iter().all(|c| !set.contains(&Cell::new(c.row + di, c.col + dj)));
                if disjoint {
                    return Some((di, dj));
                }
            }
        }
        None
    }

    pub fn is_interlocking(&self) -> bool {
        self.interlocking_witness().is_some()
    }
}

impl fmt::Debug for Tile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tile{:?}", self.cells)
    }
}

fn check_connected(set: &BTreeSet<Cell>) -> Result<(), TileError> {
    let start = *set.iter().next().unwrap();
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(c) = stack.pop() {
        for (dr, dc) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
            let n = Cell::new(c.row + dr, c.col + dc);
            if set.contains(&n) && seen.insert(n) {
                stack.push(n);
            }
        }
    }
    if seen.len() == set.len() {
        Ok(())
    } else {
        Err(TileError::Disconnected)
    }
}

/// A shape has a hole if some cell of the complement inside the bounding box
/// cannot reach the box boundary; flood-fill the complement from a rim one
/// cell outside the box.
fn check_no_holes(set: &BTreeSet<Cell>) -> Result<(), TileError> {
    let min_r = set.iter().map(|c| c.row).min().unwrap() - 1;
    let max_r = set.iter().map(|c| c.row).max().unwrap() + 1;
    let min_c = set.iter().map(|c| c.col).min().unwrap() - 1;
    let max_c = set.iter().map(|c| c.col).max().unwrap() + 1;

    let start = Cell::new(min_r, min_c);
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(c) = stack.pop() {
        for (dr, dc) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
            let n = Cell::new(c.row + dr, c.col + dc);
            let in_box = (min_r..=max_r).contains(&n.row) && (min_c..=max_c).contains(&n.col);
            if in_box && !set.contains(&n) && seen.insert(n) {
                stack.push(n);
            }
        }
    }
    let box_area = (max_r - min_r + 1) as usize * (max_c - min_c + 1) as usize;
    if seen.len() + set.len() == box_area {
        Ok(())
    } else {
        Err(TileError::HasHole)
    }
}

/// An ordered, non-empty collection of tile types.  Duplicate shapes under
/// distinct indices are allowed and stay distinct types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TileSet {
    tiles: Vec<Tile>,
}

impl TileSet {
    pub fn new(tiles: Vec<Tile>) -> Result<TileSet, TileError> {
        if tiles.is_empty() {
            return Err(TileError::EmptyTileSet);
        }
        Ok(TileSet { tiles })
    }

    /// Number of types, `h`.
    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a tile set always has at least one tile
    }

    /// Type `k` (0-based; file formats use 1-based indices).
    pub fn get(&self, k: usize) -> Option<&Tile> {
        self.tiles.get(k)
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn iter(&self) -> impl Iterator<Item = &Tile> {
        self.tiles.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tile(coords: &[(i32, i32)]) -> Tile {
        Tile::from_coords(coords).unwrap()
    }

    #[test]
    fn normalizes_translates_to_the_same_tile() {
        let t = tile(&[(2, 3), (3, 3), (3, 4)]);
        assert_eq!(t.cells(), [Cell::new(0, 0), Cell::new(1, 0), Cell::new(1, 1)]);
    }

    #[test]
    fn center_is_upper_left_not_global_min_col() {
        // S-shape: row 0 starts at column 1, row 1 reaches column 0.
        let t = tile(&[(0, 1), (0, 2), (1, 0), (1, 1)]);
        assert_eq!(
            t.cells(),
            [Cell::new(0, 0), Cell::new(0, 1), Cell::new(1, -1), Cell::new(1, 0)]
        );
        assert_eq!(t.min_col(), -1);
        assert_eq!(t.width(), 3);
    }

    #[test]
    fn rejects_empty_disconnected_and_holed() {
        assert_eq!(Tile::new([]), Err(TileError::EmptyTile));
        assert_eq!(Tile::from_coords(&[(0, 0), (0, 2)]), Err(TileError::Disconnected));
        // A ring of 8 cells around (1,1).
        let ring = [(0, 0), (0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1), (2, 2)];
        assert_eq!(Tile::from_coords(&ring), Err(TileError::HasHole));
    }

    #[test]
    fn duplicate_cells_collapse() {
        let t = tile(&[(0, 0), (0, 0), (0, 1)]);
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn line_counts() {
        let t = tile(&[(0, 0), (1, 0), (1, 1)]);
        assert_eq!(t.height(), 2);
        assert_eq!(t.width(), 2);
        assert_eq!((t.row_count(0), t.row_count(1), t.row_count(2)), (1, 2, 0));
        assert_eq!((t.col_count(0), t.col_count(1)), (2, 1));
    }

    #[test]
    fn rectangles_never_interlock() {
        for a in 1..=4 {
            for b in 1..=4 {
                let r = Tile::rect(a, b);
                assert!(!r.is_interlocking(), "{a}x{b} rectangle claimed interlocking");
            }
        }
    }

    #[test]
    fn l_tromino_interlocks_with_recorded_witness() {
        let l = tile(&[(0, 0), (1, 0), (1, 1)]);
        let (di, dj) = l.interlocking_witness().expect("L-tromino interlocks");
        // Two copies offset by +-(1,-1) mesh into a 3x3 box.
        assert!((di, dj) == (1, -1) || (di, dj) == (-1, 1));
        assert!(di.abs() < l.height() && dj.abs() < l.width());
        let shifted: Vec<Cell> = l.cells_at(di, dj).collect();
        assert!(shifted.iter().all(|c| !l.contains(*c)));
    }

    #[test]
    fn u_pentomino_does_not_interlock() {
        let u = tile(&[(0, 0), (0, 2), (1, 0), (1, 1), (1, 2)]);
        assert!(!u.is_interlocking());
    }

    #[test]
    fn empty_tileset_rejected() {
        assert_eq!(TileSet::new(vec![]), Err(TileError::EmptyTileSet));
    }
}
