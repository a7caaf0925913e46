//! Placements and tilings.
//!
//! A tiling places tiles from a tile set on a finite grid: each placement
//! pins a tile type's center to a grid cell.  Tilings need not cover the
//! grid, but footprints must stay inside it and be pairwise disjoint.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::tile::{Cell, TileSet};

/// One tile placed on the grid: the center of type `tile` sits at
/// `(row, col)`.  Ordered row-major by center, then by type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Placement {
    pub row: i32,
    pub col: i32,
    pub tile: usize,
}

impl Placement {
    pub fn new(row: i32, col: i32, tile: usize) -> Self {
        Placement { row, col, tile }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TilingViolation {
    #[error("placement {index} refers to missing tile type {tile}")]
    BadTypeIndex { index: usize, tile: usize },
    #[error("placement {index} leaves the grid at {cell:?}")]
    OutOfGrid { index: usize, cell: Cell },
    #[error("placements {first} and {second} overlap at {cell:?}")]
    Overlap { first: usize, second: usize, cell: Cell },
}

/// Tiles placed on a `rows x cols` grid.
///
/// Placements are kept sorted; two tilings over the same tile set are equal
/// exactly when their placement lists are.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tiling {
    rows: usize,
    cols: usize,
    tileset: TileSet,
    placements: Vec<Placement>,
}

impl Tiling {
    /// A tiling on a rectangular grid.  Placements are sorted; validity is
    /// checked separately by [`Tiling::validate`].
    pub fn new(rows: usize, cols: usize, tileset: TileSet, mut placements: Vec<Placement>) -> Tiling {
        placements.sort();
        Tiling { rows, cols, tileset, placements }
    }

    /// A tiling on an `n x n` grid.
    pub fn square(n: usize, tileset: TileSet, placements: Vec<Placement>) -> Tiling {
        Tiling::new(n, n, tileset, placements)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Side length of a square grid.  Panics on rectangular grids.
    pub fn n(&self) -> usize {
        assert_eq!(self.rows, self.cols, "grid is not square");
        self.rows
    }

    pub fn tileset(&self) -> &TileSet {
        &self.tileset
    }

    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    pub fn contains_cell(&self, cell: Cell) -> bool {
        (0..self.rows as i32).contains(&cell.row) && (0..self.cols as i32).contains(&cell.col)
    }

    /// The grid cells covered by placement `p`.
    ///
    /// Fails with `BadTypeIndex` when `p.tile` is not in the tile set; cells
    /// outside the grid are reported by [`Tiling::validate`], not here.
    pub fn footprint(&self, p: Placement) -> Result<Vec<Cell>, TilingViolation> {
        let tile = self
            .tileset
            .get(p.tile)
            .ok_or(TilingViolation::BadTypeIndex { index: usize::MAX, tile: p.tile })?;
        Ok(tile.cells_at(p.row, p.col).collect())
    }

    /// Checks all placements: known types, footprints inside the grid, and
    /// pairwise disjointness.  Reports the first violation in placement
    /// order; for overlaps, the first cell clashing with an earlier
    /// placement.
    pub fn validate(&self) -> Result<(), TilingViolation> {
        let mut covered: BTreeMap<Cell, usize> = BTreeMap::new();
        for (index, p) in self.placements.iter().enumerate() {
            let tile = self
                .tileset
                .get(p.tile)
                .ok_or(TilingViolation::BadTypeIndex { index, tile: p.tile })?;
            for cell in tile.cells_at(p.row, p.col) {
                if !self.contains_cell(cell) {
                    return Err(TilingViolation::OutOfGrid { index, cell });
                }
                if let Some(&first) = covered.get(&cell) {
                    return Err(TilingViolation::Overlap { first, second: index, cell });
                }
                covered.insert(cell, index);
            }
        }
        Ok(())
    }

    /// Total number of covered cells (meaningful on valid tilings).
    pub fn covered_cells(&self) -> usize {
        self.placements
            .iter()
            .map(|p| self.tileset.get(p.tile).map_or(0, |t| t.len()))
            .sum()
    }

    /// Covered cells as a set, without validity checking.
    pub fn covered_set(&self) -> std::collections::BTreeSet<Cell> {
        self.placements
            .iter()
            .flat_map(|p| {
                self.tileset
                    .get(p.tile)
                    .map(|t| t.cells_at(p.row, p.col).collect::<Vec<_>>())
                    .unwrap_or_default()
            })
            .collect()
    }
}
