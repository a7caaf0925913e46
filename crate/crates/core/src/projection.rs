//! Row and column projections of tilings.
//!
//! The *center* projection `r[i][k]` counts centers of type `k` in row `i`;
//! the *cell* projection counts covered cells instead.  Both come in
//! row/column pairs and are linear in the tiling: the projection of a
//! disjoint union is the sum of the projections.
//!
//! For a single type the two views are related by a banded linear map: a
//! center on line `x` contributes the tile's per-line cell counts to lines
//! `x + d` over the tile's line offsets `d`.  The first line a tile touches
//! always holds at least one cell, so the map solves by forward substitution
//! and the center view can be recovered exactly — or rejected — from the
//! cell view.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tile::TileSet;
use crate::tiling::{Tiling, TilingViolation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectionKind {
    Center,
    Cell,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Row,
    Col,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Row => "row",
            Axis::Col => "column",
        })
    }
}

/// A `lines x types` matrix of non-negative counts.
#[derive(Clone, PartialEq, Eq)]
pub struct ProjMatrix {
    lines: usize,
    types: usize,
    data: Vec<u64>,
}

impl ProjMatrix {
    pub fn zero(lines: usize, types: usize) -> Self {
        ProjMatrix { lines, types, data: vec![0; lines * types] }
    }

    /// Builds from per-line rows; every line must list all `types` counts.
    pub fn from_lines(lines: Vec<Vec<u64>>, types: usize) -> Option<Self> {
        let n = lines.len();
        let mut data = Vec::with_capacity(n * types);
        for line in &lines {
            if line.len() != types {
                return None;
            }
            data.extend_from_slice(line);
        }
        Some(ProjMatrix { lines: n, types, data })
    }

    pub fn lines(&self) -> usize {
        self.lines
    }

    pub fn types(&self) -> usize {
        self.types
    }

    /// Counts of type `k` along all lines.
    pub fn type_counts(&self, k: usize) -> Vec<u64> {
        (0..self.lines).map(|l| self[(l, k)]).collect()
    }

    /// Sum over all lines for type `k`.
    pub fn type_total(&self, k: usize) -> u64 {
        (0..self.lines).map(|l| self[(l, k)]).sum()
    }

    /// Sum of all types on line `l`.
    pub fn line_total(&self, l: usize) -> u64 {
        (0..self.types).map(|k| self[(l, k)]).sum()
    }

    pub fn to_lines(&self) -> Vec<Vec<u64>> {
        (0..self.lines)
            .map(|l| (0..self.types).map(|k| self[(l, k)]).collect())
            .collect()
    }

    pub fn checked_add(&self, other: &ProjMatrix) -> Option<ProjMatrix> {
        if self.lines != other.lines || self.types != other.types {
            return None;
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Some(ProjMatrix { lines: self.lines, types: self.types, data })
    }
}

impl Index<(usize, usize)> for ProjMatrix {
    type Output = u64;
    fn index(&self, (line, k): (usize, usize)) -> &u64 {
        &self.data[line * self.types + k]
    }
}

impl IndexMut<(usize, usize)> for ProjMatrix {
    fn index_mut(&mut self, (line, k): (usize, usize)) -> &mut u64 {
        &mut self.data[line * self.types + k]
    }
}

impl fmt::Debug for ProjMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_lines()).finish()
    }
}

/// Paired row and column projections of one kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionPair {
    pub kind: ProjectionKind,
    /// `rows x h` counts per grid row.
    pub r: ProjMatrix,
    /// `cols x h` counts per grid column.
    pub c: ProjMatrix,
}

impl ProjectionPair {
    pub fn zero(kind: ProjectionKind, rows: usize, cols: usize, types: usize) -> Self {
        ProjectionPair { kind, r: ProjMatrix::zero(rows, types), c: ProjMatrix::zero(cols, types) }
    }

    pub fn grid_rows(&self) -> usize {
        self.r.lines()
    }

    pub fn grid_cols(&self) -> usize {
        self.c.lines()
    }

    pub fn types(&self) -> usize {
        self.r.types()
    }

    /// Row and column totals agree for type `k` — a necessary condition for
    /// any tiling to realize the pair.
    pub fn is_balanced_for(&self, k: usize) -> bool {
        self.r.type_total(k) == self.c.type_total(k)
    }

    pub fn is_balanced(&self) -> bool {
        (0..self.types()).all(|k| self.is_balanced_for(k))
    }

    pub fn checked_add(&self, other: &ProjectionPair) -> Option<ProjectionPair> {
        if self.kind != other.kind {
            return None;
        }
        Some(ProjectionPair {
            kind: self.kind,
            r: self.r.checked_add(&other.r)?,
            c: self.c.checked_add(&other.c)?,
        })
    }
}

/// A reconstruction problem: find a valid tiling with these projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub tileset: TileSet,
    pub projections: ProjectionPair,
}

impl Instance {
    pub fn new(tileset: TileSet, projections: ProjectionPair) -> Instance {
        Instance { tileset, projections }
    }

    pub fn grid_rows(&self) -> usize {
        self.projections.grid_rows()
    }

    pub fn grid_cols(&self) -> usize {
        self.projections.grid_cols()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProjectionError {
    #[error("tiling is invalid: {0}")]
    InvalidTiling(#[from] TilingViolation),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConvertError {
    #[error("projections have {have} types but the tile set has {want}")]
    TypeMismatch { have: usize, want: usize },
    #[error("type {tile} is not representable on {axis} line {line}")]
    NotRepresentable { tile: usize, axis: Axis, line: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClearTileError {
    #[error(transparent)]
    Convert(#[from] ConvertError),
    #[error("{axis} {line} demands {demand} cells but has only {capacity}")]
    Oversubscribed { axis: Axis, line: usize, demand: u64, capacity: u64 },
}

/// Center projections of a valid tiling.
pub fn center_projections(t: &Tiling) -> Result<ProjectionPair, ProjectionError> {
    t.validate()?;
    let mut p = ProjectionPair::zero(ProjectionKind::Center, t.rows(), t.cols(), t.tileset().len());
    for pl in t.placements() {
        p.r[(pl.row as usize, pl.tile)] += 1;
        p.c[(pl.col as usize, pl.tile)] += 1;
    }
    Ok(p)
}

/// Cell projections of a valid tiling.
pub fn cell_projections(t: &Tiling) -> Result<ProjectionPair, ProjectionError> {
    t.validate()?;
    let mut p = ProjectionPair::zero(ProjectionKind::Cell, t.rows(), t.cols(), t.tileset().len());
    for pl in t.placements() {
        let tile = t.tileset().get(pl.tile).expect("validated");
        for cell in tile.cells_at(pl.row, pl.col) {
            p.r[(cell.row as usize, pl.tile)] += 1;
            p.c[(cell.col as usize, pl.tile)] += 1;
        }
    }
    Ok(p)
}

/// Converts a projection pair between center and cell form, per type and per
/// axis.  Center→cell spreads each center count over the tile's line span;
/// cell→center inverts that by forward substitution and fails with
/// `NotRepresentable` when the input is not an exact non-negative integer
/// combination of single-placement projections that fit the grid.
pub fn convert_projections(
    p: &ProjectionPair,
    ts: &TileSet,
    kind: ProjectionKind,
) -> Result<ProjectionPair, ConvertError> {
    if p.types() != ts.len() {
        return Err(ConvertError::TypeMismatch { have: p.types(), want: ts.len() });
    }
    if p.kind == kind {
        return Ok(p.clone());
    }
    let mut out = ProjectionPair::zero(kind, p.grid_rows(), p.grid_cols(), p.types());
    for k in 0..ts.len() {
        let tile = ts.get(k).unwrap();
        // (min offset, per-offset cell count) along each axis.
        let axes = [
            (Axis::Row, &mut out.r, &p.r, 0, tile.height() - 1),
            (Axis::Col, &mut out.c, &p.c, tile.min_col(), tile.max_col()),
        ];
        for (axis, dst, src, lo, hi) in axes {
            let weight = |d: i32| match axis {
                Axis::Row => tile.row_count(d),
                Axis::Col => tile.col_count(d),
            };
            let input = src.type_counts(k);
            let output = match kind {
                ProjectionKind::Cell => spread(&input, lo, hi, &weight)
                    .map_err(|line| ConvertError::NotRepresentable { tile: k, axis, line })?,
                ProjectionKind::Center => unspread(&input, lo, hi, &weight)
                    .map_err(|line| ConvertError::NotRepresentable { tile: k, axis, line })?,
            };
            for (l, v) in output.into_iter().enumerate() {
                dst[(l, k)] = v;
            }
        }
    }
    Ok(out)
}

/// Center counts to cell counts along one axis.  A nonzero center count on a
/// line where the tile would overhang the grid is unrealizable.
fn spread(input: &[u64], lo: i32, hi: i32, weight: &dyn Fn(i32) -> u64) -> Result<Vec<u64>, usize> {
    let n = input.len() as i32;
    let mut out = vec![0u64; input.len()];
    for (x, &v) in input.iter().enumerate() {
        if v == 0 {
            continue;
        }
        let x = x as i32;
        if x + lo < 0 || x + hi >= n {
            return Err(x as usize);
        }
        for d in lo..=hi {
            out[(x + d) as usize] += v * weight(d);
        }
    }
    Ok(out)
}

/// Cell counts back to center counts along one axis.  The center count on
/// line `x` is pinned by the first line its tile touches, `x + lo`; solve in
/// increasing `x` and verify the full convolution at the end.
fn unspread(input: &[u64], lo: i32, hi: i32, weight: &dyn Fn(i32) -> u64) -> Result<Vec<u64>, usize> {
    let n = input.len() as i32;
    let lead = weight(lo);
    debug_assert!(lead > 0, "first line of a tile holds its leading cell");
    let mut residual: Vec<i64> = input.iter().map(|&v| v as i64).collect();
    let mut out = vec![0u64; input.len()];
    for x in 0..n {
        let first = x + lo;
        if !(0..n).contains(&first) {
            continue; // center here cannot exist; final residual check decides
        }
        let have = residual[first as usize];
        if have < 0 || have % lead as i64 != 0 {
            return Err(first as usize);
        }
        let q = (have / lead as i64) as u64;
        if q == 0 {
            continue;
        }
        if x + hi >= n {
            return Err(x as usize); // demanded center would overhang the grid
        }
        out[x as usize] = q;
        for d in lo..=hi {
            residual[(x + d) as usize] -= (q * weight(d)) as i64;
        }
    }
    if let Some(line) = residual.iter().position(|&v| v != 0) {
        return Err(line);
    }
    Ok(out)
}

/// Completes an instance with a trailing 1x1 "clear" type whose cell
/// projections absorb exactly the cells the other types leave uncovered.
/// The result is in cell kind; solutions of the completed instance are the
/// complete tilings extending solutions of the original.
pub fn add_clear_tile(inst: &Instance) -> Result<Instance, ClearTileError> {
    let cell = convert_projections(&inst.projections, &inst.tileset, ProjectionKind::Cell)?;
    let h = inst.tileset.len();
    let rows = cell.grid_rows();
    let cols = cell.grid_cols();
    let mut out = ProjectionPair::zero(ProjectionKind::Cell, rows, cols, h + 1);
    for (axis, src, dst, capacity) in [
        (Axis::Row, &cell.r, &mut out.r, cols as u64),
        (Axis::Col, &cell.c, &mut out.c, rows as u64),
    ] {
        for line in 0..src.lines() {
            let demand = src.line_total(line);
            if demand > capacity {
                return Err(ClearTileError::Oversubscribed { axis, line, demand, capacity });
            }
            for k in 0..h {
                dst[(line, k)] = src[(line, k)];
            }
            dst[(line, h)] = capacity - demand;
        }
    }
    let mut tiles = inst.tileset.tiles().to_vec();
    tiles.push(crate::tile::Tile::cell());
    Ok(Instance::new(TileSet::new(tiles).unwrap(), out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tile::Tile;
    use crate::tiling::Placement;

    fn dominoes() -> TileSet {
        TileSet::new(vec![Tile::rect(1, 2), Tile::rect(2, 1)]).unwrap()
    }

    fn pair(kind: ProjectionKind, r: Vec<Vec<u64>>, c: Vec<Vec<u64>>, h: usize) -> ProjectionPair {
        ProjectionPair {
            kind,
            r: ProjMatrix::from_lines(r, h).unwrap(),
            c: ProjMatrix::from_lines(c, h).unwrap(),
        }
    }

    #[test]
    fn empty_tiling_has_zero_projections() {
        let t = Tiling::square(3, dominoes(), vec![]);
        let p = center_projections(&t).unwrap();
        assert_eq!(p, ProjectionPair::zero(ProjectionKind::Center, 3, 3, 2));
    }

    #[test]
    fn single_placement_center_counts() {
        let t = Tiling::square(3, dominoes(), vec![Placement::new(1, 0, 0)]);
        let p = center_projections(&t).unwrap();
        assert_eq!(p.r.to_lines(), [[0, 0], [1, 0], [0, 0]]);
        assert_eq!(p.c.to_lines(), [[1, 0], [0, 0], [0, 0]]);
    }

    #[test]
    fn two_centers_on_one_column_accumulate() {
        // Two horizontal dominoes with centers in column 1.
        let t = Tiling::square(
        4,
            dominoes(),
            vec![Placement::new(0, 1, 0), Placement::new(2, 1, 0)],
        );
        let p = center_projections(&t).unwrap();
        assert_eq!(p.c[(1, 0)], 2);
    }

    #[test]
    fn invalid_tiling_rejected() {
        let t = Tiling::square(2, dominoes(), vec![Placement::new(1, 1, 0)]);
        assert!(center_projections(&t).is_err());
        assert!(cell_projections(&t).is_err());
    }

    #[test]
    fn cell_projection_spreads_over_footprint() {
        let t = Tiling::square(3, dominoes(), vec![Placement::new(0, 1, 1)]);
        let p = cell_projections(&t).unwrap();
        // Vertical domino at (0,1): one cell in each of rows 0 and 1, both in column 1.
        assert_eq!(p.r.to_lines(), [[0, 1], [0, 1], [0, 0]]);
        assert_eq!(p.c.to_lines(), [[0, 0], [0, 2], [0, 0]]);
    }

    #[test]
    fn convert_center_to_cell_matches_direct() {
        let t = Tiling::square(
            4,
            dominoes(),
            vec![Placement::new(0, 0, 0), Placement::new(1, 2, 1), Placement::new(3, 0, 0)],
        );
        let center = center_projections(&t).unwrap();
        let cell = cell_projections(&t).unwrap();
        let converted = convert_projections(&center, &dominoes(), ProjectionKind::Cell).unwrap();
        assert_eq!(converted, cell);
        let back = convert_projections(&cell, &dominoes(), ProjectionKind::Center).unwrap();
        assert_eq!(back, center);
    }

    #[test]
    fn nonrepresentable_cell_counts_rejected() {
        // One cell of a 2x2 square in a single row cannot come from whole squares.
        let square = TileSet::new(vec![Tile::rect(2, 2)]).unwrap();
        let p = pair(
            ProjectionKind::Cell,
            vec![vec![1], vec![0], vec![0]],
            vec![vec![1], vec![0], vec![0]],
            1,
        );
        let err = convert_projections(&p, &square, ProjectionKind::Center).unwrap_err();
        assert!(matches!(err, ConvertError::NotRepresentable { tile: 0, .. }));
    }

    #[test]
    fn center_overhanging_grid_rejected() {
        // A center in the last column of a horizontal domino cannot fit.
        let p = pair(
            ProjectionKind::Center,
            vec![vec![1, 0], vec![0, 0]],
            vec![vec![0, 0], vec![1, 0]],
            2,
        );
        let err = convert_projections(&p, &dominoes(), ProjectionKind::Cell).unwrap_err();
        assert_eq!(err, ConvertError::NotRepresentable { tile: 0, axis: Axis::Col, line: 1 });
    }

    #[test]
    fn clear_tile_completion() {
        // Instance with no tiles demanded: the clear type absorbs everything.
        let empty = Instance::new(
            dominoes(),
            ProjectionPair::zero(ProjectionKind::Center, 3, 3, 2),
        );
        let done = add_clear_tile(&empty).unwrap();
        assert_eq!(done.tileset.len(), 3);
        assert_eq!(done.projections.r.to_lines(), vec![vec![0, 0, 3]; 3]);
        assert_eq!(done.projections.c.to_lines(), vec![vec![0, 0, 3]; 3]);
    }

    #[test]
    fn oversubscribed_row_rejected() {
        // Three horizontal dominoes demanded in one row of a 4-wide grid: 6 cells > 4.
        let p = pair(
            ProjectionKind::Center,
            vec![vec![3, 0], vec![0, 0], vec![0, 0], vec![0, 0]],
            vec![vec![1, 0], vec![1, 0], vec![1, 0], vec![0, 0]],
            2,
        );
        let inst = Instance::new(dominoes(), p);
        let err = add_clear_tile(&inst).unwrap_err();
        assert_eq!(
            err,
            ClearTileError::Oversubscribed { axis: Axis::Row, line: 0, demand: 6, capacity: 4 }
        );
    }
}
