//! Exact reconstruction of tilings from projections.
//!
//! The solver scans grid cells in row-major order and decides, per cell,
//! which tile type (if any) has its center there.  Branches die when a
//! line's residual demand can no longer be met: once a row is passed its
//! residuals must be zero, and every column must keep enough legal center
//! positions below the current row.  With non-negative residuals and the
//! endgame check this search is exhaustive, so its verdicts are exact and —
//! run with a fixed branching order — deterministic.
//!
//! A structure deduction strengthens pruning for 1x1 types: whenever a row
//! subset `I` and column subset `J` satisfy
//! `sum_I r - sum_{not J} c = |I| * |J|`, every cell of `I x J` must carry a
//! center of that type and every cell of the complementary block carries
//! none.  [`fact1_deduce`] exposes that deduction for explicit index sets;
//! the solver applies it over all threshold sets when enabled.

use thiserror::Error;

use crate::projection::{convert_projections, ConvertError, Instance, ProjectionKind, ProjectionPair};
use crate::tile::{Cell, TileSet};
use crate::tiling::{Placement, Tiling};

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Abort after this many search nodes; 0 means unlimited.
    pub node_limit: u64,
    /// In [`enumerate`], stop after this many solutions; 0 means all.
    pub solution_limit: usize,
    /// Apply the forced-cell deduction for 1x1 types before searching.
    pub enable_fact1: bool,
    /// Keep the fixed branching order (always on; present for visibility).
    pub deterministic: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { node_limit: 0, solution_limit: 0, enable_fact1: true, deterministic: true }
    }
}

impl SolverConfig {
    pub fn with_node_limit(limit: u64) -> Self {
        SolverConfig { node_limit: limit, ..SolverConfig::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Satisfiable,
    Unsatisfiable,
    NodeLimitReached,
}

/// Why an instance was reported unsatisfiable without or during search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnsatReason {
    /// Row and column totals differ for some type.
    Unbalanced,
    /// Cell-kind projections are not center-representable.
    CellConversion,
    /// The forced-cell deduction derived a contradiction.
    Deduction,
    /// The search space is exhausted.
    Exhausted,
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub witness: Option<Tiling>,
    pub nodes: u64,
    /// Present exactly when `status` is `Unsatisfiable`.
    pub reason: Option<UnsatReason>,
}

/// Result of [`enumerate`]: all solutions found, sorted by placement list.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub tilings: Vec<Tiling>,
    /// False when a node or solution limit cut the search short.
    pub complete: bool,
    pub nodes: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("malformed instance: {0}")]
    MalformedInstance(String),
    #[error("node limit exceeded")]
    LimitExceeded,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Fact1Error {
    #[error("index set refers to line {0} outside the grid")]
    BadIndex(usize),
    #[error("index set repeats line {0}")]
    DuplicateIndex(usize),
}

/// Forced cells derived from one `(I, J)` pair for a single 1x1 type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fact1Deduction {
    /// Every cell of `I x J` carries a center.
    pub forced_full: Vec<Cell>,
    /// No cell of the complement block does.
    pub forced_empty: Vec<Cell>,
}

/// The forced-cell deduction for a single 1x1 type with row sums `r` and
/// column sums `c`: if `sum_{i in I} r[i] - sum_{j not in J} c[j]` equals
/// `|I| * |J|`, the block `I x J` is completely full and the complementary
/// block completely empty.  Returns `None` when the identity does not hold.
pub fn fact1_deduce(
    r: &[u64],
    c: &[u64],
    i_set: &[usize],
    j_set: &[usize],
) -> Result<Option<Fact1Deduction>, Fact1Error> {
    check_index_set(i_set, r.len())?;
    check_index_set(j_set, c.len())?;
    let in_i = membership(i_set, r.len());
    let in_j = membership(j_set, c.len());

    let lhs: i64 = i_set.iter().map(|&i| r[i] as i64).sum::<i64>()
        - (0..c.len()).filter(|&j| !in_j[j]).map(|j| c[j] as i64).sum::<i64>();
    if lhs != (i_set.len() * j_set.len()) as i64 {
        return Ok(None);
    }

    let mut forced_full = Vec::new();
    let mut forced_empty = Vec::new();
    for i in 0..r.len() {
        for j in 0..c.len() {
            match (in_i[i], in_j[j]) {
                (true, true) => forced_full.push(Cell::new(i as i32, j as i32)),
                (false, false) => forced_empty.push(Cell::new(i as i32, j as i32)),
                _ => {}
            }
        }
    }
    Ok(Some(Fact1Deduction { forced_full, forced_empty }))
}

fn check_index_set(set: &[usize], len: usize) -> Result<(), Fact1Error> {
    let mut seen = vec![false; len];
    for &i in set {
        if i >= len {
            return Err(Fact1Error::BadIndex(i));
        }
        if seen[i] {
            return Err(Fact1Error::DuplicateIndex(i));
        }
        seen[i] = true;
    }
    Ok(())
}

fn membership(set: &[usize], len: usize) -> Vec<bool> {
    let mut m = vec![false; len];
    for &i in set {
        m[i] = true;
    }
    m
}

/// Finds one tiling realizing the instance, or proves there is none.
pub fn solve(inst: &Instance, cfg: &SolverConfig) -> Result<SolveOutcome, SolverError> {
    run(inst, cfg, Mode::First).map(|search| {
        let nodes = search.nodes;
        match search.verdict {
            Verdict::EarlyUnsat(reason) => SolveOutcome {
                status: SolveStatus::Unsatisfiable,
                witness: None,
                nodes,
                reason: Some(reason),
            },
            Verdict::Aborted => {
                SolveOutcome { status: SolveStatus::NodeLimitReached, witness: None, nodes, reason: None }
            }
            Verdict::Done(mut solutions) => match solutions.pop() {
                Some(placements) => SolveOutcome {
                    status: SolveStatus::Satisfiable,
                    witness: Some(Tiling::new(
                        inst.grid_rows(),
                        inst.grid_cols(),
                        inst.tileset.clone(),
                        placements,
                    )),
                    nodes,
                    reason: None,
                },
                None => SolveOutcome {
                    status: SolveStatus::Unsatisfiable,
                    witness: None,
                    nodes,
                    reason: Some(UnsatReason::Exhausted),
                },
            },
        }
    })
}

/// Enumerates all tilings realizing the instance, in lexicographic order of
/// their sorted placement lists, up to `cfg.solution_limit`.
pub fn enumerate(inst: &Instance, cfg: &SolverConfig) -> Result<Enumeration, SolverError> {
    run(inst, cfg, Mode::All).map(|search| {
        let nodes = search.nodes;
        match search.verdict {
            Verdict::EarlyUnsat(_) => Enumeration { tilings: Vec::new(), complete: true, nodes },
            Verdict::Aborted => Enumeration { tilings: Vec::new(), complete: false, nodes },
            Verdict::Done(mut solutions) => {
                let complete = !search.truncated;
                solutions.sort();
                let tilings = solutions
                    .into_iter()
                    .map(|p| Tiling::new(inst.grid_rows(), inst.grid_cols(), inst.tileset.clone(), p))
                    .collect();
                Enumeration { tilings, complete, nodes }
            }
        }
    })
}

/// Whether `t` is a valid tiling over the same tile set and grid whose
/// projections (in the instance's kind) match the instance exactly.
pub fn check(inst: &Instance, t: &Tiling) -> bool {
    if t.tileset() != &inst.tileset || t.rows() != inst.grid_rows() || t.cols() != inst.grid_cols() {
        return false;
    }
    let proj = match inst.projections.kind {
        ProjectionKind::Center => crate::projection::center_projections(t),
        ProjectionKind::Cell => crate::projection::cell_projections(t),
    };
    proj.map(|p| p == inst.projections).unwrap_or(false)
}

/// Counts every valid tiling of the grid, the empty one included, with no
/// projection constraint.  Grows explosively; guard with `cfg.node_limit`.
pub fn count_all_tilings(
    rows: usize,
    cols: usize,
    ts: &TileSet,
    cfg: &SolverConfig,
) -> Result<u64, SolverError> {
    let geoms: Vec<Geom> = ts.iter().map(Geom::new).collect();
    let mut occ = vec![false; rows * cols];
    let mut nodes = 0u64;
    let mut count = 0u64;
    count_rec(rows, cols, &geoms, &mut occ, 0, &mut nodes, cfg.node_limit, &mut count)?;
    Ok(count)
}

fn count_rec(
    rows: usize,
    cols: usize,
    geoms: &[Geom],
    occ: &mut [bool],
    pos: usize,
    nodes: &mut u64,
    node_limit: u64,
    count: &mut u64,
) -> Result<(), SolverError> {
    *nodes += 1;
    if node_limit > 0 && *nodes > node_limit {
        return Err(SolverError::LimitExceeded);
    }
    if pos == rows * cols {
        *count += 1;
        return Ok(());
    }
    let (i, j) = ((pos / cols) as i32, (pos % cols) as i32);
    for g in geoms {
        if !g.fits_grid(i, j, rows, cols) || !g.fits_free(i, j, cols, occ) {
            continue;
        }
        g.mark(i, j, cols, occ, true);
        count_rec(rows, cols, geoms, occ, pos + 1, nodes, node_limit, count)?;
        g.mark(i, j, cols, occ, false);
    }
    count_rec(rows, cols, geoms, occ, pos + 1, nodes, node_limit, count)
}

// ---------------------------------------------------------------------------
// Search internals

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    First,
    All,
}

enum Verdict {
    /// Decided before any search.
    EarlyUnsat(UnsatReason),
    /// Node limit hit before the mode's goal was reached.
    Aborted,
    Done(Vec<Vec<Placement>>),
}

pub(crate) struct Geom {
    pub(crate) cells: Vec<(i32, i32)>,
    pub(crate) height: i32,
    pub(crate) min_dc: i32,
    pub(crate) max_dc: i32,
}

impl Geom {
    pub(crate) fn new(tile: &crate::tile::Tile) -> Geom {
        Geom {
            cells: tile.cells().iter().map(|c| (c.row, c.col)).collect(),
            height: tile.height(),
            min_dc: tile.min_col(),
            max_dc: tile.max_col(),
        }
    }

    pub(crate) fn fits_grid(&self, i: i32, j: i32, rows: usize, cols: usize) -> bool {
        i + self.height <= rows as i32 && j + self.min_dc >= 0 && j + self.max_dc < cols as i32
    }

    pub(crate) fn fits_free(&self, i: i32, j: i32, cols: usize, occ: &[bool]) -> bool {
        self.cells.iter().all(|&(dr, dc)| !occ[((i + dr) as usize) * cols + (j + dc) as usize])
    }

    pub(crate) fn mark(&self, i: i32, j: i32, cols: usize, occ: &mut [bool], v: bool) {
        for &(dr, dc) in &self.cells {
            occ[((i + dr) as usize) * cols + (j + dc) as usize] = v;
        }
    }
}

struct Search {
    rows: usize,
    cols: usize,
    h: usize,
    geoms: Vec<Geom>,
    r_res: Vec<i64>,
    c_res: Vec<i64>,
    occ: Vec<bool>,
    /// `reserved[cell] = k` demands a type-`k` center exactly there.
    reserved: Vec<i32>,
    /// `banned[cell * h + k]` forbids a type-`k` center there.
    banned: Vec<bool>,
    nodes: u64,
    node_limit: u64,
    mode: Mode,
    solution_limit: usize,
    placements: Vec<Placement>,
    solutions: Vec<Vec<Placement>>,
    truncated: bool,
    verdict: Verdict,
}

enum Flow {
    Continue,
    Stop,
}

fn run(inst: &Instance, cfg: &SolverConfig, mode: Mode) -> Result<Search, SolverError> {
    let ts = &inst.tileset;
    if inst.projections.types() != ts.len() {
        return Err(SolverError::MalformedInstance(format!(
            "projections carry {} types, tile set has {}",
            inst.projections.types(),
            ts.len()
        )));
    }

    let rows = inst.grid_rows();
    let cols = inst.grid_cols();
    let h = ts.len();
    let mut search = Search {
        rows,
        cols,
        h,
        geoms: ts.iter().map(Geom::new).collect(),
        r_res: vec![0; rows * h],
        c_res: vec![0; cols * h],
        occ: vec![false; rows * cols],
        reserved: vec![-1; rows * cols],
        banned: vec![false; rows * cols * h],
        nodes: 0,
        node_limit: cfg.node_limit,
        mode,
        solution_limit: if mode == Mode::First { 1 } else { cfg.solution_limit },
        placements: Vec::new(),
        solutions: Vec::new(),
        truncated: false,
        verdict: Verdict::Done(Vec::new()),
    };

    let center = match convert_projections(&inst.projections, ts, ProjectionKind::Center) {
        Ok(p) => p,
        Err(ConvertError::NotRepresentable { .. }) => {
            search.verdict = Verdict::EarlyUnsat(UnsatReason::CellConversion);
            return Ok(search);
        }
        Err(e @ ConvertError::TypeMismatch { .. }) => {
            return Err(SolverError::MalformedInstance(e.to_string()));
        }
    };

    if !center.is_balanced() {
        search.verdict = Verdict::EarlyUnsat(UnsatReason::Unbalanced);
        return Ok(search);
    }

    for i in 0..rows {
        for k in 0..h {
            search.r_res[i * h + k] = center.r[(i, k)] as i64;
        }
    }
    for j in 0..cols {
        for k in 0..h {
            search.c_res[j * h + k] = center.c[(j, k)] as i64;
        }
    }

    if cfg.enable_fact1 && !search.apply_forcings(&center) {
        search.verdict = Verdict::EarlyUnsat(UnsatReason::Deduction);
        return Ok(search);
    }

    if search.feasible_from_row(0) {
        search.dfs(0);
    }
    if !matches!(search.verdict, Verdict::EarlyUnsat(_)) {
        let aborted = search.node_limit > 0 && search.nodes > search.node_limit;
        search.verdict = if aborted && (search.solutions.is_empty() || mode == Mode::All) {
            search.truncated = true;
            if mode == Mode::First {
                Verdict::Aborted
            } else {
                Verdict::Done(std::mem::take(&mut search.solutions))
            }
        } else {
            Verdict::Done(std::mem::take(&mut search.solutions))
        };
    }
    Ok(search)
}

impl Search {
    /// Threshold-set forced-cell deduction for every 1x1 type.  Returns
    /// false on contradiction.
    fn apply_forcings(&mut self, center: &ProjectionPair) -> bool {
        // The full threshold sweep is quadratic per pair count; skip it on
        // grids where the search dominates anyway.
        if self.rows > 64 || self.cols > 64 {
            return true;
        }
        for k in 0..self.h {
            let g = &self.geoms[k];
            if g.cells.len() != 1 {
                continue;
            }
            let r: Vec<u64> = (0..self.rows).map(|i| center.r[(i, k)]).collect();
            let c: Vec<u64> = (0..self.cols).map(|j| center.c[(j, k)]).collect();
            let total_c: i64 = c.iter().map(|&v| v as i64).sum();

            // Sort lines by descending count, ties by index; prefix sums make
            // each (p, q) threshold pair O(1) to evaluate.
            let order = |v: &[u64]| {
                let mut idx: Vec<usize> = (0..v.len()).collect();
                idx.sort_by_key(|&i| (std::cmp::Reverse(v[i]), i));
                idx
            };
            let row_order = order(&r);
            let col_order = order(&c);
            let pref = |v: &[u64], ord: &[usize]| {
                let mut p = vec![0i64; v.len() + 1];
                for (t, &i) in ord.iter().enumerate() {
                    p[t + 1] = p[t] + v[i] as i64;
                }
                p
            };
            let pref_r = pref(&r, &row_order);
            let pref_c = pref(&c, &col_order);

            for p in 0..=self.rows {
                for q in 0..=self.cols {
                    let v = pref_r[p] - (total_c - pref_c[q]);
                    let cap = (p * q) as i64;
                    if v > cap {
                        return false; // no 0-1 matrix realizes these margins
                    }
                    if v < cap {
                        continue;
                    }
                    let in_i = membership(&row_order[..p], self.rows);
                    let in_j = membership(&col_order[..q], self.cols);
                    for i in 0..self.rows {
                        for j in 0..self.cols {
                            let cell = i * self.cols + j;
                            match (in_i[i], in_j[j]) {
                                (true, true) => {
                                    if self.banned[cell * self.h + k]
                                        || (self.reserved[cell] >= 0 && self.reserved[cell] != k as i32)
                                    {
                                        return false;
                                    }
                                    self.reserved[cell] = k as i32;
                                }
                                (false, false) => {
                                    if self.reserved[cell] == k as i32 {
                                        return false;
                                    }
                                    self.banned[cell * self.h + k] = true;
                                }
                                _ => {}
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Legal center columns `>= j` for type `k` in row `i` (grid fit only).
    fn legal_cols_from(&self, k: usize, i: usize, j: usize) -> i64 {
        let g = &self.geoms[k];
        if i as i32 + g.height > self.rows as i32 {
            return 0;
        }
        let lo = (j as i32).max(-g.min_dc);
        let hi = self.cols as i32 - 1 - g.max_dc;
        (hi - lo + 1).max(0) as i64
    }

    /// Legal center rows `>= i` for type `k` in column `j`.
    fn legal_rows_from(&self, k: usize, j: usize, i: usize) -> i64 {
        let g = &self.geoms[k];
        if (j as i32) < -g.min_dc || j as i32 + g.max_dc >= self.cols as i32 {
            return 0;
        }
        let hi = self.rows as i32 - g.height;
        (hi - i as i32 + 1).max(0) as i64
    }

    /// Row `i` can still meet its residuals using positions `>= j`.
    fn row_feasible_from(&self, i: usize, j: usize) -> bool {
        let mut total = 0i64;
        for k in 0..self.h {
            let res = self.r_res[i * self.h + k];
            if res == 0 {
                continue;
            }
            if res > self.legal_cols_from(k, i, j) {
                return false;
            }
            total += res;
        }
        total <= (self.cols - j) as i64
    }

    /// Every column can still meet its residuals using rows `>= i`.
    fn cols_feasible_from(&self, i: usize) -> bool {
        for j in 0..self.cols {
            let mut total = 0i64;
            for k in 0..self.h {
                let res = self.c_res[j * self.h + k];
                if res == 0 {
                    continue;
                }
                if res > self.legal_rows_from(k, j, i) {
                    return false;
                }
                total += res;
            }
            if total > (self.rows - i) as i64 {
                return false;
            }
        }
        true
    }

    /// Initial feasibility: every row and column can be met at all.
    fn feasible_from_row(&self, i: usize) -> bool {
        (i..self.rows).all(|row| self.row_feasible_from(row, 0)) && self.cols_feasible_from(i)
    }

    fn advance_ok(&self, i: usize, j: usize) -> bool {
        if j + 1 < self.cols {
            self.row_feasible_from(i, j + 1)
        } else {
            (0..self.h).all(|k| self.r_res[i * self.h + k] == 0) && self.cols_feasible_from(i + 1)
        }
    }

    fn place_ok(&self, i: i32, j: i32, k: usize) -> bool {
        let g = &self.geoms[k];
        if !g.fits_grid(i, j, self.rows, self.cols) {
            return false;
        }
        for &(dr, dc) in &g.cells {
            let cell = ((i + dr) as usize) * self.cols + (j + dc) as usize;
            if self.occ[cell] {
                return false;
            }
            // A reserved cell may only be covered by its own demanded center.
            if self.reserved[cell] >= 0 && !((dr, dc) == (0, 0) && self.reserved[cell] == k as i32) {
                return false;
            }
        }
        true
    }

    fn set_occupied(&mut self, i: i32, j: i32, k: usize, v: bool) {
        let g = &self.geoms[k];
        for &(dr, dc) in &g.cells {
            self.occ[((i + dr) as usize) * self.cols + (j + dc) as usize] = v;
        }
    }

    fn dfs(&mut self, pos: usize) -> Flow {
        self.nodes += 1;
        if self.node_limit > 0 && self.nodes > self.node_limit {
            return Flow::Stop;
        }
        if pos == self.rows * self.cols {
            // advance_ok zeroed every row and column residual on the way here.
            debug_assert!(self.r_res.iter().all(|&v| v == 0));
            debug_assert!(self.c_res.iter().all(|&v| v == 0));
            self.solutions.push(self.placements.clone());
            if self.solution_limit > 0 && self.solutions.len() >= self.solution_limit {
                if self.mode == Mode::All {
                    self.truncated = true;
                }
                return Flow::Stop;
            }
            return Flow::Continue;
        }

        let i = pos / self.cols;
        let j = pos % self.cols;
        let cell = pos;
        let demanded = self.reserved[cell];

        for k in 0..self.h {
            if demanded >= 0 && demanded != k as i32 {
                continue;
            }
            if self.banned[cell * self.h + k] {
                continue;
            }
            if self.r_res[i * self.h + k] == 0 || self.c_res[j * self.h + k] == 0 {
                continue;
            }
            if !self.place_ok(i as i32, j as i32, k) {
                continue;
            }
            self.set_occupied(i as i32, j as i32, k, true);
            self.r_res[i * self.h + k] -= 1;
            self.c_res[j * self.h + k] -= 1;
            self.placements.push(Placement::new(i as i32, j as i32, k));

            let flow = if self.advance_ok(i, j) { self.dfs(pos + 1) } else { Flow::Continue };

            self.placements.pop();
            self.r_res[i * self.h + k] += 1;
            self.c_res[j * self.h + k] += 1;
            self.set_occupied(i as i32, j as i32, k, false);
            if matches!(flow, Flow::Stop) {
                return Flow::Stop;
            }
        }

        // Leaving the cell center-free is an option unless it is reserved.
        if demanded < 0 && self.advance_ok(i, j) {
            return self.dfs(pos + 1);
        }
        Flow::Continue
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::{center_projections, ProjMatrix};
    use crate::tile::Tile;

    fn dominoes() -> TileSet {
        TileSet::new(vec![Tile::rect(1, 2), Tile::rect(2, 1)]).unwrap()
    }

    fn cells4() -> TileSet {
        TileSet::new(vec![Tile::cell(), Tile::cell(), Tile::cell(), Tile::cell()]).unwrap()
    }

    fn center_instance(ts: TileSet, r: Vec<Vec<u64>>, c: Vec<Vec<u64>>) -> Instance {
        let h = ts.len();
        Instance::new(
            ts,
            ProjectionPair {
                kind: ProjectionKind::Center,
                r: ProjMatrix::from_lines(r, h).unwrap(),
                c: ProjMatrix::from_lines(c, h).unwrap(),
            },
        )
    }

    #[test]
    fn unbalanced_is_unsat_without_search() {
        let inst = center_instance(
            TileSet::new(vec![Tile::cell()]).unwrap(),
            vec![vec![1], vec![0]],
            vec![vec![0], vec![0]],
        );
        let out = solve(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(out.status, SolveStatus::Unsatisfiable);
        assert_eq!(out.reason, Some(UnsatReason::Unbalanced));
        assert_eq!(out.nodes, 0);
    }

    #[test]
    fn single_cell_margins_solve() {
        // r = (2,1,0), c = (1,1,1) has a 0-1 matrix realization.
        let inst = center_instance(
            TileSet::new(vec![Tile::cell()]).unwrap(),
            vec![vec![2], vec![1], vec![0]],
            vec![vec![1], vec![1], vec![1]],
        );
        let out = solve(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(out.status, SolveStatus::Satisfiable);
        let witness = out.witness.unwrap();
        assert!(check(&inst, &witness));
    }

    #[test]
    fn infeasible_margins_unsat() {
        // r = (2,0), c = (2,0): both row-0 cells and nothing in column 1.
        let inst = center_instance(
            TileSet::new(vec![Tile::cell()]).unwrap(),
            vec![vec![2], vec![0]],
            vec![vec![2], vec![0]],
        );
        let out = solve(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(out.status, SolveStatus::Unsatisfiable);
    }

    #[test]
    fn node_limit_reported() {
        // A 6x6 all-cells instance with a tiny node budget.
        let ts = TileSet::new(vec![Tile::cell()]).unwrap();
        let r = vec![vec![3u64]; 6];
        let c = vec![vec![3u64]; 6];
        let mut cfg = SolverConfig { enable_fact1: false, ..SolverConfig::default() };
        cfg.node_limit = 3;
        let inst = center_instance(ts, r, c);
        let out = solve(&inst, &cfg).unwrap();
        assert_eq!(out.status, SolveStatus::NodeLimitReached);
        assert!(out.witness.is_none());
    }

    #[test]
    fn enumerate_permutation_matrices() {
        let inst = center_instance(
            TileSet::new(vec![Tile::cell()]).unwrap(),
            vec![vec![1], vec![1]],
            vec![vec![1], vec![1]],
        );
        let e = enumerate(&inst, &SolverConfig::default()).unwrap();
        assert!(e.complete);
        assert_eq!(e.tilings.len(), 2);
        // Canonical order: identity first.
        assert_eq!(e.tilings[0].placements(), [Placement::new(0, 0, 0), Placement::new(1, 1, 0)]);
        assert_eq!(e.tilings[1].placements(), [Placement::new(0, 1, 0), Placement::new(1, 0, 0)]);
    }

    #[test]
    fn enumerate_respects_solution_limit() {
        let inst = center_instance(
            TileSet::new(vec![Tile::cell()]).unwrap(),
            vec![vec![1], vec![1]],
            vec![vec![1], vec![1]],
        );
        let cfg = SolverConfig { solution_limit: 1, ..SolverConfig::default() };
        let e = enumerate(&inst, &cfg).unwrap();
        assert_eq!(e.tilings.len(), 1);
        assert!(!e.complete);
    }

    #[test]
    fn enumerate_full_horizontal_dominoes() {
        // Projections of the tiling covering a 2x2 grid with two horizontal
        // dominoes select exactly that tiling out of the seven possible.
        let ts = dominoes();
        let full = Tiling::square(
            2,
            ts.clone(),
            vec![Placement::new(0, 0, 0), Placement::new(1, 0, 0)],
        );
        let inst = Instance::new(ts, center_projections(&full).unwrap());
        let e = enumerate(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(e.tilings.len(), 1);
        assert_eq!(e.tilings[0], full);
    }

    #[test]
    fn count_all_small_cases() {
        let cfg = SolverConfig::default();
        let cell = TileSet::new(vec![Tile::cell()]).unwrap();
        assert_eq!(count_all_tilings(1, 1, &cell, &cfg).unwrap(), 2);
        assert_eq!(count_all_tilings(2, 2, &dominoes(), &cfg).unwrap(), 7);
        let square = TileSet::new(vec![Tile::rect(2, 2)]).unwrap();
        assert_eq!(count_all_tilings(2, 2, &square, &cfg).unwrap(), 2);
    }

    #[test]
    fn count_all_respects_node_limit() {
        let cell = TileSet::new(vec![Tile::cell()]).unwrap();
        let cfg = SolverConfig::with_node_limit(5);
        assert_eq!(count_all_tilings(4, 4, &cell, &cfg), Err(SolverError::LimitExceeded));
    }

    #[test]
    fn fact1_identity_and_sets() {
        // r = (2,1), c = (2,1), I = {0}, J = {0,1}: 2 - 0 = 1*2 holds, so
        // row 0 is forced full; r = (3,1), c = (2,2) with the same sets gives
        // 3 - 0 != 2, so nothing is deduced.
        let d = fact1_deduce(&[2, 1], &[2, 1], &[0], &[0, 1]).unwrap().unwrap();
        assert_eq!(d.forced_full, vec![Cell::new(0, 0), Cell::new(0, 1)]);
        assert!(d.forced_empty.is_empty());
        assert_eq!(fact1_deduce(&[3, 1], &[2, 2], &[0], &[0, 1]).unwrap(), None);
        assert!(matches!(fact1_deduce(&[1], &[1], &[3], &[0]), Err(Fact1Error::BadIndex(3))));
        assert!(matches!(
            fact1_deduce(&[1, 1], &[1, 1], &[0, 0], &[0]),
            Err(Fact1Error::DuplicateIndex(0))
        ));
    }

    #[test]
    fn four_cell_types_complete_grid() {
        // A 2x2 grid demanding one center of each type per line is a Latin-
        // square-like constraint; check solve and check() agree.
        let inst = center_instance(
            cells4(),
            vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1]],
            vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1]],
        );
        let out = solve(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(out.status, SolveStatus::Satisfiable);
        assert!(check(&inst, &out.witness.unwrap()));
    }

    #[test]
    fn deterministic_across_runs() {
        let inst = center_instance(
            dominoes(),
            vec![vec![1, 1], vec![0, 0], vec![1, 1]],
            vec![vec![1, 2], vec![1, 0], vec![0, 0]],
        );
        let a = enumerate(&inst, &SolverConfig::default()).unwrap();
        let b = enumerate(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(a.tilings, b.tilings);
        assert_eq!(a.nodes, b.nodes);
    }

    #[test]
    fn type_count_mismatch_is_malformed() {
        let inst = center_instance(dominoes(), vec![vec![1, 1]], vec![vec![1, 1]]);
        // Rebuild with a projection pair of the wrong width.
        let bad = Instance::new(
            inst.tileset.clone(),
            ProjectionPair::zero(ProjectionKind::Center, 2, 2, 3),
        );
        assert!(matches!(solve(&bad, &SolverConfig::default()), Err(SolverError::MalformedInstance(_))));
    }
}
