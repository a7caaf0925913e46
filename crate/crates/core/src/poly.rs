//! Polynomial-time special cases: single-cell margins and horizontal bars.
//!
//! Reconstructing a tiling by one 1x1 type is the classical problem of
//! realizing a 0-1 matrix with prescribed row and column sums.  Feasibility
//! is the dominance test ([`ryser_feasible`]); [`ryser_solve`] builds a
//! realization greedily in O(rows * cols) counted operations.  For a single
//! horizontal bar, [`bar_solve`] delegates to the margin routine when the
//! bar is one cell wide and to the exact solver otherwise.

use std::cmp::Reverse;

use thiserror::Error;

use crate::projection::{convert_projections, Axis, Instance, ProjectionKind};
use crate::solver::{solve, SolveOutcome, SolveStatus, SolverConfig, SolverError, UnsatReason};
use crate::tiling::{Placement, Tiling};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("{axis} {line} demands {value} but at most {max} fits")]
    OutOfRange { axis: Axis, line: usize, value: u64, max: u64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BarError {
    #[error("wrong tile set: {0}")]
    WrongTileSet(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

fn check_ranges(r: &[u64], c: &[u64]) -> Result<(), PolyError> {
    for (i, &v) in r.iter().enumerate() {
        if v > c.len() as u64 {
            return Err(PolyError::OutOfRange { axis: Axis::Row, line: i, value: v, max: c.len() as u64 });
        }
    }
    for (j, &v) in c.iter().enumerate() {
        if v > r.len() as u64 {
            return Err(PolyError::OutOfRange { axis: Axis::Col, line: j, value: v, max: r.len() as u64 });
        }
    }
    Ok(())
}

/// Whether any 0-1 matrix has row sums `r` and column sums `c`: totals must
/// agree and every prefix of the descending row sums must be dominated by
/// the conjugate partition of the column sums.
pub fn ryser_feasible(r: &[u64], c: &[u64]) -> Result<bool, PolyError> {
    check_ranges(r, c)?;
    if r.iter().sum::<u64>() != c.iter().sum::<u64>() {
        return Ok(false);
    }
    let m = r.len();
    let mut sorted = r.to_vec();
    sorted.sort_unstable_by_key(|&v| Reverse(v));

    // ge[k] = number of columns with sum >= k, so the conjugate prefix
    // sum_j min(c_j, k) grows by ge[k] at each k.
    let mut count = vec![0u64; m + 1];
    for &v in c {
        count[v as usize] += 1; // v <= m by the range check
    }
    let mut ge = vec![0u64; m + 2];
    for k in (1..=m).rev() {
        ge[k] = ge[k + 1] + count[k];
    }

    let mut lhs = 0u64;
    let mut rhs = 0u64;
    for k in 1..=m {
        lhs += sorted[k - 1];
        rhs += ge[k];
        if lhs > rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Result of [`ryser_solve`]: the realization if one exists, plus the number
/// of elementary operations spent — the instrumented quadratic-time budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RyserSolve {
    pub matrix: Option<Vec<Vec<bool>>>,
    pub ops: u64,
}

/// Builds a 0-1 matrix with row sums `r` and column sums `c`, or reports
/// infeasibility.  Rows are filled in descending-sum order (ties by lower
/// row index); each row places its ones in the columns of currently largest
/// residual demand (ties by lower column index).  Column selection uses a
/// per-row counting pass, so the operation count is O(rows * cols).
pub fn ryser_solve(r: &[u64], c: &[u64]) -> Result<RyserSolve, PolyError> {
    check_ranges(r, c)?;
    let m = r.len();
    let n = c.len();
    let mut ops = 0u64;

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_unstable_by_key(|&i| (Reverse(r[i]), i));
    ops += m as u64;

    let mut residual: Vec<u64> = c.to_vec();
    let mut matrix = vec![vec![false; n]; m];
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); m + 1];

    for &i in &order {
        let need = r[i];
        if need == 0 {
            ops += 1;
            continue;
        }
        for bucket in &mut buckets {
            bucket.clear();
        }
        for (j, &v) in residual.iter().enumerate() {
            ops += 1;
            buckets[v as usize].push(j);
        }
        let mut taken = 0u64;
        'fill: for v in (1..=m).rev() {
            ops += 1;
            // Buckets hold columns in increasing index order by construction.
            for idx in 0..buckets[v].len() {
                ops += 1;
                let j = buckets[v][idx];
                matrix[i][j] = true;
                residual[j] -= 1;
                taken += 1;
                if taken == need {
                    break 'fill;
                }
            }
        }
        if taken < need {
            return Ok(RyserSolve { matrix: None, ops });
        }
    }
    if residual.iter().any(|&v| v != 0) {
        return Ok(RyserSolve { matrix: None, ops });
    }
    Ok(RyserSolve { matrix: Some(matrix), ops })
}

/// Solves an instance whose tile set is a single horizontal `1 x w` bar.
/// The one-cell bar routes through [`ryser_solve`]; wider bars fall back to
/// the exact solver under the same outcome contract.
pub fn bar_solve(inst: &Instance, cfg: &SolverConfig) -> Result<SolveOutcome, BarError> {
    if inst.tileset.len() != 1 {
        return Err(BarError::WrongTileSet(format!(
            "need exactly one tile, got {}",
            inst.tileset.len()
        )));
    }
    let tile = inst.tileset.get(0).expect("nonempty");
    let w = tile.len() as i32;
    let is_bar = tile.height() == 1 && tile.min_col() == 0 && tile.max_col() == w - 1;
    if !is_bar {
        return Err(BarError::WrongTileSet("the tile is not a horizontal bar".into()));
    }
    if w >= 2 {
        return Ok(solve(inst, cfg)?);
    }

    // 1x1 bar: center and cell projections coincide; run the margin
    // realization directly.
    let center = convert_projections(&inst.projections, &inst.tileset, ProjectionKind::Center)
        .expect("1x1 conversion is the identity");
    if !center.is_balanced() {
        return Ok(SolveOutcome {
            status: SolveStatus::Unsatisfiable,
            witness: None,
            nodes: 0,
            reason: Some(UnsatReason::Unbalanced),
        });
    }
    let r = center.r.type_counts(0);
    let c = center.c.type_counts(0);
    if check_ranges(&r, &c).is_err() {
        // Some line demands more cells than it has; nothing to search.
        return Ok(SolveOutcome {
            status: SolveStatus::Unsatisfiable,
            witness: None,
            nodes: 0,
            reason: Some(UnsatReason::Exhausted),
        });
    }
    let run = ryser_solve(&r, &c).expect("ranges checked");
    match run.matrix {
        Some(matrix) => {
            let mut placements = Vec::new();
            for (i, row) in matrix.iter().enumerate() {
                for (j, &one) in row.iter().enumerate() {
                    if one {
                        placements.push(Placement::new(i as i32, j as i32, 0));
                    }
                }
            }
            let witness =
                Tiling::new(inst.grid_rows(), inst.grid_cols(), inst.tileset.clone(), placements);
            Ok(SolveOutcome {
                status: SolveStatus::Satisfiable,
                witness: Some(witness),
                nodes: 0,
                reason: None,
            })
        }
        None => Ok(SolveOutcome {
            status: SolveStatus::Unsatisfiable,
            witness: None,
            nodes: 0,
            reason: Some(UnsatReason::Exhausted),
        }),
    }
}
