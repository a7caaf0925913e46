//! The atom-to-tiling reduction: transform four-type cell instances into
//! tiling instances over a gadget's tile set, decode block-row projections
//! back into atom counts, and map solutions in both directions.
//!
//! An *atom instance* prescribes, per grid line, how many cells of each of
//! four colors (yellow, blue, red, clear) the line carries.  Given a
//! verified gadget with block side `d`, [`reduce_instance`] scales the grid
//! by `d` and writes, for block-row `i`, the linear combination of the
//! atoms' block signatures with coefficients `r[i, .]` (columns likewise).
//! Affine independence of the signatures makes [`decode_block_row`] exact,
//! and [`push_forward`]/[`pull_back`] translate whole solutions.

use thiserror::Error;

use num::BigRational;

use crate::gadget::{Atom, BlockSignature, Gadget, VerifiedGadget};
use crate::linalg::{rat_u, solve, LinSolve};
use crate::projection::{Instance, ProjMatrix, ProjectionKind, ProjectionPair};
use crate::tile::TileSet;
use crate::tiling::{Placement, Tiling};

/// Line projections of an `n x n` grid of four-colored cells: `r[i][k]`
/// counts atoms of color `k` (in [`Atom`] order) on row `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomInstance {
    n: usize,
    r: Vec<[u64; 4]>,
    c: Vec<[u64; 4]>,
}

/// Total atoms of each color prescribed by an instance's row projections.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AtomTotals {
    pub yellow: u64,
    pub blue: u64,
    pub red: u64,
    pub clear: u64,
}

impl AtomTotals {
    pub fn total(&self) -> u64 {
        self.yellow + self.blue + self.red + self.clear
    }

    pub fn get(&self, atom: Atom) -> u64 {
        [self.yellow, self.blue, self.red, self.clear][atom.index()]
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("projection matrix has {have} lines, expected {want}")]
    BadProjectionShape { have: usize, want: usize },
    #[error("atom grid needs {want} cells, got {have}")]
    BadGridShape { have: usize, want: usize },
    #[error("instance uses atom {atom}, which the gadget does not support")]
    UnsupportedAtom { atom: Atom },
    #[error("tiling is {rows}x{cols}, not a square multiple of block side {d}")]
    GridMismatch { rows: usize, cols: usize, d: usize },
    #[error("tiling uses a different tile set than the gadget")]
    WrongTileSet,
    #[error("block ({}, {}) is not admissible: {reason}", block.0, block.1)]
    NotBlockAdmissible { block: (usize, usize), reason: BlockDefect },
    #[error("block row has {have} entries, expected {want}")]
    BadBlockRowLength { have: usize, want: usize },
}

/// Why a block failed [`pull_back`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockDefect {
    /// Some placement centered in the block sticks out of it.
    Straddles,
    /// The block's induced tiling is not an admissible tiling.
    NotAdmissible,
}

impl std::fmt::Display for BlockDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BlockDefect::Straddles => "a placement sticks out of the block",
            BlockDefect::NotAdmissible => "its tiling matches no admissible tiling",
        })
    }
}

impl AtomInstance {
    /// `r` and `c` must each have `n` lines of four counts.
    pub fn new(n: usize, r: Vec<[u64; 4]>, c: Vec<[u64; 4]>) -> Result<AtomInstance, ReduceError> {
        for m in [&r, &c] {
            if m.len() != n {
                return Err(ReduceError::BadProjectionShape { have: m.len(), want: n });
            }
        }
        Ok(AtomInstance { n, r, c })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> &[[u64; 4]] {
        &self.r
    }

    pub fn c(&self) -> &[[u64; 4]] {
        &self.c
    }

    /// Standard instances describe complete colorings: every row and column
    /// carries exactly `n` atoms.  The reduction's equisolvability guarantee
    /// is claimed for standard instances only.
    pub fn is_standard(&self) -> bool {
        let n = self.n as u64;
        self.r.iter().all(|row| row.iter().sum::<u64>() == n)
            && self.c.iter().all(|col| col.iter().sum::<u64>() == n)
    }

    /// Whether every color's row total matches its column total.
    pub fn is_balanced(&self) -> bool {
        (0..4).all(|k| {
            self.r.iter().map(|row| row[k]).sum::<u64>()
                == self.c.iter().map(|col| col[k]).sum::<u64>()
        })
    }

    pub fn totals(&self) -> AtomTotals {
        let sum = |k: usize| self.r.iter().map(|row| row[k]).sum();
        AtomTotals { yellow: sum(0), blue: sum(1), red: sum(2), clear: sum(3) }
    }

    /// The equivalent instance over four single-cell tile types, solvable by
    /// the exact solver.
    pub fn as_cell_instance(&self) -> Instance {
        let cell = crate::tile::Tile::cell();
        let ts = TileSet::new(vec![cell.clone(), cell.clone(), cell.clone(), cell])
            .expect("four cell types");
        let to_matrix = |m: &[[u64; 4]]| {
            ProjMatrix::from_lines(m.iter().map(|row| row.to_vec()).collect(), 4)
                .expect("rows of four counts")
        };
        Instance::new(
            ts,
            ProjectionPair {
                kind: ProjectionKind::Center,
                r: to_matrix(&self.r),
                c: to_matrix(&self.c),
            },
        )
    }
}

/// A complete assignment of one atom per cell of an `n x n` grid, stored
/// row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomGrid {
    n: usize,
    atoms: Vec<Atom>,
}

impl AtomGrid {
    pub fn new(n: usize, atoms: Vec<Atom>) -> Result<AtomGrid, ReduceError> {
        if atoms.len() != n * n {
            return Err(ReduceError::BadGridShape { have: atoms.len(), want: n * n });
        }
        Ok(AtomGrid { n, atoms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Atom {
        self.atoms[i * self.n + j]
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Row and column atom counts; always standard.
    pub fn projections(&self) -> AtomInstance {
        let mut r = vec![[0u64; 4]; self.n];
        let mut c = vec![[0u64; 4]; self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                let k = self.get(i, j).index();
                r[i][k] += 1;
                c[j][k] += 1;
            }
        }
        AtomInstance { n: self.n, r, c }
    }
}

/// The fixed unsatisfiable instance unbalanced inputs map to: a single cell
/// of grid, one tile type (the gadget's first), one center demanded by the
/// rows and none by the columns.  Its mismatched totals make it unsat
/// before any search.
pub fn negative_instance(g: &Gadget) -> Instance {
    let tile = g.tileset().get(0).expect("tile sets are nonempty").clone();
    Instance::new(
        TileSet::new(vec![tile]).expect("one tile"),
        ProjectionPair {
            kind: ProjectionKind::Center,
            r: ProjMatrix::from_lines(vec![vec![1]], 1).expect("1x1"),
            c: ProjMatrix::from_lines(vec![vec![0]], 1).expect("1x1"),
        },
    )
}

fn atom_signatures(g: &Gadget) -> [Option<BlockSignature>; 4] {
    let mut sigs: [Option<BlockSignature>; 4] = Default::default();
    for atom in Atom::ALL {
        sigs[atom.index()] = g.atom_signature(atom);
    }
    sigs
}

/// Builds the center-projection instance over the gadget's tile set whose
/// solutions correspond to the atom instance's solutions.  Block-row `i` of
/// the output rows is `Σ_k a.r[i][k] * signature_k.rows`; block-columns
/// likewise.  If some color's row and column totals disagree, the output is
/// the canonical [`negative_instance`] instead (such inputs are themselves
/// unsatisfiable).
pub fn reduce_instance(a: &AtomInstance, g: &VerifiedGadget) -> Result<Instance, ReduceError> {
    let sigs = atom_signatures(g);
    for atom in Atom::ALL {
        let used = a.r.iter().map(|row| row[atom.index()]).sum::<u64>() > 0
            || a.c.iter().map(|col| col[atom.index()]).sum::<u64>() > 0;
        if used && sigs[atom.index()].is_none() {
            return Err(ReduceError::UnsupportedAtom { atom });
        }
    }
    if !a.is_balanced() {
        return Ok(negative_instance(g));
    }

    let d = g.d();
    let h = g.tileset().len();
    let combine = |coeffs: &[[u64; 4]], pick: fn(&BlockSignature) -> &[u64]| {
        let mut lines = vec![vec![0u64; h]; a.n * d];
        for (block_line, q) in coeffs.iter().enumerate() {
            for atom in Atom::ALL {
                let weight = q[atom.index()];
                if weight == 0 {
                    continue;
                }
                let sig = sigs[atom.index()].as_ref().expect("usage checked above");
                for (offset, &count) in pick(sig).iter().enumerate() {
                    lines[block_line * d + offset / h][offset % h] += weight * count;
                }
            }
        }
        ProjMatrix::from_lines(lines, h).expect("uniform width h")
    };

    Ok(Instance::new(
        g.tileset().clone(),
        ProjectionPair {
            kind: ProjectionKind::Center,
            r: combine(&a.r, |s| &s.rows),
            c: combine(&a.c, |s| &s.cols),
        },
    ))
}

/// Result of decoding one block-row of projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decode {
    /// Unique non-negative integral coefficients, in [`Atom`] order
    /// (unsupported atoms get 0).
    Coefficients([u64; 4]),
    /// The block-row is not a non-negative integral combination of the
    /// atoms' signatures.
    NoSolution,
    /// Several rational solutions exist.  Unreachable for gadgets with
    /// affinely independent signatures, i.e. for any verified gadget.
    Ambiguous,
}

/// Recovers the atom counts `q` of one block-row from its row projections
/// `b` (flattened as `line * types + type`, `d * types` entries) in a
/// reduced instance of original side `n`: solves
/// `Σ_k q_k * signature_k = b` over the rationals with one appended
/// coordinate fixing `Σ_k q_k = n`.
///
/// Callers should pass a verified gadget (deref from [`VerifiedGadget`]);
/// affine independence then guarantees the answer is never [`Decode::Ambiguous`].
pub fn decode_block_row(b: &[u64], n: u64, g: &Gadget) -> Result<Decode, ReduceError> {
    let want = g.d() * g.tileset().len();
    if b.len() != want {
        return Err(ReduceError::BadBlockRowLength { have: b.len(), want });
    }
    let supported: Vec<Atom> = Atom::ALL.into_iter().filter(|&a| g.supports(a)).collect();
    let sigs: Vec<Vec<u64>> = supported
        .iter()
        .map(|&a| g.atom_signature(a).expect("supported").extended_rows(1))
        .collect();
    let mut b_ext: Vec<u64> = b.to_vec();
    b_ext.push(n);

    // One equation per coordinate, one unknown per supported atom.
    let equations: Vec<Vec<BigRational>> = (0..=want)
        .map(|t| sigs.iter().map(|s| rat_u(s[t])).collect())
        .collect();
    let rhs: Vec<BigRational> = b_ext.iter().map(|&x| rat_u(x)).collect();

    Ok(match solve(&equations, &rhs) {
        LinSolve::Inconsistent => Decode::NoSolution,
        LinSolve::Underdetermined => Decode::Ambiguous,
        LinSolve::Unique(x) => {
            let mut q = [0u64; 4];
            for (atom, value) in supported.iter().zip(x) {
                if !value.is_integer() || value < BigRational::from_integer(0.into()) {
                    return Ok(Decode::NoSolution);
                }
                let int = value.to_integer();
                q[atom.index()] = u64::try_from(&int).expect("non-negative block-row count");
            }
            Decode::Coefficients(q)
        }
    })
}

/// Replaces each atom of the grid by its block's representative admissible
/// tiling, translated into block position: an `n*d x n*d` tiling whose
/// projections equal [`reduce_instance`] of the grid's projections.
pub fn push_forward(grid: &AtomGrid, g: &VerifiedGadget) -> Result<Tiling, ReduceError> {
    let d = g.d();
    let n = grid.n();
    let mut placements = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let atom = grid.get(i, j);
            let rep = g
                .representative(atom)
                .ok_or(ReduceError::UnsupportedAtom { atom })?;
            placements.extend(rep.placements().iter().map(|p| {
                Placement::new(p.row + (i * d) as i32, p.col + (j * d) as i32, p.tile)
            }));
        }
    }
    Ok(Tiling::new(n * d, n * d, g.tileset().clone(), placements))
}

/// Inverse of [`push_forward`], with admissibility checked rather than
/// assumed: cuts the grid into aligned `d x d` blocks and maps each block's
/// induced tiling back to its atom.  Fails on the first block (row-major)
/// whose placements stick out of it or match no admissible tiling.
pub fn pull_back(t: &Tiling, g: &VerifiedGadget) -> Result<AtomGrid, ReduceError> {
    let d = g.d();
    if t.rows() != t.cols() || t.rows() % d != 0 {
        return Err(ReduceError::GridMismatch { rows: t.rows(), cols: t.cols(), d });
    }
    if t.tileset() != g.tileset() {
        return Err(ReduceError::WrongTileSet);
    }
    let n = t.rows() / d;

    let mut local: Vec<Vec<Placement>> = vec![Vec::new(); n * n];
    let mut straddles = vec![false; n * n];
    for p in t.placements() {
        let (bi, bj) = (p.row as usize / d, p.col as usize / d);
        let block = bi * n + bj;
        let tile = g.tileset().get(p.tile).expect("validated against tile set");
        let (li, lj) = (p.row - (bi * d) as i32, p.col - (bj * d) as i32);
        let inside = tile.cells().iter().all(|cell| {
            let (ci, cj) = (li + cell.row, lj + cell.col);
            ci >= 0 && cj >= 0 && (ci as usize) < d && (cj as usize) < d
        });
        if inside {
            local[block].push(Placement::new(li, lj, p.tile));
        } else {
            straddles[block] = true;
        }
    }

    let atom_of: std::collections::BTreeMap<&[Placement], Atom> = Atom::ALL
        .iter()
        .flat_map(|&atom| g.atom_tilings(atom).map(move |t| (t.placements(), atom)))
        .collect();

    let mut atoms = Vec::with_capacity(n * n);
    for block in 0..n * n {
        let coords = (block / n, block % n);
        if straddles[block] {
            return Err(ReduceError::NotBlockAdmissible {
                block: coords,
                reason: BlockDefect::Straddles,
            });
        }
        local[block].sort();
        match atom_of.get(local[block].as_slice()) {
            Some(&atom) => atoms.push(atom),
            None => {
                return Err(ReduceError::NotBlockAdmissible {
                    block: coords,
                    reason: BlockDefect::NotAdmissible,
                })
            }
        }
    }
    Ok(AtomGrid { n, atoms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::verified_builtin;
    use crate::gadget::{verify_independence, GadgetError};
    use crate::projection::center_projections;
    use crate::solver::{solve as solve_instance, SolveStatus, SolverConfig};
    use crate::tile::Tile;

    fn dominoes() -> VerifiedGadget {
        verified_builtin("dominoes3").unwrap()
    }

    fn grid(n: usize, letters: &str) -> AtomGrid {
        let atoms = letters
            .chars()
            .map(|ch| match ch {
                'Y' => Atom::Yellow,
                'B' => Atom::Blue,
                'R' => Atom::Red,
                'C' => Atom::Clear,
                _ => panic!("bad atom letter"),
            })
            .collect();
        AtomGrid::new(n, atoms).unwrap()
    }

    #[test]
    fn unbalanced_maps_to_the_canonical_negative_instance() {
        let g = dominoes();
        // Yellow: one in rows, none in columns.
        let a = AtomInstance::new(1, vec![[1, 0, 0, 0]], vec![[0, 0, 0, 0]]).unwrap();
        assert!(!a.is_balanced());
        let reduced = reduce_instance(&a, &g).unwrap();
        assert_eq!(reduced.grid_rows(), 1);
        assert_eq!(reduced.tileset.len(), 1);
        assert_eq!(reduced.projections.r.to_lines(), vec![vec![1]]);
        assert_eq!(reduced.projections.c.to_lines(), vec![vec![0]]);
        let outcome = solve_instance(&reduced, &SolverConfig::default()).unwrap();
        assert_eq!(outcome.status, SolveStatus::Unsatisfiable);
    }

    #[test]
    fn all_clear_row_is_a_scaled_clear_signature() {
        let g = dominoes();
        let n = 2;
        let a = AtomInstance::new(
            n,
            vec![[0, 0, 0, 2], [0, 0, 0, 2]],
            vec![[0, 0, 0, 2], [0, 0, 0, 2]],
        )
        .unwrap();
        let reduced = reduce_instance(&a, &g).unwrap();
        let clear = g.atom_signature(Atom::Clear).unwrap();
        let h = g.tileset().len();
        for block in 0..n {
            for line in 0..g.d() {
                for k in 0..h {
                    assert_eq!(
                        reduced.projections.r[(block * g.d() + line, k)],
                        2 * clear.rows[line * h + k]
                    );
                    assert_eq!(
                        reduced.projections.c[(block * g.d() + line, k)],
                        2 * clear.cols[line * h + k]
                    );
                }
            }
        }
    }

    #[test]
    fn forward_soundness_on_a_small_grid() {
        let g = dominoes();
        let grid = grid(2, "YBRC");
        let t = push_forward(&grid, &g).unwrap();
        assert!(t.validate().is_ok());
        let reduced = reduce_instance(&grid.projections(), &g).unwrap();
        let pair = center_projections(&t).unwrap();
        assert_eq!(pair.r, reduced.projections.r);
        assert_eq!(pair.c, reduced.projections.c);
    }

    #[test]
    fn pull_back_inverts_push_forward() {
        let g = dominoes();
        for letters in ["YBRC", "CCCC", "RYYB"] {
            let grid = grid(2, letters);
            let t = push_forward(&grid, &g).unwrap();
            assert_eq!(pull_back(&t, &g).unwrap(), grid);
        }
    }

    #[test]
    fn straddling_placement_fails_pull_back() {
        let g = dominoes();
        // A horizontal domino crossing the block boundary between columns
        // 2 and 3.
        let t = Tiling::new(6, 6, g.tileset().clone(), vec![Placement::new(0, 2, 0)]);
        let err = pull_back(&t, &g).unwrap_err();
        assert_eq!(
            err,
            ReduceError::NotBlockAdmissible { block: (0, 0), reason: BlockDefect::Straddles }
        );
    }

    #[test]
    fn non_admissible_block_fails_pull_back() {
        let g = dominoes();
        // Two stacked vertical dominoes in block (0, 1): valid tiling, but
        // not an admissible block tiling.
        let t = Tiling::new(
            6,
            6,
            g.tileset().clone(),
            vec![Placement::new(0, 0, 1), Placement::new(0, 3, 1), Placement::new(1, 4, 1)],
        );
        let err = pull_back(&t, &g).unwrap_err();
        assert_eq!(
            err,
            ReduceError::NotBlockAdmissible { block: (0, 1), reason: BlockDefect::NotAdmissible }
        );
    }

    #[test]
    fn decode_recovers_each_unit_row() {
        let g = dominoes();
        let h = g.tileset().len();
        for atom in Atom::ALL {
            let sig = g.atom_signature(atom).unwrap();
            let mut q = [0u64; 4];
            q[atom.index()] = 1;
            assert_eq!(
                decode_block_row(&sig.rows, 1, &g).unwrap(),
                Decode::Coefficients(q),
                "atom {atom}"
            );
            assert_eq!(sig.rows.len(), g.d() * h);
        }
    }

    #[test]
    fn decode_rejects_off_lattice_perturbations() {
        let g = dominoes();
        let y = g.atom_signature(Atom::Yellow).unwrap();
        let b = g.atom_signature(Atom::Blue).unwrap();
        let mut combined: Vec<u64> = y.rows.iter().zip(&b.rows).map(|(a, b)| a + b).collect();
        assert_eq!(decode_block_row(&combined, 2, &g).unwrap(), Decode::Coefficients([1, 1, 0, 0]));
        // Perturb a coordinate no signature touches (last block row).
        let last = combined.len() - 1;
        combined[last] += 1;
        assert_eq!(decode_block_row(&combined, 2, &g).unwrap(), Decode::NoSolution);
    }

    #[test]
    fn decode_consistency_against_brute_force() {
        // Oracle: try every coefficient vector with the right total.
        let g = dominoes();
        let n = 3u64;
        let h = g.tileset().len();
        let mut checked = 0;
        for y in 0..=n {
            for b in 0..=n - y {
                for r in 0..=n - y - b {
                    let c = n - y - b - r;
                    let q = [y, b, r, c];
                    let mut row = vec![0u64; g.d() * h];
                    for atom in Atom::ALL {
                        let sig = g.atom_signature(atom).unwrap();
                        for (t, &v) in sig.rows.iter().enumerate() {
                            row[t] += q[atom.index()] * v;
                        }
                    }
                    assert_eq!(
                        decode_block_row(&row, n, &g).unwrap(),
                        Decode::Coefficients(q),
                        "q = {q:?}"
                    );
                    checked += 1;
                }
            }
        }
        assert_eq!(checked, 20);
    }

    #[test]
    fn ambiguous_requires_an_unverified_gadget() {
        // Four identical-projection diagonal patterns: decoding cannot tell
        // the atoms apart.
        let ts = TileSet::new(vec![Tile::cell()]).unwrap();
        let block = |ps: &[(i32, i32)]| {
            Tiling::new(
                3,
                3,
                ts.clone(),
                ps.iter().map(|&(i, j)| Placement::new(i, j, 0)).collect(),
            )
        };
        let admissible = vec![
            block(&[(0, 0), (1, 1), (2, 2)]),
            block(&[(0, 0), (1, 2), (2, 1)]),
            block(&[(0, 1), (1, 0), (2, 2)]),
            block(&[(0, 1), (1, 2), (2, 0)]),
        ];
        let g = Gadget::new("permutations", 3, ts, admissible, [vec![0], vec![1], vec![2], vec![3]])
            .unwrap();
        assert!(!verify_independence(&g).affine);
        let sig = g.atom_signature(Atom::Yellow).unwrap();
        assert_eq!(decode_block_row(&sig.rows, 1, &g).unwrap(), Decode::Ambiguous);

        let bad_len = decode_block_row(&[0, 0], 1, &g).unwrap_err();
        assert_eq!(bad_len, ReduceError::BadBlockRowLength { have: 2, want: 3 });
    }

    #[test]
    fn unsupported_atom_is_an_error_not_a_negative_instance() {
        let g = verified_builtin("square4").unwrap();
        assert!(!g.supports(Atom::Red));
        let a = AtomInstance::new(1, vec![[0, 0, 1, 0]], vec![[0, 0, 1, 0]]).unwrap();
        assert_eq!(
            reduce_instance(&a, &g).unwrap_err(),
            ReduceError::UnsupportedAtom { atom: Atom::Red }
        );
        let grid = AtomGrid::new(1, vec![Atom::Red]).unwrap();
        assert_eq!(
            push_forward(&grid, &g).unwrap_err(),
            ReduceError::UnsupportedAtom { atom: Atom::Red }
        );
        // An unused unsupported atom is fine.
        let ok = AtomInstance::new(1, vec![[0, 0, 0, 1]], vec![[0, 0, 0, 1]]).unwrap();
        assert!(reduce_instance(&ok, &g).is_ok());
    }

    #[test]
    fn grid_projections_are_standard() {
        let g = grid(3, "YBRCCYBBR");
        let a = g.projections();
        assert!(a.is_standard());
        assert!(a.is_balanced());
        let totals = a.totals();
        assert_eq!(
            (totals.yellow, totals.blue, totals.red, totals.clear),
            (2, 3, 2, 2)
        );
        assert_eq!(totals.total(), 9);
    }

    #[test]
    fn cell_instance_matches_grid_satisfiability() {
        let a = grid(2, "YBBY").projections();
        let inst = a.as_cell_instance();
        let outcome = solve_instance(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(outcome.status, SolveStatus::Satisfiable);
    }

    #[test]
    fn verification_failure_is_surfaced_by_builtin_loading() {
        // Sanity: every shipped gadget loads and verifies.
        for name in crate::builtin::builtin_names() {
            let g = verified_builtin(name);
            assert!(g.is_ok(), "{name}: {:?}", g.err().map(|e| matches!(e, GadgetError::VerificationFailed(_))));
        }
    }
}
