//! Block gadgets: the data and verification machinery behind the
//! atom-to-tiling reduction.
//!
//! A gadget fixes a block side `d`, a tile set, and the list of *admissible*
//! tilings of the `d x d` block, each assigned to one of four atom colors
//! (yellow, blue, red, clear).  The reduction replaces every atom of a
//! four-type cell instance by its admissible block, so decoding hinges on
//! two computational facts: the atoms' block signatures (flattened center
//! projections) must be affinely independent per axis, and the admissible
//! list must be exactly what a documented closure rule enumerates.  Gadgets
//! therefore ship as data and are verified at load; a [`VerifiedGadget`]
//! witnesses a passed check and is the only form the reduction accepts.

use std::collections::BTreeSet;

use num::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{rank, rat_u};
use crate::projection::{Instance, ProjMatrix, ProjectionKind, ProjectionPair};
use crate::solver::{enumerate, Geom, SolverConfig, SolverError};
use crate::tile::{Cell, Tile, TileSet};
use crate::tiling::{Placement, Tiling, TilingViolation};

/// The four cell colors of the source problem, in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Atom {
    Yellow = 0,
    Blue = 1,
    Red = 2,
    Clear = 3,
}

impl Atom {
    pub const ALL: [Atom; 4] = [Atom::Yellow, Atom::Blue, Atom::Red, Atom::Clear];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["yellow", "blue", "red", "clear"][self.index()]
    }

    pub fn from_index(i: usize) -> Option<Atom> {
        Atom::ALL.get(i).copied()
    }

    pub fn from_name(name: &str) -> Option<Atom> {
        Atom::ALL.iter().copied().find(|a| a.name() == name)
    }
}

impl std::fmt::Display for Atom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GadgetError {
    #[error("block side must be at least 1")]
    BadBlockSide,
    #[error("admissible tiling {index} is not a valid {d}x{d} tiling: {violation}")]
    InvalidTiling { index: usize, d: usize, violation: TilingViolation },
    #[error("admissible tiling {index} uses a different grid or tile set")]
    WrongBlock { index: usize },
    #[error("atom map references admissible index {index}, out of range")]
    BadAtomIndex { index: usize },
    #[error("admissible tiling {index} is referenced {count} times by the atom map (need exactly 1)")]
    UnevenAtomCover { index: usize, count: usize },
    #[error("no atom has an admissible tiling")]
    EmptyAtomMap,
    #[error("atom {atom} maps to tilings with differing projections")]
    InconsistentAtom { atom: Atom },
    #[error("gadget verification failed: {0}")]
    VerificationFailed(Box<GadgetReport>),
    #[error("search space too large: {0}")]
    SearchSpaceTooLarge(String),
    #[error("atom signature for {atom} has length {len}, expected {want}")]
    BadSignatureLength { atom: Atom, len: usize, want: usize },
    #[error("atom signatures must be pairwise distinct")]
    DuplicateSignatures,
    #[error("search requires at least one atom signature")]
    NoSignatures,
    #[error("no builtin gadget named {0:?}")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// A block side, tile set, admissible block tilings, and the atom each one
/// encodes.  Structural invariants are checked by [`Gadget::new`]; the
/// behavioral requirements (closure, independence) by [`verify_gadget`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    name: String,
    d: usize,
    tileset: TileSet,
    admissible: Vec<Tiling>,
    atom_map: [Vec<usize>; 4],
}

impl Gadget {
    /// Validates and builds a gadget.  Every admissible tiling must be a
    /// valid `d x d` tiling over `tileset`; the atom map must reference each
    /// admissible tiling exactly once; an atom mapped to several tilings
    /// needs identical projections across them (an atom may also map to none
    /// — such a gadget simply cannot encode that atom).
    pub fn new(
        name: impl Into<String>,
        d: usize,
        tileset: TileSet,
        admissible: Vec<Tiling>,
        atom_map: [Vec<usize>; 4],
    ) -> Result<Gadget, GadgetError> {
        if d == 0 {
            return Err(GadgetError::BadBlockSide);
        }
        for (index, t) in admissible.iter().enumerate() {
            if t.rows() != d || t.cols() != d || t.tileset() != &tileset {
                return Err(GadgetError::WrongBlock { index });
            }
            if let Err(violation) = t.validate() {
                return Err(GadgetError::InvalidTiling { index, d, violation });
            }
        }
        let mut usage = vec![0usize; admissible.len()];
        for list in &atom_map {
            for &index in list {
                if index >= admissible.len() {
                    return Err(GadgetError::BadAtomIndex { index });
                }
                usage[index] += 1;
            }
        }
        if let Some(index) = usage.iter().position(|&c| c != 1) {
            return Err(GadgetError::UnevenAtomCover { index, count: usage[index] });
        }
        if atom_map.iter().all(Vec::is_empty) {
            return Err(GadgetError::EmptyAtomMap);
        }
        let g = Gadget { name: name.into(), d, tileset, admissible, atom_map };
        for atom in Atom::ALL {
            let sigs: Vec<BlockSignature> =
                g.atom_tilings(atom).map(BlockSignature::of_valid).collect();
            if sigs.windows(2).any(|w| w[0] != w[1]) {
                return Err(GadgetError::InconsistentAtom { atom });
            }
        }
        Ok(g)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn tileset(&self) -> &TileSet {
        &self.tileset
    }

    pub fn admissible(&self) -> &[Tiling] {
        &self.admissible
    }

    pub fn atom_map(&self) -> &[Vec<usize>; 4] {
        &self.atom_map
    }

    pub fn supports(&self, atom: Atom) -> bool {
        !self.atom_map[atom.index()].is_empty()
    }

    pub fn atom_tilings(&self, atom: Atom) -> impl Iterator<Item = &Tiling> {
        self.atom_map[atom.index()].iter().map(|&i| &self.admissible[i])
    }

    /// The first listed tiling for the atom — the one the reduction plants.
    pub fn representative(&self, atom: Atom) -> Option<&Tiling> {
        self.atom_map[atom.index()].first().map(|&i| &self.admissible[i])
    }

    /// Signature of the atom's representative tiling.
    pub fn atom_signature(&self, atom: Atom) -> Option<BlockSignature> {
        self.representative(atom).map(BlockSignature::of_valid)
    }
}

/// Flattened center projections of one block tiling: `rows[line * h + k]`
/// counts type-`k` centers on block row `line`, and `cols` likewise.  The
/// affine checks extend these with one trailing constant coordinate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BlockSignature {
    pub rows: Vec<u64>,
    pub cols: Vec<u64>,
}

impl BlockSignature {
    pub fn of(t: &Tiling) -> Result<BlockSignature, TilingViolation> {
        t.validate()?;
        Ok(Self::of_valid(t))
    }

    /// As [`BlockSignature::of`] for tilings already known to be valid.
    pub fn of_valid(t: &Tiling) -> BlockSignature {
        let h = t.tileset().len();
        let mut rows = vec![0u64; t.rows() * h];
        let mut cols = vec![0u64; t.cols() * h];
        for p in t.placements() {
            rows[p.row as usize * h + p.tile] += 1;
            cols[p.col as usize * h + p.tile] += 1;
        }
        BlockSignature { rows, cols }
    }

    /// Row part with one appended coordinate (1 for signatures, `n` for a
    /// block-row being decoded).
    pub fn extended_rows(&self, last: u64) -> Vec<u64> {
        let mut v = self.rows.clone();
        v.push(last);
        v
    }

    pub fn extended_cols(&self, last: u64) -> Vec<u64> {
        let mut v = self.cols.clone();
        v.push(last);
        v
    }
}

/// One signature per admissible tiling, in admissible order.
pub fn block_signatures(g: &Gadget) -> Vec<BlockSignature> {
    g.admissible().iter().map(BlockSignature::of_valid).collect()
}

/// Per-axis independence of the atoms' representative signatures.
///
/// `plain` asks for linear independence of the raw row vectors and of the
/// raw column vectors; `affine` asks the same after appending a constant-1
/// coordinate to each.  `affine` is what unique block-row decoding needs;
/// `plain` implies it.  Both axes must pass for the flag to be set: a
/// reduction writes row and column projections alike.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Independence {
    pub plain: bool,
    pub affine: bool,
}

pub fn verify_independence(g: &Gadget) -> Independence {
    let sigs: Vec<BlockSignature> =
        Atom::ALL.iter().filter_map(|&a| g.atom_signature(a)).collect();
    let m = sigs.len();
    let to_rat = |v: &[u64]| -> Vec<BigRational> { v.iter().map(|&x| rat_u(x)).collect() };
    let full_rank = |vectors: Vec<Vec<BigRational>>| rank(&vectors) == m;

    let plain = full_rank(sigs.iter().map(|s| to_rat(&s.rows)).collect())
        && full_rank(sigs.iter().map(|s| to_rat(&s.cols)).collect());
    let affine = full_rank(sigs.iter().map(|s| to_rat(&s.extended_rows(1))).collect())
        && full_rank(sigs.iter().map(|s| to_rat(&s.extended_cols(1))).collect());
    Independence { plain, affine }
}

/// Enumerates every valid tiling of the `d x d` block that satisfies the
/// constraint, in canonical (sorted placement list) order.  `max_tiles`
/// prunes the search to tilings of at most that many placements.
pub fn enumerate_block_tilings<F>(
    d: usize,
    ts: &TileSet,
    max_tiles: Option<usize>,
    constraint: F,
    node_limit: u64,
) -> Result<Vec<Tiling>, SolverError>
where
    F: Fn(&Tiling) -> bool,
{
    let mut out = Vec::new();
    visit_block_tilings(d, ts, max_tiles, constraint, node_limit, |t| {
        out.push(t);
        true
    })?;
    out.sort_by(|a, b| a.placements().cmp(b.placements()));
    Ok(out)
}

/// Streaming core of [`enumerate_block_tilings`]: calls `visit` on each
/// constraint-satisfying tiling (in search order, not canonical order) and
/// stops early when it returns `false`.  Returns whether the enumeration ran
/// to completion.
pub(crate) fn visit_block_tilings<F, V>(
    d: usize,
    ts: &TileSet,
    max_tiles: Option<usize>,
    constraint: F,
    node_limit: u64,
    mut visit: V,
) -> Result<bool, SolverError>
where
    F: Fn(&Tiling) -> bool,
    V: FnMut(Tiling) -> bool,
{
    let geoms: Vec<Geom> = ts.iter().map(Geom::new).collect();
    let mut occ = vec![false; d * d];
    let mut placements = Vec::new();
    let mut nodes = 0u64;
    block_rec(
        d,
        ts,
        &geoms,
        max_tiles,
        &constraint,
        node_limit,
        &mut occ,
        &mut placements,
        &mut nodes,
        0,
        &mut visit,
    )
}

#[allow(clippy::too_many_arguments)]
fn block_rec<F, V>(
    d: usize,
    ts: &TileSet,
    geoms: &[Geom],
    max_tiles: Option<usize>,
    constraint: &F,
    node_limit: u64,
    occ: &mut Vec<bool>,
    placements: &mut Vec<Placement>,
    nodes: &mut u64,
    pos: usize,
    visit: &mut V,
) -> Result<bool, SolverError>
where
    F: Fn(&Tiling) -> bool,
    V: FnMut(Tiling) -> bool,
{
    *nodes += 1;
    if node_limit > 0 && *nodes > node_limit {
        return Err(SolverError::LimitExceeded);
    }
    if pos == d * d {
        let t = Tiling::new(d, d, ts.clone(), placements.clone());
        if constraint(&t) && !visit(t) {
            return Ok(false);
        }
        return Ok(true);
    }
    let (i, j) = ((pos / d) as i32, (pos % d) as i32);
    if max_tiles.map_or(true, |m| placements.len() < m) {
        for (k, g) in geoms.iter().enumerate() {
            if !g.fits_grid(i, j, d, d) || !g.fits_free(i, j, d, occ) {
                continue;
            }
            g.mark(i, j, d, occ, true);
            placements.push(Placement::new(i, j, k));
            let keep_going = block_rec(
                d, ts, geoms, max_tiles, constraint, node_limit, occ, placements, nodes, pos + 1,
                visit,
            )?;
            placements.pop();
            g.mark(i, j, d, occ, false);
            if !keep_going {
                return Ok(false);
            }
        }
    }
    block_rec(d, ts, geoms, max_tiles, constraint, node_limit, occ, placements, nodes, pos + 1, visit)
}

/// How a gadget's admissible list is required to arise by enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureKind {
    /// For each supported atom, the tilings with the atom's exact center
    /// projections, found by the projection-constrained solver.
    BySignature,
    /// All tilings with exactly this many placements.
    ExactTiles(usize),
    /// All tilings whose footprints stay inside row 0 and column 0 of the
    /// block and that cover the corner cell (0,0).
    FirstRowColCovering,
}

/// Closure rule plus an optional cross-projection witness demand: when
/// `bad_tiling` is `(a, b)`, some non-admissible tiling must combine atom
/// `a`'s row projections with atom `b`'s column projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureSpec {
    pub kind: ClosureKind,
    pub bad_tiling: Option<(Atom, Atom)>,
}

impl ClosureSpec {
    pub fn by_signature() -> Self {
        ClosureSpec { kind: ClosureKind::BySignature, bad_tiling: None }
    }

    pub fn with_bad_tiling(mut self, rows_like: Atom, cols_like: Atom) -> Self {
        self.bad_tiling = Some((rows_like, cols_like));
        self
    }
}

/// Outcome of [`verify_gadget`].  `passed` requires: the closure enumeration
/// reproduces the admissible list exactly, the atoms are affinely
/// independent on both axes, multi-tiling atoms agree on projections, and a
/// demanded bad tiling exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetReport {
    pub closure_ok: bool,
    /// Admissible tilings the closure enumeration did not produce.
    pub missing: Vec<Tiling>,
    /// Enumerated tilings not in the admissible list.
    pub extra: Vec<Tiling>,
    pub independence: Independence,
    pub atoms_consistent: bool,
    pub bad_tiling_required: bool,
    pub bad_tiling: Option<Tiling>,
}

impl GadgetReport {
    pub fn passed(&self) -> bool {
        self.closure_ok
            && self.independence.affine
            && self.atoms_consistent
            && (!self.bad_tiling_required || self.bad_tiling.is_some())
    }
}

impl std::fmt::Display for GadgetReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "closure {} ({} missing, {} extra), independence plain={} affine={}, atoms {}",
            if self.closure_ok { "ok" } else { "FAILED" },
            self.missing.len(),
            self.extra.len(),
            self.independence.plain,
            self.independence.affine,
            if self.atoms_consistent { "consistent" } else { "INCONSISTENT" },
        )?;
        if self.bad_tiling_required {
            write!(
                f,
                ", bad tiling {}",
                if self.bad_tiling.is_some() { "found" } else { "MISSING" }
            )?;
        }
        Ok(())
    }
}

fn signature_instance(g: &Gadget, rows: &[u64], cols: &[u64]) -> Instance {
    let h = g.tileset().len();
    let to_matrix = |flat: &[u64]| {
        ProjMatrix::from_lines(flat.chunks(h).map(<[u64]>::to_vec).collect(), h)
            .expect("signature length is d*h")
    };
    Instance::new(
        g.tileset().clone(),
        ProjectionPair {
            kind: ProjectionKind::Center,
            r: to_matrix(rows),
            c: to_matrix(cols),
        },
    )
}

/// Runs the gadget's closure enumeration and independence checks.
pub fn verify_gadget(g: &Gadget, spec: &ClosureSpec) -> Result<GadgetReport, GadgetError> {
    let cfg = SolverConfig::default();
    let enumerated: Vec<Tiling> = match &spec.kind {
        ClosureKind::BySignature => {
            let mut set: BTreeSet<Vec<Placement>> = BTreeSet::new();
            let mut found = Vec::new();
            for atom in Atom::ALL {
                let Some(sig) = g.atom_signature(atom) else { continue };
                let inst = signature_instance(g, &sig.rows, &sig.cols);
                for t in enumerate(&inst, &cfg)?.tilings {
                    if set.insert(t.placements().to_vec()) {
                        found.push(t);
                    }
                }
            }
            found.sort_by(|a, b| a.placements().cmp(b.placements()));
            found
        }
        ClosureKind::ExactTiles(k) => enumerate_block_tilings(
            g.d(),
            g.tileset(),
            Some(*k),
            |t| t.placements().len() == *k,
            0,
        )?,
        ClosureKind::FirstRowColCovering => enumerate_block_tilings(
            g.d(),
            g.tileset(),
            None,
            |t| {
                let covered = t.covered_set();
                covered.contains(&Cell::new(0, 0))
                    && covered.iter().all(|c| c.row == 0 || c.col == 0)
            },
            0,
        )?,
    };

    let admissible_set: BTreeSet<&[Placement]> =
        g.admissible().iter().map(Tiling::placements).collect();
    let enumerated_set: BTreeSet<&[Placement]> =
        enumerated.iter().map(Tiling::placements).collect();
    let missing: Vec<Tiling> = g
        .admissible()
        .iter()
        .filter(|t| !enumerated_set.contains(t.placements()))
        .cloned()
        .collect();
    let extra: Vec<Tiling> = enumerated
        .iter()
        .filter(|t| !admissible_set.contains(t.placements()))
        .cloned()
        .collect();

    let atoms_consistent = Atom::ALL.iter().all(|&atom| {
        let mut sigs = g.atom_tilings(atom).map(BlockSignature::of_valid);
        match sigs.next() {
            Some(first) => sigs.all(|s| s == first),
            None => true,
        }
    });

    let bad_tiling = match spec.bad_tiling {
        None => None,
        Some((row_atom, col_atom)) => {
            let rows = g.atom_signature(row_atom).map(|s| s.rows);
            let cols = g.atom_signature(col_atom).map(|s| s.cols);
            match (rows, cols) {
                (Some(rows), Some(cols)) => {
                    let inst = signature_instance(g, &rows, &cols);
                    enumerate(&inst, &cfg)?
                        .tilings
                        .into_iter()
                        .find(|t| !admissible_set.contains(t.placements()))
                }
                _ => None,
            }
        }
    };

    Ok(GadgetReport {
        closure_ok: missing.is_empty() && extra.is_empty(),
        missing,
        extra,
        independence: verify_independence(g),
        atoms_consistent,
        bad_tiling_required: spec.bad_tiling.is_some(),
        bad_tiling,
    })
}

/// A gadget that passed [`verify_gadget`]; the only form the reduction
/// accepts, so an unverified gadget cannot reach it by construction.
#[derive(Clone, Debug)]
pub struct VerifiedGadget {
    gadget: Gadget,
    report: GadgetReport,
}

impl VerifiedGadget {
    pub fn verify(gadget: Gadget, spec: &ClosureSpec) -> Result<VerifiedGadget, GadgetError> {
        let report = verify_gadget(&gadget, spec)?;
        if !report.passed() {
            return Err(GadgetError::VerificationFailed(Box::new(report)));
        }
        Ok(VerifiedGadget { gadget, report })
    }

    pub fn gadget(&self) -> &Gadget {
        &self.gadget
    }

    pub fn report(&self) -> &GadgetReport {
        &self.report
    }
}

impl std::ops::Deref for VerifiedGadget {
    type Target = Gadget;
    fn deref(&self) -> &Gadget {
        &self.gadget
    }
}

/// Placement counts by center position modulo `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueMatrix {
    d: usize,
    counts: Vec<u64>,
}

impl ResidueMatrix {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn to_lines(&self) -> Vec<Vec<u64>> {
        self.counts.chunks(self.d).map(<[u64]>::to_vec).collect()
    }
}

impl std::ops::Index<(usize, usize)> for ResidueMatrix {
    type Output = u64;
    fn index(&self, (i, j): (usize, usize)) -> &u64 {
        &self.counts[i * self.d + j]
    }
}

/// Counts placements whose center is congruent to each `(i, j)` modulo `d`.
pub fn center_residue(t: &Tiling, d: usize) -> ResidueMatrix {
    assert!(d >= 1, "block side must be at least 1");
    let mut counts = vec![0u64; d * d];
    for p in t.placements() {
        counts[(p.row as usize % d) * d + (p.col as usize % d)] += 1;
    }
    ResidueMatrix { d, counts }
}

// ---------------------------------------------------------------------------
// Discovery

/// Required unextended signature for one atom: `d*h` row counts and `d*h`
/// column counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureReq {
    pub rows: Vec<u64>,
    pub cols: Vec<u64>,
}

/// Structural side-constraints a search can impose on block tilings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructuralConstraint {
    FirstRowColCovering,
}

/// A gadget search: try tile sets (a fixed one, or every center-normalized
/// hole-less shape within `shape_box` as a single type) and emit each gadget
/// whose enumerated tilings realize the requested atom signatures.
///
/// With `tiles_per_block` or `constraint` set, the enumeration universe is
/// all tilings under that restriction and must be *exactly* covered by the
/// signature matches.  Otherwise matching runs per atom signature through
/// the projection-constrained solver.
#[derive(Clone, Debug)]
pub struct GadgetSearch {
    pub d: usize,
    pub tiles: Option<TileSet>,
    /// (rows, cols) bounding box for shape search; ignored with fixed tiles.
    pub shape_box: (i32, i32),
    pub tiles_per_block: Option<usize>,
    pub constraint: Option<StructuralConstraint>,
    pub atom_signatures: [Option<SignatureReq>; 4],
    /// Per-candidate enumeration budget; 0 = unlimited.
    pub node_limit: u64,
}

impl GadgetSearch {
    /// The closure rule this search verifies its candidates under.
    pub fn implied_closure(&self) -> ClosureSpec {
        ClosureSpec {
            kind: match (self.constraint, self.tiles_per_block) {
                (Some(StructuralConstraint::FirstRowColCovering), _) => {
                    ClosureKind::FirstRowColCovering
                }
                (None, Some(k)) => ClosureKind::ExactTiles(k),
                (None, None) => ClosureKind::BySignature,
            },
            bad_tiling: None,
        }
    }
}

/// Every center-normalized hole-less polyomino whose bounding box fits in
/// `rows x cols`, in canonical order.
pub fn shapes_in_box(rows: i32, cols: i32) -> Result<Vec<Tile>, GadgetError> {
    if rows < 1 || cols < 1 {
        return Err(GadgetError::SearchSpaceTooLarge("empty shape box".into()));
    }
    let area = (rows * cols) as u32;
    if area > 16 {
        return Err(GadgetError::SearchSpaceTooLarge(format!(
            "shape box {rows}x{cols} exceeds 16 cells"
        )));
    }
    let mut shapes = BTreeSet::new();
    for mask in 1u32..1 << area {
        let cells = (0..area)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| Cell::new(b as i32 / cols, b as i32 % cols));
        if let Ok(tile) = Tile::new(cells) {
            shapes.insert(tile);
        }
    }
    Ok(shapes.into_iter().collect())
}

/// Runs the search.  Each emitted gadget has already passed [`verify_gadget`]
/// under the closure the search implies.
pub fn discover_gadgets(search: &GadgetSearch) -> Result<Vec<Gadget>, GadgetError> {
    if search.atom_signatures.iter().all(Option::is_none) {
        return Err(GadgetError::NoSignatures);
    }
    if search.d == 0 {
        return Err(GadgetError::BadBlockSide);
    }
    let candidates: Vec<TileSet> = match &search.tiles {
        Some(ts) => vec![ts.clone()],
        None => shapes_in_box(search.shape_box.0, search.shape_box.1)?
            .into_iter()
            .map(|t| TileSet::new(vec![t]).expect("single tile"))
            .collect(),
    };

    let mut found = Vec::new();
    for ts in candidates {
        let h = ts.len();
        let want = search.d * h;
        let mut reqs: [Option<&SignatureReq>; 4] = [None, None, None, None];
        let mut seen: Vec<&SignatureReq> = Vec::new();
        for atom in Atom::ALL {
            if let Some(req) = &search.atom_signatures[atom.index()] {
                if req.rows.len() != want || req.cols.len() != want {
                    return Err(GadgetError::BadSignatureLength {
                        atom,
                        len: req.rows.len().max(req.cols.len()),
                        want,
                    });
                }
                if seen.contains(&req) {
                    return Err(GadgetError::DuplicateSignatures);
                }
                seen.push(req);
                reqs[atom.index()] = Some(req);
            }
        }
        if let Some(gadget) = try_candidate(search, &ts, &reqs)? {
            found.push(gadget);
        }
    }
    Ok(found)
}

fn try_candidate(
    search: &GadgetSearch,
    ts: &TileSet,
    reqs: &[Option<&SignatureReq>; 4],
) -> Result<Option<Gadget>, GadgetError> {
    let d = search.d;
    let universe_mode = search.tiles_per_block.is_some() || search.constraint.is_some();

    let mut admissible: Vec<Tiling> = Vec::new();
    let mut atom_map: [Vec<usize>; 4] = Default::default();

    if universe_mode {
        let constraint = |t: &Tiling| match search.constraint {
            Some(StructuralConstraint::FirstRowColCovering) => {
                let covered = t.covered_set();
                let count_ok = search.tiles_per_block.map_or(true, |k| t.placements().len() == k);
                count_ok
                    && covered.contains(&Cell::new(0, 0))
                    && covered.iter().all(|c| c.row == 0 || c.col == 0)
            }
            None => t.placements().len() == search.tiles_per_block.expect("universe mode"),
        };
        // Abort at the first universe tiling matching no required signature:
        // such a tiling disqualifies the candidate.
        let mut matched: Vec<(Atom, Tiling)> = Vec::new();
        let completed = match visit_block_tilings(
            d,
            ts,
            search.tiles_per_block,
            constraint,
            search.node_limit,
            |t| {
                let sig = BlockSignature::of_valid(&t);
                let atom = Atom::ALL.iter().copied().find(|a| {
                    reqs[a.index()].is_some_and(|req| req.rows == sig.rows && req.cols == sig.cols)
                });
                match atom {
                    Some(a) => {
                        matched.push((a, t));
                        true
                    }
                    None => false,
                }
            },
        ) {
            Ok(done) => done,
            // A candidate blowing the per-candidate budget is just not a match.
            Err(SolverError::LimitExceeded) => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        if !completed {
            return Ok(None);
        }
        matched.sort_by(|a, b| a.1.placements().cmp(b.1.placements()));
        for (atom, t) in matched {
            atom_map[atom.index()].push(admissible.len());
            admissible.push(t);
        }
    } else {
        let cfg = SolverConfig { node_limit: search.node_limit, ..SolverConfig::default() };
        for atom in Atom::ALL {
            let Some(req) = reqs[atom.index()] else { continue };
            let h = ts.len();
            let to_matrix = |flat: &[u64]| {
                ProjMatrix::from_lines(flat.chunks(h).map(<[u64]>::to_vec).collect(), h)
                    .expect("length checked")
            };
            let inst = Instance::new(
                ts.clone(),
                ProjectionPair {
                    kind: ProjectionKind::Center,
                    r: to_matrix(&req.rows),
                    c: to_matrix(&req.cols),
                },
            );
            let result = match enumerate(&inst, &cfg) {
                Ok(e) if e.complete => e.tilings,
                Ok(_) => return Ok(None),
                Err(SolverError::LimitExceeded) => return Ok(None),
                Err(e) => return Err(e.into()),
            };
            for t in result {
                atom_map[atom.index()].push(admissible.len());
                admissible.push(t);
            }
        }
    }

    // Every requested atom must be realized.
    for atom in Atom::ALL {
        if reqs[atom.index()].is_some() && atom_map[atom.index()].is_empty() {
            return Ok(None);
        }
    }
    if admissible.is_empty() {
        return Ok(None);
    }

    let name = format!("discovered-{d}x{d}");
    let gadget = match Gadget::new(name, d, ts.clone(), admissible, atom_map) {
        Ok(g) => g,
        // Structural rejection (e.g. inconsistent multi-tiling atom) just
        // disqualifies the candidate.
        Err(_) => return Ok(None),
    };

    let spec = search.implied_closure();
    match verify_gadget(&gadget, &spec) {
        Ok(report) if report.passed() => Ok(Some(gadget)),
        Ok(_) => Ok(None),
        Err(GadgetError::Solver(SolverError::LimitExceeded)) => Ok(None),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::center_projections;

    fn dominoes_tiles() -> TileSet {
        TileSet::new(vec![Tile::rect(1, 2), Tile::rect(2, 1)]).unwrap()
    }

    fn block(d: usize, ts: &TileSet, placements: &[(i32, i32, usize)]) -> Tiling {
        Tiling::new(
            d,
            d,
            ts.clone(),
            placements.iter().map(|&(i, j, k)| Placement::new(i, j, k)).collect(),
        )
    }

    /// The 3x3 domino gadget in its canonical order (sorted placements):
    /// index 0 = clear, 1 = red, 2 = yellow, 3 = blue.
    pub(crate) fn dominoes_gadget() -> Gadget {
        let ts = dominoes_tiles();
        let admissible = vec![
            block(3, &ts, &[(0, 0, 0)]),
            block(3, &ts, &[(0, 0, 0), (1, 0, 1)]),
            block(3, &ts, &[(0, 0, 1)]),
            block(3, &ts, &[(0, 0, 1), (0, 1, 0)]),
        ];
        let atom_map = [vec![2], vec![3], vec![1], vec![0]];
        Gadget::new("dominoes3", 3, ts, admissible, atom_map).unwrap()
    }

    fn dominoes_closure() -> ClosureSpec {
        ClosureSpec { kind: ClosureKind::FirstRowColCovering, bad_tiling: None }
    }

    #[test]
    fn corner_constrained_enumeration_finds_exactly_four() {
        let ts = dominoes_tiles();
        let tilings = enumerate_block_tilings(
            3,
            &ts,
            None,
            |t| {
                let covered = t.covered_set();
                covered.contains(&Cell::new(0, 0))
                    && covered.iter().all(|c| c.row == 0 || c.col == 0)
            },
            0,
        )
        .unwrap();
        assert_eq!(tilings.len(), 4);
        let expect = dominoes_gadget();
        assert_eq!(tilings, expect.admissible());
    }

    #[test]
    fn dominoes_gadget_verifies() {
        let g = dominoes_gadget();
        let report = verify_gadget(&g, &dominoes_closure()).unwrap();
        assert!(report.passed(), "{report}");
        assert!(!report.independence.plain);
        assert!(report.independence.affine);
    }

    #[test]
    fn removed_tiling_is_reported_missing_as_extra() {
        let g = dominoes_gadget();
        let mut admissible = g.admissible().to_vec();
        let dropped = admissible.pop().unwrap();
        // Dropped tiling was blue (index 3).
        let atom_map = [vec![2], vec![], vec![1], vec![0]];
        let smaller =
            Gadget::new("dominoes3-short", 3, g.tileset().clone(), admissible, atom_map).unwrap();
        let report = verify_gadget(&smaller, &dominoes_closure()).unwrap();
        assert!(!report.passed());
        assert!(report.missing.is_empty());
        assert_eq!(report.extra, vec![dropped]);
    }

    #[test]
    fn construction_rejects_bad_maps() {
        let g = dominoes_gadget();
        let ts = g.tileset().clone();
        let admissible = g.admissible().to_vec();
        assert!(matches!(
            Gadget::new("x", 3, ts.clone(), admissible.clone(), [vec![0, 1], vec![2], vec![3], vec![]]),
            Err(GadgetError::InconsistentAtom { atom: Atom::Yellow })
        ));
        assert!(matches!(
            Gadget::new("x", 3, ts.clone(), admissible.clone(), [vec![0], vec![1], vec![2], vec![]]),
            Err(GadgetError::UnevenAtomCover { index: 3, count: 0 })
        ));
        assert!(matches!(
            Gadget::new("x", 3, ts.clone(), admissible.clone(), [vec![0], vec![1], vec![2], vec![9]]),
            Err(GadgetError::BadAtomIndex { index: 9 })
        ));
        let overlap = block(3, &ts, &[(0, 0, 0), (0, 1, 0)]);
        assert!(matches!(
            Gadget::new("x", 3, ts, vec![overlap], [vec![0], vec![], vec![], vec![]]),
            Err(GadgetError::InvalidTiling { index: 0, .. })
        ));
    }

    #[test]
    fn identical_signatures_fail_both_independence_checks() {
        // Four single-cell tilings with identical projections: diagonal
        // permutation patterns of three cells in a 3x3 block.
        let ts = TileSet::new(vec![Tile::cell()]).unwrap();
        let admissible = vec![
            block(3, &ts, &[(0, 0, 0), (1, 1, 0), (2, 2, 0)]),
            block(3, &ts, &[(0, 0, 0), (1, 2, 0), (2, 1, 0)]),
            block(3, &ts, &[(0, 1, 0), (1, 0, 0), (2, 2, 0)]),
            block(3, &ts, &[(0, 1, 0), (1, 2, 0), (2, 0, 0)]),
        ];
        let g = Gadget::new("permutations", 3, ts, admissible, [vec![0], vec![1], vec![2], vec![3]])
            .unwrap();
        let ind = verify_independence(&g);
        assert!(!ind.plain);
        assert!(!ind.affine);
    }

    #[test]
    fn signatures_match_recomputed_projections() {
        let g = dominoes_gadget();
        for (t, sig) in g.admissible().iter().zip(block_signatures(&g)) {
            let pair = center_projections(t).unwrap();
            let h = g.tileset().len();
            for i in 0..g.d() {
                for k in 0..h {
                    assert_eq!(sig.rows[i * h + k], pair.r[(i, k)]);
                    assert_eq!(sig.cols[i * h + k], pair.c[(i, k)]);
                }
            }
            assert_eq!(*sig.extended_rows(1).last().unwrap(), 1);
            assert_eq!(*sig.extended_cols(1).last().unwrap(), 1);
        }
    }

    #[test]
    fn residue_counts_centers_modulo_d() {
        let ts = TileSet::new(vec![Tile::cell()]).unwrap();
        let empty = Tiling::new(12, 12, ts.clone(), vec![]);
        assert_eq!(center_residue(&empty, 6).total(), 0);

        let one = Tiling::new(12, 12, ts, vec![Placement::new(7, 9, 0)]);
        let m = center_residue(&one, 6);
        assert_eq!(m[(1, 3)], 1);
        assert_eq!(m.total(), 1);
    }

    #[test]
    fn shape_search_box_is_bounded() {
        assert!(matches!(shapes_in_box(5, 4), Err(GadgetError::SearchSpaceTooLarge(_))));
        let dominoish = shapes_in_box(1, 2).unwrap();
        // In a 1x2 box: the single cell and the horizontal domino.
        assert_eq!(dominoish, vec![Tile::cell(), Tile::rect(1, 2)]);
    }

    #[test]
    fn discovery_reconstructs_the_dominoes_gadget() {
        let expect = dominoes_gadget();
        let sigs = block_signatures(&expect);
        let mut atom_signatures: [Option<SignatureReq>; 4] = Default::default();
        for atom in Atom::ALL {
            let idx = expect.atom_map()[atom.index()][0];
            atom_signatures[atom.index()] =
                Some(SignatureReq { rows: sigs[idx].rows.clone(), cols: sigs[idx].cols.clone() });
        }
        let search = GadgetSearch {
            d: 3,
            tiles: Some(expect.tileset().clone()),
            shape_box: (0, 0),
            tiles_per_block: None,
            constraint: Some(StructuralConstraint::FirstRowColCovering),
            atom_signatures,
            node_limit: 0,
        };
        let found = discover_gadgets(&search).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].admissible(), expect.admissible());
        assert_eq!(found[0].atom_map(), expect.atom_map());
    }

    #[test]
    fn discovery_rejects_unrealizable_signatures() {
        // A row distribution summing to 3 tiles cannot arise from 2-tile
        // tilings.
        let ts = TileSet::new(vec![Tile::cell()]).unwrap();
        let req = |rows: Vec<u64>, cols: Vec<u64>| Some(SignatureReq { rows, cols });
        let search = GadgetSearch {
            d: 2,
            tiles: Some(ts),
            shape_box: (0, 0),
            tiles_per_block: Some(2),
            constraint: None,
            atom_signatures: [req(vec![2, 1], vec![2, 1]), None, None, None],
            node_limit: 0,
        };
        assert_eq!(discover_gadgets(&search).unwrap(), vec![]);
    }
}
