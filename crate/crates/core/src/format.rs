//! JSON wire formats for instances, tilings, gadgets, atom instances and
//! grids, and gadget searches, plus the canonical serializer used for
//! fixtures and golden files.
//!
//! Conventions shared by all formats: grids are square (side `n`, or `d`
//! for gadget blocks); tiles are listed as center-normalized cell lists;
//! placements are `[row, col, type]` with the type index **1-based** in
//! files (0-based in the library); a gadget's atom map likewise references
//! admissible tilings by 1-based index.  Canonical serialization sorts
//! placement lists and keeps leaf arrays on one line, so fixtures diff
//! cleanly.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gadget::{
    Atom, ClosureKind, ClosureSpec, Gadget, GadgetError, GadgetSearch, SignatureReq,
    StructuralConstraint,
};
use crate::projection::{Instance, ProjMatrix, ProjectionKind, ProjectionPair};
use crate::reduce::{AtomGrid, AtomInstance, ReduceError};
use crate::tile::{Cell, Tile, TileError, TileSet};
use crate::tiling::{Placement, Tiling};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("tile {index}: {source}")]
    Tile { index: usize, source: TileError },
    #[error("tile {index} is not center-normalized")]
    NotNormalized { index: usize },
    #[error("tile type {value} out of range (types are 1-based, {count} available)")]
    BadTypeIndex { value: usize, count: usize },
    #[error("{axis} projections have {have} lines, expected {want}")]
    BadProjectionLines { axis: &'static str, have: usize, want: usize },
    #[error("{axis} projection line {line} has {have} counts, expected {want}")]
    BadProjectionWidth { axis: &'static str, line: usize, have: usize, want: usize },
    #[error("only square grids are representable, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("admissible index {value} out of range (1-based, {count} tilings)")]
    BadAdmissibleIndex { value: usize, count: usize },
    #[error("atom row {row} has {have} letters, expected {want}")]
    BadGridRow { row: usize, have: usize, want: usize },
    #[error("grid has {have} atom rows, expected {want}")]
    BadGridHeight { have: usize, want: usize },
    #[error("unknown atom letter {0:?} (use Y, B, R, C)")]
    BadAtomLetter(char),
    #[error("unknown structural constraint {0:?}")]
    BadConstraintName(String),
    #[error("search needs either a tile list or a shape box")]
    MissingShapeSource,
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
}

/// Parses any wire struct from JSON text.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    Ok(serde_json::from_str(text)?)
}

/// Canonical JSON: objects one key per line, arrays inline while they stay
/// short and scalar-ish, trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("wire structs serialize");
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    out.push('\n');
    out
}

const INLINE_LIMIT: usize = 72;

fn write_value(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    match v {
        Value::Array(items) => {
            let compact = v.to_string();
            let contains_object = items.iter().any(|i| i.is_object());
            if items.is_empty() || (!contains_object && compact.len() <= INLINE_LIMIT) {
                out.push_str(&compact);
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&"  ".repeat(indent + 1));
                write_value(item, indent + 1, out);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&"  ".repeat(indent + 1));
                out.push_str(&serde_json::Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(item, indent + 1, out);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn tiles_to_tileset(tiles: &[Vec<Cell>]) -> Result<TileSet, FormatError> {
    let mut parsed = Vec::with_capacity(tiles.len());
    for (index, cells) in tiles.iter().enumerate() {
        let tile =
            Tile::new(cells.iter().copied()).map_err(|source| FormatError::Tile { index, source })?;
        let mut listed = cells.clone();
        listed.sort();
        listed.dedup();
        if tile.cells() != listed.as_slice() {
            return Err(FormatError::NotNormalized { index });
        }
        parsed.push(tile);
    }
    TileSet::new(parsed).map_err(|source| FormatError::Tile { index: 0, source })
}

fn tileset_to_tiles(ts: &TileSet) -> Vec<Vec<Cell>> {
    ts.iter().map(|t| t.cells().to_vec()).collect()
}

fn parse_matrix(
    axis: &'static str,
    lines: &[Vec<u64>],
    want_lines: usize,
    types: usize,
) -> Result<ProjMatrix, FormatError> {
    if lines.len() != want_lines {
        return Err(FormatError::BadProjectionLines { axis, have: lines.len(), want: want_lines });
    }
    for (line, row) in lines.iter().enumerate() {
        if row.len() != types {
            return Err(FormatError::BadProjectionWidth {
                axis,
                line,
                have: row.len(),
                want: types,
            });
        }
    }
    Ok(ProjMatrix::from_lines(lines.to_vec(), types).expect("shape checked"))
}

fn parse_placements(
    raw: &[(i32, i32, usize)],
    types: usize,
) -> Result<Vec<Placement>, FormatError> {
    raw.iter()
        .map(|&(i, j, k)| {
            if k == 0 || k > types {
                return Err(FormatError::BadTypeIndex { value: k, count: types });
            }
            Ok(Placement::new(i, j, k - 1))
        })
        .collect()
}

fn placements_to_raw(placements: &[Placement]) -> Vec<(i32, i32, usize)> {
    placements.iter().map(|p| (p.row, p.col, p.tile + 1)).collect()
}

/// Instance file: grid side, tile set, projection kind, and per-line
/// per-type counts.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct InstanceFile {
    pub n: usize,
    pub tiles: Vec<Vec<Cell>>,
    pub kind: ProjectionKind,
    pub r: Vec<Vec<u64>>,
    pub c: Vec<Vec<u64>>,
}

impl InstanceFile {
    pub fn to_instance(&self) -> Result<Instance, FormatError> {
        let ts = tiles_to_tileset(&self.tiles)?;
        let h = ts.len();
        let r = parse_matrix("row", &self.r, self.n, h)?;
        let c = parse_matrix("column", &self.c, self.n, h)?;
        Ok(Instance::new(ts, ProjectionPair { kind: self.kind, r, c }))
    }

    pub fn from_instance(inst: &Instance) -> Result<InstanceFile, FormatError> {
        let (rows, cols) = (inst.grid_rows(), inst.grid_cols());
        if rows != cols {
            return Err(FormatError::NonSquare { rows, cols });
        }
        Ok(InstanceFile {
            n: rows,
            tiles: tileset_to_tiles(&inst.tileset),
            kind: inst.projections.kind,
            r: inst.projections.r.to_lines(),
            c: inst.projections.c.to_lines(),
        })
    }
}

/// Tiling file: grid side, tile set, and `[row, col, type]` placements with
/// 1-based types.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TilingFile {
    pub n: usize,
    pub tiles: Vec<Vec<Cell>>,
    pub placements: Vec<(i32, i32, usize)>,
}

impl TilingFile {
    /// Structural parse only; overlap and bounds are the caller's
    /// [`Tiling::validate`] call.
    pub fn to_tiling(&self) -> Result<Tiling, FormatError> {
        let ts = tiles_to_tileset(&self.tiles)?;
        let placements = parse_placements(&self.placements, ts.len())?;
        Ok(Tiling::new(self.n, self.n, ts, placements))
    }

    pub fn from_tiling(t: &Tiling) -> Result<TilingFile, FormatError> {
        if t.rows() != t.cols() {
            return Err(FormatError::NonSquare { rows: t.rows(), cols: t.cols() });
        }
        Ok(TilingFile {
            n: t.rows(),
            tiles: tileset_to_tiles(t.tileset()),
            placements: placements_to_raw(t.placements()),
        })
    }
}

/// A gadget's closure rule in file form.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosureKindFile {
    BySignature,
    ExactTiles { tiles: usize },
    FirstRowColCovering,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClosureFile {
    #[serde(flatten)]
    pub kind: ClosureKindFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bad_tiling: Option<(Atom, Atom)>,
}

impl ClosureFile {
    pub fn to_spec(&self) -> ClosureSpec {
        ClosureSpec {
            kind: match self.kind {
                ClosureKindFile::BySignature => ClosureKind::BySignature,
                ClosureKindFile::ExactTiles { tiles } => ClosureKind::ExactTiles(tiles),
                ClosureKindFile::FirstRowColCovering => ClosureKind::FirstRowColCovering,
            },
            bad_tiling: self.bad_tiling,
        }
    }

    pub fn from_spec(spec: &ClosureSpec) -> ClosureFile {
        ClosureFile {
            kind: match spec.kind {
                ClosureKind::BySignature => ClosureKindFile::BySignature,
                ClosureKind::ExactTiles(tiles) => ClosureKindFile::ExactTiles { tiles },
                ClosureKind::FirstRowColCovering => ClosureKindFile::FirstRowColCovering,
            },
            bad_tiling: spec.bad_tiling,
        }
    }
}

/// Atom-to-admissible-tiling map with 1-based indices.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct AtomMapFile {
    #[serde(default)]
    pub yellow: Vec<usize>,
    #[serde(default)]
    pub blue: Vec<usize>,
    #[serde(default)]
    pub red: Vec<usize>,
    #[serde(default)]
    pub clear: Vec<usize>,
}

/// Gadget file: block side, tile set, admissible block tilings, atom map,
/// and the closure rule it is verified under.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GadgetFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub d: usize,
    pub tiles: Vec<Vec<Cell>>,
    pub admissible: Vec<Vec<(i32, i32, usize)>>,
    pub atom_map: AtomMapFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closure: Option<ClosureFile>,
}

impl GadgetFile {
    /// Builds the gadget (structural checks included) and its closure spec;
    /// a missing closure defaults to per-atom signature enumeration.
    pub fn to_gadget(&self, fallback_name: &str) -> Result<(Gadget, ClosureSpec), FormatError> {
        let ts = tiles_to_tileset(&self.tiles)?;
        let admissible: Vec<Tiling> = self
            .admissible
            .iter()
            .map(|raw| {
                parse_placements(raw, ts.len())
                    .map(|ps| Tiling::new(self.d, self.d, ts.clone(), ps))
            })
            .collect::<Result<_, _>>()?;
        let lists = [&self.atom_map.yellow, &self.atom_map.blue, &self.atom_map.red, &self.atom_map.clear];
        let mut atom_map: [Vec<usize>; 4] = Default::default();
        for (slot, list) in atom_map.iter_mut().zip(lists) {
            for &value in list {
                if value == 0 || value > admissible.len() {
                    return Err(FormatError::BadAdmissibleIndex {
                        value,
                        count: admissible.len(),
                    });
                }
                slot.push(value - 1);
            }
        }
        let name = self.name.clone().unwrap_or_else(|| fallback_name.to_string());
        let gadget = Gadget::new(name, self.d, ts, admissible, atom_map)?;
        let spec = self.closure.as_ref().map_or_else(ClosureSpec::by_signature, ClosureFile::to_spec);
        Ok((gadget, spec))
    }

    pub fn from_gadget(g: &Gadget, closure: Option<&ClosureSpec>) -> GadgetFile {
        let map = g.atom_map();
        let up = |list: &[usize]| list.iter().map(|&i| i + 1).collect();
        GadgetFile {
            name: Some(g.name().to_string()),
            d: g.d(),
            tiles: tileset_to_tiles(g.tileset()),
            admissible: g.admissible().iter().map(|t| placements_to_raw(t.placements())).collect(),
            atom_map: AtomMapFile {
                yellow: up(&map[0]),
                blue: up(&map[1]),
                red: up(&map[2]),
                clear: up(&map[3]),
            },
            closure: closure.map(ClosureFile::from_spec),
        }
    }
}

/// Atom instance file: four counts (yellow, blue, red, clear) per line.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AtomInstanceFile {
    pub n: usize,
    pub r: Vec<Vec<u64>>,
    pub c: Vec<Vec<u64>>,
}

impl AtomInstanceFile {
    pub fn to_atoms(&self) -> Result<AtomInstance, FormatError> {
        let convert = |axis: &'static str, lines: &[Vec<u64>]| -> Result<Vec<[u64; 4]>, FormatError> {
            lines
                .iter()
                .enumerate()
                .map(|(line, row)| {
                    <[u64; 4]>::try_from(row.as_slice()).map_err(|_| {
                        FormatError::BadProjectionWidth { axis, line, have: row.len(), want: 4 }
                    })
                })
                .collect()
        };
        Ok(AtomInstance::new(self.n, convert("row", &self.r)?, convert("column", &self.c)?)?)
    }

    pub fn from_atoms(a: &AtomInstance) -> AtomInstanceFile {
        AtomInstanceFile {
            n: a.n(),
            r: a.r().iter().map(|row| row.to_vec()).collect(),
            c: a.c().iter().map(|col| col.to_vec()).collect(),
        }
    }
}

/// Atom grid file: one string of Y/B/R/C letters per row.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AtomGridFile {
    pub n: usize,
    pub atoms: Vec<String>,
}

impl AtomGridFile {
    pub fn to_grid(&self) -> Result<AtomGrid, FormatError> {
        if self.atoms.len() != self.n {
            return Err(FormatError::BadGridHeight { have: self.atoms.len(), want: self.n });
        }
        let mut atoms = Vec::with_capacity(self.n * self.n);
        for (row, line) in self.atoms.iter().enumerate() {
            if line.chars().count() != self.n {
                return Err(FormatError::BadGridRow {
                    row,
                    have: line.chars().count(),
                    want: self.n,
                });
            }
            for ch in line.chars() {
                atoms.push(match ch {
                    'Y' => Atom::Yellow,
                    'B' => Atom::Blue,
                    'R' => Atom::Red,
                    'C' => Atom::Clear,
                    other => return Err(FormatError::BadAtomLetter(other)),
                });
            }
        }
        Ok(AtomGrid::new(self.n, atoms)?)
    }

    pub fn from_grid(grid: &AtomGrid) -> AtomGridFile {
        let letter = |a: Atom| ['Y', 'B', 'R', 'C'][a.index()];
        let atoms = (0..grid.n())
            .map(|i| (0..grid.n()).map(|j| letter(grid.get(i, j))).collect())
            .collect();
        AtomGridFile { n: grid.n(), atoms }
    }
}

/// One atom's required signature in a search file.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SignatureReqFile {
    pub rows: Vec<u64>,
    pub cols: Vec<u64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct AtomSignaturesFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub yellow: Option<SignatureReqFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blue: Option<SignatureReqFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub red: Option<SignatureReqFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clear: Option<SignatureReqFile>,
}

/// Gadget search file: block side, tile source (explicit list or shape
/// box), optional structural restrictions, and per-atom signatures.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SearchFile {
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tiles: Option<Vec<Vec<Cell>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape_box: Option<(i32, i32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tiles_per_block: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<String>,
    pub signatures: AtomSignaturesFile,
    #[serde(default)]
    pub node_limit: u64,
}

impl SearchFile {
    pub fn to_search(&self) -> Result<GadgetSearch, FormatError> {
        let tiles = match &self.tiles {
            Some(tiles) => Some(tiles_to_tileset(tiles)?),
            None => None,
        };
        if tiles.is_none() && self.shape_box.is_none() {
            return Err(FormatError::MissingShapeSource);
        }
        let constraint = match self.constraint.as_deref() {
            None => None,
            Some("first_row_col_covering") => Some(StructuralConstraint::FirstRowColCovering),
            Some(other) => return Err(FormatError::BadConstraintName(other.to_string())),
        };
        let req = |file: &Option<SignatureReqFile>| {
            file.as_ref().map(|s| SignatureReq { rows: s.rows.clone(), cols: s.cols.clone() })
        };
        Ok(GadgetSearch {
            d: self.d,
            tiles,
            shape_box: self.shape_box.unwrap_or((0, 0)),
            tiles_per_block: self.tiles_per_block,
            constraint,
            atom_signatures: [
                req(&self.signatures.yellow),
                req(&self.signatures.blue),
                req(&self.signatures.red),
                req(&self.signatures.clear),
            ],
            node_limit: self.node_limit,
        })
    }
}
