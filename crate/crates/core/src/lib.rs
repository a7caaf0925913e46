//! Reconstruction and analysis of polyomino tilings from line projections.
//!
//! A *tiling* places non-overlapping translated copies of polyomino *types*
//! on a finite grid (cells may stay empty).  Its *projections* count, per
//! grid row and column and per type, either the tile centers on that line or
//! the covered cells on that line.  This crate answers the inverse question
//! — which tilings have given projections? — and provides the machinery
//! that transfers hardness between tile sets: exact search, the quadratic
//! single-cell special case, block gadgets, and a projection-preserving
//! reduction from 4-type single-cell instances to any tile set admitting a
//! verified gadget.

pub mod builtin;
pub mod format;
pub mod gadget;
pub mod gen;
pub mod linalg;
pub mod poly;
pub mod projection;
pub mod reduce;
pub mod solver;
pub mod tile;
pub mod tiling;

pub use builtin::{builtin_fixture, builtin_gadget, builtin_names, named_tileset, tileset_names, verified_builtin};
pub use format::{
    from_json, to_canonical_json, AtomGridFile, AtomInstanceFile, FormatError, GadgetFile,
    InstanceFile, SearchFile, TilingFile,
};
pub use gadget::{
    block_signatures, center_residue, discover_gadgets, enumerate_block_tilings, shapes_in_box,
    verify_gadget, verify_independence, Atom, BlockSignature, ClosureKind, ClosureSpec, Gadget,
    GadgetError, GadgetReport, GadgetSearch, Independence, ResidueMatrix, SignatureReq,
    StructuralConstraint, VerifiedGadget,
};
pub use gen::{random_atom_grid, random_standard_atoms, random_tiling, rng_from_seed};
pub use poly::{bar_solve, ryser_feasible, ryser_solve, BarError, PolyError, RyserSolve};
pub use projection::{
    add_clear_tile, cell_projections, center_projections, convert_projections, Axis,
    ClearTileError, ConvertError, Instance, ProjMatrix, ProjectionError, ProjectionKind,
    ProjectionPair,
};
pub use reduce::{
    decode_block_row, negative_instance, pull_back, push_forward, reduce_instance, AtomGrid,
    AtomInstance, AtomTotals, BlockDefect, Decode, ReduceError,
};
pub use solver::{
    check, count_all_tilings, enumerate, fact1_deduce, solve, Enumeration, Fact1Deduction,
    Fact1Error, SolveOutcome, SolveStatus, SolverConfig, SolverError, UnsatReason,
};
pub use tile::{Cell, Tile, TileError, TileSet};
pub use tiling::{Placement, Tiling, TilingViolation};
