//! Shipped gadget fixtures and named tile sets.
//!
//! Each builtin gadget lives in a JSON fixture under `fixtures/`, embedded
//! at compile time and re-verified (closure enumeration, independence) on
//! every [`verified_builtin`] call — the fixtures are data, not trusted
//! code.

use crate::format::{from_json, GadgetFile};
use crate::gadget::{ClosureSpec, Gadget, GadgetError, VerifiedGadget};
use crate::tile::{Tile, TileSet};

const FIXTURES: [(&str, &str); 6] = [
    ("dominoes3", include_str!("../fixtures/dominoes3.json")),
    ("twosquares4", include_str!("../fixtures/twosquares4.json")),
    ("cellsquare4", include_str!("../fixtures/cellsquare4.json")),
    ("square4", include_str!("../fixtures/square4.json")),
    ("lshape6", include_str!("../fixtures/lshape6.json")),
    ("shape7", include_str!("../fixtures/shape7.json")),
];

/// Names of the shipped gadgets, in fixture order.
pub fn builtin_names() -> Vec<&'static str> {
    FIXTURES.iter().map(|&(name, _)| name).collect()
}

/// Raw fixture text for a builtin gadget.
pub fn builtin_fixture(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|&&(n, _)| n == name).map(|&(_, text)| text)
}

/// Parses a builtin gadget and its closure spec without verifying it.
pub fn builtin_gadget(name: &str) -> Option<(Gadget, ClosureSpec)> {
    let text = builtin_fixture(name)?;
    let file: GadgetFile = from_json(text).expect("shipped fixtures parse");
    Some(file.to_gadget(name).expect("shipped fixtures are structurally valid"))
}

/// The closure rule a builtin gadget is verified under.
pub fn builtin_closure(name: &str) -> Option<ClosureSpec> {
    builtin_gadget(name).map(|(_, spec)| spec)
}

/// Loads and fully verifies a builtin gadget.
pub fn verified_builtin(name: &str) -> Result<VerifiedGadget, GadgetError> {
    let (gadget, spec) =
        builtin_gadget(name).ok_or_else(|| GadgetError::UnknownBuiltin(name.to_string()))?;
    VerifiedGadget::verify(gadget, &spec)
}

/// Well-known tile sets by name: `cell`, `dominoes`, `square2`, `ltromino`,
/// `upentomino`.
pub fn named_tileset(name: &str) -> Option<TileSet> {
    let tiles = match name {
        "cell" => vec![Tile::cell()],
        "dominoes" => vec![Tile::rect(1, 2), Tile::rect(2, 1)],
        "square2" => vec![Tile::rect(2, 2)],
        "ltromino" => vec![Tile::from_coords(&[(0, 0), (1, 0), (1, 1)]).expect("valid tromino")],
        "upentomino" => vec![
            Tile::from_coords(&[(0, 0), (0, 2), (1, 0), (1, 1), (1, 2)]).expect("valid pentomino"),
        ],
        _ => return None,
    };
    Some(TileSet::new(tiles).expect("nonempty"))
}

pub fn tileset_names() -> Vec<&'static str> {
    vec!["cell", "dominoes", "square2", "ltromino", "upentomino"]
}
