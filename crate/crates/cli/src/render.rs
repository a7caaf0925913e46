//! Text and SVG drawings of tilings.
//!
//! ASCII: one character per cell, `.` for uncovered, a per-type letter for
//! covered cells, with each placement's center cell uppercased.  SVG: one
//! rect per grid cell colored by covering type, plus a circle on every
//! center.

use std::fmt::Write;

use tomotile::Tiling;

const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#76b7b2", "#edc949", "#9c755f",
];

const EMPTY_FILL: &str = "#f4f4f4";

fn glyph(kind: usize) -> char {
    (b'a' + (kind % 26) as u8) as char
}

/// Which placement covers each cell, as (type index, is center) per cell.
fn owners(tiling: &Tiling) -> Vec<Option<(usize, bool)>> {
    let (rows, cols) = (tiling.rows(), tiling.cols());
    let mut owners = vec![None; rows * cols];
    for p in tiling.placements() {
        let tile = &tiling.tileset().tiles()[p.tile];
        for cell in tile.cells() {
            let (i, j) = ((p.row + cell.row) as usize, (p.col + cell.col) as usize);
            let is_center = cell.row == 0 && cell.col == 0;
            owners[i * cols + j] = Some((p.tile, is_center));
        }
    }
    owners
}

pub fn ascii(tiling: &Tiling) -> String {
    let (rows, cols) = (tiling.rows(), tiling.cols());
    let owners = owners(tiling);
    let mut out = String::with_capacity(rows * (cols + 1));
    for i in 0..rows {
        for j in 0..cols {
            out.push(match owners[i * cols + j] {
                Some((kind, true)) => glyph(kind).to_ascii_uppercase(),
                Some((kind, false)) => glyph(kind),
                None => '.',
            });
        }
        out.push('\n');
    }
    out
}

pub fn svg(tiling: &Tiling, cell: u32) -> String {
    let (rows, cols) = (tiling.rows(), tiling.cols());
    let owners = owners(tiling);
    let (width, height) = (cols as u32 * cell, rows as u32 * cell);
    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">"
    )
    .unwrap();
    for i in 0..rows {
        for j in 0..cols {
            let fill = match owners[i * cols + j] {
                Some((kind, _)) => PALETTE[kind % PALETTE.len()],
                None => EMPTY_FILL,
            };
            writeln!(
                out,
                "  <rect x=\"{}\" y=\"{}\" width=\"{cell}\" height=\"{cell}\" fill=\"{fill}\" \
                 stroke=\"#333333\" stroke-width=\"1\"/>",
                j as u32 * cell,
                i as u32 * cell,
            )
            .unwrap();
        }
    }
    for p in tiling.placements() {
        writeln!(
            out,
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#ffffff\" stroke=\"#333333\" \
             stroke-width=\"1\"/>",
            p.col as u32 * cell + cell / 2,
            p.row as u32 * cell + cell / 2,
            cell / 5,
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
