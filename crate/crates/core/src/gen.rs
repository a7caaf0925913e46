//! Seeded random generation of tilings, atom grids, and atom instances —
//! deterministic per seed, for test corpora and the instance generator.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::gadget::Atom;
use crate::reduce::{AtomGrid, AtomInstance};
use crate::solver::Geom;
use crate::tile::TileSet;
use crate::tiling::{Placement, Tiling};

/// The stream-cipher generator all seeded APIs use.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random valid tiling: shuffles all in-grid placements and greedily keeps
/// each one that fits on free cells, accepting with probability `fill`.
/// `fill = 1.0` packs densely; lower values leave more empty cells.
pub fn random_tiling<R: Rng>(
    rows: usize,
    cols: usize,
    ts: &TileSet,
    fill: f64,
    rng: &mut R,
) -> Tiling {
    let geoms: Vec<Geom> = ts.iter().map(Geom::new).collect();
    let mut candidates = Vec::new();
    for (k, geom) in geoms.iter().enumerate() {
        for i in 0..rows as i32 {
            for j in 0..cols as i32 {
                if geom.fits_grid(i, j, rows, cols) {
                    candidates.push(Placement::new(i, j, k));
                }
            }
        }
    }
    candidates.shuffle(rng);

    let mut occ = vec![false; rows * cols];
    let mut placements = Vec::new();
    for p in candidates {
        if fill < 1.0 && !rng.random_bool(fill) {
            continue;
        }
        let geom = &geoms[p.tile];
        if geom.fits_free(p.row, p.col, cols, &occ) {
            geom.mark(p.row, p.col, cols, &mut occ, true);
            placements.push(p);
        }
    }
    Tiling::new(rows, cols, ts.clone(), placements)
}

/// A uniform random atom per cell.
pub fn random_atom_grid<R: Rng>(n: usize, rng: &mut R) -> AtomGrid {
    let atoms = (0..n * n)
        .map(|_| Atom::from_index(rng.random_range(0..4)).expect("index in range"))
        .collect();
    AtomGrid::new(n, atoms).expect("n*n atoms")
}

/// A uniform random composition of `n` into four non-negative parts.
fn random_composition<R: Rng>(n: u64, rng: &mut R) -> [u64; 4] {
    let mut cuts = [
        rng.random_range(0..=n),
        rng.random_range(0..=n),
        rng.random_range(0..=n),
    ];
    cuts.sort_unstable();
    [cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], n - cuts[2]]
}

/// A random standard atom instance: every line carries `n` atoms, but the
/// row and column prescriptions are drawn independently, so the instance
/// may well be unsatisfiable.
pub fn random_standard_atoms<R: Rng>(n: usize, rng: &mut R) -> AtomInstance {
    let lines = |rng: &mut R| (0..n).map(|_| random_composition(n as u64, rng)).collect();
    let r = lines(rng);
    let c = lines(rng);
    AtomInstance::new(n, r, c).expect("n lines each")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::named_tileset;

    #[test]
    fn tilings_are_valid_and_deterministic() {
        let ts = named_tileset("dominoes").unwrap();
        let a = random_tiling(6, 6, &ts, 0.8, &mut rng_from_seed(7));
        let b = random_tiling(6, 6, &ts, 0.8, &mut rng_from_seed(7));
        assert_eq!(a.placements(), b.placements());
        assert!(a.validate().is_ok());
        assert!(!a.placements().is_empty());

        let c = random_tiling(6, 6, &ts, 0.8, &mut rng_from_seed(8));
        assert_ne!(a.placements(), c.placements());
    }

    #[test]
    fn dense_fill_leaves_no_room_for_cells() {
        let ts = named_tileset("cell").unwrap();
        let t = random_tiling(4, 4, &ts, 1.0, &mut rng_from_seed(1));
        assert_eq!(t.placements().len(), 16);
    }

    #[test]
    fn atom_grids_project_to_standard_instances() {
        let grid = random_atom_grid(5, &mut rng_from_seed(3));
        let a = grid.projections();
        assert!(a.is_standard());
        assert!(a.is_balanced());
    }

    #[test]
    fn random_standard_instances_have_full_lines() {
        let mut rng = rng_from_seed(11);
        for _ in 0..50 {
            let a = random_standard_atoms(4, &mut rng);
            assert!(a.is_standard());
        }
    }

    #[test]
    fn compositions_cover_extremes() {
        let mut rng = rng_from_seed(2);
        let mut seen_zero_first = false;
        let mut seen_full_first = false;
        for _ in 0..200 {
            let parts = random_composition(3, &mut rng);
            assert_eq!(parts.iter().sum::<u64>(), 3);
            seen_zero_first |= parts[0] == 0;
            seen_full_first |= parts[0] == 3;
        }
        assert!(seen_zero_first && seen_full_first);
    }
}
