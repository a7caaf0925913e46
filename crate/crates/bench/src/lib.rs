//! Deterministic input builders shared by the benchmarks.

use tomotile::projection::{center_projections, Instance};
use tomotile::reduce::AtomInstance;
use tomotile::{named_tileset, random_atom_grid, random_tiling, rng_from_seed};

/// A satisfiable center instance: the projections of a seeded random
/// dominoes tiling on an `n x n` grid.
pub fn projected_dominoes(n: usize, seed: u64) -> Instance {
    let ts = named_tileset("dominoes").unwrap();
    let tiling = random_tiling(n, n, &ts, 0.9, &mut rng_from_seed(seed));
    let pair = center_projections(&tiling).unwrap();
    Instance::new(ts, pair)
}

/// A satisfiable four-atom instance: the projections of a seeded random
/// `n x n` atom grid.
pub fn grid_atoms(n: usize, seed: u64) -> AtomInstance {
    random_atom_grid(n, &mut rng_from_seed(seed)).projections()
}
