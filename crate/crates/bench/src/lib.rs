//! Fixtures shared by the benchmarks in `benches/`.

use std::sync::Arc;

use rkdg_core::dg::DGCoeffs;
use rkdg_core::{build_mesh_1d, build_mesh_2d, DgSpace, Discretization};

/// Uniform periodic space with unit speeds.
pub fn space(dim: usize, n: usize, k: usize) -> Arc<DgSpace> {
    match dim {
        1 => DgSpace::new(build_mesh_1d(n, 0.0, 0).unwrap(), k).unwrap(),
        _ => DgSpace::new(build_mesh_2d(n, n, 1.0, 1.0).unwrap(), k).unwrap(),
    }
}

/// Discretization and a seeded random state on it.
pub fn fixture(dim: usize, n: usize, k: usize) -> (Discretization, DGCoeffs) {
    let s = space(dim, n, k);
    (Discretization::new(&s), DGCoeffs::random(&s, 1))
}
