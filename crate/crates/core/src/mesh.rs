//! Periodic meshes of the unit interval and the unit square.
//!
//! 1D meshes may be randomly perturbed: every interior node of the uniform
//! partition is shifted by an offset drawn uniformly from
//! `[-perturb/n, +perturb/n]` using a ChaCha8 stream seeded with the given
//! seed, so the same `(n, perturb, seed)` triple yields bitwise identical
//! nodes on every platform. Each refinement level draws its own mesh.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Periodic partition of `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    nodes: Vec<f64>,
    cell_sizes: Vec<f64>,
    h_max: f64,
    h_min: f64,
    beta: f64,
}

impl Mesh1D {
    /// Nodes `x_{i+1/2}`, starting at 0 and ending at 1.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn cell_sizes(&self) -> &[f64] {
        &self.cell_sizes
    }

    pub fn n_cells(&self) -> usize {
        self.cell_sizes.len()
    }

    pub fn h_max(&self) -> f64 {
        self.h_max
    }

    pub fn h_min(&self) -> f64 {
        self.h_min
    }

    /// `max h_i / min h_i`.
    pub fn quasi_uniformity(&self) -> f64 {
        self.h_max / self.h_min
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Left endpoint of cell `i`.
    pub fn left(&self, i: usize) -> f64 {
        self.nodes[i]
    }

    pub fn right(&self, i: usize) -> f64 {
        self.nodes[i + 1]
    }

    pub fn is_uniform(&self) -> bool {
        let h = 1.0 / self.n_cells() as f64;
        self.cell_sizes.iter().all(|&hi| (hi - h).abs() <= 1e-14)
    }

    /// Same nodes, different advection speed. Zero is allowed (stationary
    /// transport); negative speeds are not, since the flux is upwinded from
    /// the left.
    pub fn with_speed(mut self, beta: f64) -> Result<Self> {
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::InvalidSpeed(beta, beta));
        }
        self.beta = beta;
        Ok(self)
    }
}

/// Build a periodic 1D mesh with `n` cells and unit speed.
pub fn build_mesh_1d(n: usize, perturb_fraction: f64, seed: u64) -> Result<Mesh1D> {
    if n < 2 {
        return Err(Error::InvalidMesh(format!(
            "a periodic mesh needs at least 2 cells, got {n}"
        )));
    }
    if !(0.0..0.5).contains(&perturb_fraction) {
        return Err(Error::InvalidPerturbation(perturb_fraction));
    }
    let nf = n as f64;
    let amplitude = perturb_fraction / nf;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = Vec::with_capacity(n + 1);
    nodes.push(0.0);
    for i in 1..n {
        let offset = if amplitude > 0.0 {
            rng.random_range(-amplitude..=amplitude)
        } else {
            0.0
        };
        nodes.push(i as f64 / nf + offset);
    }
    nodes.push(1.0);

    let cell_sizes: Vec<f64> = nodes.windows(2).map(|w| w[1] - w[0]).collect();
    let h_max = cell_sizes.iter().cloned().fold(f64::MIN, f64::max);
    let h_min = cell_sizes.iter().cloned().fold(f64::MAX, f64::min);
    debug_assert!(h_min > 0.0);
    Ok(Mesh1D {
        nodes,
        cell_sizes,
        h_max,
        h_min,
        beta: 1.0,
    })
}

/// Uniform periodic Cartesian grid of `[0, 1]^2`. Cells are numbered
/// `i + nx * j` with `i` the x-index.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh2D {
    nx: usize,
    ny: usize,
    beta_x: f64,
    beta_y: f64,
}

impl Mesh2D {
    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn hx(&self) -> f64 {
        1.0 / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        1.0 / self.ny as f64
    }

    pub fn beta_x(&self) -> f64 {
        self.beta_x
    }

    pub fn beta_y(&self) -> f64 {
        self.beta_y
    }

    pub fn n_cells(&self) -> usize {
        self.nx * self.ny
    }

    pub fn cell_index(&self, i: usize, j: usize) -> usize {
        i + self.nx * j
    }

    /// `(i, j)` of a flat cell index.
    pub fn cell_ij(&self, c: usize) -> (usize, usize) {
        (c % self.nx, c / self.nx)
    }

    /// Lower-left corner of cell `c`.
    pub fn origin(&self, c: usize) -> (f64, f64) {
        let (i, j) = self.cell_ij(c);
        (i as f64 * self.hx(), j as f64 * self.hy())
    }

    /// Periodic upwind neighbours of cell `c`: (left, below).
    pub fn upwind_neighbors(&self, c: usize) -> (usize, usize) {
        let (i, j) = self.cell_ij(c);
        let left = self.cell_index((i + self.nx - 1) % self.nx, j);
        let below = self.cell_index(i, (j + self.ny - 1) % self.ny);
        (left, below)
    }
}

pub fn build_mesh_2d(nx: usize, ny: usize, beta_x: f64, beta_y: f64) -> Result<Mesh2D> {
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidMesh(format!(
            "a periodic 2D mesh needs at least 2x2 cells, got {nx}x{ny}"
        )));
    }
    if !(beta_x > 0.0 && beta_y > 0.0) || !beta_x.is_finite() || !beta_y.is_finite() {
        return Err(Error::InvalidSpeed(beta_x, beta_y));
    }
    Ok(Mesh2D {
        nx,
        ny,
        beta_x,
        beta_y,
    })
}

/// Either kind of mesh.
#[derive(Debug, Clone, PartialEq)]
pub enum Mesh {
    OneD(Mesh1D),
    TwoD(Mesh2D),
}

impl Mesh {
    pub fn dim(&self) -> usize {
        match self {
            Mesh::OneD(_) => 1,
            Mesh::TwoD(_) => 2,
        }
    }

    pub fn n_cells(&self) -> usize {
        match self {
            Mesh::OneD(m) => m.n_cells(),
            Mesh::TwoD(m) => m.n_cells(),
        }
    }

    /// Largest cell diameter along a coordinate direction.
    pub fn h(&self) -> f64 {
        match self {
            Mesh::OneD(m) => m.h_max(),
            Mesh::TwoD(m) => m.hx().max(m.hy()),
        }
    }

    /// Cells per direction (the `N` of the experiments).
    pub fn resolution(&self) -> usize {
        match self {
            Mesh::OneD(m) => m.n_cells(),
            Mesh::TwoD(m) => m.nx(),
        }
    }

    pub fn is_uniform(&self) -> bool {
        match self {
            Mesh::OneD(m) => m.is_uniform(),
            Mesh::TwoD(_) => true,
        }
    }
}

impl From<Mesh1D> for Mesh {
    fn from(m: Mesh1D) -> Self {
        Mesh::OneD(m)
    }
}

impl From<Mesh2D> for Mesh {
    fn from(m: Mesh2D) -> Self {
        Mesh::TwoD(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_nodes() {
        let m = build_mesh_1d(4, 0.0, 0).unwrap();
        assert_eq!(m.nodes(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(m.is_uniform());
        assert_eq!(m.quasi_uniformity(), 1.0);
    }

    #[test]
    fn perturbed_nodes_stay_close() {
        let m = build_mesh_1d(40, 0.15, 7).unwrap();
        for (i, &x) in m.nodes().iter().enumerate() {
            assert!((x - i as f64 / 40.0).abs() <= 0.00375 + 1e-15);
        }
        assert_eq!(m.nodes()[0], 0.0);
        assert_eq!(m.nodes()[40], 1.0);
        assert!(!m.is_uniform());
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(matches!(build_mesh_1d(1, 0.0, 0), Err(Error::InvalidMesh(_))));
        assert!(matches!(
            build_mesh_1d(8, 0.5, 0),
            Err(Error::InvalidPerturbation(_))
        ));
        assert!(matches!(
            build_mesh_2d(4, 4, 1.0, -1.0),
            Err(Error::InvalidSpeed(..))
        ));
        assert!(build_mesh_2d(1, 4, 1.0, 1.0).is_err());
    }

    #[test]
    fn grid_counts() {
        let m = build_mesh_2d(2, 2, 1.0, 1.0).unwrap();
        assert_eq!((m.hx(), m.hy()), (0.5, 0.5));
        assert_eq!(build_mesh_2d(20, 20, 1.0, 1.0).unwrap().n_cells(), 400);
    }

    #[test]
    fn periodic_neighbours() {
        let m = build_mesh_2d(3, 4, 1.0, 1.0).unwrap();
        assert_eq!(m.upwind_neighbors(0), (2, 9));
        assert_eq!(m.upwind_neighbors(m.cell_index(1, 2)), (m.cell_index(0, 2), m.cell_index(1, 1)));
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn sizes_sum_to_one(n in 2usize..300, p in 0.0f64..0.499, seed in any::<u64>()) {
                let m = build_mesh_1d(n, p, seed).unwrap();
                let total: f64 = m.cell_sizes().iter().sum();
                prop_assert!((total - 1.0).abs() <= 1e-14);
                prop_assert!(m.h_min() > 0.0);
                let again = build_mesh_1d(n, p, seed).unwrap();
                prop_assert!(m.nodes().iter().zip(again.nodes()).all(|(a, b)| a.to_bits() == b.to_bits()));
            }
        }
    }
}
