use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::{gauss_quadrature, PolyBasis};
use crate::error::{Error, Result};
use crate::mesh::Mesh;

/// The broken polynomial space `V_h^k` on a mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct DgSpace {
    mesh: Mesh,
    basis: PolyBasis,
}

impl DgSpace {
    pub fn new(mesh: impl Into<Mesh>, degree: usize) -> Result<Arc<Self>> {
        let mesh = mesh.into();
        let basis = PolyBasis::new(mesh.dim(), degree)?;
        Ok(Arc::new(Self { mesh, basis }))
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn basis(&self) -> &PolyBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.mesh.dim()
    }

    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    pub fn n_cells(&self) -> usize {
        self.mesh.n_cells()
    }

    pub fn n_modes(&self) -> usize {
        self.basis.n_modes()
    }

    pub fn n_dofs(&self) -> usize {
        self.n_cells() * self.n_modes()
    }

    /// Advection speeds `(beta_x, beta_y)`; `beta_y = 0` in 1D.
    pub fn speeds(&self) -> (f64, f64) {
        match &self.mesh {
            Mesh::OneD(m) => (m.beta(), 0.0),
            Mesh::TwoD(m) => (m.beta_x(), m.beta_y()),
        }
    }

    /// Cell extents `(x0, hx, y0, hy)`; `y0 = 0, hy = 1` in 1D.
    pub fn cell_box(&self, c: usize) -> (f64, f64, f64, f64) {
        match &self.mesh {
            Mesh::OneD(m) => (m.left(c), m.cell_sizes()[c], 0.0, 1.0),
            Mesh::TwoD(m) => {
                let (x0, y0) = m.origin(c);
                (x0, m.hx(), y0, m.hy())
            }
        }
    }

    /// Factor turning reference modes into `L^2`-orthonormal physical modes.
    pub fn mode_scale(&self, c: usize) -> f64 {
        let (_, hx, _, hy) = self.cell_box(c);
        match self.dim() {
            1 => (2.0 / hx).sqrt(),
            _ => 2.0 / (hx * hy).sqrt(),
        }
    }

    /// Physical point of reference coordinates `(xi, eta)` in cell `c`.
    pub fn to_physical(&self, c: usize, xi: f64, eta: f64) -> (f64, f64) {
        let (x0, hx, y0, hy) = self.cell_box(c);
        (x0 + 0.5 * hx * (xi + 1.0), y0 + 0.5 * hy * (eta + 1.0))
    }

    /// Cell containing the periodic point `(x, y)` and its reference coordinates.
    pub fn locate(&self, x: f64, y: f64) -> (usize, f64, f64) {
        let x = x.rem_euclid(1.0);
        let y = y.rem_euclid(1.0);
        match &self.mesh {
            Mesh::OneD(m) => {
                let nodes = m.nodes();
                let c = match nodes.binary_search_by(|n| n.total_cmp(&x)) {
                    Ok(i) => i.min(m.n_cells() - 1),
                    Err(i) => i - 1,
                };
                let h = m.cell_sizes()[c];
                (c, 2.0 * (x - nodes[c]) / h - 1.0, 0.0)
            }
            Mesh::TwoD(m) => {
                let i = ((x * m.nx() as f64) as usize).min(m.nx() - 1);
                let j = ((y * m.ny() as f64) as usize).min(m.ny() - 1);
                let c = m.cell_index(i, j);
                let (x0, y0) = m.origin(c);
                (c, 2.0 * (x - x0) / m.hx() - 1.0, 2.0 * (y - y0) / m.hy() - 1.0)
            }
        }
    }

    /// Value of the expansion `block` on cell `c` at reference point `(xi, eta)`.
    pub fn eval_block(&self, block: &[f64], c: usize, xi: f64, eta: f64) -> f64 {
        let phi = self.basis.eval_ref(xi, eta);
        self.mode_scale(c) * block.iter().zip(&phi).map(|(a, b)| a * b).sum::<f64>()
    }
}

/// Which part of the cellwise `L^2` projection to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionTarget {
    /// onto `V_h^k`
    Full,
    /// onto `V_h^{k-1}`
    KMinus1,
    /// onto the top-degree complement of `V_h^{k-1}` in `V_h^k`
    Perp,
}

/// A grid function in `V_h^k`: one block of modal coefficients per cell.
#[derive(Debug, Clone)]
pub struct DGCoeffs {
    space: Arc<DgSpace>,
    values: Vec<f64>,
}

impl DGCoeffs {
    pub fn zeros(space: &Arc<DgSpace>) -> Self {
        Self {
            space: Arc::clone(space),
            values: vec![0.0; space.n_dofs()],
        }
    }

    pub fn from_values(space: &Arc<DgSpace>, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.n_dofs() {
            return Err(Error::Incompatible(format!(
                "expected {} coefficients, got {}",
                space.n_dofs(),
                values.len()
            )));
        }
        Ok(Self {
            space: Arc::clone(space),
            values,
        })
    }

    /// Coefficients drawn uniformly from `[-1, 1]` with a seeded ChaCha8 stream.
    pub fn random(space: &Arc<DgSpace>, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..space.n_dofs())
            .map(|_| rng.random_range(-1.0..=1.0))
            .collect();
        Self {
            space: Arc::clone(space),
            values,
        }
    }

    pub fn space(&self) -> &Arc<DgSpace> {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn block(&self, c: usize) -> &[f64] {
        let n = self.space.n_modes();
        &self.values[c * n..(c + 1) * n]
    }

    pub fn block_mut(&mut self, c: usize) -> &mut [f64] {
        let n = self.space.n_modes();
        &mut self.values[c * n..(c + 1) * n]
    }

    /// Same values on a structurally equal space.
    pub fn check_compatible(&self, other: &DGCoeffs) -> Result<()> {
        if Arc::ptr_eq(&self.space, &other.space) || *self.space == *other.space {
            Ok(())
        } else {
            Err(Error::Incompatible(
                "grid functions live on different discretizations".into(),
            ))
        }
    }

    /// `L^2(Omega)` inner product (Euclidean in the orthonormal basis).
    pub fn dot(&self, other: &DGCoeffs) -> f64 {
        dot(&self.values, &other.values)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// `self += a * x`
    pub fn axpy(&mut self, a: f64, x: &DGCoeffs) {
        assert_eq!(self.values.len(), x.values.len());
        for (y, x) in self.values.iter_mut().zip(&x.values) {
            *y += a * x;
        }
    }

    pub fn scale(&mut self, a: f64) {
        self.values.iter_mut().for_each(|v| *v *= a);
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Cellwise `L^2` projection of a member of `V_h^k`.
    pub fn project(&self, target: ProjectionTarget) -> DGCoeffs {
        let mut out = self.clone();
        apply_mode_mask(&self.space, target, &mut out.values);
        out
    }

    /// Point value at reference coordinates of cell `c`.
    pub fn eval(&self, c: usize, xi: f64, eta: f64) -> f64 {
        self.space.eval_block(self.block(c), c, xi, eta)
    }

    /// Point value at a physical point (periodically wrapped).
    pub fn eval_point(&self, x: f64, y: f64) -> f64 {
        let (c, xi, eta) = self.space.locate(x, y);
        self.eval(c, xi, eta)
    }

    /// `L^2` norm of the reconstructed function by tensor Gauss quadrature,
    /// independent of the basis orthonormality.
    pub fn l2_norm_by_quadrature(&self, n_points: usize) -> f64 {
        let q = gauss_quadrature(n_points).expect("n_points >= 1");
        let mut acc = 0.0;
        for c in 0..self.space.n_cells() {
            let (_, hx, _, hy) = self.space.cell_box(c);
            if self.space.dim() == 1 {
                for (x, w) in q.iter() {
                    let v = self.eval(c, x, 0.0);
                    acc += 0.5 * hx * w * v * v;
                }
            } else {
                for (x, wx) in q.iter() {
                    for (y, wy) in q.iter() {
                        let v = self.eval(c, x, y);
                        acc += 0.25 * hx * hy * wx * wy * v * v;
                    }
                }
            }
        }
        acc.sqrt()
    }
}

/// `||u - f||_{L^2}` by tensor Gauss quadrature with `n_points` per direction.
pub fn l2_distance<F>(u: &DGCoeffs, f: F, n_points: usize) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    let space = u.space();
    let q = gauss_quadrature(n_points).expect("n_points >= 1");
    let mut acc = 0.0;
    for c in 0..space.n_cells() {
        let (_, hx, _, hy) = space.cell_box(c);
        if space.dim() == 1 {
            for (xi, w) in q.iter() {
                let (x, _) = space.to_physical(c, xi, 0.0);
                let e = u.eval(c, xi, 0.0) - f(x, 0.0);
                acc += 0.5 * hx * w * e * e;
            }
        } else {
            for (xi, wx) in q.iter() {
                for (eta, wy) in q.iter() {
                    let (x, y) = space.to_physical(c, xi, eta);
                    let e = u.eval(c, xi, eta) - f(x, y);
                    acc += 0.25 * hx * hy * wx * wy * e * e;
                }
            }
        }
    }
    acc.sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Zero the coefficients not selected by `target`, in place.
pub(crate) fn apply_mode_mask(space: &DgSpace, target: ProjectionTarget, values: &mut [f64]) {
    if target == ProjectionTarget::Full {
        return;
    }
    let k = space.degree();
    let keep: Vec<bool> = (0..space.n_modes())
        .map(|m| {
            let top = space.basis().mode_degree(m) == k;
            match target {
                ProjectionTarget::KMinus1 => !top,
                ProjectionTarget::Perp => top,
                ProjectionTarget::Full => true,
            }
        })
        .collect();
    for block in values.chunks_mut(space.n_modes()) {
        for (v, &kp) in block.iter_mut().zip(&keep) {
            if !kp {
                *v = 0.0;
            }
        }
    }
}

/// Number of Gauss points per direction used when measuring against smooth
/// functions: `max(10, k + 4)`.
pub fn measurement_points(k: usize) -> usize {
    (k + 4).max(10)
}

/// Cellwise `L^2` projection of a function of `(x, y)` (`y` ignored in 1D),
/// using `max(10, k + 4)` Gauss points per direction.
pub fn project_fn<F>(space: &Arc<DgSpace>, f: F, target: ProjectionTarget) -> DGCoeffs
where
    F: Fn(f64, f64) -> f64,
{
    project_fn_with(space, f, target, measurement_points(space.degree()))
}

pub fn project_fn_with<F>(
    space: &Arc<DgSpace>,
    f: F,
    target: ProjectionTarget,
    n_points: usize,
) -> DGCoeffs
where
    F: Fn(f64, f64) -> f64,
{
    project_cellwise(space, |_, x, y| f(x, y), target, n_points)
}

/// Projection of a cellwise-defined function `f(cell, x, y)`, for data that
/// may jump across cell boundaries.
pub fn project_cellwise<F>(
    space: &Arc<DgSpace>,
    f: F,
    target: ProjectionTarget,
    n_points: usize,
) -> DGCoeffs
where
    F: Fn(usize, f64, f64) -> f64,
{
    let q = gauss_quadrature(n_points).expect("n_points >= 1");
    let basis = space.basis();
    let n = space.n_modes();
    // Reference basis tables at the quadrature points.
    let table: Vec<(f64, f64, f64, Vec<f64>)> = if space.dim() == 1 {
        q.iter()
            .map(|(x, w)| (x, 0.0, 0.5 * w, basis.eval_ref(x, 0.0)))
            .collect()
    } else {
        q.iter()
            .flat_map(|(x, wx)| {
                q.iter()
                    .map(move |(y, wy)| (x, y, 0.25 * wx * wy, basis.eval_ref(x, y)))
            })
            .collect()
    };
    let mut out = DGCoeffs::zeros(space);
    for c in 0..space.n_cells() {
        let (_, hx, _, hy) = space.cell_box(c);
        let jac = if space.dim() == 1 { hx } else { hx * hy };
        let scale = space.mode_scale(c);
        let block = out.block_mut(c);
        for (xi, eta, w, phi) in &table {
            let (x, y) = space.to_physical(c, *xi, *eta);
            let fv = f(c, x, y) * w * jac * scale;
            for m in 0..n {
                block[m] += fv * phi[m];
            }
        }
    }
    apply_mode_mask(space, target, &mut out.values);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_mesh_1d, build_mesh_2d};

    #[test]
    fn coefficient_norm_is_l2_norm() {
        for (mesh, k) in [
            (Mesh::from(build_mesh_1d(9, 0.3, 4).unwrap()), 3usize),
            (Mesh::from(build_mesh_2d(3, 4, 1.0, 1.0).unwrap()), 4),
        ] {
            let space = DgSpace::new(mesh, k).unwrap();
            let u = DGCoeffs::random(&space, 11);
            let q = u.l2_norm_by_quadrature(k + 2);
            assert!((q - u.norm()).abs() <= 1e-12 * u.norm());
        }
    }

    #[test]
    fn projection_reproduces_members() {
        let space = DgSpace::new(build_mesh_1d(6, 0.2, 1).unwrap(), 2).unwrap();
        let u = DGCoeffs::random(&space, 3);
        let p = project_fn(&space, |x, y| u.eval_point(x, y), ProjectionTarget::Full);
        for (a, b) in p.values().iter().zip(u.values()) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn orthogonal_split() {
        let space = DgSpace::new(build_mesh_2d(3, 3, 1.0, 1.0).unwrap(), 3).unwrap();
        let u = DGCoeffs::random(&space, 5);
        let mut s = u.project(ProjectionTarget::KMinus1);
        s.axpy(1.0, &u.project(ProjectionTarget::Perp));
        for (a, b) in s.values().iter().zip(u.project(ProjectionTarget::Full).values()) {
            assert!((a - b).abs() <= 1e-14);
        }
    }

    #[test]
    fn incompatible_spaces() {
        let a = DGCoeffs::zeros(&DgSpace::new(build_mesh_1d(4, 0.0, 0).unwrap(), 1).unwrap());
        let b = DGCoeffs::zeros(&DgSpace::new(build_mesh_1d(5, 0.0, 0).unwrap(), 1).unwrap());
        assert!(a.check_compatible(&b).is_err());
        let c = DGCoeffs::zeros(&DgSpace::new(build_mesh_1d(4, 0.0, 0).unwrap(), 1).unwrap());
        assert!(a.check_compatible(&c).is_ok());
    }
}
