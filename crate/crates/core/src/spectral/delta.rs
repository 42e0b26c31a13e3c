use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{Complex, DMatrix, DVector};
use rayon::prelude::*;

use crate::dg::{operator_norm, project_fn, DgSpace, LinearMap, NormMethod, NormOptions, ProjectionTarget};
use crate::error::{Error, Result};
use crate::mesh::{build_mesh_1d, build_mesh_2d, Mesh};
use crate::rk::{Discretization, EvolutionMap, SchemeSpec, StepForm, Variant};
use crate::spectral::symbol::CMatrix;

/// Lower clamp of `delta`, marking numerically exact non-expansiveness.
pub const DELTA_FLOOR: f64 = 1e-16;

/// How `||K^m||_2^2 - 1` is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaMethod {
    /// Fourier blocks on uniform meshes, dense below the cap otherwise,
    /// power iteration beyond it.
    #[default]
    Auto,
    /// Exact block diagonalization; uniform meshes only.
    Fourier,
    Dense,
    PowerIteration,
}

/// One evaluation of the `delta` metric.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityPoint {
    pub scheme: String,
    pub variant: Variant,
    pub dim: usize,
    pub n: usize,
    pub m: usize,
    pub cfl: f64,
    pub delta: f64,
}

/// Uniform periodic mesh on the unit interval/square with unit speeds.
pub fn stability_space(dim: usize, n: usize, k: usize) -> Result<Arc<DgSpace>> {
    match dim {
        1 => DgSpace::new(build_mesh_1d(n, 0.0, 0)?, k),
        2 => DgSpace::new(build_mesh_2d(n, n, 1.0, 1.0)?, k),
        _ => Err(Error::InvalidArgument(format!("dimension {dim} not in {{1, 2}}"))),
    }
}

/// `delta = max(||K^m||^2 - 1, 1e-16)` with `tau = cfl / (d N)`.
pub fn delta(scheme: &SchemeSpec, disc: &Discretization, cfl: f64, m: usize) -> Result<StabilityPoint> {
    delta_with(scheme, disc, cfl, m, DeltaMethod::Auto)
}

pub fn delta_with(
    scheme: &SchemeSpec,
    disc: &Discretization,
    cfl: f64,
    m: usize,
    method: DeltaMethod,
) -> Result<StabilityPoint> {
    let space = disc.space();
    let n = space.mesh().resolution();
    let tau = cfl / (space.dim() * n) as f64;
    let map = EvolutionMap::new(scheme, disc, tau, StepForm::Butcher)?;
    let e = excess(&map, space, m, method)?;
    Ok(StabilityPoint {
        scheme: scheme.label(),
        variant: scheme.variant(),
        dim: space.dim(),
        n,
        m,
        cfl,
        delta: e.max(DELTA_FLOOR),
    })
}

/// `||K^m||_2^2 - 1` without the floor.
///
/// The Fourier and dense routes work with the increment `E = K^m - I` and the
/// Hermitian form `E + E^H + E^H E`, whose top eigenvalue is the excess, so no
/// cancellation against 1 occurs. The constant grid function is invariant
/// under `K` and `K^T` (consistency and conservation); its direction is
/// removed and contributes exactly 0.
pub fn excess(map: &EvolutionMap, space: &Arc<DgSpace>, m: usize, method: DeltaMethod) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("power m must be at least 1".into()));
    }
    let dense_cap = NormOptions::default().dense_cap;
    let method = match method {
        DeltaMethod::Auto if space.mesh().is_uniform() => DeltaMethod::Fourier,
        DeltaMethod::Auto if map.dim() <= dense_cap => DeltaMethod::Dense,
        DeltaMethod::Auto => DeltaMethod::PowerIteration,
        other => other,
    };
    match method {
        DeltaMethod::Fourier => fourier_excess(map, space, m),
        DeltaMethod::Dense => dense_excess(map, space, m, dense_cap),
        _ => {
            let v = operator_norm(map, NormMethod::PowerIteration, m, &NormOptions::default())?;
            Ok(v * v - 1.0)
        }
    }
}

/// `(I + E1)^m - I` from `E1`.
fn power_increment<T: nalgebra::ComplexField + Copy>(e1: &DMatrix<T>, m: usize) -> DMatrix<T> {
    let mut acc = e1.clone();
    for _ in 1..m {
        acc = &acc + e1 + e1 * &acc;
    }
    acc
}

fn fourier_excess(map: &EvolutionMap, space: &Arc<DgSpace>, m: usize) -> Result<f64> {
    if !space.mesh().is_uniform() {
        return Err(Error::UnsupportedMesh("Fourier blocks need a uniform mesh".into()));
    }
    let inc = map.increment();
    let nm = space.n_modes();
    let nc = space.n_cells();
    // Columns of the increment for unit vectors supported on cell 0.
    let mut cols = Vec::with_capacity(nm);
    let mut x = vec![0.0; inc.dim()];
    let mut y = vec![0.0; inc.dim()];
    for p in 0..nm {
        x[p] = 1.0;
        inc.apply(&x, &mut y);
        x[p] = 0.0;
        cols.push(y.clone());
    }
    let (nx, ny) = match space.mesh() {
        Mesh::OneD(_) => (nc, 1),
        Mesh::TwoD(g) => (g.nx(), g.ny()),
    };
    let angles: Vec<(usize, usize)> = (0..ny).flat_map(|q| (0..nx).map(move |p| (p, q))).collect();
    let best = angles
        .par_iter()
        .map(|&(p, q)| {
            let mut e1 = CMatrix::zeros(nm, nm);
            for c in 0..nc {
                let (i, j) = (c % nx, c / nx);
                let phase = -2.0 * PI * ((p * i) as f64 / nx as f64 + (q * j) as f64 / ny as f64);
                let z = Complex::from_polar(1.0, phase);
                for (b, col) in cols.iter().enumerate() {
                    for a in 0..nm {
                        e1[(a, b)] += z * col[c * nm + a];
                    }
                }
            }
            let e = power_increment(&e1, m);
            let mut h = &e + e.adjoint() + e.adjoint() * &e;
            if p == 0 && q == 0 {
                h.row_mut(0).fill(Complex::new(0.0, 0.0));
                h.column_mut(0).fill(Complex::new(0.0, 0.0));
            }
            top_eigenvalue_c(h)
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    Ok(best)
}

fn top_eigenvalue_c(h: CMatrix) -> f64 {
    let h = (&h + h.adjoint()) * Complex::from(0.5);
    h.symmetric_eigenvalues().iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

fn dense_excess(map: &EvolutionMap, space: &Arc<DgSpace>, m: usize, cap: usize) -> Result<f64> {
    let e1 = map.increment().to_dense(cap)?;
    let e = power_increment(&e1, m);
    let h = &e + e.transpose() + e.transpose() * &e;
    let ones = project_fn(space, |_, _| 1.0, ProjectionTarget::Full);
    let q = DVector::from_column_slice(ones.values()).normalize();
    let p = DMatrix::identity(q.len(), q.len()) - &q * q.transpose();
    let h = &p * h * &p;
    let h = (&h + h.transpose()) * 0.5;
    Ok(h.symmetric_eigenvalues().iter().cloned().fold(f64::NEG_INFINITY, f64::max))
}

/// Cartesian sweep over `n_list x cfl_grid` on uniform meshes with unit
/// speeds. Results come back in grid order (`N` outer, `cfl` inner); a failed
/// point is returned as its error.
pub fn cfl_sweep(
    scheme: &SchemeSpec,
    dim: usize,
    k: usize,
    n_list: &[usize],
    m: usize,
    cfl_grid: &[f64],
    method: DeltaMethod,
) -> Result<Vec<Result<StabilityPoint>>> {
    if n_list.is_empty() || cfl_grid.is_empty() {
        return Err(Error::InvalidArgument("empty N list or CFL grid".into()));
    }
    let discs = n_list
        .iter()
        .map(|&n| Ok(Discretization::new(&stability_space(dim, n, k)?)))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, f64)> = (0..n_list.len())
        .flat_map(|i| cfl_grid.iter().map(move |&c| (i, c)))
        .collect();
    Ok(jobs
        .par_iter()
        .map(|&(i, c)| delta_with(scheme, &discs[i], c, m, method))
        .collect())
}
