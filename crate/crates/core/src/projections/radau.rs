use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::basis::{gauss_quadrature, legendre_modes};
use crate::dg::{measurement_points, DGCoeffs, DgSpace};
use crate::error::{Error, Result};
use crate::projections::CellFn;

/// Gauss-Radau projection: on every cell the `p in P^k` with the moments of
/// `w` against `P^{k-1}` and the left-sided trace `w(x_{i+1/2}^-)`.
pub fn gauss_radau_1d<W: CellFn + ?Sized>(space: &Arc<DgSpace>, w: &W) -> Result<DGCoeffs> {
    if space.dim() != 1 {
        return Err(Error::UnsupportedMesh("the Gauss-Radau projection is 1D".into()));
    }
    let k = space.degree();
    let n = k + 1;
    let q = gauss_quadrature(measurement_points(k)).expect(">= 1 point");
    let (right, _) = legendre_modes(k, 1.0)?;
    let table: Vec<(f64, f64, Vec<f64>)> = q
        .iter()
        .map(|(x, wt)| (x, wt, legendre_modes(k, x).expect("node in [-1, 1]").0))
        .collect();
    // Rows 0..k: orthonormal moments; row k: right trace. The reference
    // system is the same on every cell (scaled modes), so factor it once.
    let mut a = DMatrix::<f64>::zeros(n, n);
    for r in 0..k {
        a[(r, r)] = 1.0;
    }
    for b in 0..n {
        a[(k, b)] = right[b];
    }
    let lu = a.lu();
    let mut out = DGCoeffs::zeros(space);
    for c in 0..space.n_cells() {
        let (x0, h, _, _) = space.cell_box(c);
        let scale = space.mode_scale(c);
        let mut rhs = DVector::<f64>::zeros(n);
        for (xi, wt, phi) in &table {
            let fv = w.at(c, x0 + 0.5 * h * (xi + 1.0), 0.0) * 0.5 * h * wt * scale;
            for r in 0..k {
                rhs[r] += fv * phi[r];
            }
        }
        rhs[k] = w.at(c, x0 + h, 0.0) / scale;
        let sol = lu.solve(&rhs).ok_or(Error::ProjectionFailure { cell: c })?;
        out.block_mut(c).copy_from_slice(sol.as_slice());
    }
    Ok(out)
}
