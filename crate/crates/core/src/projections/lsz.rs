use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::basis::{gauss_quadrature, legendre_modes};
use crate::dg::{measurement_points, DGCoeffs, DgSpace};
use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::projections::CellFn;

/// Reference values and gradients of the 2D modes at `(xi, eta)`.
fn modes_2d(modes: &[(usize, usize)], k: usize, xi: f64, eta: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let (px, dx) = legendre_modes(k, xi).expect("point in [-1, 1]");
    let (py, dy) = legendre_modes(k, eta).expect("point in [-1, 1]");
    let v = modes.iter().map(|&(a, b)| px[a] * py[b]).collect();
    let gx = modes.iter().map(|&(a, b)| dx[a] * py[b]).collect();
    let gy = modes.iter().map(|&(a, b)| px[a] * dy[b]).collect();
    (v, gx, gy)
}

/// Liu-Shu-Zhang projection on a uniform periodic grid: per cell, the
/// `p in P^k` with the cell average of `w` and
/// `B(p - w, v) = 0` for all `v in P^k`, where
/// `B(e, v) = (e, beta . grad v)_K - int_top beta_y e^- [v]_y - int_right beta_x e^- [v]_x`
/// and `[v]` is the difference of the traces of `v` on opposite faces of `K`.
pub fn lsz_2d<W: CellFn + ?Sized>(space: &Arc<DgSpace>, w: &W) -> Result<DGCoeffs> {
    let Mesh::TwoD(mesh) = space.mesh() else {
        return Err(Error::UnsupportedMesh("the Liu-Shu-Zhang projection is 2D".into()));
    };
    let k = space.degree();
    let modes = space.basis().modes().to_vec();
    let nm = modes.len();
    let (bx, by) = (mesh.beta_x(), mesh.beta_y());
    let (hx, hy) = (mesh.hx(), mesh.hy());
    let q = gauss_quadrature(measurement_points(k)).expect(">= 1 point");

    // Test functionals on reference data, with the common factor of the
    // physical mode scaling dropped (it cancels between both sides).
    // vol[(m, point)] weights multiply e at interior points; top/right weights
    // multiply e on the upper and right faces.
    let mut vol = Vec::new();
    for (xi, wx) in q.iter() {
        for (eta, wy) in q.iter() {
            let (v, gx, gy) = modes_2d(&modes, k, xi, eta);
            let weight = 0.25 * hx * hy * wx * wy;
            let test: Vec<f64> = (0..nm)
                .map(|m| weight * (bx * 2.0 / hx * gx[m] + by * 2.0 / hy * gy[m]))
                .collect();
            vol.push((xi, eta, v, test, weight));
        }
    }
    let mut faces = Vec::new();
    for (s, ws) in q.iter() {
        // top face eta = 1, parametrized by xi = s
        let (vt, _, _) = modes_2d(&modes, k, s, 1.0);
        let (vb, _, _) = modes_2d(&modes, k, s, -1.0);
        let top: Vec<f64> = (0..nm).map(|m| -by * 0.5 * hx * ws * (vt[m] - vb[m])).collect();
        faces.push((s, 1.0, vt, top));
        // right face xi = 1, parametrized by eta = s
        let (vr, _, _) = modes_2d(&modes, k, 1.0, s);
        let (vl, _, _) = modes_2d(&modes, k, -1.0, s);
        let right: Vec<f64> = (0..nm).map(|m| -bx * 0.5 * hy * ws * (vr[m] - vl[m])).collect();
        faces.push((1.0, s, vr, right));
    }

    // Row 0: cell average; rows m >= 1: B(., phi_m).
    let mut a = DMatrix::<f64>::zeros(nm, nm);
    for (_, _, v, test, weight) in &vol {
        for p in 0..nm {
            a[(0, p)] += weight * v[p];
            for m in 1..nm {
                a[(m, p)] += test[m] * v[p];
            }
        }
    }
    for (_, _, v, test) in &faces {
        for p in 0..nm {
            for m in 1..nm {
                a[(m, p)] += test[m] * v[p];
            }
        }
    }
    let lu = a.lu();
    if !lu.is_invertible() {
        return Err(Error::ProjectionFailure { cell: 0 });
    }

    let mut out = DGCoeffs::zeros(space);
    for c in 0..space.n_cells() {
        let scale = space.mode_scale(c);
        let mut rhs = DVector::<f64>::zeros(nm);
        for (xi, eta, _, test, weight) in &vol {
            let (x, y) = space.to_physical(c, *xi, *eta);
            let fv = w.at(c, x, y);
            rhs[0] += weight * fv;
            for m in 1..nm {
                rhs[m] += test[m] * fv;
            }
        }
        for (xi, eta, _, test) in &faces {
            let (x, y) = space.to_physical(c, *xi, *eta);
            let fv = w.at(c, x, y);
            for m in 1..nm {
                rhs[m] += test[m] * fv;
            }
        }
        let sol = lu.solve(&rhs).ok_or(Error::ProjectionFailure { cell: c })?;
        // the system acts on reference coefficients; physical ones carry 1/scale
        for (dst, v) in out.block_mut(c).iter_mut().zip(sol.iter()) {
            *dst = v / scale;
        }
    }
    Ok(out)
}
