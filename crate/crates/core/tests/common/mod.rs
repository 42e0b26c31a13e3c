#![allow(dead_code)]

use std::sync::Arc;

use rkdg_core::basis::{gauss_quadrature, legendre_modes};
use rkdg_core::dg::{DGCoeffs, DgSpace};
use rkdg_core::mesh::{build_mesh_1d, build_mesh_2d};

pub fn space_1d(n: usize, k: usize) -> Arc<DgSpace> {
    DgSpace::new(build_mesh_1d(n, 0.0, 0).unwrap(), k).unwrap()
}

pub fn space_1d_perturbed(n: usize, k: usize, seed: u64) -> Arc<DgSpace> {
    DgSpace::new(build_mesh_1d(n, 0.2, seed).unwrap(), k).unwrap()
}

pub fn space_2d(n: usize, k: usize) -> Arc<DgSpace> {
    DgSpace::new(build_mesh_2d(n, n, 1.0, 1.0).unwrap(), k).unwrap()
}

pub fn space_2d_aniso(nx: usize, ny: usize, k: usize, bx: f64, by: f64) -> Arc<DgSpace> {
    DgSpace::new(build_mesh_2d(nx, ny, bx, by).unwrap(), k).unwrap()
}

/// Physical gradient of `u` on cell `c` at reference point `(xi, eta)`,
/// from the Legendre derivative recurrence.
pub fn grad(u: &DGCoeffs, c: usize, xi: f64, eta: f64) -> (f64, f64) {
    let space = u.space();
    let k = space.degree();
    let (_, hx, _, hy) = space.cell_box(c);
    let s = space.mode_scale(c);
    let (px, dx) = legendre_modes(k, xi).unwrap();
    let (py, dy) = legendre_modes(k, eta).unwrap();
    let blk = u.block(c);
    let (mut gx, mut gy) = (0.0, 0.0);
    for (m, &(a1, a2)) in space.basis().modes().iter().enumerate() {
        if space.dim() == 1 {
            gx += blk[m] * dx[a1];
        } else {
            gx += blk[m] * dx[a1] * py[a2];
            gy += blk[m] * px[a1] * dy[a2];
        }
    }
    (s * gx * 2.0 / hx, s * gy * 2.0 / hy)
}

/// `<L_h w, v>` evaluated from the weak form with Gauss quadrature:
/// volume term `int w beta.grad v` plus `sum_faces beta_n w^- [v]`.
pub fn weak_form(w: &DGCoeffs, v: &DGCoeffs) -> f64 {
    let space = w.space();
    let k = space.degree();
    let q = gauss_quadrature(k + 3).unwrap();
    let (bx, by) = space.speeds();
    let mut total = 0.0;
    if space.dim() == 1 {
        let n = space.n_cells();
        for c in 0..n {
            let (_, h, _, _) = space.cell_box(c);
            for (xi, wt) in q.iter() {
                let (vx, _) = grad(v, c, xi, 0.0);
                total += 0.5 * h * wt * bx * w.eval(c, xi, 0.0) * vx;
            }
            let next = (c + 1) % n;
            let jump = v.eval(next, -1.0, 0.0) - v.eval(c, 1.0, 0.0);
            total += bx * w.eval(c, 1.0, 0.0) * jump;
        }
    } else {
        let rkdg_core::mesh::Mesh::TwoD(m) = space.mesh() else {
            unreachable!()
        };
        for j in 0..m.ny() {
            for i in 0..m.nx() {
                let c = m.cell_index(i, j);
                let east = m.cell_index((i + 1) % m.nx(), j);
                let north = m.cell_index(i, (j + 1) % m.ny());
                let area = 0.25 * m.hx() * m.hy();
                for (xi, wx) in q.iter() {
                    for (eta, wy) in q.iter() {
                        let (vx, vy) = grad(v, c, xi, eta);
                        total += area * wx * wy * w.eval(c, xi, eta) * (bx * vx + by * vy);
                    }
                    let s = xi;
                    let jx = v.eval(east, -1.0, s) - v.eval(c, 1.0, s);
                    total += 0.5 * m.hy() * wx * bx * w.eval(c, 1.0, s) * jx;
                    let jy = v.eval(north, s, -1.0) - v.eval(c, s, 1.0);
                    total += 0.5 * m.hx() * wx * by * w.eval(c, s, 1.0) * jy;
                }
            }
        }
    }
    total
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// `(max - min) / max` of a sequence of positive values.
pub fn spread(v: &[f64]) -> f64 {
    let max = v.iter().cloned().fold(f64::MIN, f64::max);
    let min = v.iter().cloned().fold(f64::MAX, f64::min);
    (max - min) / max
}
