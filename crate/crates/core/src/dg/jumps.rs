use crate::basis::gauss_quadrature;
use crate::dg::space::DGCoeffs;
use crate::error::Result;
use crate::mesh::Mesh;

/// Jump and trace quantities of a pair of grid functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpForms {
    /// `<<w, v>>`, the speed-weighted sum of jump products over the skeleton
    pub inner: f64,
    /// `|w|_jump`
    pub jump_w: f64,
    /// `|v|_jump`
    pub jump_v: f64,
    /// `||w||_Gamma`
    pub trace_w: f64,
    /// `||v||_Gamma`
    pub trace_v: f64,
}

/// Per-interface traces `(minus, plus)` of a grid function at the quadrature
/// points of every skeleton face, paired with the face weight (speed times
/// quadrature weight times face measure).
fn face_traces(u: &DGCoeffs) -> Vec<(f64, f64, f64)> {
    let space = u.space();
    match space.mesh() {
        Mesh::OneD(m) => {
            let n = m.n_cells();
            (0..n)
                .map(|c| {
                    let next = (c + 1) % n;
                    (u.eval(c, 1.0, 0.0), u.eval(next, -1.0, 0.0), m.beta())
                })
                .collect()
        }
        Mesh::TwoD(m) => {
            let q = gauss_quadrature(space.degree() + 2).expect(">= 1 point");
            let mut out = Vec::with_capacity(2 * m.n_cells() * q.n_points());
            for j in 0..m.ny() {
                for i in 0..m.nx() {
                    let c = m.cell_index(i, j);
                    let east = m.cell_index((i + 1) % m.nx(), j);
                    let north = m.cell_index(i, (j + 1) % m.ny());
                    for (s, w) in q.iter() {
                        // vertical face x_{i+1/2}
                        out.push((
                            u.eval(c, 1.0, s),
                            u.eval(east, -1.0, s),
                            m.beta_x() * w * 0.5 * m.hy(),
                        ));
                        // horizontal face y_{j+1/2}
                        out.push((
                            u.eval(c, s, 1.0),
                            u.eval(north, s, -1.0),
                            m.beta_y() * w * 0.5 * m.hx(),
                        ));
                    }
                }
            }
            out
        }
    }
}

/// Jump inner product, jump seminorms and trace norms, evaluated directly
/// from point traces (independently of the assembled operator).
pub fn jump_forms(w: &DGCoeffs, v: &DGCoeffs) -> Result<JumpForms> {
    w.check_compatible(v)?;
    let tw = face_traces(w);
    let tv = face_traces(v);
    let mut out = JumpForms {
        inner: 0.0,
        jump_w: 0.0,
        jump_v: 0.0,
        trace_w: 0.0,
        trace_v: 0.0,
    };
    for (&(wm, wp, s), &(vm, vp, _)) in tw.iter().zip(&tv) {
        let jw = wp - wm;
        let jv = vp - vm;
        out.inner += s * jw * jv;
        out.jump_w += s * jw * jw;
        out.jump_v += s * jv * jv;
        out.trace_w += s * (wm * wm + wp * wp);
        out.trace_v += s * (vm * vm + vp * vp);
    }
    out.jump_w = out.jump_w.sqrt();
    out.jump_v = out.jump_v.sqrt();
    out.trace_w = out.trace_w.sqrt();
    out.trace_v = out.trace_v.sqrt();
    Ok(out)
}

/// `|v|_jump`
pub fn jump_seminorm(v: &DGCoeffs) -> f64 {
    face_traces(v)
        .iter()
        .map(|&(m, p, s)| s * (p - m) * (p - m))
        .sum::<f64>()
        .sqrt()
}

/// `<<w, v>>`
pub fn jump_inner(w: &DGCoeffs, v: &DGCoeffs) -> Result<f64> {
    Ok(jump_forms(w, v)?.inner)
}
