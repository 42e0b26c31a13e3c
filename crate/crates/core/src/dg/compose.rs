use crate::dg::operator::LinearMap;
use crate::dg::space::{DGCoeffs, ProjectionTarget};
use crate::error::{Error, Result};

/// `op(u)` as a new coefficient vector on the same space.
pub fn apply_op<M: LinearMap + ?Sized>(op: &M, u: &DGCoeffs) -> DGCoeffs {
    let mut out = DGCoeffs::zeros(u.space());
    op.apply(u.values(), out.values_mut());
    out
}

/// `op^p(u)`.
pub fn apply_pow<M: LinearMap + ?Sized>(op: &M, p: usize, u: &DGCoeffs) -> DGCoeffs {
    let mut cur = u.clone();
    let mut next = DGCoeffs::zeros(u.space());
    for _ in 0..p {
        op.apply(cur.values(), next.values_mut());
        std::mem::swap(&mut cur, &mut next);
    }
    cur
}

/// `L^{i_1} P L^{i_2} P ... L^{i_n} w` with `P` the projection onto the
/// top-degree modes, applied right to left.
pub fn compose_mixed<M: LinearMap + ?Sized>(
    l: &M,
    indices: &[usize],
    w: &DGCoeffs,
) -> Result<DGCoeffs> {
    if indices.is_empty() {
        return Err(Error::InvalidArgument("empty index vector".into()));
    }
    if indices.contains(&0) {
        return Err(Error::InvalidArgument("indices must be positive".into()));
    }
    if w.space().degree() == 0 {
        return Err(Error::UnsupportedDegree(0, "mixed compositions need k >= 1"));
    }
    if l.dim() != w.values().len() {
        return Err(Error::Incompatible("operator and coefficients differ in size".into()));
    }
    let mut u = w.clone();
    for (pos, &i) in indices.iter().rev().enumerate() {
        if pos > 0 {
            u = u.project(ProjectionTarget::Perp);
        }
        u = apply_pow(l, i, &u);
    }
    Ok(u)
}
