use crate::dg::{apply_op, BlockOperator, DGCoeffs};
use crate::error::{Error, Result};
use crate::projections::{special_projection, AnalyticData, ProjectionKind};
use crate::rk::{Discretization, SchemeSpec, Variant};

/// Stopping rule of the fixed-point solve for `Pi_star`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventOptions {
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for ResolventOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_iter: 200,
        }
    }
}

pub fn pi_star(
    disc: &Discretization,
    data: AnalyticData,
    scheme: &SchemeSpec,
    tau: f64,
    q: usize,
) -> Result<DGCoeffs> {
    pi_star_with(disc, data, scheme, tau, q, &ResolventOptions::default())
}

/// `Pi_star w = A^{-1} b` with `A = sum_{i=1}^s alpha_i (tau Lh)^{i-1}` and
/// `b = Pi_G sum_{i<=q} (tau L)^{i-1} w / i! + tau^q sum_{i>q} alpha_i (tau Lh)^{i-1-q} Pi_G L^q w`,
/// where `L` acting on `w` is the exact advection operator and `Lh` is the
/// DG operator (reduced for the sdA variant). `A` is inverted by the
/// iteration `x <- x + b - A x`, which converges for small `tau`.
pub fn pi_star_with(
    disc: &Discretization,
    data: AnalyticData,
    scheme: &SchemeSpec,
    tau: f64,
    q: usize,
    opts: &ResolventOptions,
) -> Result<DGCoeffs> {
    let space = disc.space();
    if data.dim() != space.dim() {
        return Err(Error::Incompatible(format!(
            "{}D data on a {}D space",
            data.dim(),
            space.dim()
        )));
    }
    ProjectionKind::PiStar {
        scheme: scheme.clone(),
        tau,
        q,
    }
    .validate(space)?;
    let lh: &BlockOperator = match scheme.variant() {
        Variant::Standard => disc.full(),
        Variant::Sda => disc.reduced()?,
    };
    let alpha = scheme.alpha();
    let s = alpha.len() - 1;
    let speeds = space.speeds();
    let exact = |i: usize| {
        let f = move |x: f64, y: f64| data.l_pow(i, speeds, x, y);
        special_projection(space, &f)
    };

    // Smooth part, projected term by term.
    let mut b = DGCoeffs::zeros(space);
    let mut fact = 1.0;
    for i in 1..=q {
        fact *= i as f64;
        b.axpy(tau.powi(i as i32 - 1) / fact, &exact(i - 1)?);
    }
    // Tail, by Horner in tau Lh.
    if s > q {
        let gq = exact(q)?;
        let mut acc = gq.clone();
        acc.scale(alpha[s]);
        for i in (q + 1..s).rev() {
            let mut next = apply_op(lh, &acc);
            next.scale(tau);
            next.axpy(alpha[i], &gq);
            acc = next;
        }
        b.axpy(tau.powi(q as i32), &acc);
    }

    // A x = x + sum_{i=2}^s alpha_i (tau Lh)^{i-1} x
    let apply_a = |x: &DGCoeffs| {
        let mut acc = x.clone();
        acc.scale(alpha[s]);
        for i in (1..s).rev() {
            let mut next = apply_op(lh, &acc);
            next.scale(tau);
            next.axpy(alpha[i], x);
            acc = next;
        }
        acc
    };
    let b_norm = b.norm().max(f64::MIN_POSITIVE);
    let mut x = b.clone();
    let mut prev_update = f64::INFINITY;
    let mut contraction = 0.0_f64;
    for _ in 0..opts.max_iter {
        let mut r = b.clone();
        r.axpy(-1.0, &apply_a(&x));
        let update = r.norm();
        if update <= opts.rel_tol * b_norm {
            return Ok(x);
        }
        if prev_update.is_finite() {
            contraction = update / prev_update;
        }
        if !update.is_finite() || contraction >= 1.0 {
            return Err(Error::CflTooLarge {
                contraction,
                residual: update / b_norm,
            });
        }
        prev_update = update;
        x.axpy(1.0, &r);
    }
    let mut r = b.clone();
    r.axpy(-1.0, &apply_a(&x));
    Err(Error::CflTooLarge {
        contraction,
        residual: r.norm() / b_norm,
    })
}
