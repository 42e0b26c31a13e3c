//! Special projections used by the error analysis: Gauss-Radau in 1D,
//! the Liu-Shu-Zhang projection on uniform 2D grids, and the time-step
//! dependent approximation operator `Pi_star`.

mod lsz;
mod pi_star;
mod radau;

use std::f64::consts::PI;

pub use lsz::lsz_2d;
pub use pi_star::{pi_star, pi_star_with, ResolventOptions};
pub use radau::gauss_radau_1d;

use crate::dg::{DGCoeffs, DgSpace};
use crate::error::{Error, Result};
use crate::rk::{Discretization, SchemeSpec};

/// A function known cell by cell, so that one-sided traces are available.
pub trait CellFn: Sync {
    /// Value on cell `cell` at the physical point `(x, y)` of its closure.
    fn at(&self, cell: usize, x: f64, y: f64) -> f64;
}

impl<F: Fn(f64, f64) -> f64 + Sync> CellFn for F {
    fn at(&self, _cell: usize, x: f64, y: f64) -> f64 {
        self(x, y)
    }
}

impl CellFn for DGCoeffs {
    fn at(&self, cell: usize, x: f64, y: f64) -> f64 {
        let (x0, hx, y0, hy) = self.space().cell_box(cell);
        let xi = 2.0 * (x - x0) / hx - 1.0;
        let eta = if self.space().dim() == 1 {
            0.0
        } else {
            2.0 * (y - y0) / hy - 1.0
        };
        self.eval(cell, xi, eta)
    }
}

/// Smooth data with closed-form `L^i w`, where `L = -beta . grad`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalyticData {
    /// `sin(2 pi x)`
    Sin1d,
    /// `sin(2 pi (x + y))`
    Sin2d,
}

impl AnalyticData {
    pub fn dim(self) -> usize {
        match self {
            AnalyticData::Sin1d => 1,
            AnalyticData::Sin2d => 2,
        }
    }

    pub fn value(self, x: f64, y: f64) -> f64 {
        self.l_pow(0, (1.0, 1.0), x, y)
    }

    /// `(L^i w)(x, y)` for speeds `(beta_x, beta_y)`:
    /// `(-2 pi b)^i sin(phase + i pi / 2)` with `b` the speed along the wave.
    pub fn l_pow(self, i: usize, speeds: (f64, f64), x: f64, y: f64) -> f64 {
        let (b, phase) = match self {
            AnalyticData::Sin1d => (speeds.0, 2.0 * PI * x),
            AnalyticData::Sin2d => (speeds.0 + speeds.1, 2.0 * PI * (x + y)),
        };
        (-2.0 * PI * b).powi(i as i32) * (phase + i as f64 * 0.5 * PI).sin()
    }
}

/// The projections of this module as a value.
#[derive(Debug, Clone, PartialEq)]
pub enum ProjectionKind {
    GaussRadau1d,
    Lsz2d,
    PiStar { scheme: SchemeSpec, tau: f64, q: usize },
}

impl ProjectionKind {
    /// Check the preconditions against a space.
    pub fn validate(&self, space: &DgSpace) -> Result<()> {
        match self {
            ProjectionKind::GaussRadau1d if space.dim() != 1 => {
                Err(Error::UnsupportedMesh("the Gauss-Radau projection is 1D".into()))
            }
            ProjectionKind::Lsz2d if space.dim() != 2 => {
                Err(Error::UnsupportedMesh("the Liu-Shu-Zhang projection is 2D".into()))
            }
            ProjectionKind::PiStar { scheme, tau, q } => {
                let hi = scheme.order().min(space.degree() + 1);
                if *q < 1 || *q > hi {
                    return Err(Error::InvalidArgument(format!(
                        "truncation order q = {q} must lie in [1, {hi}]"
                    )));
                }
                if !(*tau >= 0.0 && tau.is_finite()) {
                    return Err(Error::InvalidArgument(format!("time step {tau} must be >= 0")));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn apply(&self, disc: &Discretization, data: AnalyticData) -> Result<DGCoeffs> {
        let space = disc.space();
        self.validate(space)?;
        let speeds = space.speeds();
        let w = move |x: f64, y: f64| data.l_pow(0, speeds, x, y);
        match self {
            ProjectionKind::GaussRadau1d => gauss_radau_1d(space, &w),
            ProjectionKind::Lsz2d => lsz_2d(space, &w),
            ProjectionKind::PiStar { scheme, tau, q } => pi_star(disc, data, scheme, *tau, *q),
        }
    }
}

/// `Pi_G`: Gauss-Radau in 1D, Liu-Shu-Zhang in 2D.
pub fn special_projection<W: CellFn + ?Sized>(space: &std::sync::Arc<DgSpace>, w: &W) -> Result<DGCoeffs> {
    match space.dim() {
        1 => gauss_radau_1d(space, w),
        _ => lsz_2d(space, w),
    }
}
