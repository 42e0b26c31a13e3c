//! Convergence studies against exact translates of the initial data.

mod table;

use std::f64::consts::PI;
use std::sync::Arc;

pub use table::{
    accuracy_table, eoc, fill_eoc, regularity_study, run_case, AccuracyRow, FlatMode, MeshKind, Method, RowStatus,
    TimestepRule,
};

use crate::dg::{l2_distance, measurement_points, DGCoeffs};
use crate::error::{Error, Result};

/// Built-in initial data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialCondition {
    /// `sin(2 pi x)`
    Sin1d,
    /// `sin(2 pi (x + y))`
    Sin2d,
    /// `sin(2 pi x)^(flat - 1/3)`
    SinPow1d(u32),
    /// `sin(2 pi (x + y))^(flat - 1/3)`
    SinPow2d(u32),
}

impl InitialCondition {
    pub fn dim(self) -> usize {
        match self {
            InitialCondition::Sin1d | InitialCondition::SinPow1d(_) => 1,
            InitialCondition::Sin2d | InitialCondition::SinPow2d(_) => 2,
        }
    }

    pub fn flat(self) -> Option<u32> {
        match self {
            InitialCondition::SinPow1d(b) | InitialCondition::SinPow2d(b) => Some(b),
            _ => None,
        }
    }

    pub fn name(self) -> String {
        match self {
            InitialCondition::Sin1d => "sin_1d".into(),
            InitialCondition::Sin2d => "sin_2d".into(),
            InitialCondition::SinPow1d(b) => format!("sinpow_1d({b})"),
            InitialCondition::SinPow2d(b) => format!("sinpow_2d({b})"),
        }
    }

    pub fn eval(self, x: f64, y: f64) -> f64 {
        let phase = match self.dim() {
            1 => 2.0 * PI * x,
            _ => 2.0 * PI * (x + y),
        };
        match self.flat() {
            None => phase.sin(),
            Some(b) => sinpow(phase.sin(), b),
        }
    }
}

/// `s^(flat - 1/3)` read as `cbrt(s)^(3 flat - 1)`, the real branch for
/// negative `s`.
pub fn sinpow(s: f64, flat: u32) -> f64 {
    s.cbrt().powi(3 * flat as i32 - 1)
}

/// An advection problem with a known exact solution `u0(x - beta t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    pub initial: InitialCondition,
    pub t_final: f64,
    /// `(beta_x, beta_y)`; `beta_y` is ignored in 1D
    pub speeds: (f64, f64),
    /// Gauss points per direction, overriding the default rule
    pub quadrature: Option<usize>,
}

impl ProblemSpec {
    pub fn new(initial: InitialCondition) -> Self {
        let speeds = if initial.dim() == 1 { (1.0, 0.0) } else { (1.0, 1.0) };
        Self {
            initial,
            t_final: 1.0,
            speeds,
            quadrature: None,
        }
    }

    pub fn sin_1d() -> Self {
        Self::new(InitialCondition::Sin1d)
    }

    pub fn sin_2d() -> Self {
        Self::new(InitialCondition::Sin2d)
    }

    pub fn sinpow_1d(flat: u32) -> Result<Self> {
        check_flat(flat)?;
        Ok(Self::new(InitialCondition::SinPow1d(flat)))
    }

    pub fn sinpow_2d(flat: u32) -> Result<Self> {
        check_flat(flat)?;
        Ok(Self::new(InitialCondition::SinPow2d(flat)))
    }

    pub fn with_final_time(mut self, t: f64) -> Self {
        self.t_final = t;
        self
    }

    pub fn with_speeds(mut self, bx: f64, by: f64) -> Self {
        self.speeds = (bx, by);
        self
    }

    pub fn with_quadrature(mut self, n_points: usize) -> Self {
        self.quadrature = Some(n_points);
        self
    }

    pub fn dim(&self) -> usize {
        self.initial.dim()
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(b) = self.initial.flat() {
            check_flat(b)?;
        }
        if !(self.t_final >= 0.0) || !self.t_final.is_finite() {
            return Err(Error::InvalidArgument(format!("final time {} must be >= 0", self.t_final)));
        }
        if self.quadrature == Some(0) {
            return Err(Error::InvalidArgument("quadrature needs at least one point".into()));
        }
        Ok(())
    }

    pub fn initial_value(&self, x: f64, y: f64) -> f64 {
        self.initial.eval(x, y)
    }

    pub fn exact(&self, x: f64, y: f64, t: f64) -> f64 {
        let (bx, by) = self.speeds;
        self.initial.eval(x - bx * t, y - by * t)
    }

    /// Gauss points per direction for projecting and measuring: the usual
    /// `max(10, k + 4)`, raised to 16 for data of limited smoothness.
    pub fn quadrature_points(&self, k: usize) -> usize {
        if let Some(n) = self.quadrature {
            return n;
        }
        let base = measurement_points(k);
        if self.initial.flat().is_some() {
            base.max(16)
        } else {
            base
        }
    }
}

fn check_flat(flat: u32) -> Result<()> {
    if flat < 2 {
        return Err(Error::InvalidArgument(format!("regularity index {flat} must be >= 2")));
    }
    Ok(())
}

/// `L2` distance between `u` and the exact solution at time `t`.
pub fn l2_error(u: &DGCoeffs, problem: &ProblemSpec, t: f64) -> f64 {
    l2_error_with(u, problem, t, problem.quadrature_points(u.space().degree()))
}

pub fn l2_error_with(u: &DGCoeffs, problem: &ProblemSpec, t: f64, n_points: usize) -> f64 {
    l2_distance(u, |x, y| problem.exact(x, y, t), n_points)
}

/// The `L2` projection of the initial data.
pub fn initial_state(space: &Arc<crate::dg::DgSpace>, problem: &ProblemSpec) -> DGCoeffs {
    crate::dg::project_fn_with(
        space,
        |x, y| problem.initial_value(x, y),
        crate::dg::ProjectionTarget::Full,
        problem.quadrature_points(space.degree()),
    )
}
