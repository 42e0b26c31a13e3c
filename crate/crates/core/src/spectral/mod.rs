//! Stability diagnostics: the `delta` metric of the one-step map over CFL
//! sweeps, and CFL numbers from 1D Fourier symbols.

mod cfl;
mod delta;
mod symbol;

pub use cfl::{fourier_cfl, fourier_cfl_with, fourier_stable, CflOptions, CflResult};
pub use delta::{
    cfl_sweep, delta, delta_with, excess, stability_space, DeltaMethod, StabilityPoint, DELTA_FLOOR,
};
pub use symbol::{CMatrix, FourierSymbol};
