//! Explicit Runge-Kutta time stepping for `u' = L_h u`.

mod energy;
mod evolve;
mod scheme;
mod step;

pub use energy::{energy_coefficients, EnergyCoefficients};
pub use evolve::{evolve, step_count, Evolution, BLOW_UP_THRESHOLD};
pub use scheme::{InnerOperator, SchemeSpec, StepForm, Tableau, Variant};
pub use step::{step, Discretization, EvolutionMap, StepOutput};
