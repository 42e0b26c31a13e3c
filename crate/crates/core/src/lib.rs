//! Runge-Kutta discontinuous Galerkin schemes for linear advection on
//! periodic meshes, including the stage-dependent (sdA) variants that test
//! inner stages against the reduced space `V_h^{k-1}`.

pub mod basis;
pub mod dg;
pub mod error;
pub mod experiments;
pub mod mesh;
pub mod projections;
pub mod rk;
pub mod spectral;

pub use basis::{gauss_quadrature, PolyBasis, Quadrature};
pub use dg::{
    assemble_upwind, reduce, BlockOperator, DGCoeffs, DgSpace, LinearMap, ProjectionTarget,
};
pub use error::{Error, Result};
pub use experiments::{accuracy_table, l2_error, regularity_study, AccuracyRow, Method, ProblemSpec, TimestepRule};
pub use mesh::{build_mesh_1d, build_mesh_2d, Mesh, Mesh1D, Mesh2D};
pub use projections::{special_projection, gauss_radau_1d, lsz_2d, pi_star, AnalyticData, CellFn, ProjectionKind};
pub use rk::{Discretization, EvolutionMap, SchemeSpec, StepForm, Variant};
