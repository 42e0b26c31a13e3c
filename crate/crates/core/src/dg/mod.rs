//! Upwind DG discretization of constant-coefficient advection.

mod assemble;
mod compose;
mod jumps;
mod norm;
mod operator;
mod space;

pub(crate) use assemble::ReferenceData;
pub use assemble::{assemble_upwind, assemble_upwind_with_test_degree, reduce};
pub use compose::{apply_op, apply_pow, compose_mixed};
pub use jumps::{jump_forms, jump_inner, jump_seminorm, JumpForms};
pub use norm::{operator_norm, NormMethod, NormOptions};
pub use operator::{
    read_binary, write_binary, write_text, BlockOffset, BlockOperator, Identity, LinearMap,
    DENSE_CAP, DENSE_MAGIC,
};
pub use space::{
    l2_distance, measurement_points, project_cellwise, project_fn, project_fn_with, DGCoeffs, DgSpace,
    ProjectionTarget,
};
