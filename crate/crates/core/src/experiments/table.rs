use std::sync::Arc;

use rayon::prelude::*;

use crate::dg::DgSpace;
use crate::error::{Error, Result};
use crate::experiments::{initial_state, l2_error, ProblemSpec};
use crate::mesh::{build_mesh_1d, build_mesh_2d, Mesh};
use crate::rk::{evolve, Discretization, SchemeSpec, StepForm, Variant};

/// A time integrator paired with a polynomial degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Method {
    pub scheme: SchemeSpec,
    pub k: usize,
}

impl Method {
    pub fn taylor(r: usize, k: usize, variant: Variant) -> Result<Self> {
        Ok(Self {
            scheme: SchemeSpec::taylor(r, variant)?,
            k,
        })
    }

    pub fn r(&self) -> usize {
        self.scheme.order()
    }

    pub fn variant(&self) -> Variant {
        self.scheme.variant()
    }

    /// e.g. `RK3DG2`, `sdA-RK3DG2`
    pub fn label(&self) -> String {
        format!("{}DG{}", self.scheme.label(), self.k)
    }
}

/// Time step as a function of the resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimestepRule {
    /// `0.1 / (d N)`, or `0.1 / (d N^(6/5))` for fifth order and above
    Smooth,
    /// `c / (d N)`
    Cfl(f64),
    /// the given step for every `N`
    Fixed(f64),
}

impl TimestepRule {
    pub fn tau(&self, r: usize, dim: usize, n: usize) -> f64 {
        let (d, nf) = (dim as f64, n as f64);
        match *self {
            TimestepRule::Smooth if r >= 5 => 0.1 / (d * nf.powf(1.2)),
            TimestepRule::Smooth => 0.1 / (d * nf),
            TimestepRule::Cfl(c) => c / (d * nf),
            TimestepRule::Fixed(t) => t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeshKind {
    Uniform,
    /// interior nodes moved by up to `fraction * h`, seeded; 1D only
    Perturbed { fraction: f64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Ok,
    BlowUp { step: usize },
    Failed(String),
}

impl RowStatus {
    pub fn is_ok(&self) -> bool {
        *self == RowStatus::Ok
    }

    pub fn describe(&self) -> String {
        match self {
            RowStatus::Ok => "ok".into(),
            RowStatus::BlowUp { step } => format!("blow-up at step {step}"),
            RowStatus::Failed(msg) => format!("failed: {msg}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyRow {
    pub scheme: String,
    pub variant: Variant,
    pub dim: usize,
    pub n: usize,
    pub dofs: usize,
    /// NaN unless `status` is ok
    pub l2_error: f64,
    /// order against the previous row of the same scheme
    pub eoc: Option<f64>,
    pub status: RowStatus,
}

/// `log(e_coarse / e_fine) / log(n_fine / n_coarse)`; `log2` of the error
/// ratio when the mesh is halved.
pub fn eoc(e_coarse: f64, e_fine: f64, n_coarse: usize, n_fine: usize) -> f64 {
    (e_coarse / e_fine).ln() / (n_fine as f64 / n_coarse as f64).ln()
}

fn build_space(problem: &ProblemSpec, mesh: MeshKind, n: usize, k: usize) -> Result<Arc<DgSpace>> {
    let (bx, by) = problem.speeds;
    let m: Mesh = match (problem.dim(), mesh) {
        (1, MeshKind::Uniform) => build_mesh_1d(n, 0.0, 0)?.with_speed(bx)?.into(),
        (1, MeshKind::Perturbed { fraction, seed }) => build_mesh_1d(n, fraction, seed)?.with_speed(bx)?.into(),
        (_, MeshKind::Uniform) => build_mesh_2d(n, n, bx, by)?.into(),
        (_, MeshKind::Perturbed { .. }) => {
            return Err(Error::UnsupportedMesh("perturbed meshes are 1D only".into()))
        }
    };
    DgSpace::new(m, k)
}

/// Run one method at one resolution and measure the error at the final time.
pub fn run_case(
    method: &Method,
    problem: &ProblemSpec,
    n: usize,
    rule: TimestepRule,
    mesh: MeshKind,
) -> Result<AccuracyRow> {
    problem.validate()?;
    let space = build_space(problem, mesh, n, method.k)?;
    let disc = Discretization::new(&space);
    let u0 = initial_state(&space, problem);
    let tau = rule.tau(method.r(), problem.dim(), n);
    let mut row = AccuracyRow {
        scheme: method.label(),
        variant: method.variant(),
        dim: problem.dim(),
        n,
        dofs: space.n_dofs(),
        l2_error: f64::NAN,
        eoc: None,
        status: RowStatus::Ok,
    };
    match evolve(&method.scheme, &disc, &u0, problem.t_final, tau, StepForm::Butcher) {
        Ok(ev) => row.l2_error = l2_error(&ev.state, problem, problem.t_final),
        Err(Error::BlowUp { step }) => row.status = RowStatus::BlowUp { step },
        Err(e) => return Err(e),
    }
    Ok(row)
}

/// Set `eoc` on every row whose predecessor is an ok row of the same scheme.
pub fn fill_eoc(rows: &mut [AccuracyRow]) {
    for i in 1..rows.len() {
        let (a, b) = (&rows[i - 1], &rows[i]);
        if a.scheme == b.scheme && a.status.is_ok() && b.status.is_ok() && a.n != b.n {
            rows[i].eoc = Some(eoc(a.l2_error, b.l2_error, a.n, b.n));
        }
    }
}

/// Errors and orders of every method on every resolution, ordered by
/// (method, N). Blow-ups become flagged rows; other failures are errors.
pub fn accuracy_table(
    methods: &[Method],
    problem: &ProblemSpec,
    n_list: &[usize],
    rule: TimestepRule,
    mesh: MeshKind,
) -> Result<Vec<AccuracyRow>> {
    if methods.is_empty() || n_list.is_empty() {
        return Err(Error::InvalidArgument("empty method or resolution list".into()));
    }
    let jobs: Vec<(&Method, usize)> = methods
        .iter()
        .flat_map(|m| n_list.iter().map(move |&n| (m, n)))
        .collect();
    let mut rows = jobs
        .par_iter()
        .map(|(m, n)| run_case(m, problem, *n, rule, mesh))
        .collect::<Result<Vec<_>>>()?;
    fill_eoc(&mut rows);
    Ok(rows)
}

/// Regularity index relative to the order `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlatMode {
    EqualR,
    RPlusOne,
}

impl FlatMode {
    pub fn flat(self, r: usize) -> u32 {
        match self {
            FlatMode::EqualR => r as u32,
            FlatMode::RPlusOne => r as u32 + 1,
        }
    }
}

/// Limited-regularity study with `sin^(flat - 1/3)` data. The final time
/// defaults to 1 for `r <= 3` and 500 above.
pub fn regularity_study(
    method: &Method,
    mode: FlatMode,
    dim: usize,
    n_list: &[usize],
    t_final: Option<f64>,
) -> Result<Vec<AccuracyRow>> {
    let r = method.r();
    if r != method.k + 1 {
        return Err(Error::InvalidArgument(format!(
            "regularity studies need r = k + 1, got r = {r}, k = {}",
            method.k
        )));
    }
    let flat = mode.flat(r);
    let problem = match dim {
        1 => ProblemSpec::sinpow_1d(flat)?,
        2 => ProblemSpec::sinpow_2d(flat)?,
        d => return Err(Error::InvalidArgument(format!("dimension {d} is not 1 or 2"))),
    };
    let t = t_final.unwrap_or(if r <= 3 { 1.0 } else { 500.0 });
    accuracy_table(
        std::slice::from_ref(method),
        &problem.with_final_time(t),
        n_list,
        TimestepRule::Smooth,
        MeshKind::Uniform,
    )
}
