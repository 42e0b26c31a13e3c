//! Job execution for each command. Jobs fan out over the rayon pool; rows
//! come back in a fixed order, so output depends only on the configuration.

use rayon::prelude::*;
use rkdg_core::dg::{apply_op, apply_pow, jump_inner, jump_seminorm, DGCoeffs, DgSpace, ProjectionTarget};
use rkdg_core::experiments::{
    fill_eoc, run_case, AccuracyRow, MeshKind, Method, ProblemSpec, RowStatus, TimestepRule,
};
use rkdg_core::mesh::{build_mesh_1d, build_mesh_2d};
use rkdg_core::rk::{step, Discretization, SchemeSpec, StepForm};
use rkdg_core::spectral::{cfl_sweep, fourier_cfl_with, CflOptions};

use crate::config::{Command, RunConfig};
use crate::csv::{self, CflRow, PropRow, RegularityRow, StabilityRow};
use crate::error::{CliError, Result};

/// CSV text plus row counts for the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub csv: String,
    /// numerical blow-ups, reported as warnings
    pub flagged: usize,
    /// rows that failed outright or property checks that did not hold
    pub failed: usize,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        Command::Accuracy => accuracy(cfg),
        Command::Regularity => regularity(cfg),
        Command::Stability => stability(cfg),
        Command::Cfl => cfl(cfg),
        Command::PropTests => prop_tests(cfg),
    }
}

fn methods(cfg: &RunConfig) -> Result<Vec<Method>> {
    cfg.methods()
        .into_iter()
        .map(|(v, r, k)| Ok(Method::taylor(r, k, v)?))
        .collect()
}

fn case(method: &Method, problem: &ProblemSpec, n: usize, rule: TimestepRule, mesh: MeshKind) -> AccuracyRow {
    run_case(method, problem, n, rule, mesh).unwrap_or_else(|e| AccuracyRow {
        scheme: method.label(),
        variant: method.variant(),
        dim: problem.dim(),
        n,
        dofs: 0,
        l2_error: f64::NAN,
        eoc: None,
        status: RowStatus::Failed(e.to_string()),
    })
}

fn count(rows: &[AccuracyRow]) -> (usize, usize) {
    let flagged = rows.iter().filter(|r| matches!(r.status, RowStatus::BlowUp { .. })).count();
    let failed = rows.iter().filter(|r| matches!(r.status, RowStatus::Failed(_))).count();
    (flagged, failed)
}

fn with_quadrature(p: ProblemSpec, cfg: &RunConfig) -> ProblemSpec {
    match cfg.quadrature {
        Some(q) => p.with_quadrature(q),
        None => p,
    }
}

fn accuracy(cfg: &RunConfig) -> Result<Outcome> {
    let base = if cfg.dim == 1 { ProblemSpec::sin_1d() } else { ProblemSpec::sin_2d() };
    let problem = with_quadrature(base.with_final_time(cfg.t_final.unwrap_or(1.0)), cfg);
    problem.validate()?;
    let rule = match (cfg.cfl.first(), cfg.tau) {
        (Some(&c), _) => TimestepRule::Cfl(c),
        (None, Some(t)) => TimestepRule::Fixed(t),
        (None, None) => TimestepRule::Smooth,
    };
    let mesh = if cfg.perturb > 0.0 {
        MeshKind::Perturbed {
            fraction: cfg.perturb,
            seed: cfg.seed,
        }
    } else {
        MeshKind::Uniform
    };
    let methods = methods(cfg)?;
    let jobs: Vec<(&Method, usize)> = methods
        .iter()
        .flat_map(|m| cfg.n_list.iter().map(move |&n| (m, n)))
        .collect();
    let mut rows: Vec<AccuracyRow> = jobs.par_iter().map(|&(m, n)| case(m, &problem, n, rule, mesh)).collect();
    fill_eoc(&mut rows);
    let (flagged, failed) = count(&rows);
    Ok(Outcome {
        csv: csv::write_accuracy(cfg, &rows),
        flagged,
        failed,
    })
}

fn regularity(cfg: &RunConfig) -> Result<Outcome> {
    let methods = methods(cfg)?;
    let mut groups = Vec::new();
    for m in &methods {
        let r = m.r();
        if m.k + 1 != r {
            return Err(CliError::Conflict(format!(
                "regularity runs need k = r - 1, got r = {r}, k = {}",
                m.k
            )));
        }
        for mode in &cfg.flat {
            let flat = mode.flat(r);
            let p = if cfg.dim == 1 {
                ProblemSpec::sinpow_1d(flat)?
            } else {
                ProblemSpec::sinpow_2d(flat)?
            };
            let t = cfg.t_final.unwrap_or(if r <= 3 { 1.0 } else { 500.0 });
            groups.push((m, flat, with_quadrature(p.with_final_time(t), cfg)));
        }
    }
    let jobs: Vec<(usize, usize)> = (0..groups.len())
        .flat_map(|g| cfg.n_list.iter().map(move |&n| (g, n)))
        .collect();
    let mut rows: Vec<AccuracyRow> = jobs
        .par_iter()
        .map(|&(g, n)| case(groups[g].0, &groups[g].2, n, TimestepRule::Smooth, MeshKind::Uniform))
        .collect();
    for chunk in rows.chunks_mut(cfg.n_list.len()) {
        fill_eoc(chunk);
    }
    let (flagged, failed) = count(&rows);
    let out: Vec<RegularityRow> = rows
        .into_iter()
        .zip(&jobs)
        .map(|(row, &(g, _))| RegularityRow {
            row,
            flat: groups[g].1,
            t_final: groups[g].2.t_final,
        })
        .collect();
    Ok(Outcome {
        csv: csv::write_regularity(cfg, &out),
        flagged,
        failed,
    })
}

fn stability(cfg: &RunConfig) -> Result<Outcome> {
    let mut rows = Vec::new();
    for (v, r, k) in cfg.methods() {
        let scheme = SchemeSpec::taylor(r, v)?;
        let label = format!("{}DG{k}", scheme.label());
        for &m in &cfg.m {
            let points = cfl_sweep(&scheme, cfg.dim, k, &cfg.n_list, m, &cfg.cfl, cfg.delta_method)?;
            let grid = cfg.n_list.iter().flat_map(|&n| cfg.cfl.iter().map(move |&c| (n, c)));
            for (p, (n, c)) in points.into_iter().zip(grid) {
                let (delta, status) = match p {
                    Ok(p) => (Some(p.delta), "ok".to_string()),
                    Err(e) => (None, format!("failed: {e}")),
                };
                rows.push(StabilityRow {
                    scheme: label.clone(),
                    variant: v,
                    dim: cfg.dim,
                    n,
                    m,
                    cfl: c,
                    delta,
                    status,
                });
            }
        }
    }
    let failed = rows.iter().filter(|r| r.delta.is_none()).count();
    Ok(Outcome {
        csv: csv::write_stability(cfg, &rows),
        flagged: 0,
        failed,
    })
}

fn cfl(cfg: &RunConfig) -> Result<Outcome> {
    let jobs = cfg.methods();
    let rows: Vec<CflRow> = jobs
        .par_iter()
        .map(|&(v, r, k)| {
            let res = SchemeSpec::taylor(r, v).and_then(|s| {
                let label = format!("{}DG{k}", s.label());
                fourier_cfl_with(&s, k, &CflOptions::default()).map(|c| (label, c))
            });
            match res {
                Ok((scheme, c)) => CflRow {
                    scheme,
                    variant: v,
                    r,
                    k,
                    cfl: Some(c.cfl),
                    weak: c.weak,
                    status: "ok".into(),
                },
                Err(e) => CflRow {
                    scheme: format!("r{r}k{k}"),
                    variant: v,
                    r,
                    k,
                    cfl: None,
                    weak: false,
                    status: format!("failed: {e}"),
                },
            }
        })
        .collect();
    let failed = rows.iter().filter(|r| r.cfl.is_none()).count();
    Ok(Outcome {
        csv: csv::write_cfl(cfg, &rows),
        flagged: 0,
        failed,
    })
}

fn rel(diff: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

fn prop_space(cfg: &RunConfig, n: usize, k: usize) -> Result<std::sync::Arc<DgSpace>> {
    Ok(if cfg.dim == 1 {
        DgSpace::new(build_mesh_1d(n, cfg.perturb, cfg.seed)?, k)?
    } else {
        DgSpace::new(build_mesh_2d(n, n, 1.0, 0.5)?, k)?
    })
}

/// Operator identities on seeded random states.
fn prop_tests(cfg: &RunConfig) -> Result<Outcome> {
    let mut degrees: Vec<usize> = cfg.methods().into_iter().map(|(_, _, k)| k).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut jobs = Vec::new();
    for &k in &degrees {
        for &n in &cfg.n_list {
            jobs.push((k, n));
        }
    }
    let rows: Vec<Vec<PropRow>> = jobs
        .par_iter()
        .map(|&(k, n)| prop_case(cfg, k, n))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<PropRow> = rows.into_iter().flatten().collect();
    let failed = rows.iter().filter(|r| !r.passed()).count();
    Ok(Outcome {
        csv: csv::write_props(cfg, &rows),
        flagged: 0,
        failed,
    })
}

fn prop_case(cfg: &RunConfig, k: usize, n: usize) -> Result<Vec<PropRow>> {
    let space = prop_space(cfg, n, k)?;
    let disc = Discretization::new(&space);
    let l = disc.full();
    let tau = 0.05 / n as f64;
    let mut worst = [0.0f64; 4];
    for s in 0..cfg.samples as u64 {
        let w = DGCoeffs::random(&space, cfg.seed.wrapping_add(2 * s));
        let v = DGCoeffs::random(&space, cfg.seed.wrapping_add(2 * s + 1));
        let lw = apply_op(l, &w);

        let j = jump_seminorm(&w).powi(2);
        worst[0] = worst[0].max(rel((j + 2.0 * lw.dot(&w)).abs(), j));

        if k >= 1 {
            let mut d = apply_op(disc.reduced()?, &w);
            d.axpy(-1.0, &lw.project(ProjectionTarget::KMinus1));
            worst[1] = worst[1].max(rel(d.norm(), lw.norm()));
        }

        for i in 1..=3 {
            let mut total = apply_pow(l, i, &w).dot(&v);
            let mut scale = total.abs();
            for jdx in 0..i {
                let t = jump_inner(&apply_pow(l, i - jdx - 1, &w), &apply_pow(l, jdx, &v))?;
                total += if jdx % 2 == 0 { t } else { -t };
                scale = scale.max(t.abs());
            }
            let last = w.dot(&apply_pow(l, i, &v));
            total -= if i % 2 == 0 { last } else { -last };
            scale = scale.max(last.abs());
            worst[2] = worst[2].max(rel(total.abs(), scale));
        }

        for &(variant, r, _) in cfg.methods().iter().filter(|m| m.1 <= 4) {
            let scheme = SchemeSpec::taylor(r, variant)?;
            let a = step(&scheme, &disc, &w, tau, StepForm::Butcher)?.state;
            let mut d = step(&scheme, &disc, &w, tau, StepForm::Compact)?.state;
            d.axpy(-1.0, &a);
            worst[3] = worst[3].max(rel(d.norm(), a.norm()));
        }
    }
    let mut checks = vec![("jump-identity", worst[0], 1e-10)];
    if k >= 1 {
        checks.push(("reduced-operator", worst[1], 1e-13));
    }
    checks.push(("integration-by-parts", worst[2], 1e-10));
    checks.push(("butcher-compact", worst[3], 1e-10));
    Ok(checks
        .into_iter()
        .map(|(check, max_residual, tolerance)| PropRow {
            check: check.to_string(),
            dim: cfg.dim,
            k,
            n,
            samples: cfg.samples,
            max_residual,
            tolerance,
        })
        .collect())
}
