use crate::dg::{DGCoeffs, LinearMap};
use crate::error::{Error, Result};
use crate::rk::scheme::{SchemeSpec, StepForm};
use crate::rk::step::{Discretization, EvolutionMap};

/// Coefficient magnitude treated as blow-up.
pub const BLOW_UP_THRESHOLD: f64 = 1e12;

/// Final state of a time integration.
#[derive(Debug, Clone)]
pub struct Evolution {
    pub state: DGCoeffs,
    /// number of steps taken, including a shortened last step
    pub steps: usize,
    /// length of the shortened last step when `T / tau` is not an integer
    pub short_last_step: Option<f64>,
    /// Butcher form was requested but compact form ran
    pub fell_back: bool,
}

/// Full steps of size `tau` covering `t_final`, and a trailing partial step
/// when the ratio is not an integer up to rounding.
pub fn step_count(t_final: f64, tau: f64) -> (usize, Option<f64>) {
    let ratio = t_final / tau;
    let nearest = ratio.round();
    if (ratio - nearest).abs() <= 4.0 * f64::EPSILON * ratio.max(1.0) {
        (nearest as usize, None)
    } else {
        let full = ratio.floor();
        (full as usize, Some(t_final - full * tau))
    }
}

fn blown_up(v: &[f64]) -> bool {
    v.iter().any(|x| !x.is_finite() || x.abs() > BLOW_UP_THRESHOLD)
}

/// March `u0` to `t_final` with steps of size `tau`.
pub fn evolve(
    scheme: &SchemeSpec,
    disc: &Discretization,
    u0: &DGCoeffs,
    t_final: f64,
    tau: f64,
    form: StepForm,
) -> Result<Evolution> {
    if !(t_final >= 0.0) || !(tau > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need T >= 0 and tau > 0, got T = {t_final}, tau = {tau}"
        )));
    }
    let map = EvolutionMap::new(scheme, disc, tau, form)?;
    let (full, partial) = step_count(t_final, tau);
    let mut u = u0.values().to_vec();
    let mut next = vec![0.0; u.len()];
    for n in 0..full {
        map.apply(&u, &mut next);
        std::mem::swap(&mut u, &mut next);
        if blown_up(&u) {
            return Err(Error::BlowUp { step: n + 1 });
        }
    }
    if let Some(dt) = partial {
        let last = EvolutionMap::new(scheme, disc, dt, form)?;
        last.apply(&u, &mut next);
        std::mem::swap(&mut u, &mut next);
        if blown_up(&u) {
            return Err(Error::BlowUp { step: full + 1 });
        }
    }
    Ok(Evolution {
        state: DGCoeffs::from_values(u0.space(), u)?,
        steps: full + partial.is_some() as usize,
        short_last_step: partial,
        fell_back: map.fell_back(),
    })
}
