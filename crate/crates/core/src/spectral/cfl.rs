use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::rk::{SchemeSpec, Variant};
use crate::spectral::symbol::{spectral_radius, FourierSymbol};

/// Settings of the Fourier CFL search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CflOptions {
    /// samples of `theta` on `[0, 2 pi)`
    pub n_theta: usize,
    /// admissible spectral radius is `1 + radius_tol`; loose enough to pass
    /// the slow polynomial growth of weakly stable pairings at small `c`
    pub radius_tol: f64,
    /// bisection stops once the bracket is narrower than this
    pub tol: f64,
    /// upper end of the search interval
    pub c_max: f64,
}

impl Default for CflOptions {
    fn default() -> Self {
        Self {
            n_theta: 2048,
            radius_tol: 1e-6,
            tol: 5e-4,
            c_max: 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CflResult {
    /// largest `c = tau beta / h` verified stable
    pub cfl: f64,
    /// no stable `c` was found; `cfl` is then 0
    pub weak: bool,
}

/// `max_theta rho(G(c, theta)) <= 1 + tol` on the sampled grid.
pub fn fourier_stable(
    symbol: &FourierSymbol,
    scheme: &SchemeSpec,
    c: f64,
    opts: &CflOptions,
) -> Result<bool> {
    for j in 0..opts.n_theta {
        let theta = 2.0 * PI * j as f64 / opts.n_theta as f64;
        let g = symbol.amplification(scheme, c, theta)?;
        if spectral_radius(g) > 1.0 + opts.radius_tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest stable CFL number of the `r`-stage Taylor scheme of the given
/// variant with `P^k` elements, by bisection on the Fourier criterion.
pub fn fourier_cfl(variant: Variant, r: usize, k: usize) -> Result<CflResult> {
    fourier_cfl_with(&SchemeSpec::taylor(r, variant)?, k, &CflOptions::default())
}

pub fn fourier_cfl_with(scheme: &SchemeSpec, k: usize, opts: &CflOptions) -> Result<CflResult> {
    if k == 0 {
        return Err(Error::UnsupportedDegree(0, "the CFL search needs k >= 1"));
    }
    if opts.n_theta == 0 || !(opts.tol > 0.0) || !(opts.c_max > opts.tol) {
        return Err(Error::InvalidArgument("bad CFL search options".into()));
    }
    let symbol = FourierSymbol::new(k);
    let stable = |c: f64| fourier_stable(&symbol, scheme, c, opts);
    if !stable(opts.tol)? {
        return Ok(CflResult { cfl: 0.0, weak: true });
    }
    if stable(opts.c_max)? {
        return Ok(CflResult {
            cfl: opts.c_max,
            weak: false,
        });
    }
    let (mut lo, mut hi) = (opts.tol, opts.c_max);
    while hi - lo > opts.tol {
        let mid = 0.5 * (lo + hi);
        if stable(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CflResult { cfl: lo, weak: false })
}
