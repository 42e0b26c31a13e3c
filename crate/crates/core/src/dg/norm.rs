use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dg::operator::{LinearMap, DENSE_CAP};
use crate::dg::space::dot;
use crate::error::{Error, Result};

/// How to estimate `||A^m||_2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    DenseSvd,
    PowerIteration,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormOptions {
    /// largest system exported densely
    pub dense_cap: usize,
    /// relative change of the Rayleigh estimate at which power iteration stops
    pub tol: f64,
    pub max_iter: usize,
    /// seed of the starting vector
    pub seed: u64,
    /// retry with a dense SVD (when under the cap) if power iteration stalls
    pub dense_fallback: bool,
}

impl Default for NormOptions {
    fn default() -> Self {
        Self {
            dense_cap: DENSE_CAP,
            tol: 1e-10,
            max_iter: 10_000,
            seed: 0x5eed,
            dense_fallback: true,
        }
    }
}

/// `y = A^m x` using `tmp` as scratch.
fn apply_power<M: LinearMap + ?Sized>(op: &M, m: usize, x: &[f64], y: &mut [f64], tmp: &mut [f64]) {
    y.copy_from_slice(x);
    for _ in 0..m {
        tmp.copy_from_slice(y);
        op.apply(tmp, y);
    }
}

fn apply_power_transpose<M: LinearMap + ?Sized>(
    op: &M,
    m: usize,
    x: &[f64],
    y: &mut [f64],
    tmp: &mut [f64],
) {
    y.copy_from_slice(x);
    for _ in 0..m {
        tmp.copy_from_slice(y);
        op.apply_transpose(tmp, y);
    }
}

/// `||A^m||_2`.
pub fn operator_norm<M: LinearMap + ?Sized>(
    op: &M,
    method: NormMethod,
    m: usize,
    opts: &NormOptions,
) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("power m must be at least 1".into()));
    }
    match method {
        NormMethod::DenseSvd => dense_norm(op, m, opts.dense_cap),
        NormMethod::PowerIteration => match power_norm(op, m, opts) {
            Err(e @ Error::PowerIteration { .. }) => {
                if opts.dense_fallback && op.dim() <= opts.dense_cap {
                    dense_norm(op, m, opts.dense_cap)
                } else {
                    Err(e)
                }
            }
            other => other,
        },
    }
}

fn dense_norm<M: LinearMap + ?Sized>(op: &M, m: usize, cap: usize) -> Result<f64> {
    let a = op.to_dense(cap)?;
    let mut p = a.clone();
    for _ in 1..m {
        p = &p * &a;
    }
    Ok(p.singular_values().iter().cloned().fold(0.0, f64::max))
}

/// Power iteration on `A^m (A^m)^T`, matrix-free.
fn power_norm<M: LinearMap + ?Sized>(op: &M, m: usize, opts: &NormOptions) -> Result<f64> {
    let n = op.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let nx = dot(&x, &x).sqrt();
    x.iter_mut().for_each(|v| *v /= nx);
    let mut t = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    let mut estimate = 0.0;
    for _ in 0..opts.max_iter {
        apply_power_transpose(op, m, &x, &mut t, &mut tmp);
        apply_power(op, m, &t, &mut y, &mut tmp);
        let ny = dot(&y, &y).sqrt();
        if ny == 0.0 {
            return Ok(0.0);
        }
        let converged = (ny - estimate).abs() <= opts.tol * ny;
        estimate = ny;
        x.iter_mut().zip(&y).for_each(|(a, b)| *a = b / ny);
        if converged {
            return Ok(estimate.sqrt());
        }
    }
    Err(Error::PowerIteration {
        iterations: opts.max_iter,
        estimate: estimate.sqrt(),
        iterate: x,
    })
}
