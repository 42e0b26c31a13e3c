//! Orthonormal Legendre modal bases and Gauss–Legendre quadrature.
//!
//! On a cell of width `h` the 1D mode `a` is `sqrt(2/h) * phi_a(xi)` where
//! `phi_a = sqrt((2a+1)/2) P_a` is orthonormal on `[-1, 1]`; 2D modes are
//! products `phi_a(xi) phi_b(eta)` with `a + b <= k`, so every basis function
//! has unit `L^2` norm on its own cell and the coefficient 2-norm of a grid
//! function is its `L^2(Omega)` norm.

mod quadrature;

pub use quadrature::{gauss_quadrature, Quadrature};

use crate::error::{Error, Result};

/// Values and reference derivatives of the `k + 1` orthonormal Legendre
/// modes at `x_ref`.
pub fn legendre_modes(k: usize, x_ref: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(x_ref.abs() <= 1.0) {
        return Err(Error::Domain(x_ref));
    }
    Ok(legendre_unchecked(k, x_ref))
}

pub(crate) fn legendre_unchecked(k: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
    let mut p = vec![0.0; k + 1];
    let mut dp = vec![0.0; k + 1];
    p[0] = 1.0;
    if k >= 1 {
        p[1] = x;
        dp[1] = 1.0;
    }
    for n in 1..k {
        let nf = n as f64;
        p[n + 1] = ((2.0 * nf + 1.0) * x * p[n] - nf * p[n - 1]) / (nf + 1.0);
        // P'_{n+1} = P'_{n-1} + (2n+1) P_n
        dp[n + 1] = dp[n - 1] + (2.0 * nf + 1.0) * p[n];
    }
    for (a, (v, d)) in p.iter_mut().zip(dp.iter_mut()).enumerate() {
        let s = ((2 * a + 1) as f64 / 2.0).sqrt();
        *v *= s;
        *d *= s;
    }
    (p, dp)
}

/// Total-degree index set `{(a, b) : a + b <= k}` in graded
/// lexicographic order: degree by degree, x-power descending.
pub fn basis_2d_index(k: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity((k + 1) * (k + 2) / 2);
    for d in 0..=k {
        for b in 0..=d {
            out.push((d - b, b));
        }
    }
    out
}

/// A modal basis of `P^k` on the cells of a 1D or 2D mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyBasis {
    dim: usize,
    degree: usize,
    modes: Vec<(usize, usize)>,
}

impl PolyBasis {
    pub fn new(dim: usize, degree: usize) -> Result<Self> {
        let modes = match dim {
            1 => (0..=degree).map(|a| (a, 0)).collect(),
            2 => basis_2d_index(degree),
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "dimension must be 1 or 2, got {dim}"
                )))
            }
        };
        Ok(Self { dim, degree, modes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    /// Polynomial powers `(a, b)` of each mode (`b = 0` in 1D).
    pub fn modes(&self) -> &[(usize, usize)] {
        &self.modes
    }

    /// Total degree of mode `m`.
    pub fn mode_degree(&self, m: usize) -> usize {
        let (a, b) = self.modes[m];
        a + b
    }

    /// Indices of the modes of total degree exactly `k` (the top modes).
    pub fn top_modes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_modes()).filter(move |&m| self.mode_degree(m) == self.degree)
    }

    /// Reference-cell values of every mode at `(xi, eta)` (`eta` ignored in 1D),
    /// without the physical `sqrt(2/h)` scaling.
    pub fn eval_ref(&self, xi: f64, eta: f64) -> Vec<f64> {
        let (px, _) = legendre_unchecked(self.degree, xi);
        match self.dim {
            1 => px,
            _ => {
                let (py, _) = legendre_unchecked(self.degree, eta);
                self.modes.iter().map(|&(a, b)| px[a] * py[b]).collect()
            }
        }
    }
}
