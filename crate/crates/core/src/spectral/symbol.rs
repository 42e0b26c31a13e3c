use nalgebra::{Complex, DMatrix};

use crate::dg::ReferenceData;
use crate::error::{Error, Result};
use crate::rk::{SchemeSpec, Variant};

pub type CMatrix = DMatrix<Complex<f64>>;

/// 1D Fourier symbol of `h L_h / beta` on a uniform periodic mesh:
/// `S(theta) = A + B exp(-i theta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSymbol {
    degree: usize,
    a: DMatrix<f64>,
    b: DMatrix<f64>,
}

impl FourierSymbol {
    pub fn new(degree: usize) -> Self {
        let rd = ReferenceData::new(degree);
        let n = degree + 1;
        Self {
            degree,
            a: DMatrix::from_row_slice(n, n, &rd.diagonal_1d()),
            b: DMatrix::from_row_slice(n, n, &rd.neighbor_1d()),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Diagonal block `A`.
    pub fn diagonal(&self) -> &DMatrix<f64> {
        &self.a
    }

    /// Upwind-neighbour block `B`.
    pub fn neighbor(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn at(&self, theta: f64) -> CMatrix {
        let e = Complex::from_polar(1.0, -theta);
        self.a.map(Complex::from) + self.b.map(|v| e * v)
    }

    /// `S~(theta)`: the symbol with the top-degree row zeroed.
    pub fn reduced_at(&self, theta: f64) -> CMatrix {
        let mut s = self.at(theta);
        s.row_mut(self.degree).fill(Complex::new(0.0, 0.0));
        s
    }

    /// Amplification matrix `G(c, theta)` of one step at `c = tau beta / h`.
    pub fn amplification(&self, scheme: &SchemeSpec, c: f64, theta: f64) -> Result<CMatrix> {
        let s = self.at(theta) * Complex::from(c);
        let inner = match scheme.variant() {
            Variant::Standard => s.clone(),
            Variant::Sda => {
                if self.degree == 0 {
                    return Err(Error::UnsupportedDegree(0, "the sdA variant needs k >= 1"));
                }
                self.reduced_at(theta) * Complex::from(c)
            }
        };
        let n = self.degree + 1;
        let id = CMatrix::identity(n, n);
        let alpha = scheme.alpha();
        let st = alpha.len() - 1;
        // P(z) = sum_{i=1}^{s} alpha_i z^{i-1} by Horner, then G = I + S P(S~).
        let mut p = id.clone() * Complex::from(alpha[st]);
        for i in (1..st).rev() {
            p = &inner * p + &id * Complex::from(alpha[i]);
        }
        Ok(id + s * p)
    }
}

pub(crate) fn spectral_radius(m: CMatrix) -> f64 {
    let schur = m.schur();
    let (_, t) = schur.unpack();
    t.diagonal().iter().map(|z| z.norm()).fold(0.0, f64::max)
}
