use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Quadrature {
    pub fn n_points(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(node, weight)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self.iter().map(|(x, w)| w * f(mid + half * x)).sum::<f64>()
    }
}

/// Legendre polynomial `P_n(x)` and its derivative by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    // Interior nodes only, so 1 - x^2 never vanishes here.
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Standard Gauss–Legendre nodes and weights, nodes ascending.
pub fn gauss_quadrature(n_points: usize) -> Result<Quadrature> {
    if n_points == 0 {
        return Err(Error::InvalidArgument(
            "quadrature needs at least one point".into(),
        ));
    }
    let n = n_points;
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess, then Newton.
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(Quadrature { nodes, weights })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_rules() {
        let q = gauss_quadrature(1).unwrap();
        assert_eq!(q.nodes(), &[0.0]);
        assert!((q.weights()[0] - 2.0).abs() < 1e-15);

        let q = gauss_quadrature(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((q.nodes()[0] + s).abs() < 1e-15 && (q.nodes()[1] - s).abs() < 1e-15);
        assert!((q.weights()[0] - 1.0).abs() < 1e-15 && (q.weights()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_points_rejected() {
        assert!(gauss_quadrature(0).is_err());
    }

    #[test]
    fn five_points_integrate_degree_nine() {
        let q = gauss_quadrature(5).unwrap();
        let v = q.integrate(-1.0, 1.0, |x| x.powi(8));
        assert!((v - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn exact_up_to_degree_2n_minus_1() {
        for n in 1..=20 {
            let q = gauss_quadrature(n).unwrap();
            let wsum: f64 = q.weights().iter().sum();
            assert!((wsum - 2.0).abs() < 1e-13, "n={n}");
            for d in 0..2 * n {
                let exact = if d % 2 == 1 { 0.0 } else { 2.0 / (d as f64 + 1.0) };
                let v = q.integrate(-1.0, 1.0, |x| x.powi(d as i32));
                assert!((v - exact).abs() <= 1e-13, "n={n} d={d}: {v} vs {exact}");
            }
        }
    }
}
