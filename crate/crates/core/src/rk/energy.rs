/// Coefficients of the energy expansion
/// `||R w||^2 = sum_i beta_i tau^{2i} ||L^i w||^2
///            + sum_{i,j} gamma_ij tau^{i+j+1} <<L^i w, L^j w>>`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyCoefficients {
    /// `beta_0 .. beta_s`
    pub beta: Vec<f64>,
    /// `gamma[i][j]`, `0 <= i, j <= s - 1`
    pub gamma: Vec<Vec<f64>>,
}

impl EnergyCoefficients {
    /// Smallest `i >= 1` with `beta_i != 0`.
    pub fn first_nonzero_beta(&self) -> Option<usize> {
        self.beta
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, b)| b.abs() > 1e-14)
            .map(|(i, _)| i)
    }
}

fn sign(p: i64) -> f64 {
    if p.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `beta_i` and `gamma_ij` from `alpha_0 .. alpha_s`.
pub fn energy_coefficients(alpha: &[f64]) -> EnergyCoefficients {
    let s = alpha.len() - 1;
    let beta = (0..=s)
        .map(|i| {
            let lo = (2 * i).saturating_sub(s);
            let hi = (2 * i).min(s);
            (lo..=hi)
                .map(|l| alpha[l] * alpha[2 * i - l] * sign(i as i64 - l as i64))
                .sum()
        })
        .collect();
    let gamma = (0..s)
        .map(|i| {
            (0..s)
                .map(|j| {
                    let lo = (i + j + 1).saturating_sub(s);
                    let hi = i.min(j);
                    (lo..=hi)
                        .map(|l| {
                            sign(hi as i64 + 1 - l as i64) * alpha[l] * alpha[i + j + 1 - l]
                        })
                        .sum()
                })
                .collect()
        })
        .collect();
    EnergyCoefficients { beta, gamma }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_order_values() {
        let e = energy_coefficients(&[1.0, 1.0, 0.5]);
        assert_eq!(e.beta, vec![1.0, 0.0, 0.25]);
        assert_eq!(e.gamma, vec![vec![-1.0, -0.5], vec![-0.5, -0.5]]);
    }

    #[test]
    fn third_order_first_beta() {
        let e = energy_coefficients(&[1.0, 1.0, 0.5, 1.0 / 6.0]);
        assert_eq!(e.first_nonzero_beta(), Some(2));
        assert!((e.beta[2] + 1.0 / 12.0).abs() < 1e-15);
    }
}
