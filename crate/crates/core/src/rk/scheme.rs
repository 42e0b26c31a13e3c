use std::fmt;

use crate::error::{Error, Result};

/// Which DG operator the inner RK stages use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `L_h` everywhere (RKDG)
    Standard,
    /// `L~_h` at inner stages, `L_h` in the final combination (sdA-RKDG)
    Sda,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Standard => "standard",
            Variant::Sda => "sdA",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "standard" | "rkdg" => Ok(Variant::Standard),
            "sda" | "sda-rkdg" => Ok(Variant::Sda),
            other => Err(Error::InvalidArgument(format!("unknown variant `{other}`"))),
        }
    }
}

/// Operator applied to a stage value when it feeds later inner stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerOperator {
    Full,
    Reduced,
}

/// How a step is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepForm {
    /// staged recursion with a Butcher tableau
    Butcher,
    /// nested evaluation of the stability polynomial
    Compact,
}

/// Explicit Butcher tableau with strictly lower-triangular `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tableau {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
}

impl Tableau {
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self> {
        let s = b.len();
        if s == 0 || a.len() != s || a.iter().any(|row| row.len() != s) {
            return Err(Error::InvalidArgument("tableau must be s x s with s weights".into()));
        }
        for (i, row) in a.iter().enumerate() {
            if row[i..].iter().any(|&v| v != 0.0) {
                return Err(Error::InvalidArgument(
                    "tableau must be strictly lower triangular".into(),
                ));
            }
        }
        Ok(Self { a, b })
    }

    pub fn forward_euler() -> Self {
        Self::new(vec![vec![0.0]], vec![1.0]).unwrap()
    }

    /// Explicit midpoint rule.
    pub fn midpoint() -> Self {
        Self::new(vec![vec![0.0, 0.0], vec![0.5, 0.0]], vec![0.0, 1.0]).unwrap()
    }

    /// Three-stage third-order SSP scheme in Butcher form.
    pub fn ssp3() -> Self {
        Self::new(
            vec![
                vec![0.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0],
                vec![0.25, 0.25, 0.0],
            ],
            vec![1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0],
        )
        .unwrap()
    }

    /// Classical fourth-order scheme.
    pub fn rk4() -> Self {
        Self::new(
            vec![
                vec![0.0, 0.0, 0.0, 0.0],
                vec![0.5, 0.0, 0.0, 0.0],
                vec![0.0, 0.5, 0.0, 0.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            vec![1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0],
        )
        .unwrap()
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self, i: usize, j: usize) -> f64 {
        self.a[i][j]
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Stability-polynomial coefficients `alpha_0 = 1`, `alpha_i = b^T A^{i-1} 1`.
    pub fn alphas(&self) -> Vec<f64> {
        let s = self.stages();
        let mut out = vec![1.0];
        let mut v = vec![1.0; s];
        for _ in 0..s {
            out.push(self.b.iter().zip(&v).map(|(b, x)| b * x).sum());
            v = (0..s)
                .map(|i| (0..s).map(|j| self.a[i][j] * v[j]).sum())
                .collect();
        }
        out
    }
}

/// An explicit RK scheme applied to `u' = L u`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeSpec {
    order: usize,
    alpha: Vec<f64>,
    variant: Variant,
    tableau: Option<Tableau>,
    plan: Option<Vec<InnerOperator>>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

impl SchemeSpec {
    /// The `r`-stage `r`th-order scheme, `alpha_i = 1/i!`. Orders 1 to 4 carry
    /// a built-in tableau; higher orders run in compact form only.
    pub fn taylor(order: usize, variant: Variant) -> Result<Self> {
        if order == 0 {
            return Err(Error::UnsupportedScheme("order must be at least 1".into()));
        }
        let tableau = match order {
            1 => Some(Tableau::forward_euler()),
            2 => Some(Tableau::midpoint()),
            3 => Some(Tableau::ssp3()),
            4 => Some(Tableau::rk4()),
            _ => None,
        };
        Ok(Self {
            order,
            alpha: (0..=order).map(|i| 1.0 / factorial(i)).collect(),
            variant,
            tableau,
            plan: None,
        })
    }

    /// Scheme defined by a tableau of the stated order.
    pub fn from_tableau(tableau: Tableau, order: usize, variant: Variant) -> Result<Self> {
        let alpha = tableau.alphas();
        if alpha.len() < order + 1 {
            return Err(Error::UnsupportedScheme(format!(
                "a {}-stage tableau cannot have order {order}",
                alpha.len() - 1
            )));
        }
        for (i, &a) in alpha.iter().enumerate().take(order + 1) {
            if (a - 1.0 / factorial(i)).abs() > 1e-12 {
                return Err(Error::UnsupportedScheme(format!(
                    "tableau does not have order {order} (alpha_{i} = {a})"
                )));
            }
        }
        Ok(Self {
            order,
            alpha,
            variant,
            tableau: Some(tableau),
            plan: None,
        })
    }

    /// Compact-only scheme from arbitrary coefficients `alpha_0 .. alpha_s`.
    pub fn from_alphas(alpha: Vec<f64>, order: usize, variant: Variant) -> Result<Self> {
        if alpha.len() < 2 || alpha[0] != 1.0 || alpha[1] != 1.0 {
            return Err(Error::UnsupportedScheme("need alpha_0 = alpha_1 = 1".into()));
        }
        Ok(Self {
            order,
            alpha,
            variant,
            tableau: None,
            plan: None,
        })
    }

    /// Per-stage choice of the inner operator (entry `j` is applied to stage
    /// `j`). Only executable in Butcher form.
    pub fn with_stage_plan(mut self, plan: Vec<InnerOperator>) -> Result<Self> {
        let Some(t) = &self.tableau else {
            return Err(Error::UnsupportedScheme("a stage plan needs a tableau".into()));
        };
        if plan.len() != t.stages() {
            return Err(Error::InvalidArgument(format!(
                "stage plan has {} entries for {} stages",
                plan.len(),
                t.stages()
            )));
        }
        self.plan = Some(plan);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn stages(&self) -> usize {
        self.alpha.len() - 1
    }

    /// `alpha_0 .. alpha_s`
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn tableau(&self) -> Option<&Tableau> {
        self.tableau.as_ref()
    }

    pub fn stage_plan(&self) -> Option<&[InnerOperator]> {
        self.plan.as_deref()
    }

    /// Inner operator acting on stage `j`.
    pub fn inner_operator(&self, j: usize) -> InnerOperator {
        match &self.plan {
            Some(p) => p[j],
            None => match self.variant {
                Variant::Standard => InnerOperator::Full,
                Variant::Sda => InnerOperator::Reduced,
            },
        }
    }

    /// Whether any inner stage uses the reduced operator.
    pub fn needs_reduced(&self) -> bool {
        (0..self.stages()).any(|j| self.inner_operator(j) == InnerOperator::Reduced)
    }

    /// Short label such as `sdA-RK3` or `RK4`.
    pub fn label(&self) -> String {
        match self.variant {
            Variant::Standard => format!("RK{}", self.order),
            Variant::Sda => format!("sdA-RK{}", self.order),
        }
    }
}
