use std::sync::Arc;

use crate::dg::{assemble_upwind, reduce, BlockOperator, DGCoeffs, DgSpace, LinearMap};
use crate::error::{Error, Result};
use crate::rk::scheme::{InnerOperator, SchemeSpec, StepForm};

/// A DG space with its assembled operators `L_h` and (for `k >= 1`) `L~_h`.
#[derive(Debug, Clone)]
pub struct Discretization {
    space: Arc<DgSpace>,
    l: BlockOperator,
    lt: Option<BlockOperator>,
}

impl Discretization {
    pub fn new(space: &Arc<DgSpace>) -> Self {
        let l = assemble_upwind(space);
        let lt = (space.degree() > 0).then(|| reduce(&l, space).expect("k >= 1"));
        Self {
            space: Arc::clone(space),
            l,
            lt,
        }
    }

    pub fn from_parts(space: &Arc<DgSpace>, l: BlockOperator, lt: Option<BlockOperator>) -> Result<Self> {
        let n = space.n_dofs();
        if l.dim() != n || lt.as_ref().is_some_and(|m| m.dim() != n) {
            return Err(Error::Incompatible("operator size does not match the space".into()));
        }
        Ok(Self {
            space: Arc::clone(space),
            l,
            lt,
        })
    }

    pub fn space(&self) -> &Arc<DgSpace> {
        &self.space
    }

    pub fn full(&self) -> &BlockOperator {
        &self.l
    }

    pub fn reduced(&self) -> Result<&BlockOperator> {
        self.lt.as_ref().ok_or(Error::UnsupportedDegree(
            0,
            "the sdA variant needs k >= 1",
        ))
    }
}

/// One step `u -> R u` of a scheme at a fixed time step, as a linear map.
///
/// [`EvolutionMap::increment`] gives `R - I` without forming the sum, which
/// avoids cancellation when `R` is close to the identity.
#[derive(Debug, Clone)]
pub struct EvolutionMap<'a> {
    scheme: &'a SchemeSpec,
    l: &'a BlockOperator,
    lt: &'a BlockOperator,
    tau: f64,
    form: StepForm,
    fell_back: bool,
    increment_only: bool,
}

impl<'a> EvolutionMap<'a> {
    /// Butcher form without a tableau falls back to compact form and sets
    /// [`EvolutionMap::fell_back`].
    pub fn new(
        scheme: &'a SchemeSpec,
        disc: &'a Discretization,
        tau: f64,
        form: StepForm,
    ) -> Result<Self> {
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(Error::InvalidArgument(format!("time step {tau} must be >= 0")));
        }
        let lt = if scheme.needs_reduced() {
            disc.reduced()?
        } else {
            disc.full()
        };
        let (form, fell_back) = match (form, scheme.tableau()) {
            (StepForm::Butcher, None) => (StepForm::Compact, true),
            (f, _) => (f, false),
        };
        if form == StepForm::Compact && scheme.stage_plan().is_some() {
            return Err(Error::UnsupportedScheme(
                "per-stage operator plans run in Butcher form only".into(),
            ));
        }
        Ok(Self {
            scheme,
            l: disc.full(),
            lt,
            tau,
            form,
            fell_back,
            increment_only: false,
        })
    }

    pub fn form(&self) -> StepForm {
        self.form
    }

    pub fn fell_back(&self) -> bool {
        self.fell_back
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// The map `R - I`.
    pub fn increment(&self) -> Self {
        Self {
            increment_only: true,
            ..self.clone()
        }
    }

    fn inner(&self, j: usize) -> &BlockOperator {
        match self.scheme.inner_operator(j) {
            InnerOperator::Full => self.l,
            InnerOperator::Reduced => self.lt,
        }
    }

    /// Apply `R - I` (always) and add `x` unless `increment_only`.
    fn finish(&self, x: &[f64], y: &mut [f64]) {
        if !self.increment_only {
            y.iter_mut().zip(x).for_each(|(a, b)| *a += b);
        }
    }

    fn compact(&self, x: &[f64], y: &mut [f64], transpose: bool) {
        let alpha = self.scheme.alpha();
        let s = self.scheme.stages();
        let n = x.len();
        let tau = self.tau;
        let app = |op: &BlockOperator, a: &[f64], b: &mut [f64]| {
            if transpose {
                op.apply_transpose(a, b)
            } else {
                op.apply(a, b)
            }
        };
        let mut tmp = vec![0.0; n];
        // R = I + tau L P(tau Lhat);  R^T = I + P(tau Lhat^T) tau L^T
        let src: Vec<f64> = if transpose {
            app(self.l, x, &mut tmp);
            tmp.iter().map(|v| tau * v).collect()
        } else {
            x.to_vec()
        };
        let mut v: Vec<f64> = src.iter().map(|a| alpha[s] * a).collect();
        for i in (1..s).rev() {
            app(self.lt, &v, &mut tmp);
            for ((vi, ti), si) in v.iter_mut().zip(&tmp).zip(&src) {
                *vi = alpha[i] * si + tau * ti;
            }
        }
        if transpose {
            y.copy_from_slice(&v);
        } else {
            app(self.l, &v, y);
            y.iter_mut().for_each(|a| *a *= tau);
        }
        self.finish(x, y);
    }

    fn butcher(&self, x: &[f64], y: &mut [f64]) {
        let t = self.scheme.tableau().expect("Butcher form has a tableau");
        let s = t.stages();
        let n = x.len();
        let tau = self.tau;
        // stage derivatives feeding later inner stages
        let mut khat: Vec<Vec<f64>> = Vec::with_capacity(s);
        let mut g = vec![0.0; n];
        let mut lg = vec![0.0; n];
        let mut acc = vec![0.0; n];
        for i in 0..s {
            g.copy_from_slice(x);
            for (j, kj) in khat.iter().enumerate() {
                let a = t.a(i, j);
                if a != 0.0 {
                    g.iter_mut().zip(kj).for_each(|(gv, kv)| *gv += tau * a * kv);
                }
            }
            if t.b()[i] != 0.0 {
                self.l.apply(&g, &mut lg);
                acc.iter_mut().zip(&lg).for_each(|(av, lv)| *av += tau * t.b()[i] * lv);
            }
            let feeds_later = (i + 1..s).any(|l| t.a(l, i) != 0.0);
            let mut kv = vec![0.0; n];
            if feeds_later {
                self.inner(i).apply(&g, &mut kv);
            }
            khat.push(kv);
        }
        y.copy_from_slice(&acc);
        self.finish(x, y);
    }

    /// Adjoint of the staged recursion, by reverse accumulation.
    fn butcher_transpose(&self, x: &[f64], y: &mut [f64]) {
        let t = self.scheme.tableau().expect("Butcher form has a tableau");
        let s = t.stages();
        let n = x.len();
        let tau = self.tau;
        let mut ltx = vec![0.0; n];
        self.l.apply_transpose(x, &mut ltx);
        let mut gbar: Vec<Vec<f64>> = vec![Vec::new(); s];
        let mut tmp = vec![0.0; n];
        let mut sum = vec![0.0; n];
        for i in (0..s).rev() {
            sum.iter_mut().for_each(|v| *v = 0.0);
            let mut any = false;
            for l in i + 1..s {
                let a = t.a(l, i);
                if a != 0.0 {
                    any = true;
                    sum.iter_mut().zip(&gbar[l]).for_each(|(sv, gv)| *sv += a * gv);
                }
            }
            let mut gi: Vec<f64> = ltx.iter().map(|v| tau * t.b()[i] * v).collect();
            if any {
                self.inner(i).apply_transpose(&sum, &mut tmp);
                gi.iter_mut().zip(&tmp).for_each(|(gv, tv)| *gv += tau * tv);
            }
            gbar[i] = gi;
        }
        y.iter_mut().for_each(|v| *v = 0.0);
        for gi in &gbar {
            y.iter_mut().zip(gi).for_each(|(yv, gv)| *yv += gv);
        }
        self.finish(x, y);
    }

    /// `R u` as a new coefficient vector.
    pub fn step(&self, u: &DGCoeffs) -> DGCoeffs {
        let mut out = DGCoeffs::zeros(u.space());
        self.apply(u.values(), out.values_mut());
        out
    }
}

impl LinearMap for EvolutionMap<'_> {
    fn dim(&self) -> usize {
        self.l.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        match self.form {
            StepForm::Compact => self.compact(x, y, false),
            StepForm::Butcher => self.butcher(x, y),
        }
    }

    fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        match self.form {
            StepForm::Compact => self.compact(x, y, true),
            StepForm::Butcher => self.butcher_transpose(x, y),
        }
    }
}

/// Result of a single step.
#[derive(Debug, Clone)]
pub struct StepOutput {
    pub state: DGCoeffs,
    /// form actually executed
    pub form: StepForm,
    /// Butcher form was requested but the scheme has no tableau
    pub fell_back: bool,
}

/// One step of size `tau` from `u`.
pub fn step(
    scheme: &SchemeSpec,
    disc: &Discretization,
    u: &DGCoeffs,
    tau: f64,
    form: StepForm,
) -> Result<StepOutput> {
    if !Arc::ptr_eq(u.space(), disc.space()) && **u.space() != **disc.space() {
        return Err(Error::Incompatible("state and operators live on different spaces".into()));
    }
    let map = EvolutionMap::new(scheme, disc, tau, form)?;
    Ok(StepOutput {
        state: map.step(u),
        form: map.form(),
        fell_back: map.fell_back(),
    })
}
