//! Flux and source models.
//!
//! A [`FluxModel`] bundles the flux `f(t,x,u) ∈ ℝᴺ`, its state derivative
//! `∂ᵤf`, the spatial divergence `div f` at frozen state, and the source term
//! `F(t,x,u)` with `∂ᵤF`. Models are immutable and cheap to clone; all
//! closures are shared. When no analytic `∂ᵤf` is supplied a central
//! finite-difference fallback is installed, and every construction runs a
//! derivative consistency self-check on a sample box.

use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::sampling::SampleBox;
use crate::{CoreError, Result};

type VecFn = Arc<dyn Fn(f64, &[f64], f64, &mut [f64]) + Send + Sync>;
type ScalarFn = Arc<dyn Fn(f64, &[f64], f64) -> f64 + Send + Sync>;

/// Scratch vector sized for typical space dimensions.
pub type FluxVec = SmallVec<[f64; 4]>;

/// How `∂ᵤf` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum DerivativeMode {
    Analytic,
    FiniteDifferenceFallback,
}

/// Flux/source data for a scalar balance law in `N ≥ 1` space dimensions.
#[derive(Clone)]
pub struct FluxModel {
    name: String,
    space_dim: usize,
    /// True when `f` and `F` do not depend on `(t, x)`; enables caching of
    /// entropy-flux antiderivatives.
    autonomous: bool,
    derivative_mode: DerivativeMode,
    f: VecFn,
    df_du: VecFn,
    div_f: ScalarFn,
    source: ScalarFn,
    dsource_du: ScalarFn,
}

impl fmt::Debug for FluxModel {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        w.debug_struct("FluxModel")
            .field("name", &self.name)
            .field("space_dim", &self.space_dim)
            .field("autonomous", &self.autonomous)
            .field("derivative_mode", &self.derivative_mode)
            .finish()
    }
}

/// Step used by the central-difference fallback.
fn fd_step(u: f64) -> f64 {
    1e-6_f64.max(1e-6 * u.abs())
}

impl FluxModel {
    pub fn builder(name: impl Into<String>, space_dim: usize) -> FluxModelBuilder {
        FluxModelBuilder {
            name: name.into(),
            space_dim,
            autonomous: false,
            f: None,
            df_du: None,
            div_f: None,
            source: None,
            dsource_du: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn is_autonomous(&self) -> bool {
        self.autonomous
    }

    pub fn derivative_mode(&self) -> DerivativeMode {
        self.derivative_mode
    }

    pub fn f_into(&self, t: f64, x: &[f64], u: f64, out: &mut [f64]) {
        (self.f)(t, x, u, out)
    }

    pub fn df_du_into(&self, t: f64, x: &[f64], u: f64, out: &mut [f64]) {
        (self.df_du)(t, x, u, out)
    }

    pub fn f_vec(&self, t: f64, x: &[f64], u: f64) -> FluxVec {
        let mut out = FluxVec::from_elem(0.0, self.space_dim);
        self.f_into(t, x, u, &mut out);
        out
    }

    pub fn df_du_vec(&self, t: f64, x: &[f64], u: f64) -> FluxVec {
        let mut out = FluxVec::from_elem(0.0, self.space_dim);
        self.df_du_into(t, x, u, &mut out);
        out
    }

    /// `f(t,x,u) · nu`.
    pub fn f_dot(&self, t: f64, x: &[f64], u: f64, nu: &[f64]) -> f64 {
        let v = self.f_vec(t, x, u);
        v.iter().zip(nu).map(|(a, b)| a * b).sum()
    }

    /// `∂ᵤf(t,x,u) · nu`.
    pub fn df_dot(&self, t: f64, x: &[f64], u: f64, nu: &[f64]) -> f64 {
        let v = self.df_du_vec(t, x, u);
        v.iter().zip(nu).map(|(a, b)| a * b).sum()
    }

    /// Scalar flux for 1D problems.
    pub fn f1(&self, t: f64, x: f64, u: f64) -> f64 {
        debug_assert_eq!(self.space_dim, 1);
        let mut out = [0.0];
        self.f_into(t, &[x], u, &mut out);
        out[0]
    }

    /// Scalar `∂ᵤf` for 1D problems.
    pub fn df1(&self, t: f64, x: f64, u: f64) -> f64 {
        debug_assert_eq!(self.space_dim, 1);
        let mut out = [0.0];
        self.df_du_into(t, &[x], u, &mut out);
        out[0]
    }

    /// Spatial divergence of `f` at frozen state.
    pub fn div_f(&self, t: f64, x: &[f64], u: f64) -> f64 {
        (self.div_f)(t, x, u)
    }

    /// `∂ᵤ(div f)` by central differences; used for divergences of
    /// quadrature-defined entropy fluxes.
    pub fn ddiv_f_du(&self, t: f64, x: &[f64], u: f64) -> f64 {
        let h = fd_step(u);
        (self.div_f(t, x, u + h) - self.div_f(t, x, u - h)) / (2.0 * h)
    }

    pub fn source(&self, t: f64, x: &[f64], u: f64) -> f64 {
        (self.source)(t, x, u)
    }

    pub fn dsource_du(&self, t: f64, x: &[f64], u: f64) -> f64 {
        (self.dsource_du)(t, x, u)
    }

    /// Sup of the Euclidean norm of `∂ᵤf` over `[0,T] × Ω̄ × [−U,U]`.
    ///
    /// Tensor grids are refined (dyadically per axis) until two successive
    /// sups agree to relative 1e-3; end points are always on the grid.
    pub fn lipschitz_norm(&self, t_end: f64, x_box: &[(f64, f64)], u_bound: f64) -> Result<f64> {
        if u_bound < 0.0 {
            return Err(CoreError::InvalidInput(format!(
                "state bound must be nonnegative, got {u_bound}"
            )));
        }
        if x_box.len() != self.space_dim {
            return Err(CoreError::InvalidInput(format!(
                "spatial box dimension {} does not match flux dimension {}",
                x_box.len(),
                self.space_dim
            )));
        }
        let mut prev: Option<f64> = None;
        let mut n = 5usize;
        for _ in 0..12 {
            let sup = self.grid_sup_df(t_end, x_box, u_bound, n)?;
            if let Some(p) = prev {
                if (sup - p).abs() <= 1e-3 * sup.abs().max(1.0) {
                    return Ok(sup);
                }
            }
            prev = Some(sup);
            n = 2 * n - 1;
        }
        Ok(prev.unwrap())
    }

    fn grid_sup_df(&self, t_end: f64, x_box: &[(f64, f64)], u_bound: f64, n: usize) -> Result<f64> {
        let axis = |lo: f64, hi: f64| -> Vec<f64> {
            if lo == hi {
                return vec![lo];
            }
            (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
        };
        let ts = axis(0.0, t_end);
        let us = axis(-u_bound, u_bound);
        let grids: Vec<Vec<f64>> = x_box.iter().map(|&(lo, hi)| axis(lo, hi)).collect();

        let mut sup = 0.0f64;
        let mut x = vec![0.0; self.space_dim];
        let mut idx = vec![0usize; self.space_dim];
        loop {
            for (d, g) in grids.iter().enumerate() {
                x[d] = g[idx[d]];
            }
            for &t in &ts {
                for &u in &us {
                    let v = self.df_du_vec(t, &x, u);
                    let norm2: f64 = v.iter().map(|c| c * c).sum();
                    if !norm2.is_finite() {
                        return Err(CoreError::NonFiniteEvaluation {
                            context: "df_du",
                            t,
                            x: x.clone(),
                            u,
                        });
                    }
                    sup = sup.max(norm2.sqrt());
                }
            }
            // Advance the mixed-radix spatial index.
            let mut d = 0;
            loop {
                if d == self.space_dim {
                    return Ok(sup);
                }
                idx[d] += 1;
                if idx[d] < grids[d].len() {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
        }
    }

    /// Checks `∂ᵤf` against a central difference of `f` on quasi-random
    /// samples of the given box.
    pub fn check_derivative_consistency(
        &self,
        t_end: f64,
        x_box: &[(f64, f64)],
        u_bound: f64,
        samples: usize,
    ) -> Result<()> {
        let mut dims = vec![(0.0, t_end)];
        dims.extend_from_slice(x_box);
        dims.push((-u_bound, u_bound));
        let sbox = SampleBox::new(dims);
        let mut p = Vec::new();
        let mut worst = 0.0f64;
        for i in 0..samples {
            sbox.point(i, &mut p);
            let (t, u) = (p[0], p[p.len() - 1]);
            let x = &p[1..p.len() - 1];
            let h = 1e-5_f64.max(1e-5 * u.abs());
            let fp = self.f_vec(t, x, u + h);
            let fm = self.f_vec(t, x, u - h);
            let d = self.df_du_vec(t, x, u);
            for j in 0..self.space_dim {
                let fd = (fp[j] - fm[j]) / (2.0 * h);
                if !fd.is_finite() || !d[j].is_finite() {
                    return Err(CoreError::NonFiniteEvaluation { context: "f/df_du", t, x: x.to_vec(), u });
                }
                worst = worst.max((fd - d[j]).abs() / (1.0 + d[j].abs()));
            }
        }
        // Central differences are O(h²); allow generous slack for curvature.
        if worst > 1e-5 {
            return Err(CoreError::DerivativeMismatch(format!(
                "flux '{}': worst relative deviation {worst:.3e} between df_du and central difference",
                self.name
            )));
        }
        Ok(())
    }
}

/// Builder for [`FluxModel`].
pub struct FluxModelBuilder {
    name: String,
    space_dim: usize,
    autonomous: bool,
    f: Option<VecFn>,
    df_du: Option<VecFn>,
    div_f: Option<ScalarFn>,
    source: Option<ScalarFn>,
    dsource_du: Option<ScalarFn>,
}

impl FluxModelBuilder {
    pub fn autonomous(mut self, yes: bool) -> Self {
        self.autonomous = yes;
        self
    }

    pub fn f(mut self, f: impl Fn(f64, &[f64], f64, &mut [f64]) + Send + Sync + 'static) -> Self {
        self.f = Some(Arc::new(f));
        self
    }

    pub fn df_du(mut self, d: impl Fn(f64, &[f64], f64, &mut [f64]) + Send + Sync + 'static) -> Self {
        self.df_du = Some(Arc::new(d));
        self
    }

    pub fn div_f(mut self, d: impl Fn(f64, &[f64], f64) -> f64 + Send + Sync + 'static) -> Self {
        self.div_f = Some(Arc::new(d));
        self
    }

    pub fn source(mut self, s: impl Fn(f64, &[f64], f64) -> f64 + Send + Sync + 'static) -> Self {
        self.source = Some(Arc::new(s));
        self
    }

    pub fn dsource_du(mut self, s: impl Fn(f64, &[f64], f64) -> f64 + Send + Sync + 'static) -> Self {
        self.dsource_du = Some(Arc::new(s));
        self
    }

    /// Finalises the model, installing fallbacks and running the derivative
    /// self-check on `[0,1] × [−1,1]ᴺ × [−2,2]`.
    pub fn build(self) -> Result<FluxModel> {
        if self.space_dim == 0 {
            return Err(CoreError::InvalidInput("space_dim must be >= 1".into()));
        }
        let f = self.f.ok_or_else(|| CoreError::InvalidInput("flux closure is required".into()))?;
        let (df_du, mode) = match self.df_du {
            Some(d) => (d, DerivativeMode::Analytic),
            None => {
                let f2 = Arc::clone(&f);
                let dim = self.space_dim;
                let fallback: VecFn = Arc::new(move |t, x, u, out: &mut [f64]| {
                    let h = fd_step(u);
                    let mut hi = FluxVec::from_elem(0.0, dim);
                    let mut lo = FluxVec::from_elem(0.0, dim);
                    f2(t, x, u + h, &mut hi);
                    f2(t, x, u - h, &mut lo);
                    for j in 0..dim {
                        out[j] = (hi[j] - lo[j]) / (2.0 * h);
                    }
                });
                (fallback, DerivativeMode::FiniteDifferenceFallback)
            }
        };
        let zero: ScalarFn = Arc::new(|_, _, _| 0.0);
        let model = FluxModel {
            name: self.name,
            space_dim: self.space_dim,
            autonomous: self.autonomous,
            derivative_mode: mode,
            f,
            df_du,
            div_f: self.div_f.unwrap_or_else(|| Arc::clone(&zero)),
            source: self.source.unwrap_or_else(|| Arc::clone(&zero)),
            dsource_du: self.dsource_du.unwrap_or(zero),
        };
        if mode == DerivativeMode::Analytic {
            let x_box = vec![(-1.0, 1.0); model.space_dim];
            model.check_derivative_consistency(1.0, &x_box, 2.0, 64)?;
        }
        Ok(model)
    }
}

/// Named fluxes available to configurations and the CLI.
///
/// `burgers`, `linear:<a>`, `buckley-leverett`, `nonautonomous-demo`
/// (`f(t,x,u) = (1 + 0.3 sin x) u²/2`).
pub fn catalog(name: &str) -> Result<FluxModel> {
    if let Some(a) = name.strip_prefix("linear:") {
        let a: f64 = a.parse().map_err(|_| {
            CoreError::InvalidInput(format!("cannot parse advection speed in '{name}'"))
        })?;
        return FluxModel::builder(name, 1)
            .autonomous(true)
            .f(move |_, _, u, out| out[0] = a * u)
            .df_du(move |_, _, _, out| out[0] = a)
            .div_f(|_, _, _| 0.0)
            .build();
    }
    match name {
        "burgers" => FluxModel::builder(name, 1)
            .autonomous(true)
            .f(|_, _, u, out| out[0] = 0.5 * u * u)
            .df_du(|_, _, u, out| out[0] = u)
            .div_f(|_, _, _| 0.0)
            .build(),
        "buckley-leverett" => FluxModel::builder(name, 1)
            .autonomous(true)
            .f(|_, _, u, out| {
                let denom = u * u + (1.0 - u) * (1.0 - u);
                out[0] = u * u / denom;
            })
            .df_du(|_, _, u, out| {
                let denom = u * u + (1.0 - u) * (1.0 - u);
                out[0] = 2.0 * u * (1.0 - u) / (denom * denom);
            })
            .div_f(|_, _, _| 0.0)
            .build(),
        "nonautonomous-demo" => {
            let a = |x: f64| 1.0 + 0.3 * x.sin();
            let da = |x: f64| 0.3 * x.cos();
            FluxModel::builder(name, 1)
                .f(move |_, x, u, out| out[0] = a(x[0]) * 0.5 * u * u)
                .df_du(move |_, x, u, out| out[0] = a(x[0]) * u)
                .div_f(move |_, x, u| da(x[0]) * 0.5 * u * u)
                .build()
        }
        other => Err(CoreError::InvalidInput(format!("unknown catalog flux '{other}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn burgers_basics() {
        let fl = catalog("burgers").unwrap();
        assert_eq!(fl.space_dim(), 1);
        assert!(fl.is_autonomous());
        assert_eq!(fl.f1(0.0, 0.0, 2.0), 2.0);
        assert_eq!(fl.df1(0.0, 0.0, 3.0), 3.0);
        assert_eq!(fl.div_f(0.0, &[0.0], 1.0), 0.0);
    }

    #[test]
    fn lipschitz_norm_examples() {
        let burgers = catalog("burgers").unwrap();
        let l = burgers.lipschitz_norm(1.0, &[(0.0, 1.0)], 1.0).unwrap();
        assert!((l - 1.0).abs() < 1e-12, "burgers Lipschitz constant on [-1,1] is 1, got {l}");

        let lin = catalog("linear:-2.5").unwrap();
        let l = lin.lipschitz_norm(1.0, &[(0.0, 1.0)], 3.0).unwrap();
        assert!((l - 2.5).abs() < 1e-12);

        // f(u) = sin u on [−π, π]: sup |cos| = 1 at u = 0.
        let sine = FluxModel::builder("sine", 1)
            .autonomous(true)
            .f(|_, _, u, out| out[0] = u.sin())
            .df_du(|_, _, u, out| out[0] = u.cos())
            .build()
            .unwrap();
        let l = sine.lipschitz_norm(1.0, &[(0.0, 1.0)], std::f64::consts::PI).unwrap();
        assert!((l - 1.0).abs() < 1e-6, "got {l}");
    }

    #[test]
    fn lipschitz_norm_monotone_in_bound() {
        let fl = catalog("burgers").unwrap();
        let mut prev = 0.0;
        for ub in [0.5, 1.0, 1.5, 2.0] {
            let l = fl.lipschitz_norm(1.0, &[(0.0, 1.0)], ub).unwrap();
            assert!(l >= prev);
            prev = l;
        }
    }

    #[test]
    fn finite_difference_fallback_matches_analytic() {
        let fd = FluxModel::builder("burgers-fd", 1)
            .autonomous(true)
            .f(|_, _, u, out| out[0] = 0.5 * u * u)
            .build()
            .unwrap();
        assert_eq!(fd.derivative_mode(), DerivativeMode::FiniteDifferenceFallback);
        for u in [-2.0, -0.3, 0.0, 1.7] {
            assert!((fd.df1(0.0, 0.0, u) - u).abs() < 1e-6);
        }
    }

    #[test]
    fn derivative_self_check_catches_mismatch() {
        let bad = FluxModel::builder("bad", 1)
            .f(|_, _, u, out| out[0] = 0.5 * u * u)
            .df_du(|_, _, u, out| out[0] = 2.0 * u) // wrong slope
            .build();
        assert!(matches!(bad, Err(CoreError::DerivativeMismatch(_))));
    }

    #[test]
    fn nonautonomous_demo_consistency() {
        let fl = catalog("nonautonomous-demo").unwrap();
        assert!(!fl.is_autonomous());
        let x = [0.7];
        let u = 1.3;
        assert!((fl.div_f(0.0, &x, u) - 0.3 * x[0].cos() * 0.5 * u * u).abs() < 1e-15);
        // ∂ᵤ(div f) by finite differences against its closed form.
        assert!((fl.ddiv_f_du(0.0, &x, u) - 0.3 * x[0].cos() * u).abs() < 1e-8);
    }

    #[test]
    fn unknown_catalog_name() {
        assert!(catalog("kpz").is_err());
    }
}
