//! The closed-form Scherk barrier over a half-plane and the ODE identities
//! behind it.
//!
//! In Fermi coordinates `ds² + G(s,t) dt²` about a geodesic, a function
//! `h(s)` has minimal graph iff `G_s h_s (1 + h_s²) + 2 G h_ss = 0`. For the
//! comparison surface of curvature `d` the solution blowing up on the
//! geodesic is `h̃(s) = −log(tanh(√(−d)·s/2))/√(−d)`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::{numdiff, Error, Result};

/// Below this distance the barrier is reported as `+∞`.
pub const MIN_S: f64 = 1e-8;

/// Comparison curvature `d` and, when known, the curvature bound `c < d` of
/// the surface it is compared with.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BarrierParams {
    d: f64,
    c: Option<f64>,
}

impl BarrierParams {
    pub fn new(d: f64, c: Option<f64>) -> Result<Self> {
        if !(d.is_finite() && d < 0.0) {
            return Err(Error::InvalidParameter(format!("comparison curvature must be negative, got {d}")));
        }
        if let Some(c) = c {
            if !(c.is_finite() && c < d) {
                return Err(Error::InvalidParameter(format!("need c < d, got c = {c}, d = {d}")));
            }
        }
        Ok(Self { d, c })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn c(&self) -> Option<f64> {
        self.c
    }

    pub fn height(&self) -> Profile {
        Profile::scherk_height(self.d).expect("validated")
    }

    pub fn comparison_coefficient(&self) -> Profile {
        Profile::cosh_squared(self.d).expect("validated")
    }
}

fn check_d(d: f64) -> Result<f64> {
    if !(d.is_finite() && d < 0.0) {
        return Err(Error::InvalidParameter(format!("comparison curvature must be negative, got {d}")));
    }
    Ok((-d).sqrt())
}

/// `h̃(s) = −log(tanh(√(−d)·s/2))/√(−d)`; `+∞` for `0 < s < 1e−8`.
pub fn barrier_height(s: f64, d: f64) -> Result<f64> {
    let k = check_d(d)?;
    if !(s > 0.0) {
        return Err(Error::InvalidParameter(format!("barrier height needs s > 0, got {s}")));
    }
    if s < MIN_S {
        return Ok(f64::INFINITY);
    }
    // log tanh(x/2) = log1p(−2/(eˣ + 1)) keeps digits for large s.
    Ok(-(-2.0 / ((k * s).exp() + 1.0)).ln_1p() / k)
}

type Scalar = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real function of one variable with optional analytic derivatives.
/// Missing derivatives fall back to Richardson-extrapolated differences.
#[derive(Clone)]
pub struct Profile {
    f: Scalar,
    d1: Option<Scalar>,
    d2: Option<Scalar>,
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Profile").field("analytic", &(self.d1.is_some(), self.d2.is_some())).finish()
    }
}

impl Profile {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f), d1: None, d2: None }
    }

    pub fn with_derivatives(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self { f: Arc::new(f), d1: Some(Arc::new(d1)), d2: Some(Arc::new(d2)) }
    }

    /// Drops the analytic derivatives, forcing finite differences.
    pub fn numeric(&self) -> Self {
        Self { f: self.f.clone(), d1: None, d2: None }
    }

    pub fn constant(c: f64) -> Self {
        Self::with_derivatives(move |_| c, |_| 0.0, |_| 0.0)
    }

    /// The barrier `h̃` for comparison curvature `d`.
    pub fn scherk_height(d: f64) -> Result<Self> {
        let k = check_d(d)?;
        Ok(Self::with_derivatives(
            move |s| barrier_height(s, d).unwrap_or(f64::NAN),
            move |s| -1.0 / (k * s).sinh(),
            move |s| k * (k * s).cosh() / (k * s).sinh().powi(2),
        ))
    }

    /// `G̃(s) = cosh²(√(−d)·s)`, the Fermi coefficient at curvature `d`.
    pub fn cosh_squared(d: f64) -> Result<Self> {
        let k = check_d(d)?;
        Ok(Self::with_derivatives(
            move |s| (k * s).cosh().powi(2),
            move |s| k * (2.0 * k * s).sinh(),
            move |s| 2.0 * k * k * (2.0 * k * s).cosh(),
        ))
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn first(&self, x: f64) -> f64 {
        match &self.d1 {
            Some(d) => d(x),
            None => numdiff::first(&*self.f, x, numdiff::FIRST_STEP),
        }
    }

    pub fn second(&self, x: f64) -> f64 {
        match &self.d2 {
            Some(d) => d(x),
            None => numdiff::second(&*self.f, x, numdiff::SECOND_STEP),
        }
    }
}

/// `G_s h_s (1 + h_s²) + 2 G h_ss`: zero exactly for minimal graphs `h(s)`,
/// negative for strict supersolutions.
pub fn scherk_ode_residual(h: &Profile, g: &Profile, s: f64) -> f64 {
    let hs = h.first(s);
    g.first(s) * hs * (1.0 + hs * hs) + 2.0 * g.value(s) * h.second(s)
}

/// Gauss curvature `−¼(G_s/G)² − ½(G_s/G)_s` of `ds² + G(s) dt²`.
pub fn profile_curvature(g: &Profile, s: f64) -> Result<f64> {
    let gv = g.value(s);
    if !(gv > 0.0) {
        return Err(Error::InvalidParameter(format!("metric coefficient must be positive, got {gv} at s = {s}")));
    }
    let q = g.first(s) / gv;
    Ok(0.25 * q * q - 0.5 * g.second(s) / gv)
}

/// Verdict of [`comparison_ode_check`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Comparison {
    /// `f > g` at every sample past `x0`.
    Holds,
    /// Hypotheses hold but `f ≤ g` at `x`.
    Fails { x: f64 },
    /// A hypothesis is violated, so the observation says nothing.
    Inapplicable { reason: String },
}

/// Comparison observation for Riccati-type inequalities: if `f(x0) = g(x0)`
/// and `2f′ + f² > 2g′ + g²`, then `f > g` past `x0`. Checked on samples.
pub fn comparison_ode_check(f: &Profile, g: &Profile, x0: f64, xs: &[f64]) -> Comparison {
    let (f0, g0) = (f.value(x0), g.value(x0));
    if (f0 - g0).abs() > 1e-10 * (1.0 + f0.abs()) {
        return Comparison::Inapplicable { reason: format!("f(x0) = {f0} differs from g(x0) = {g0}") };
    }
    let riccati = |p: &Profile, x: f64| 2.0 * p.first(x) + p.value(x).powi(2);
    let past: Vec<f64> = xs.iter().copied().filter(|&x| x > x0).collect();
    if past.is_empty() {
        return Comparison::Inapplicable { reason: "no samples past x0".into() };
    }
    for &x in &past {
        let (rf, rg) = (riccati(f, x), riccati(g, x));
        if !(rf > rg) {
            return Comparison::Inapplicable { reason: format!("2f′+f² = {rf} is not above 2g′+g² = {rg} at {x}") };
        }
    }
    match past.iter().find(|&&x| f.value(x) <= g.value(x)) {
        Some(&x) => Comparison::Fails { x },
        None => Comparison::Holds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn height_values() {
        // −ln tanh(1/2), evaluated independently of the log1p form.
        assert_abs_diff_eq!(barrier_height(1.0, -1.0).unwrap(), -(0.5f64.tanh().ln()), epsilon = 1e-15);
        assert_abs_diff_eq!(barrier_height(1.0, -1.0).unwrap(), 0.7719368329053048, epsilon = 1e-13);
        assert!(barrier_height(10.0, -1.0).unwrap() <= 2e-4);
        assert_eq!(barrier_height(1e-9, -1.0).unwrap(), f64::INFINITY);
        assert!(barrier_height(0.0, -1.0).is_err());
        assert!(barrier_height(-1.0, -1.0).is_err());
        assert!(barrier_height(1.0, 0.0).is_err());
    }

    #[test]
    fn scaling_and_asymptote() {
        for d in [-0.5f64, -2.0, -4.0] {
            let k = (-d).sqrt();
            for s in [0.3, 1.0, 2.7] {
                assert_abs_diff_eq!(
                    barrier_height(s, d).unwrap(),
                    barrier_height(k * s, -1.0).unwrap() / k,
                    epsilon = 1e-13
                );
            }
            for ks in [3.0, 5.0, 9.0] {
                let s = ks / k;
                let asym = 2.0 * (-ks).exp() / k;
                assert!((barrier_height(s, d).unwrap() / asym - 1.0).abs() < 0.05);
            }
        }
    }

    #[test]
    fn residual_vanishes_for_the_barrier() {
        for d in [-0.5, -1.0, -2.0] {
            let h = Profile::scherk_height(d).unwrap();
            let g = Profile::cosh_squared(d).unwrap();
            for s in [0.5, 1.0, 2.0] {
                assert!(scherk_ode_residual(&h, &g, s).abs() <= 1e-9);
                // Finite differences also satisfy it, less sharply.
                assert!(scherk_ode_residual(&h.numeric(), &g.numeric(), s).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn supersolution_sign() {
        let h = Profile::scherk_height(-1.0).unwrap();
        let g = Profile::cosh_squared(-2.0).unwrap();
        assert!(scherk_ode_residual(&h, &g, 1.0) < 0.0);
        let flat = Profile::constant(3.0);
        assert_eq!(scherk_ode_residual(&flat, &g, 1.0), 0.0);
    }

    #[test]
    fn curvature_of_profiles() {
        let g = Profile::cosh_squared(-1.0).unwrap();
        for s in [-1.0, 0.0, 0.5, 3.0] {
            assert_abs_diff_eq!(profile_curvature(&g, s).unwrap(), -1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(profile_curvature(&g.numeric(), s).unwrap(), -1.0, epsilon = 1e-7);
        }
        assert_eq!(profile_curvature(&Profile::constant(1.0), 0.3).unwrap(), 0.0);
        let horo = Profile::new(|s: f64| (2.0 * s).exp());
        assert_abs_diff_eq!(profile_curvature(&horo, 0.4).unwrap(), -1.0, epsilon = 1e-7);
        assert!(profile_curvature(&Profile::constant(-1.0), 0.0).is_err());
    }

    #[test]
    fn comparison_observation() {
        let r2 = 2f64.sqrt();
        let f = Profile::new(move |s: f64| r2 * (r2 * s).tanh());
        let g = Profile::new(|s: f64| s.tanh());
        let xs: Vec<f64> = (1..=50).map(|i| 0.1 * i as f64).collect();
        assert_eq!(comparison_ode_check(&f, &g, 0.0, &xs), Comparison::Holds);
        assert!(matches!(comparison_ode_check(&g, &g, 0.0, &xs), Comparison::Inapplicable { .. }));
        let eps = 1e-3;
        let fe = Profile::new(move |s: f64| s.tanh() + eps * s);
        assert_eq!(comparison_ode_check(&fe, &g, 0.0, &xs), Comparison::Holds);
    }

    #[test]
    fn params() {
        assert!(BarrierParams::new(-1.0, Some(-2.0)).is_ok());
        assert!(BarrierParams::new(-1.0, Some(-0.5)).is_err());
        assert!(BarrierParams::new(0.5, None).is_err());
    }
}
