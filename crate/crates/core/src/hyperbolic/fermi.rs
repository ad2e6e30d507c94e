use std::fmt;
use std::sync::Arc;

use super::{Geodesic, Metric};
use crate::{numdiff, Error, Result};

/// Metric coefficient `G(s, t)` of a Fermi chart `ds² + G dt²`.
#[derive(Clone)]
pub enum FermiProfile {
    /// `G = cosh²(√(−κ)·s)`, the coefficient of the disk model itself.
    ConstantCurvature(Metric),
    /// A user-supplied warped-product coefficient.
    Custom(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for FermiProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FermiProfile::ConstantCurvature(m) => write!(f, "ConstantCurvature({})", m.kappa()),
            FermiProfile::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Fermi coordinates along a complete geodesic: `φ(s,t) = exp_{γ(t)}(s·Jγ′(t))`.
#[derive(Clone, Debug)]
pub struct FermiChart {
    gamma: Geodesic,
    profile: FermiProfile,
}

impl FermiChart {
    pub fn new(gamma: Geodesic) -> Result<Self> {
        if !gamma.is_complete() {
            return Err(Error::InvalidParameter("Fermi charts need a complete geodesic".into()));
        }
        let metric = gamma.metric();
        Ok(Self { gamma, profile: FermiProfile::ConstantCurvature(metric) })
    }

    /// Chart with a warped-product coefficient replacing the model one.
    pub fn with_profile(gamma: Geodesic, g: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        let mut chart = Self::new(gamma)?;
        chart.profile = FermiProfile::Custom(Arc::new(g));
        Ok(chart)
    }

    pub fn gamma(&self) -> &Geodesic {
        &self.gamma
    }

    pub fn g(&self, s: f64, t: f64) -> f64 {
        match &self.profile {
            FermiProfile::ConstantCurvature(m) => (m.k() * s).cosh().powi(2),
            FermiProfile::Custom(g) => g(s, t),
        }
    }

    /// `∂G/∂s`.
    pub fn g_s(&self, s: f64, t: f64) -> f64 {
        match &self.profile {
            FermiProfile::ConstantCurvature(m) => m.k() * (2.0 * m.k() * s).sinh(),
            FermiProfile::Custom(_) => numdiff::first(|s| self.g(s, t), s, numdiff::FIRST_STEP),
        }
    }

    /// Gauss curvature `−¼(G_s/G)² − ½(G_s/G)_s`, by finite differences.
    pub fn curvature(&self, s: f64, t: f64) -> f64 {
        let root = |s: f64| self.g(s, t).sqrt();
        -numdiff::second(root, s, numdiff::SECOND_STEP) / root(s)
    }

    /// Chart position of the point with Fermi coordinates `(s, t)`. Only
    /// meaningful for the model profile.
    pub fn chart_point(&self, s: f64, t: f64) -> num_complex::Complex64 {
        self.gamma.fermi_point(s, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::{Endpoint, IdealPoint, SurfacePoint};
    use approx::assert_abs_diff_eq;

    fn chart(kappa: f64) -> FermiChart {
        let m = Metric::new(kappa).unwrap();
        let g = m.geodesic_between(Endpoint::Ideal(IdealPoint::new(0.5)), Endpoint::Ideal(IdealPoint::new(2.9))).unwrap();
        FermiChart::new(g).unwrap()
    }

    /// Jacobi field oracle: J'' = −κ J, J(0) = 1, J'(0) = 0, G = J².
    fn jacobi(kappa: f64, s_end: f64) -> f64 {
        let n = 10_000;
        let h = s_end / n as f64;
        let f = |y: [f64; 2]| [y[1], -kappa * y[0]];
        let mut y = [1.0, 0.0];
        for _ in 0..n {
            let k1 = f(y);
            let k2 = f([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
            let k3 = f([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
            let k4 = f([y[0] + h * k3[0], y[1] + h * k3[1]]);
            y[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
            y[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        }
        y[0] * y[0]
    }

    #[test]
    fn coefficient_on_the_geodesic_and_jacobi_oracle() {
        let c = chart(-1.0);
        for t in [-2.0, 0.0, 3.0] {
            assert_eq!(c.g(0.0, t), 1.0);
            assert_eq!(c.g_s(0.0, t), 0.0);
        }
        assert_abs_diff_eq!(c.g(1.0, 0.0), jacobi(-1.0, 1.0), epsilon = 1e-10);
        assert_abs_diff_eq!(c.g(1.0, 0.0), 2.381097845541816, epsilon = 1e-12);
    }

    #[test]
    fn curvature_grid() {
        for kappa in [-1.0, -2.0] {
            let c = chart(kappa);
            for i in 0..10 {
                for j in 0..10 {
                    let s = -2.0 + 0.4 * i as f64;
                    let t = -3.0 + 0.6 * j as f64;
                    assert_abs_diff_eq!(c.curvature(s, t), kappa, epsilon = 1e-6);
                }
            }
        }
    }

    #[test]
    fn warped_profile() {
        let m = Metric::hyperbolic();
        let g = m.geodesic_between(Endpoint::Ideal(IdealPoint::new(0.0)), Endpoint::Ideal(IdealPoint::new(3.0))).unwrap();
        // Curvature −(1 + s²)-ish warped metric with G(0,t) = 1, G_s(0,t) = 0.
        let chart = FermiChart::with_profile(g, |s, _t| (1.0 + 0.5 * s * s).powi(2) * (s.cosh()).powi(2)).unwrap();
        assert_eq!(chart.g(0.0, 1.0), 1.0);
        assert_abs_diff_eq!(chart.g_s(0.0, 1.0), 0.0, epsilon = 1e-10);
        assert!(chart.curvature(0.5, 0.0) < 0.0);
    }

    #[test]
    fn chart_agrees_with_distances() {
        let c = chart(-1.0);
        let m = c.gamma().metric();
        for (s, t) in [(0.7, 0.0), (-1.3, 2.0), (2.0, -1.0)] {
            let p = SurfacePoint::from_chart(c.chart_point(s, t)).unwrap();
            let foot = c.gamma().point_at(t).unwrap();
            assert_abs_diff_eq!(m.distance(p, foot), s.abs(), epsilon = 1e-6);
            // Equidistant: another point at the same s is also at distance |s|
            // from its own foot, and its Fermi coordinates round trip.
            let (s2, t2) = c.gamma().fermi_coords(p.chart());
            assert_abs_diff_eq!(s2, s, epsilon = 1e-9);
            assert_abs_diff_eq!(t2, t, epsilon = 1e-9);
        }
    }
}
